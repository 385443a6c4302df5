"""Pluggable functions ``f: N -> N`` with separately metered evaluation and verification.

Every oracle exposes two entry points:

``eval(n)``
    computes ``f(n)``; this is the expensive direction whose cost the
    discrete-log algorithms inherit.
``verify(n, m)``
    decides ``f(n) == m`` without computing ``f(n)``; this is the only
    direction the word-problem algorithms are allowed to touch.

Costs are abstract unit steps reported by each oracle, not wall-clock time.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
import re
import threading
from dataclasses import dataclass
from typing import Callable, Iterator


class OracleError(ValueError):
    """Bad oracle name, bad parameters or malformed oracle spec string."""


class DomainError(ValueError):
    """Input outside the domain of an oracle."""


class EvalForbidden(RuntimeError):
    """Raised when ``eval`` is reached inside a verification-only region."""


_verification_only = contextvars.ContextVar("verification_only", default=False)


@contextlib.contextmanager
def verification_only() -> Iterator[None]:
    """Forbid ``FunctionOracle.eval`` for the duration of the block.

    Word-problem code runs under this guard, so an accidental evaluation of
    ``f`` is an error instead of a silent change in complexity.
    """
    token = _verification_only.set(True)
    try:
        yield
    finally:
        _verification_only.reset(token)


@dataclass(frozen=True)
class StepMeter:
    eval_calls: int = 0
    verify_calls: int = 0
    charged_steps: int = 0

    def __sub__(self, other: StepMeter) -> StepMeter:
        return StepMeter(
            self.eval_calls - other.eval_calls,
            self.verify_calls - other.verify_calls,
            self.charged_steps - other.charged_steps,
        )


class FunctionOracle:
    """Base class; subclasses implement ``_compute`` and ``_check``.

    ``_compute(n)`` returns ``(f(n), cost)`` and ``_check(n, m)`` returns
    ``(f(n) == m, cost)``. ``_check`` must not go through ``_compute`` when
    the oracle exists to show an evaluation/verification gap.
    """

    name = "oracle"

    def __init__(self, **params: int) -> None:
        self.params = dict(params)
        self._lock = threading.Lock()
        self._eval_calls = 0
        self._verify_calls = 0
        self._steps = 0

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"

    @property
    def spec(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def in_domain(self, n: int) -> bool:
        return n >= 0

    def _charge(self, evals: int, verifies: int, steps: int) -> None:
        with self._lock:
            self._eval_calls += evals
            self._verify_calls += verifies
            self._steps += steps

    def eval(self, n: int) -> int:
        if _verification_only.get():
            raise EvalForbidden(f"{self.spec}: eval({n}) inside a verification-only region")
        if not self.in_domain(n):
            raise DomainError(f"{self.spec}: {n} is outside the domain")
        value, cost = self._compute(n)
        self._charge(1, 0, cost)
        return value

    def verify(self, n: int, m: int) -> bool:
        if n < 0:
            raise DomainError(f"{self.spec}: {n} is outside the domain")
        if m <= 0:
            self._charge(0, 1, 1)
            return False
        ok, cost = self._check(n, m)
        self._charge(0, 1, cost)
        return ok

    def meter(self) -> StepMeter:
        with self._lock:
            return StepMeter(self._eval_calls, self._verify_calls, self._steps)

    def reset(self) -> None:
        with self._lock:
            self._eval_calls = self._verify_calls = self._steps = 0

    def fresh(self) -> FunctionOracle:
        """Same function, private zeroed counters (one per concurrent worker)."""
        return type(self)(**self.params)

    def _compute(self, n: int) -> tuple[int, int]:
        raise NotImplementedError

    def _check(self, n: int, m: int) -> tuple[bool, int]:
        raise NotImplementedError


def snapshot_meter(oracle: FunctionOracle) -> StepMeter:
    return oracle.meter()


class Successor(FunctionOracle):
    name = "succ"

    def __init__(self) -> None:
        super().__init__()

    def _compute(self, n):
        return n + 1, 1

    def _check(self, n, m):
        return m == n + 1, 1


class Affine(FunctionOracle):
    """``f(n) = a*n + b`` with ``a, b >= 1``."""

    name = "affine"

    def __init__(self, a: int = 1, b: int = 1) -> None:
        if a < 1 or b < 1:
            raise OracleError(f"affine needs a >= 1 and b >= 1, got a={a}, b={b}")
        super().__init__(a=a, b=b)
        self.a, self.b = a, b

    def _compute(self, n):
        return self.a * n + self.b, 1

    def _check(self, n, m):
        return m == self.a * n + self.b, 1


def _is_probable_prime(n: int) -> tuple[bool, int]:
    """Deterministic Miller-Rabin below 3.3e24; returns (verdict, modexp count)."""
    if n < 2:
        return False, 1
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p, 1
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    work = 0
    for a in small:
        x = pow(a, d, n)
        work += 1
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            work += 1
            if x == n - 1:
                break
        else:
            return False, work
    return True, work


def is_prime(n: int) -> bool:
    return _is_probable_prime(n)[0]


def is_primitive_root(g: int, p: int) -> bool:
    """Exhaustive order check; meant for toy moduli only."""
    if not 0 < g < p:
        return False
    x, seen = 1, 0
    for _ in range(p - 1):
        x = x * g % p
        seen += 1
        if x == 1:
            break
    return seen == p - 1


class ToyDlog(FunctionOracle):
    """``f(n)`` is the discrete log base ``g`` of ``((n-1) mod (P-1)) + 1``.

    Logarithms are taken in ``[1, P-1]`` so that ``f(n) >= 1``. Evaluation is
    an exhaustive walk through powers of ``g``; verification is a single
    modular exponentiation.
    """

    name = "toy_dlog"

    def __init__(self, P: int = 23, g: int = 5) -> None:
        if P < 3 or not is_prime(P):
            raise OracleError(f"toy_dlog needs an odd prime P, got {P}")
        if not is_primitive_root(g, P):
            raise OracleError(f"toy_dlog: {g} does not generate Z_{P}^*")
        super().__init__(P=P, g=g)
        self.P, self.g = P, g

    def target(self, n: int) -> int:
        return (n - 1) % (self.P - 1) + 1

    def _compute(self, n):
        want = self.target(n)
        x = 1
        for m in range(1, self.P):
            x = x * self.g % self.P
            if x == want:
                return m, m
        raise AssertionError("g is not a generator")  # guarded in __init__

    def _check(self, n, m):
        if m >= self.P:
            return False, 1
        return pow(self.g, m, self.P) == self.target(n), max(1, m.bit_length())


class SemiprimeFactor(FunctionOracle):
    """Smaller prime factor of a semiprime ``n = p*q``.

    The verifier checks ``m | n``, ``m <= n/m`` and primality of both factors
    with Miller-Rabin; it never factors.
    """

    name = "semiprime_factor"

    def __init__(self) -> None:
        super().__init__()

    def in_domain(self, n: int) -> bool:
        if n < 4:
            return False
        p = self._smallest_factor(n)[0]
        return p < n and is_prime(n // p)

    @staticmethod
    def _smallest_factor(n: int) -> tuple[int, int]:
        steps = 0
        for d in range(2, math.isqrt(n) + 1):
            steps += 1
            if n % d == 0:
                return d, steps
        return n, max(steps, 1)

    def _compute(self, n):
        return self._smallest_factor(n)

    def _check(self, n, m):
        if m < 2 or n % m:
            return False, 1
        q = n // m
        if m > q:
            return False, 1
        p_ok, w1 = _is_probable_prime(m)
        q_ok, w2 = _is_probable_prime(q)
        return p_ok and q_ok, 1 + w1 + w2


class Slow(FunctionOracle):
    """``f(n) = n + 1`` charged ``2**min(n, k)`` per eval and ``n + 1`` per verify."""

    name = "slow"

    def __init__(self, k: int = 16) -> None:
        if k < 0:
            raise OracleError(f"slow needs k >= 0, got {k}")
        super().__init__(k=k)
        self.k = k

    def _compute(self, n):
        return n + 1, 2 ** min(n, self.k)

    def _check(self, n, m):
        return m == n + 1, n + 1


REGISTRY: dict[str, Callable[..., FunctionOracle]] = {
    "succ": Successor,
    "affine": Affine,
    "toy_dlog": ToyDlog,
    "semiprime_factor": SemiprimeFactor,
    "slow": Slow,
}

DESCRIPTIONS = {
    "succ": "f(n) = n + 1",
    "affine": "affine(a=,b=): f(n) = a*n + b, a, b >= 1",
    "toy_dlog": "toy_dlog(P=,g=): discrete log base g in Z_P^*, verified by one modexp",
    "semiprime_factor": "smaller prime factor of a semiprime n, verified by primality tests",
    "slow": "slow(k=): f(n) = n + 1, eval charged 2^min(n,k), verify charged n + 1",
}


def registry_get(name: str, params: dict[str, int] | None = None) -> FunctionOracle:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise OracleError(f"unknown oracle {name!r}; choose from {', '.join(REGISTRY)}") from None
    try:
        return factory(**(params or {}))
    except TypeError as exc:
        raise OracleError(f"invalid parameters for {name}: {exc}") from None


_SPEC_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*(?:\((.*)\))?\s*$")


def parse_spec(text: str) -> tuple[str, dict[str, int]]:
    """Split ``name(key=value,...)`` into the name and an integer parameter map."""
    match = _SPEC_RE.match(text)
    if not match:
        raise OracleError(f"malformed oracle spec {text!r}")
    name, body = match.group(1), match.group(2)
    params: dict[str, int] = {}
    if body and body.strip():
        for item in body.split(","):
            key, sep, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key.isidentifier():
                raise OracleError(f"malformed parameter {item.strip()!r} in {text!r}")
            try:
                params[key] = int(value)
            except ValueError:
                raise OracleError(f"parameter {key} must be an integer, got {value!r}") from None
    return name, params


def from_spec(text: str) -> FunctionOracle:
    return registry_get(*parse_spec(text))
