"""The countable abelian group ``A_f = <a_n, b_n | commuting, a_n^f(n) = b_n>``.

Words are sequences of :class:`ATerm`. Reduction and the word problem use
only ``oracle.verify``; the discrete logarithm needs ``oracle.eval``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from .oracle import FunctionOracle, verification_only


class ATerm(NamedTuple):
    family: str  # "a" or "b"
    index: int
    exp: int

    def __str__(self) -> str:
        return f"{self.family}{self.index}^{self.exp}"


class AWord(tuple):
    """Immutable sequence of :class:`ATerm`; not necessarily reduced."""

    def __new__(cls, terms: Iterable[ATerm | tuple] = ()) -> AWord:
        return super().__new__(cls, (ATerm(*t) for t in terms))

    def __str__(self) -> str:
        return " ".join(map(str, self)) if self else "1"

    def __repr__(self) -> str:
        return f"AWord({str(self)!r})"

    def __mul__(self, other: AWord) -> AWord:
        return AWord(tuple.__add__(self, other))

    def __pow__(self, x: int) -> AWord:
        return AWord(ATerm(t.family, t.index, t.exp * x) for t in self)

    def inverse(self) -> AWord:
        return self ** -1

    def support(self) -> set[int]:
        return {t.index for t in self}


# Unique(x) | NoSolution | AllIntegers


@dataclass(frozen=True)
class Unique:
    x: int


@dataclass(frozen=True)
class NoSolution:
    reason: str = ""


@dataclass(frozen=True)
class AllIntegers:
    pass


DLPResult = Union[Unique, NoSolution, AllIntegers]


class ParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


_A_TOKEN = re.compile(r"([ab])(\d+)(?:\^(-?\d+))?$")


def parse_aword(text: str) -> AWord:
    """Parse ``a3^4 b3^-1``-style text; the empty string (or ``1``) is the identity."""
    if text.strip() == "1":
        return AWord()
    terms = []
    for match in re.finditer(r"\S+", text):
        token = match.group()
        m = _A_TOKEN.match(token)
        if not m:
            raise ParseError(f"bad A-word token {token!r}", match.start())
        exp = int(m.group(3)) if m.group(3) is not None else 1
        terms.append(ATerm(m.group(1), int(m.group(2)), exp))
    return AWord(terms)


def length(w: AWord) -> float:
    return sum(math.log2(max(1, abs(t.index * t.exp))) for t in w)


def _collect(w: AWord) -> tuple[dict[int, int], dict[int, int]]:
    a: dict[int, int] = {}
    b: dict[int, int] = {}
    for t in w:
        bucket = a if t.family == "a" else b
        bucket[t.index] = bucket.get(t.index, 0) + t.exp
    return a, b


def reduce(w: AWord, oracle: FunctionOracle) -> AWord:
    """Reduced form of ``w``: merged, zero-free, sorted, and with every
    cancelling pair ``a_n^k b_n^l`` (``k = -l*f(n)``) removed.

    Cancellation is detected through ``oracle.verify`` only.
    """
    a, b = _collect(w)
    a = {n: k for n, k in a.items() if k}
    b = {n: l for n, l in b.items() if l}
    with verification_only():
        for n in sorted(a.keys() & b.keys()):
            k, l = a[n], b[n]
            if k % l == 0 and -k // l >= 1 and oracle.verify(n, -k // l):
                del a[n], b[n]
    return AWord(
        [ATerm("a", n, a[n]) for n in sorted(a)] + [ATerm("b", n, b[n]) for n in sorted(b)]
    )


def word_problem(w: AWord, oracle: FunctionOracle) -> bool:
    """True iff ``w`` is the identity of ``A_f``."""
    return not reduce(w, oracle)


def discrete_log(u: AWord, v: AWord, oracle: FunctionOracle) -> DLPResult:
    """Solve ``u^x = v`` over the integers.

    Both sides are reduced, then compared through their total exponents
    ``d_n = k_n + l_n*f(n)`` at each index ``n``; ``f(n)`` is evaluated only
    where a ``b``-exponent makes it matter.
    """
    u, v = reduce(u, oracle), reduce(v, oracle)
    if not u:
        return AllIntegers() if not v else NoSolution("base is trivial, target is not")
    extra = v.support() - u.support()
    if extra:
        return NoSolution(f"target uses indices {sorted(extra)} outside the base")
    ua, ub = _collect(u)
    va, vb = _collect(v)
    x = None
    for n in sorted(u.support()):
        k, l = ua.get(n, 0), ub.get(n, 0)
        k2, l2 = va.get(n, 0), vb.get(n, 0)
        if l or l2:
            fn = oracle.eval(n)
            d, d2 = k + l * fn, k2 + l2 * fn
        else:
            d, d2 = k, k2
        if x is None:
            # d != 0 for every index of a reduced word
            if d2 % d:
                return NoSolution(f"{d} does not divide {d2} at index {n}")
            x = d2 // d
        elif x * d != d2:
            return NoSolution(f"index {n} disagrees with x={x}")
    return Unique(x)
