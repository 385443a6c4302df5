"""Explicit model of ``A_f wr <z> wr <s>`` used to check the symbolic code.

Representation
--------------
``AVec``
    element of ``A_f`` as an integer vector over ``a_n`` (``b_n = f(n) a_n``),
    a dict without zero entries.
``LElem``
    element of ``L = <z, f_1, f_2, ...> < A_f wr <z>``. Every function in
    ``L``'s base group is affine in the z-exponent, ``z^m -> m*slope + offset``,
    so an element is ``(slope, offset, zexp)``.
``ConcreteElement``
    ``(phi, sexp)`` with ``phi: <s> -> L``. ``F`` is nontrivial at every
    ``s^n`` with ``n >= 0``, so ``phi`` is stored as explicit values below a
    cut-off plus a tail ``phi(s^n) = f-part of sum_c tail[c] * g_(n+c)`` for
    ``n >= cut``, where ``g_i`` is ``a_((i-1)/2)`` for odd ``i`` and
    ``b_(i/2)`` for even ``i``.

Building ``b_n`` calls ``oracle.eval``; this module is for tests with cheap
oracles only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .gfgroup import GWord
from .oracle import FunctionOracle

AVec = dict


def _vadd(u: AVec, v: AVec, scale: int = 1) -> AVec:
    out = dict(u)
    for n, c in v.items():
        c = out.get(n, 0) + scale * c
        if c:
            out[n] = c
        else:
            out.pop(n, None)
    return out


def _vscale(u: AVec, scale: int) -> AVec:
    return {n: scale * c for n, c in u.items()} if scale else {}


def a_vec(index: int, exp: int = 1) -> AVec:
    return {index: exp} if exp else {}


def b_vec(index: int, oracle: FunctionOracle, exp: int = 1) -> AVec:
    return a_vec(index, exp * oracle.eval(index))


def g_vec(i: int, oracle: FunctionOracle, coeff: int = 1) -> AVec:
    """Value of ``[z, f_i]``: ``a_((i-1)/2)`` for odd ``i``, ``b_(i/2)`` for even ``i``."""
    if i < 1:
        raise ValueError(f"f_i needs i >= 1, got {i}")
    if i % 2:
        return a_vec((i - 1) // 2, coeff)
    return b_vec(i // 2, oracle, coeff)


class LElem(NamedTuple):
    slope: AVec
    offset: AVec
    zexp: int

    def __mul__(self, other: LElem) -> LElem:
        # (phi1 z^k1)(phi2 z^k2) = phi1 * phi2(. + k1) * z^(k1+k2)
        return LElem(
            _vadd(self.slope, other.slope),
            _vadd(_vadd(self.offset, other.offset), other.slope, self.zexp),
            self.zexp + other.zexp,
        )

    def inverse(self) -> LElem:
        return LElem(_vscale(self.slope, -1), _vadd(_vscale(self.offset, -1), self.slope, self.zexp),
                     -self.zexp)

    def is_identity(self) -> bool:
        return not self.slope and not self.offset and not self.zexp

    def at(self, m: int) -> AVec:
        """Value of the function part at ``z^m``."""
        return _vadd(self.offset, self.slope, m)


L_ID = LElem({}, {}, 0)
Z = LElem({}, {}, 1)


def l_commutator(x: LElem, y: LElem) -> LElem:
    return x * y * x.inverse() * y.inverse()


def f_elem(i: int, oracle: FunctionOracle) -> LElem:
    """``f_i: z^m -> g_i^m``."""
    return LElem(g_vec(i, oracle), {}, 0)


@dataclass
class ConcreteElement:
    head: dict[int, LElem] = field(default_factory=dict)
    cut: int = 1
    tail: dict[int, int] = field(default_factory=dict)
    sexp: int = 0
    oracle: FunctionOracle | None = None

    def value(self, n: int) -> LElem:
        if n < self.cut:
            return self.head.get(n, L_ID)
        if not self.tail:
            return L_ID
        slope: AVec = {}
        for c, coeff in self.tail.items():
            slope = _vadd(slope, g_vec(n + c, self.oracle, coeff))
        return LElem(slope, {}, 0)

    def support(self) -> list[int]:
        """Nontrivial coordinates; only finite when the tail vanishes."""
        if self.tail:
            raise ValueError("support is infinite")
        return sorted(self.head)

    def shifted(self, m: int) -> ConcreteElement:
        """The map ``n -> phi(n + m)``."""
        return ConcreteElement({n - m: v for n, v in self.head.items()}, self.cut - m,
                               {c + m: t for c, t in self.tail.items()}, self.sexp, self.oracle)

    def __mul__(self, other: ConcreteElement) -> ConcreteElement:
        return wr_mul(self, other)

    def __str__(self) -> str:
        return pretty(self)


def _oracle_of(*xs: ConcreteElement) -> FunctionOracle | None:
    for x in xs:
        if x.oracle is not None:
            return x.oracle
    return None


def identity(oracle: FunctionOracle | None = None) -> ConcreteElement:
    return ConcreteElement(oracle=oracle)


def gen_s(oracle: FunctionOracle | None = None) -> ConcreteElement:
    return ConcreteElement(sexp=1, oracle=oracle)


def gen_F(oracle: FunctionOracle) -> ConcreteElement:
    """``F(s^0) = z``, ``F(s^n) = f_n`` for ``n > 0``, trivial otherwise."""
    return ConcreteElement({0: Z}, 1, {0: 1}, 0, oracle)


def wr_mul(x: ConcreteElement, y: ConcreteElement) -> ConcreteElement:
    # (phi1 s^m1)(phi2 s^m2) = phi1 * phi2(. + m1) * s^(m1+m2)
    oracle = _oracle_of(x, y)
    y2 = y.shifted(x.sexp)
    cut = max(x.cut, y2.cut)
    tail = dict(x.tail)
    for c, t in y2.tail.items():
        t += tail.get(c, 0)
        if t:
            tail[c] = t
        else:
            tail.pop(c, None)
    coords = set(x.head) | set(y2.head) | set(range(min(x.cut, y2.cut), cut))
    head = {}
    for n in coords:
        v = x.value(n) * y2.value(n)
        if not v.is_identity():
            head[n] = v
    return ConcreteElement(head, cut, tail, x.sexp + y.sexp, oracle)


def inverse(x: ConcreteElement) -> ConcreteElement:
    # psi(n) = phi(n - m)^-1
    m = x.sexp
    return ConcreteElement({n + m: v.inverse() for n, v in x.head.items()}, x.cut + m,
                           {c - m: -t for c, t in x.tail.items()}, -m, x.oracle)


def power(x: ConcreteElement, k: int) -> ConcreteElement:
    base = x if k >= 0 else inverse(x)
    out = identity(x.oracle)
    for _ in range(abs(k)):
        out = wr_mul(out, base)
    return out


def is_identity(x: ConcreteElement) -> bool:
    # a nonzero tail is nontrivial for every n past the cut since f >= 1
    return x.sexp == 0 and not x.tail and not x.head


def same(x: ConcreteElement, y: ConcreteElement) -> bool:
    return is_identity(wr_mul(x, inverse(y)))


def commutator(x: ConcreteElement, y: ConcreteElement) -> ConcreteElement:
    return wr_mul(wr_mul(x, y), wr_mul(inverse(x), inverse(y)))


def conj(x: ConcreteElement, h: ConcreteElement) -> ConcreteElement:
    """``x^h = h x h^-1``."""
    return wr_mul(wr_mul(h, x), inverse(h))


def eval_word(w: GWord, oracle: FunctionOracle) -> ConcreteElement:
    F, s = gen_F(oracle), gen_s(oracle)
    out = identity(oracle)
    for gen, exp in w:
        out = wr_mul(out, power(F if gen == "F" else s, exp))
    return out


def _fmt_vec(v: AVec) -> str:
    return "+".join(f"{c}*a{n}" for n, c in sorted(v.items())) or "0"


def _fmt_l(v: LElem) -> str:
    return f"[m*({_fmt_vec(v.slope)}) + {_fmt_vec(v.offset)}; z^{v.zexp}]"


def pretty(x: ConcreteElement) -> str:
    lines = [f"s^{x.sexp}"]
    lines += [f"  s^{n}: {_fmt_l(v)}" for n, v in sorted(x.head.items())]
    if x.tail:
        terms = " + ".join(f"{t}*g(n{c:+d})" for c, t in sorted(x.tail.items()))
        lines.append(f"  s^n, n >= {x.cut}: [m*({terms}); z^0]")
    return "\n".join(lines)
