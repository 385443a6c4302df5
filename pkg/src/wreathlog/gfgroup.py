"""The two-generated group ``G_f = <F, s>`` inside ``A_f wr <z> wr <s>``.

Conventions: ``g^h = h g h^-1`` and ``[g, h] = g h g^-1 h^-1``.

Every element has a canonical form

    prod (F^{s^alpha})^k  *  prod ([F, F^{s^beta}]^{s^gamma})^l  *  s^y

with alphas strictly decreasing, ``(beta, gamma)`` strictly decreasing
lexicographically and ``beta > 0``. The alpha part and ``y`` are invariants of
the element; the commutator part is central in ``<F^{s^a}>`` and is only
determined up to the relations of ``A_f``, so equality of elements goes
through :func:`word_problem`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import afgroup
from .afgroup import AllIntegers, AWord, ATerm, DLPResult, NoSolution, ParseError, Unique
from .kernels import collect
from .oracle import FunctionOracle, verification_only

BUDGET_FACTOR = 4


class Letter(NamedTuple):
    gen: str  # "F" or "s"
    exp: int

    def __str__(self) -> str:
        return self.gen if self.exp == 1 else f"{self.gen}^{self.exp}"


class GWord(tuple):
    """Freely merged word over ``F^{+-1}, s^{+-1}``: no zero exponents and no
    two adjacent letters on the same generator."""

    def __new__(cls, letters: Iterable[Letter | tuple] = ()) -> GWord:
        merged: list[Letter] = []
        for gen, exp in letters:
            if gen not in ("F", "s"):
                raise ValueError(f"unknown generator {gen!r}")
            if merged and merged[-1].gen == gen:
                exp += merged.pop().exp
            if exp:
                merged.append(Letter(gen, exp))
        return super().__new__(cls, merged)

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return f"GWord({str(self)!r})"

    def __mul__(self, other: GWord) -> GWord:
        return GWord(tuple.__add__(self, other))

    def __pow__(self, n: int) -> GWord:
        base = self if n >= 0 else self.inverse()
        return GWord(tuple(base) * abs(n))

    def inverse(self) -> GWord:
        return GWord(Letter(gen, -exp) for gen, exp in reversed(self))


_G_TOKEN = re.compile(r"([Fs])(?:\^(-?\d+))?$")


def parse_gword(text: str) -> GWord:
    letters = []
    for match in re.finditer(r"\S+", text):
        m = _G_TOKEN.match(match.group())
        if not m:
            raise ParseError(f"bad G-word token {match.group()!r}", match.start())
        letters.append(Letter(m.group(1), int(m.group(2)) if m.group(2) else 1))
    return GWord(letters)


def length(w: GWord) -> float:
    """Bit-length measure of ``F^k0 s^l1 F^k1 ... s^lt F^kt s^l(t+1)``:
    ``log(|k0|+1) + log(|l(t+1)|+1) + sum log(|ki*li|+1)``, base 2."""
    letters = list(w)
    head = tail = 0
    if letters and letters[0].gen == "F":
        head = letters.pop(0).exp
    if letters and letters[-1].gen == "s":
        tail = letters.pop().exp
    total = math.log2(abs(head) + 1) + math.log2(abs(tail) + 1)
    for s_letter, f_letter in zip(letters[::2], letters[1::2]):
        total += math.log2(abs(s_letter.exp * f_letter.exp) + 1)
    return total


class AlphaTerm(NamedTuple):
    alpha: int
    k: int


class CommTerm(NamedTuple):
    beta: int
    gamma: int
    l: int


class BudgetExceeded(ArithmeticError):
    """A power computation outgrew its alpha-term budget."""

    def __init__(self, seen: int, limit: int) -> None:
        super().__init__(f"intermediate power has {seen} alpha terms, budget {limit}")
        self.seen = seen
        self.limit = limit


@dataclass(frozen=True)
class CanonicalForm:
    alpha: tuple[AlphaTerm, ...] = ()
    comm: tuple[CommTerm, ...] = ()
    y: int = 0

    def __str__(self) -> str:
        if self.is_identity_form():
            return "1"
        parts = [f"A({a})^{k}" for a, k in self.alpha]
        parts += [f"K({b},{c})^{l}" for b, c, l in self.comm]
        parts.append(f"s^{self.y}")
        return " ".join(parts)

    def is_identity_form(self) -> bool:
        return not self.alpha and not self.comm and self.y == 0

    @property
    def terms(self) -> int:
        return len(self.alpha) + len(self.comm)

    def __mul__(self, other: CanonicalForm) -> CanonicalForm:
        return multiply(self, other)

    def __pow__(self, x: int) -> CanonicalForm:
        return power(self, x)

    def inverse(self) -> CanonicalForm:
        return invert(self)

    def to_word(self) -> GWord:
        letters: list[Letter] = []
        for a, k in self.alpha:
            letters += [Letter("s", a), Letter("F", k), Letter("s", -a)]
        for b, c, l in self.comm:
            block = commutator_word(l, b)
            letters += [Letter("s", c), *block, Letter("s", -c)]
        letters.append(Letter("s", self.y))
        return GWord(letters)


IDENTITY = CanonicalForm()


def to_conjugate_form(w: GWord) -> tuple[list[AlphaTerm], int]:
    """Rewrite ``s^p F^k -> (F^{s^p})^k s^p`` left to right: the word becomes
    ``prod (F^{s^alpha})^k * s^y``, terms in original order."""
    terms = []
    shift = 0
    for gen, exp in w:
        if gen == "s":
            shift += exp
        else:
            terms.append(AlphaTerm(shift, exp))
    return terms, shift


def _normalize_comm(beta: int, gamma: int, l: int) -> CommTerm | None:
    # [F, F^{s^-j}] = ([F, F^{s^j}]^{s^-j})^-1
    if beta == 0 or l == 0:
        return None
    if beta < 0:
        return CommTerm(-beta, gamma + beta, -l)
    return CommTerm(beta, gamma, l)


def swap_commutator(left: AlphaTerm, right: AlphaTerm) -> list[CommTerm]:
    """Central correction in ``x y = [x, y] y x`` for
    ``x = (F^{s^left.alpha})^left.k`` and ``y = (F^{s^right.alpha})^right.k``."""
    if left.alpha == right.alpha:
        raise ValueError("terms with equal alpha commute; merge them instead")
    term = _normalize_comm(right.alpha - left.alpha, left.alpha, left.k * right.k)
    return [term] if term else []


def _build(degrees: dict[int, int], comm: dict[tuple[int, int], int], y: int) -> CanonicalForm:
    alpha = tuple(AlphaTerm(a, k) for a, k in sorted(degrees.items(), reverse=True) if k)
    comm_terms = tuple(
        CommTerm(b, c, l) for (b, c), l in sorted(comm.items(), reverse=True) if l
    )
    return CanonicalForm(alpha, comm_terms, y)


def _add_comm(acc: dict[tuple[int, int], int], terms: Iterable[CommTerm | tuple], shift: int = 0,
              sign: int = 1) -> None:
    for b, c, l in terms:
        term = _normalize_comm(b, c + shift, sign * l)
        if term:
            key = (term.beta, term.gamma)
            acc[key] = acc.get(key, 0) + term.l


def canonicalize(parts: tuple[list[AlphaTerm], int],
                 comm: Iterable[CommTerm | tuple] = ()) -> CanonicalForm:
    """Canonical form of ``prod (F^{s^alpha})^k * prod comm * s^y``."""
    terms, y = parts
    degrees, corrections = collect([t[0] for t in terms], [t[1] for t in terms])
    _add_comm(corrections, comm)
    return _build(degrees, corrections, y)


def canon(w: GWord | str) -> CanonicalForm:
    if isinstance(w, str):
        w = parse_gword(w)
    return canonicalize(to_conjugate_form(w))


def multiply(g1: CanonicalForm, g2: CanonicalForm) -> CanonicalForm:
    # A1 C1 s^y1 A2 C2 s^y2 = A1 (A2)^{s^y1} C1 (C2)^{s^y1} s^(y1+y2)
    shift = g1.y
    terms = list(g1.alpha) + [AlphaTerm(a + shift, k) for a, k in g2.alpha]
    degrees, corrections = collect([t[0] for t in terms], [t[1] for t in terms])
    _add_comm(corrections, g1.comm)
    _add_comm(corrections, g2.comm, shift)
    return _build(degrees, corrections, g1.y + g2.y)


def invert(g: CanonicalForm) -> CanonicalForm:
    # (A C s^y)^-1 = (A^-1)^{s^-y} (C^-1)^{s^-y} s^-y
    terms = [AlphaTerm(a - g.y, -k) for a, k in reversed(g.alpha)]
    degrees, corrections = collect([t[0] for t in terms], [t[1] for t in terms])
    _add_comm(corrections, g.comm, -g.y, -1)
    return _build(degrees, corrections, -g.y)


def power(g: CanonicalForm, x: int, budget: int | None = None) -> CanonicalForm:
    """``g**x`` by square-and-multiply.

    With ``budget`` set, any intermediate whose alpha part exceeds it raises
    :class:`BudgetExceeded`.
    """
    if x < 0:
        g, x = invert(g), -x
    result, base = IDENTITY, g
    while x:
        if x & 1:
            result = multiply(result, base)
            _check_budget(result, budget)
        x >>= 1
        if x:
            base = multiply(base, base)
            _check_budget(base, budget)
    return result


def _check_budget(g: CanonicalForm, budget: int | None) -> None:
    if budget is not None and len(g.alpha) > budget:
        raise BudgetExceeded(len(g.alpha), budget)


def pi_s(g: CanonicalForm) -> int:
    return g.y


def deg_alpha(g: CanonicalForm, alpha: int) -> int:
    for a, k in g.alpha:
        if a == alpha:
            return k
    return 0


def commutator_word(n: int, beta: int) -> GWord:
    """Expanded ``[F^n, F^{s^beta}]``, equal to ``[F, F^{s^beta}]^n``."""
    return GWord([("F", n), ("s", beta), ("F", 1), ("s", -beta),
                  ("F", -n), ("s", beta), ("F", -1), ("s", -beta)])


def embed_a(i: int) -> GWord:
    if i < 0:
        raise ValueError(f"a-index must be >= 0, got {i}")
    return commutator_word(1, 2 * i + 1)


def embed_b(i: int) -> GWord:
    if i < 1:
        raise ValueError(f"b-index must be >= 1 so that beta = 2i is positive, got {i}")
    return commutator_word(1, 2 * i)


def psi(w: AWord) -> GWord:
    """Image of an ``A_f`` word: ``a_i^n -> [F^n, F^{s^(2i+1)}]``, ``b_i^n -> [F^n, F^{s^(2i)}]``."""
    out = GWord()
    for family, index, exp in w:
        if family == "b" and index < 1:
            raise ValueError("b-index must be >= 1")
        beta = 2 * index + 1 if family == "a" else 2 * index
        out = out * commutator_word(exp, beta)
    return out


def comm_to_aword(block: Iterable[CommTerm | tuple]) -> AWord:
    """``[F, F^{s^beta}]^{s^gamma}`` corresponds to ``a_{(beta-1)/2}`` for odd
    beta and ``b_{beta/2}`` for even beta, independently of gamma."""
    terms = []
    for beta, _gamma, l in block:
        if beta <= 0:
            raise ValueError(f"beta must be positive, got {beta}")
        if beta % 2:
            terms.append(ATerm("a", (beta - 1) // 2, l))
        else:
            terms.append(ATerm("b", beta // 2, l))
    return AWord(terms)


def _blocks(g: CanonicalForm) -> dict[int, list[CommTerm]]:
    out: dict[int, list[CommTerm]] = {}
    for term in g.comm:
        out.setdefault(term.gamma, []).append(term)
    return out


def is_trivial(g: CanonicalForm, oracle: FunctionOracle) -> bool:
    """Word problem on a canonical form; reduces to ``A_f`` per gamma block."""
    if g.alpha or g.y:
        return False
    with verification_only():
        return all(afgroup.word_problem(comm_to_aword(block), oracle)
                   for block in _blocks(g).values())


def word_problem(w: GWord, oracle: FunctionOracle) -> bool:
    return is_trivial(canon(w), oracle)


def equals(g: CanonicalForm, h: CanonicalForm, oracle: FunctionOracle) -> bool:
    if g.alpha != h.alpha or g.y != h.y:
        return False
    return is_trivial(multiply(g, invert(h)), oracle)


def discrete_log(g: CanonicalForm, h: CanonicalForm, oracle: FunctionOracle) -> DLPResult:
    """Solve ``g^x = h``.

    The s-exponent, then the first nonzero alpha degree, pin down the only
    candidate ``x``, which is checked with the word problem. When ``g`` lies
    in the commutator subgroup the problem splits into one ``A_f`` discrete
    log per gamma block; only that branch evaluates ``f``.
    """
    if is_trivial(g, oracle):
        return AllIntegers() if is_trivial(h, oracle) else NoSolution("base is trivial")

    if g.y:
        if h.y % g.y:
            return NoSolution(f"s-exponent {g.y} does not divide {h.y}")
        return _check_candidate(g, h, h.y // g.y, oracle)
    if h.y:
        return NoSolution("base has s-exponent 0, target does not")

    if g.alpha:
        a, k = g.alpha[0]
        target = deg_alpha(h, a)
        if target % k:
            return NoSolution(f"degree {k} at alpha={a} does not divide {target}")
        return _check_candidate(g, h, target // k, oracle)
    if h.alpha:
        return NoSolution("base is central, target is not")

    g_blocks, h_blocks = _blocks(g), _blocks(h)
    x = None
    for gamma in sorted(g_blocks.keys() | h_blocks.keys()):
        r = afgroup.discrete_log(comm_to_aword(g_blocks.get(gamma, ())),
                                 comm_to_aword(h_blocks.get(gamma, ())), oracle)
        if isinstance(r, NoSolution):
            return NoSolution(f"gamma={gamma}: {r.reason}")
        if isinstance(r, Unique):
            if x is not None and r.x != x:
                return NoSolution(f"gamma={gamma} needs x={r.x}, another block needs x={x}")
            x = r.x
    # g nontrivial means some block has a nontrivial base
    return Unique(x) if x is not None else AllIntegers()


def _check_candidate(g: CanonicalForm, h: CanonicalForm, x: int,
                     oracle: FunctionOracle) -> DLPResult:
    budget = BUDGET_FACTOR * (h.terms + g.terms + 8)
    try:
        gx = power(g, x, budget)
    except BudgetExceeded as exc:
        return NoSolution(f"g^{x} exceeds the size budget: {exc}")
    if equals(gx, h, oracle):
        return Unique(x)
    return NoSolution(f"candidate x={x} fails verification")
