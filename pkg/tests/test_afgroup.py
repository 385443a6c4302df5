import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from wreathlog import afgroup
from wreathlog.afgroup import (
    AllIntegers, ATerm, AWord, NoSolution, ParseError, Unique, discrete_log, length,
    parse_aword, reduce, word_problem,
)
from wreathlog.oracle import from_spec, registry_get

FUNCS = {
    "succ": lambda n: n + 1,
    "affine(a=3,b=2)": lambda n: 3 * n + 2,
}


def image(w, f):
    """Exponent vector of ``w`` in the free abelian group on ``a_n``."""
    vec = {}
    for fam, n, e in w:
        vec[n] = vec.get(n, 0) + (e if fam == "a" else e * f(n))
    return {n: c for n, c in vec.items() if c}


def random_aword(rng, terms=8, max_index=6, max_exp=9):
    out = []
    for _ in range(rng.randint(0, terms)):
        out.append(ATerm(rng.choice("ab"), rng.randint(0, max_index), rng.randint(-max_exp, max_exp)))
        if rng.random() < 0.3:  # plant a cancelling pair
            n = rng.randint(1, max_index)
            l = rng.choice([-2, -1, 1, 3])
            out += [ATerm("b", n, l), ATerm("a", n, -l * (n + 1))]
    return AWord(out)


def test_parse_and_print():
    w = parse_aword("a3^4 b3^-1 a0 b12^7")
    assert list(w) == [("a", 3, 4), ("b", 3, -1), ("a", 0, 1), ("b", 12, 7)]
    assert str(w) == "a3^4 b3^-1 a0^1 b12^7"
    assert parse_aword("") == AWord() == parse_aword("1")
    assert str(AWord()) == "1"
    with pytest.raises(ParseError) as err:
        parse_aword("a3 c2")
    assert err.value.position == 3
    for bad in ("a", "a-1", "a3^", "a3^x", "A3"):
        with pytest.raises(ParseError):
            parse_aword(bad)


def test_length():
    assert length(AWord()) == 0
    assert length(parse_aword("a2^4")) == 3
    assert length(parse_aword("a2^4 b3^2")) == pytest.approx(math.log2(8) + math.log2(6))
    assert length(parse_aword("a0^5 b1^-1")) == 0


def test_reduce_examples(succ):
    assert reduce(parse_aword("a3^4 b3^-1"), succ) == AWord()
    assert reduce(parse_aword("a2^1 a2^2"), succ) == parse_aword("a2^3")
    assert reduce(parse_aword("a5^0 b1^2"), succ) == parse_aword("b1^2")
    assert reduce(parse_aword("b2 a4 a1 b1^-3"), succ) == parse_aword("a1 a4 b1^-3 b2")
    # a_n^(2 f(n)) b_n^-1 = a_n^f(n) stays as two terms
    assert reduce(parse_aword("a3^8 b3^-1"), succ) == parse_aword("a3^8 b3^-1")
    assert succ.meter().eval_calls == 0


def test_reduced_word_invariants(succ):
    rng = random.Random(5)
    for _ in range(300):
        r = reduce(random_aword(rng), succ)
        keys = [(t.family, t.index) for t in r]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)
        assert all(t.exp for t in r)
        a = {t.index: t.exp for t in r if t.family == "a"}
        b = {t.index: t.exp for t in r if t.family == "b"}
        assert all(a[n] != -b[n] * (n + 1) for n in a.keys() & b.keys())


@pytest.mark.parametrize("spec", sorted(FUNCS))
def test_reduction_preserves_exponent_vector(spec):
    rng = random.Random(spec)
    o, f = from_spec(spec), FUNCS[spec]
    for _ in range(1000):
        w = random_aword(rng)
        r = reduce(w, o)
        assert image(r, f) == image(w, f)
        assert word_problem(w, o) == (image(w, f) == {})
    assert o.meter().eval_calls == 0


def test_word_problem_examples(succ):
    assert word_problem(AWord(), succ)
    assert word_problem(parse_aword("a3^4 b3^-1"), succ)
    assert not word_problem(parse_aword("a1"), succ)
    assert not word_problem(parse_aword("a3^4 b3^-2"), succ)


def test_dlp_examples(succ):
    assert discrete_log(parse_aword("a4"), parse_aword("b4"), succ) == Unique(5)
    assert discrete_log(parse_aword("a2"), parse_aword("b2^2 a2^2"), succ) == Unique(8)
    assert isinstance(discrete_log(parse_aword("a1"), parse_aword("a2"), succ), NoSolution)
    assert discrete_log(AWord(), AWord(), succ) == AllIntegers()
    assert isinstance(discrete_log(AWord(), parse_aword("a1"), succ), NoSolution)
    assert discrete_log(parse_aword("a3 b1"), AWord(), succ) == Unique(0)
    assert discrete_log(parse_aword("a3 b1"), parse_aword("a3^-2 b1^-2"), succ) == Unique(-2)
    # ratio not integral
    assert isinstance(discrete_log(parse_aword("a1^2"), parse_aword("a1^3"), succ), NoSolution)
    # indices disagree
    assert isinstance(discrete_log(parse_aword("a1 a2"), parse_aword("a1^2 a2^3"), succ), NoSolution)


def test_dlp_realizes_f(cheap_oracle):
    ref = cheap_oracle.fresh()
    for n in range(1, 30):
        u, v = AWord([("a", n, 1)]), AWord([("b", n, 1)])
        assert discrete_log(u, v, cheap_oracle) == Unique(ref.eval(n))


@pytest.mark.parametrize("spec", ["succ", "affine(a=3,b=2)", "toy_dlog(P=23,g=5)"])
def test_dlp_round_trip(spec):
    rng = random.Random(spec)
    o = from_spec(spec)
    done = 0
    while done < 300:
        u = reduce(random_aword(rng), o)
        if not u:
            continue
        x = rng.randint(-8, 8)
        assert discrete_log(u, u ** x, o) == Unique(x)
        done += 1


def test_floor_system_agreement():
    """Split-form instances satisfy both floor equations for the returned x."""
    rng = random.Random(11)
    o = registry_get("affine", {"a": 2, "b": 3})
    f = lambda n: 2 * n + 3
    checked = 0
    for _ in range(400):
        idx = rng.sample(range(0, 10), rng.randint(1, 3))
        u_terms, v_terms, rows = [], [], []
        x = rng.randint(-8, 8)
        for n in idx:
            k, l = rng.randint(0, f(n) - 1), rng.randint(-5, 5)
            if k == 0 and l == 0:
                k = 1
            k2, l2 = (k * x) % f(n), l * x + (k * x) // f(n)
            u_terms += [("a", n, k), ("b", n, l)]
            v_terms += [("a", n, k2), ("b", n, l2)]
            rows.append((n, k, l, k2, l2))
        r = discrete_log(AWord(u_terms), AWord(v_terms), o)
        assert r == Unique(x)
        for n, k, l, k2, l2 in rows:
            fl = (k * r.x) // f(n)
            assert fl + l * r.x == l2
            assert k * r.x - fl * f(n) == k2
        checked += 1
    assert checked == 400


def test_wp_and_reduce_never_evaluate():
    rng = random.Random(3)
    for spec in ("toy_dlog(P=23,g=5)", "slow(k=10)", "succ"):
        o = from_spec(spec)
        for _ in range(200):
            w = random_aword(rng)
            reduce(w, o)
            word_problem(w, o)
        assert o.meter().eval_calls == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(0, 5), st.integers(-20, 20)), max_size=12))
def test_reduce_idempotent(terms):
    o = registry_get("succ")
    w = AWord(terms)
    r = reduce(w, o)
    assert reduce(r, o) == r
    assert image(r, FUNCS["succ"]) == image(w, FUNCS["succ"])
