"""Pure-Python collection kernel (reference and fallback for ``_ckernels``)."""
from __future__ import annotations


def collect(alphas, ks):
    """Collect ``prod_j (F^{s^alphas[j]})^ks[j]`` into decreasing-alpha order.

    Sorting by adjacent swaps ``ab -> [a,b]ba`` costs one central commutator
    per inverted pair ``i < j`` with ``alphas[i] < alphas[j]``, namely
    ``[F, F^{s^(alphas[j]-alphas[i])}]^{s^alphas[i]}`` to the power
    ``ks[i]*ks[j]``. The key depends only on the two alphas, so earlier terms
    are pooled per alpha value.

    Returns ``(degrees, corrections)``: summed exponent per alpha, and summed
    commutator exponent per ``(beta, gamma)``. Zero entries may be present.
    """
    degrees = {}
    corrections = {}
    for aj, kj in zip(alphas, ks):
        if not kj:
            continue
        for ai, pooled in degrees.items():
            if ai < aj and pooled:
                key = (aj - ai, ai)
                corrections[key] = corrections.get(key, 0) + pooled * kj
        degrees[aj] = degrees.get(aj, 0) + kj
    return degrees, corrections
