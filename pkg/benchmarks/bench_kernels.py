"""Compare the compiled and pure-Python collection kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from wreathlog import _pykernels
from wreathlog.gfgroup import GWord, canon, power

try:
    from wreathlog import _ckernels
except ImportError:
    _ckernels = None


def collect_inputs(n_terms, spread, seed=0):
    rng = random.Random(seed)
    alphas = [rng.randint(-spread, spread) for _ in range(n_terms)]
    ks = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(n_terms)]
    return alphas, ks


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"python": _pykernels.collect}
    if _ckernels is not None:
        backends["cython"] = _ckernels.collect
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"{'workload':34} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    cases = [(f"collect n={n} spread={s}", collect_inputs(n, s)) for n, s in
             [(200, 10), (2000, 50), (2000, 1000), (20000, 200)]]
    for label, (alphas, ks) in cases:
        times = {name: min(timeit.repeat(lambda fn=fn: fn(alphas, ks), number=1, repeat=args.repeat))
                 for name, fn in backends.items()}
        _report(label, times)

    # end-to-end: canonical forms and powers go through whichever backend kernels.py picked
    from wreathlog import kernels
    rng = random.Random(1)
    w = GWord((rng.choice("Fs"), rng.choice([-2, -1, 1, 2])) for _ in range(400))
    g = canon(w)
    for label, stmt in [("canon(400-letter word)", lambda: canon(w)),
                        ("power(g, 64)", lambda: power(g, 64))]:
        t = min(timeit.repeat(stmt, number=1, repeat=args.repeat))
        print(f"{label:34} {t * 1e3:9.2f}ms  (backend: {kernels.BACKEND})")


def _report(label, times):
    cells = " ".join(f"{t * 1e3:8.2f}ms" for t in times.values())
    speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
    print(f"{label:34} {cells}   {speedup:6.1f}x")


if __name__ == "__main__":
    main()
