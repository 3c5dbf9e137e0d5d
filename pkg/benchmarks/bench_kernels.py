"""Compiled vs pure-Python kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--repeat 5]

polypowmod is the splitting step c^ell mod sigma; count_common_coset is the
inner loop of every exhaustive N sweep.  The fallback sweep is already
vectorised with numpy, so the compiled gain there is modest.
"""

import argparse
import json
import random
import timeit

import numpy as np

from czsplit import kernels
from czsplit.characters import make_cosets
from czsplit.gf import make_field
from czsplit.oracle import sample_tuples

FIELDS = [(2, 8), (2, 12), (101, 1), (3, 6)]


def _best(fn, repeat: int) -> float:
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def bench_field(p: int, m: int, repeat: int) -> list[dict]:
    fld = make_field(p, m)
    cs = make_cosets(fld)
    rng = random.Random(p * 100 + m)
    sigma = [rng.randrange(fld.order) for _ in range(12)] + [1]
    c = [rng.randrange(fld.order), 1]
    tuples = sample_tuples(fld.order, 3, 2000, seed=1)
    betas = np.arange(fld.order, dtype=np.int64)
    rows = []
    impls = {"python": kernels.make_kernel(fld, "python")}
    if kernels.compiled_available():
        try:
            impls["cython"] = kernels.make_kernel(fld, "cython")
        except RuntimeError:
            pass
    for name, k in impls.items():
        pw = _best(lambda: k.polypowmod(c, cs.ell, sigma), repeat)
        cc = _best(lambda: k.count_common_coset(tuples, betas, cs.table), repeat)
        rows.append({"field": fld.spec, "backend": name, "polypowmod_us": pw * 1e6, "count_common_coset_ms": cc * 1e3})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    args = ap.parse_args()
    rows = [r for pm in FIELDS for r in bench_field(*pm, args.repeat)]
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'field':<12}{'backend':<9}{'powmod (us)':>14}{'sweep (ms)':>14}{'x powmod':>10}{'x sweep':>9}")
    base = {}
    for r in rows:
        if r["backend"] == "python":
            base[r["field"]] = r
        ref = base[r["field"]]
        sp = ref["polypowmod_us"] / r["polypowmod_us"]
        ss = ref["count_common_coset_ms"] / r["count_common_coset_ms"]
        print(f"{r['field']:<12}{r['backend']:<9}{r['polypowmod_us']:>14.1f}{r['count_common_coset_ms']:>14.2f}{sp:>10.1f}{ss:>9.1f}")
    if not kernels.compiled_available():
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
