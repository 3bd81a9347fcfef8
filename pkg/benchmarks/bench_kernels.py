"""Time the compiled kernels against the numpy fallback on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is checked for identical results before timing is reported.
"""

import argparse
import time
from itertools import product

import numpy as np

from biqlab import _kernels_py as py
from biqlab.invariants import present_t3_quotient
from biqlab.moves import SPORADIC, family_matrix
from biqlab.ringiso import _code_rows, _mod2_allowed

try:
    from biqlab import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def t3_factors():
    out = []
    for off in product(range(-2, 3), repeat=6):
        m = ((1, off[0], off[1]), (off[2], 1, off[3]), (off[4], off[5], 1))
        basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        out.append([[basis[i], list(m[i])] for i in range(3)])
    return out


def s5s3_batch():
    rows = np.array(list(product(range(-4, 5), repeat=5)), dtype=np.int64)
    return rows.reshape(-1, 5, 1), [3, 2]


def ring_pairs():
    recs = [present_t3_quotient(family_matrix("Family1", p)) for p in [(1, 2), (0, 1), (2, 2)]]
    recs += [present_t3_quotient(m) for m in SPORADIC.values()]
    jobs = []
    for r1, c1 in recs:
        for r2, c2 in recs:
            allowed = _mod2_allowed(r1, r2, c1, c2)
            if allowed:
                pre = [{_code_rows(s[:k]) for s in allowed} for k in range(4)]
                jobs.append((r1.cubic_tensor, r2.cubic_tensor, pre))
    return jobs


def workloads():
    facs = t3_factors()
    batch, sizes = s5s3_batch()
    rings = ring_pairs()
    return {
        "all_selections_unimodular (15625 T^3 actions)":
            lambda k: [k.all_selections_unimodular(3, f) for f in facs],
        "fixed_element_mod_p (15625 T^3 actions, p=2,3)":
            lambda k: [k.fixed_element_mod_p(3, f, p) for f in facs for p in (2, 3)],
        "batch_selection_free (59049 rank-1 actions on S^5 x S^3)":
            lambda k: k.batch_selection_free(batch, sizes).tolist(),
        f"cubic_row_search ({len(rings)} ring pairs, bound 4)":
            lambda k: [k.cubic_row_search(a, b, 4, e, p) for a, b, p in rings for e in (1, -1)],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    if cy is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'workload':58s} {'python s':>9s} {'compiled s':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        best = {}
        results = {}
        for label, mod in (("python", py), ("compiled", cy)):
            if mod is None:
                continue
            times = []
            for _ in range(args.repeat):
                t = time.perf_counter()
                results[label] = fn(mod)
                times.append(time.perf_counter() - t)
            best[label] = min(times)
        if cy is not None:
            assert results["python"] == results["compiled"], f"backends disagree on {name}"
            print(f"{name:58s} {best['python']:9.3f} {best['compiled']:10.3f} "
                  f"{best['python'] / best['compiled']:7.1f}x")
        else:
            print(f"{name:58s} {best['python']:9.3f}")


if __name__ == "__main__":
    main()
