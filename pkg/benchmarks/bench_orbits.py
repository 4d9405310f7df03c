"""Compare the numba and pure-numpy orbit kernels on a few fixed instances.

    python benchmarks/bench_orbits.py [--repeat 3] [--json out.json]

Each case is timed end to end (enumeration + orbit union-find) per backend,
after one warm-up run so numba compilation is not counted.  Both backends
must report identical orbit decompositions; a mismatch aborts the run.
"""
import argparse
import json
import time

from hurwitz import OrbitQuery, equipment_from_reps, orbit_decompose, set_backend
from hurwitz._accel import HAVE_NUMBA
from hurwitz.perm import symmetric_group

CASES = [
    # name, degree, class reps, type, genus
    ("S4 transp n=8", 4, ["(1 2)"], (8,), 0),
    ("S5 transp n=8", 5, ["(1 2)"], (8,), 0),
    ("S3 mixed (4,2) p=1", 3, ["(1 2)", "(1 2 3)"], (4, 2), 1),
    ("S4 transp n=4 p=1", 4, ["(1 2)"], (4,), 1),
]


def run_case(E, tv, p):
    q = OrbitQuery(E, tv, p, boundary=E.group.identity, require_full_group=True)
    t0 = time.perf_counter()
    rep = orbit_decompose(q, keep_space=False)
    return time.perf_counter() - t0, rep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    rows = []
    for name, d, reps, tv, p in CASES:
        E = equipment_from_reps(symmetric_group(d), reps)
        best = {}
        reports = {}
        for be in backends:
            set_backend(be)
            run_case(E, tv, p)  # warm-up / JIT
            times = []
            for _ in range(args.repeat):
                dt, rep = run_case(E, tv, p)
                times.append(dt)
            best[be] = min(times)
            reports[be] = rep.to_dict()
        if len({json.dumps(r, sort_keys=True) for r in reports.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        states = reports[backends[0]]
        row = {"case": name, "orbits": states["orbit_count"],
               "tuples": sum(states["orbit_sizes"]), **{f"{b}_s": round(best[b], 4) for b in backends}}
        if "numba" in best:
            row["speedup"] = round(best["numpy"] / best["numba"], 2)
        rows.append(row)
        print(f"{name:24s} tuples={row['tuples']:>9d} " +
              " ".join(f"{b}={best[b]:.3f}s" for b in backends) +
              (f" speedup={row['speedup']}x" if "speedup" in row else ""))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
