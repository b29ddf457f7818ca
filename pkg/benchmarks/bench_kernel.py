"""Times the compiled and pure-Python enumeration kernels on the same scans.

    python3 benchmarks/bench_kernel.py --cutoffs 10000 100000 --repeat 3
"""

import argparse
import json
import time

from cubiczeta.kernel import implementations


def time_scan(impl, X, repeat):
    best = float("inf")
    rows = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        rows = impl.scan_positive(X) + impl.scan_negative(X)
        best = min(best, time.perf_counter() - t0)
    return best, sorted(rows)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoffs", type=int, nargs="+", default=[10000, 50000, 200000])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="one JSON object per cutoff")
    args = ap.parse_args(argv)

    impls = implementations()
    if "cython" not in impls:
        print("compiled kernel not built; timing the Python kernel only")
    results = []
    for X in args.cutoffs:
        row = {"cutoff": X}
        outputs = {}
        for name, impl in impls.items():
            secs, outputs[name] = time_scan(impl, X, args.repeat)
            row[name + "_s"] = round(secs, 4)
        row["candidates"] = len(next(iter(outputs.values())))
        row["agree"] = len({tuple(v) for v in outputs.values()}) == 1
        if "cython_s" in row and "python_s" in row:
            row["speedup"] = round(row["python_s"] / max(row["cython_s"], 1e-9), 1)
        results.append(row)
        if args.json:
            print(json.dumps(row))
        else:
            print("  ".join(f"{k}={v}" for k, v in row.items()))
    return 0 if all(r["agree"] for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
