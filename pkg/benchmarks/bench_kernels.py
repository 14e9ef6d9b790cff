"""Timings of the GF(p) polynomial kernels under both backends.

The backend is fixed at import time by OMIDEALS_KERNELS, so each backend
runs in its own subprocess.  Usage:

    python benchmarks/bench_kernels.py              # both backends, side by side
    python benchmarks/bench_kernels.py --backend numpy --sizes 256 1024
"""
from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
PRIMES = (65537, 2147483647)


def _best(fn, repeat: int) -> float:
    fn()  # warm-up (includes numba compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times)


def run_backend(sizes: list[int], repeat: int, end_to_end: bool) -> dict:
    import numpy as np

    from omideals import _kernels as kn

    rng = np.random.default_rng(7)
    rows = []
    for p in PRIMES:
        for n in sizes:
            a = rng.integers(0, p, n, dtype=np.int64)
            b = rng.integers(0, p, n, dtype=np.int64)
            m = rng.integers(0, p, n // 2 + 1, dtype=np.int64)
            m[-1] = 1
            big = kn.mul(a, b, p)
            rows.append({"p": p, "n": n, "op": "mul", "s": _best(lambda: kn.mul(a, b, p), repeat)})
            rows.append({"p": p, "n": n, "op": "divmod", "s": _best(lambda: kn.divmod_(big, m, p), repeat)})
            rows.append({"p": p, "n": n, "op": "gcd", "s": _best(lambda: kn.gcd(a, m, p), repeat)})
            rows.append({"p": p, "n": n, "op": "powmod", "s": _best(lambda: kn.powmod(a, p + 12345, m, p), 1)})
    out = {"backend": kn.BACKEND, "kernels": rows}
    if end_to_end:
        from omideals.arith import NumberField
        from omideals.montes import montes_factorize

        spec = json.loads((ROOT / "data" / "fields" / "deg1000_trinomial.json").read_text())
        K = NumberField([int(c) for c in spec["coeffs"]])
        t = time.perf_counter()
        for p in (2, 5):
            montes_factorize(K, p)
        out["montes_deg1000"] = time.perf_counter() - t
    return out


def _spawn(backend: str, argv: list[str]) -> dict:
    env = dict(os.environ, OMIDEALS_KERNELS=backend)
    cmd = [sys.executable, __file__, "--backend", backend, "--json"] + argv
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--backend", choices=("numpy", "numba"))
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-end-to-end", action="store_true", help="skip the degree-1000 Montes timing")
    ap.add_argument("--json", action="store_true", help="print raw JSON")
    args = ap.parse_args()

    if args.backend:
        if os.environ.get("OMIDEALS_KERNELS") == args.backend:
            res = run_backend(args.sizes, args.repeat, not args.no_end_to_end)
        else:
            res = _spawn(args.backend, _passthrough(args))
        print(json.dumps(res) if args.json else _table([res]))
        return

    results = [_spawn(b, _passthrough(args)) for b in ("numpy", "numba")]
    print(json.dumps(results) if args.json else _table(results))


def _passthrough(args) -> list[str]:
    out = ["--sizes", *map(str, args.sizes), "--repeat", str(args.repeat)]
    return out + (["--no-end-to-end"] if args.no_end_to_end else [])


def _table(results: list[dict]) -> str:
    names = [r["backend"] for r in results]
    lines = [f"{'p':>11} {'n':>6} {'op':<7}" + "".join(f"{b:>12}" for b in names)]
    for i, row in enumerate(results[0]["kernels"]):
        cells = "".join(f"{r['kernels'][i]['s'] * 1e3:>10.3f}ms" for r in results)
        lines.append(f"{row['p']:>11} {row['n']:>6} {row['op']:<7}" + cells)
    if all("montes_deg1000" in r for r in results):
        lines.append("montes deg1000 at 2 and 5" + "".join(f"{r['montes_deg1000']:>11.2f}s" for r in results))
    return "\n".join(lines)


if __name__ == "__main__":
    main()
