"""Compare the numba and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json] [--e2e]

Each kernel is timed on a workload shaped like its use inside the library
(best of ``--repeat`` runs, after one warm-up call that also triggers JIT
compilation).  Results from the two backends are checked for agreement.
``--e2e`` additionally times a full ``verify`` run in a subprocess per
backend, selected through ZETALAB_BACKEND.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from zetalab.kernels import get_backend


def workloads():
    b = np.array([-0.5, 0.0, 0.25, 0.75])
    t = 0.05 * np.arange(-4000, 4001, dtype=np.float64)
    lnmod = np.log(np.linspace(10.0, 4000.0, 2000))
    w = np.exp(-np.abs(t)) * (1 + 0.5j)
    coef = np.random.default_rng(0).random(200_001)
    euler = np.array([1.0, 4.0, 1.0])
    return {
        "sieve_d": lambda m: m.sieve_d(2, 3, 1_000_000),
        "sieve_s": lambda m: m.sieve_s(3, -1, 1_000_000),
        "exp_weighted_sum": lambda m: m.exp_weighted_sum(coef, 1e-4),
        "lgamma_nodes": lambda m: m.lgamma_nodes(b, 1.75, t),
        "mb_line_sum": lambda m: m.mb_line_sum(lnmod, t, w),
        "log1mexp_series": lambda m: m.log1mexp_series(3.0 - 1.0j, 4, 500_000),
        "lbar_series": lambda m: m.lbar_series(7.0 - 2.0j, 4, 500_000),
        "derivative_form_sum": lambda m: m.derivative_form_sum(1, 3, 1e-3, 200_000, euler),
    }


def best_of(fn, repeat: int) -> tuple[float, object]:
    out = fn()  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _close(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return bool(np.allclose(a, b, rtol=1e-10, atol=1e-14 * max(1.0, float(np.max(np.abs(a))))))


def run_e2e() -> dict[str, float]:
    code = (
        "import time; from zetalab import IdentityCase, verify; "
        "verify(IdentityCase(2, 0, 1.0)); t=time.perf_counter(); "
        "verify(IdentityCase(4, 2, 1.0)); print(time.perf_counter()-t)"
    )
    out = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ZETALAB_BACKEND=backend)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout.strip().splitlines()[-1])
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write results to this file")
    ap.add_argument("--e2e", action="store_true", help="also time verify() per backend")
    args = ap.parse_args(argv)

    nb, npk = get_backend("numba"), get_backend("numpy")
    rows = []
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>9}  agree")
    for name, fn in workloads().items():
        t_nb, r_nb = best_of(lambda: fn(nb), args.repeat)
        t_np, r_np = best_of(lambda: fn(npk), args.repeat)
        agree = _close(r_nb, r_np)
        rows.append({"kernel": name, "numba_ms": 1e3 * t_nb, "numpy_ms": 1e3 * t_np, "agree": agree})
        print(f"{name:<22}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>8.1f}x  {'yes' if agree else 'NO'}")
    result = {"kernels": rows}
    if args.e2e:
        e2e = run_e2e()
        result["verify_4_2_1_s"] = e2e
        print(f"verify(k=4, r=2, x=1): numba {e2e['numba']:.2f} s, numpy {e2e['numpy']:.2f} s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
