"""Compare the compiled and pure-Python search kernels.

    python3 benchmarks/bench_kernel.py [--size 3] [--bound 24] [--repeat 3]

Both kernels run over the same enumerated formulas; the script checks that
they agree and reports the best wall time of each.
"""

from __future__ import annotations

import argparse
import time

from ielkit import _kernel_py
from ielkit.decide import Indexed, enumerate_formulas

try:
    from ielkit import _kernel
except ImportError:  # extension not built
    _kernel = None


def workload(size: int, atoms: tuple[str, ...]) -> list[tuple[Indexed, int]]:
    out = []
    for f in enumerate_formulas(atoms, size):
        u = Indexed.build(f)
        out.append((u, u.index[f]))
    return out


def run(impl, items, bound: int) -> tuple[float, float, list]:
    results = []
    t0 = time.perf_counter()
    for u, g in items:
        results.append(impl.decide(u.kinds, u.lhs, u.rhs, 0, g)[0])
    t1 = time.perf_counter()
    for u, g in items:
        results.append(impl.oracle_min_size(u.kinds, u.lhs, u.rhs, 0, g, bound))
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, results


def best_of(impl, items, bound: int, repeat: int) -> tuple[float, float, list]:
    runs = [run(impl, items, bound) for _ in range(repeat)]
    return min(r[0] for r in runs), min(r[1] for r in runs), runs[0][2]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=3, help="max connectives")
    ap.add_argument("--atoms", default="p,r")
    ap.add_argument("--bound", type=int, default=24, help="oracle size bound")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    items = workload(args.size, tuple(args.atoms.split(",")))
    print(f"{len(items)} formulas, <= {args.size} connectives, oracle bound {args.bound}")
    py_dec, py_orc, py_res = best_of(_kernel_py, items, args.bound, args.repeat)
    print(f"python    decide {py_dec:8.3f}s   oracle {py_orc:8.3f}s")
    if _kernel is None:
        print("compiled  not built")
        return
    c_dec, c_orc, c_res = best_of(_kernel, items, args.bound, args.repeat)
    print(f"compiled  decide {c_dec:8.3f}s   oracle {c_orc:8.3f}s")
    print(f"speedup   decide {py_dec / c_dec:8.2f}x   oracle {py_orc / c_orc:8.2f}x")
    print("results agree" if py_res == c_res else "RESULTS DIFFER")


if __name__ == "__main__":
    main()
