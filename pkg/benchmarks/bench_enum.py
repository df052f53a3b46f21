"""Benchmark: compiled residue-enumeration kernel vs the pure-Python twin.

Workloads are real enumeration tasks from the bundled models (full chart
boxes of polynomial systems modulo p^k).  Run from the repository root:

    python3 benchmarks/bench_enum.py
"""

import time

from obstructor import _purenum

try:
    from obstructor import _fastenum
except ImportError:
    _fastenum = None

from obstructor.poly import MultiPolynomial as MP


def workloads():
    V4 = ("x", "y", "z", "w")
    V6 = ("u1", "u2", "v2", "x", "y", "z")
    cubic = MP.parse("x^3 + 4*y^3 + 10*z^3 + 25*w^3", V4)
    quartic = MP.parse("w^2 + 6*x^4 + 3*y^4 - 2*z^4", V4)
    k3 = [MP.parse("u1^2 - x*y - 5*v2^2", V6),
          MP.parse("u2^2 - 13*x^2 - 950*x*y - 32730*y^2 - 670*z^2", V6),
          MP.parse("v2^2 + x^2 + 134*x*y + 654*y^2 - 134*z^2", V6)]
    yield ("cubic surface, chart box mod 7^2",
           [cubic.kernel_form()], [], [[1]] + [range(49)] * 3, 49)
    yield ("quartic surface, chart box mod 3^3",
           [quartic.kernel_form()], [], [[1]] + [range(27)] * 3, 27)
    yield ("K3 (2,2,2) system, chart box mod 2^4",
           [eq.kernel_form() for eq in k3], [],
           [[1]] + [range(16)] * 5, 16)
    yield ("conic with inequation, full box mod 5^3",
           [MP.parse("x^2 + y^2 - z^2", ("x", "y", "z")).kernel_form()],
           [MP.parse("z", ("x", "y", "z")).kernel_form()],
           [range(125)] * 3, 125)


def run(kernel, eqs, neqs, values, m):
    t0 = time.perf_counter()
    sols, exhausted = kernel.solve_box(eqs, neqs, values, m,
                                       10 ** 7, 10 ** 8)
    dt = time.perf_counter() - t0
    assert exhausted
    return len(sols), dt


def main():
    if _fastenum is None:
        print("compiled kernel not available; benchmarking the pure "
              "kernel only")
    header = f"{'workload':45s} {'sols':>7} {'pure':>9} {'compiled':>9} " \
             f"{'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, eqs, neqs, values, m in workloads():
        n_pure, t_pure = run(_purenum, eqs, neqs, values, m)
        if _fastenum is not None:
            n_fast, t_fast = run(_fastenum, eqs, neqs, values, m)
            assert n_fast == n_pure, "kernels disagree"
            print(f"{name:45s} {n_pure:7d} {t_pure:8.3f}s {t_fast:8.3f}s "
                  f"{t_pure / t_fast:7.1f}x")
        else:
            print(f"{name:45s} {n_pure:7d} {t_pure:8.3f}s {'-':>9} {'-':>8}")


if __name__ == "__main__":
    main()
