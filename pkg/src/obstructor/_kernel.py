"""Kernel selection: compiled enumeration core with pure-Python fallback.

Set OBSTRUCTOR_PURE=1 to force the fallback (used by the benchmark and by
tests that compare both backends).  The compiled kernel only accepts moduli
below 2**31; larger moduli are routed to the pure kernel automatically.
"""

import os

from obstructor import _purenum

if os.environ.get("OBSTRUCTOR_PURE"):
    _impl = _purenum
    BACKEND = "pure"
else:
    try:
        from obstructor import _fastenum as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _purenum
        BACKEND = "pure"

_KERNEL_MOD_CAP = 1 << 31


def solve_box(eqs, neqs, values, m, limit, budget):
    """Dispatch to the selected kernel; see _purenum.solve_box."""
    if m >= _KERNEL_MOD_CAP:
        return _purenum.solve_box(eqs, neqs, values, m, limit, budget)
    return _impl.solve_box(eqs, neqs, values, m, limit, budget)
