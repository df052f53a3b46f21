# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled residue-enumeration kernel.

Enumerates assignments over a box of candidate residue values and collects
those where every equation vanishes modulo m and no inequation does.  The
modulus must fit in 31 bits so that products stay inside int64.
"""

import numpy as np


def solve_box(eqs, neqs, values, long long m, long long limit, long long budget):
    """Exhaustive search over the product of candidate value lists.

    eqs, neqs -- lists of (coeffs, exps) integer-matrix pairs; exps has one
                 column per variable.
    values    -- one sequence of candidate residues per variable.
    m         -- modulus (1 < m < 2**31).
    limit     -- stop after this many solutions.
    budget    -- stop after visiting this many assignments.

    Returns (solutions, exhausted): solutions is a list of value tuples,
    exhausted is True when the whole box was visited.
    """
    if m < 2 or m >= (1 << 31):
        raise ValueError("modulus out of kernel range")
    cdef Py_ssize_t nvars = len(values)
    if nvars == 0:
        empty_ok = all(sum(int(x) for x in c) % m == 0 for c, _ in eqs)
        empty_ok = empty_ok and all(
            sum(int(x) for x in c) % m != 0 for c, _ in neqs)
        return ([()] if empty_ok else []), True

    # Flatten both polynomial families into one term table.
    npolys = len(eqs) + len(neqs)
    coeff_rows = []
    exp_rows = []
    offsets = np.zeros(npolys + 1, dtype=np.int64)
    pos = 0
    for i, (ci, ei) in enumerate(list(eqs) + list(neqs)):
        cm = np.array([int(x) % m for x in ci], dtype=np.int64)
        coeff_rows.append(cm)
        exp_rows.append(np.asarray(ei, dtype=np.int64).reshape(len(cm), nvars))
        pos += len(cm)
        offsets[i + 1] = pos
    if pos == 0:
        all_coeffs = np.zeros(0, dtype=np.int64)
        all_exps = np.zeros((0, nvars), dtype=np.int64)
    else:
        all_coeffs = np.concatenate(coeff_rows)
        all_exps = np.vstack(exp_rows)

    cdef long long[::1] coeffs_v = all_coeffs
    cdef long long[:, ::1] exps_v = np.ascontiguousarray(all_exps)
    cdef long long[::1] off_v = offsets
    cdef Py_ssize_t n_eq = len(eqs)
    cdef Py_ssize_t n_all = npolys

    lengths = np.array([len(vl) for vl in values], dtype=np.int64)
    cdef long long[::1] len_v = lengths
    cdef Py_ssize_t maxlen = int(lengths.max()) if nvars else 0
    vals = np.zeros((nvars, maxlen), dtype=np.int64)
    for i, vlist in enumerate(values):
        if len(vlist) == 0:
            return [], True
        vals[i, : len(vlist)] = np.array(
            [int(x) % m for x in vlist], dtype=np.int64)
    cdef long long[:, ::1] vals_v = vals

    cdef long long maxdeg = 0
    if all_exps.size:
        maxdeg = int(all_exps.max())
    pows = np.ones((nvars, maxdeg + 1), dtype=np.int64)
    cdef long long[:, ::1] pows_v = pows

    cdef long long[::1] idx = np.zeros(nvars, dtype=np.int64)
    cdef long long visited = 0
    cdef Py_ssize_t v, t, k, poly
    cdef long long acc, term, base, e
    cdef bint ok
    sols = []

    # power tables for the initial assignment
    for v in range(nvars):
        base = vals_v[v, 0]
        for e in range(1, maxdeg + 1):
            pows_v[v, e] = pows_v[v, e - 1] * base % m

    while True:
        visited += 1
        ok = True
        for poly in range(n_all):
            acc = 0
            for t in range(off_v[poly], off_v[poly + 1]):
                term = coeffs_v[t]
                for v in range(nvars):
                    e = exps_v[t, v]
                    if e:
                        term = term * pows_v[v, e] % m
                acc = (acc + term) % m
            if poly < n_eq:
                if acc != 0:
                    ok = False
                    break
            else:
                if acc == 0:
                    ok = False
                    break
        if ok:
            sols.append(tuple(int(vals_v[v, idx[v]]) for v in range(nvars)))
            if len(sols) >= limit:
                return sols, False
        if visited >= budget:
            return sols, False
        # odometer step (last variable fastest)
        k = nvars - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < len_v[k]:
                base = vals_v[k, idx[k]]
                pows_v[k, 0] = 1
                for e in range(1, maxdeg + 1):
                    pows_v[k, e] = pows_v[k, e - 1] * base % m
                break
            idx[k] = 0
            base = vals_v[k, 0]
            pows_v[k, 0] = 1
            for e in range(1, maxdeg + 1):
                pows_v[k, e] = pows_v[k, e - 1] * base % m
            k -= 1
        if k < 0:
            return sols, True
