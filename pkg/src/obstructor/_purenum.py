"""Pure-Python twin of the compiled residue-enumeration kernel.

Same contract as obstructor._fastenum.solve_box, with no modulus-size
restriction beyond what Python integers allow.
"""

from __future__ import annotations


def _prepare(polys, m, nvars):
    out = []
    for coeffs, exps in polys:
        terms = []
        for c, ev in zip(coeffs, exps):
            ev = tuple(int(e) for e in ev)
            assert len(ev) == nvars
            terms.append((int(c) % m, ev))
        out.append(terms)
    return out


def solve_box(eqs, neqs, values, m, limit, budget):
    """Exhaustive search over the product of candidate value lists.

    Returns (solutions, exhausted); see the compiled kernel for the full
    contract.
    """
    if m < 2:
        raise ValueError("modulus out of kernel range")
    nvars = len(values)
    if nvars == 0:
        ok = all(sum(int(c) for c in cs) % m == 0 for cs, _ in eqs)
        ok = ok and all(sum(int(c) for c in cs) % m != 0 for cs, _ in neqs)
        return ([()] if ok else []), True
    values = [[int(x) % m for x in v] for v in values]
    if any(len(v) == 0 for v in values):
        return [], True
    eq_terms = _prepare(eqs, m, nvars)
    neq_terms = _prepare(neqs, m, nvars)
    maxdeg = 0
    for terms in eq_terms + neq_terms:
        for _, ev in terms:
            maxdeg = max(maxdeg, max(ev, default=0))

    lens = [len(v) for v in values]
    idx = [0] * nvars
    pows = [[1] * (maxdeg + 1) for _ in range(nvars)]

    def refill(v):
        base = values[v][idx[v]]
        row = pows[v]
        for e in range(1, maxdeg + 1):
            row[e] = row[e - 1] * base % m

    for v in range(nvars):
        refill(v)

    sols = []
    visited = 0
    while True:
        visited += 1
        ok = True
        for terms in eq_terms:
            acc = 0
            for c, ev in terms:
                term = c
                for v in range(nvars):
                    e = ev[v]
                    if e:
                        term = term * pows[v][e] % m
                acc = (acc + term) % m
            if acc != 0:
                ok = False
                break
        if ok:
            for terms in neq_terms:
                acc = 0
                for c, ev in terms:
                    term = c
                    for v in range(nvars):
                        e = ev[v]
                        if e:
                            term = term * pows[v][e] % m
                    acc = (acc + term) % m
                if acc == 0:
                    ok = False
                    break
        if ok:
            sols.append(tuple(values[v][idx[v]] for v in range(nvars)))
            if len(sols) >= limit:
                return sols, False
        if visited >= budget:
            return sols, False
        k = nvars - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < lens[k]:
                refill(k)
                break
            idx[k] = 0
            refill(k)
            k -= 1
        if k < 0:
            return sols, True
