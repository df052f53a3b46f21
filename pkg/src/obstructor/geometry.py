"""Variety models over Z and point search over local fields.

Models are integer polynomial systems in projective (optionally weighted)
or affine ambient space, with "open conditions" (polynomials required
nonzero, for affine complements).  The search layer enumerates residue
solutions modulo pi^k, certifies liftability by the multivariate Newton
criterion, and refines to full working precision; samplers exploit
triangular structure (equations solving one pure-power variable each)
where the system has it, which every bundled model does.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from obstructor._kernel import solve_box
from obstructor.hilbert import Place
from obstructor.localfields import (
    LiftError,
    LocalField,
    LocalFieldElement,
    nth_root_element,
)
from obstructor.padic import PrecisionError


class GeometryError(ValueError):
    pass


class NoUsableRepresentative(GeometryError):
    """Every representative of a function class is undefined or
    indistinguishable from zero at the point."""


class BudgetExceeded(GeometryError):
    pass


def _fe(value, S):
    """Coerce a polynomial-evaluation result into the field (constant
    polynomials evaluate to plain integers)."""
    if isinstance(value, LocalFieldElement):
        return value
    return S.from_int(value)


@dataclass(frozen=True)
class Ambient:
    kind: str                    # "projective" | "affine"
    variables: tuple
    weights: tuple = None

    def __post_init__(self):
        if self.kind not in ("projective", "affine"):
            raise GeometryError(f"unknown ambient kind {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        w = self.weights
        if self.kind == "projective":
            w = tuple(w) if w is not None else (1,) * len(self.variables)
            if len(w) != len(self.variables) or any(x < 1 for x in w):
                raise GeometryError("bad weight vector")
            if 1 not in w:
                raise GeometryError("at least one weight-1 coordinate "
                                    "is required")
        else:
            w = None
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return len(self.variables)

    @property
    def is_projective(self):
        return self.kind == "projective"

    def chart_indexes(self):
        """Coordinates eligible for normalization to 1 (weight 1)."""
        return [i for i, w in enumerate(self.weights) if w == 1] \
            if self.is_projective else []


class VarietyModel:
    """Integer polynomial system, its ambient, and declared bad places."""

    def __init__(self, ambient, equations, open_conditions=(),
                 bad_places=(), name=""):
        self.ambient = ambient
        self.equations = list(equations)
        self.open_conditions = list(open_conditions)
        self.bad_places = [Place.parse(v) for v in bad_places]
        self.name = name
        for eq in list(self.equations) + list(self.open_conditions):
            if eq.variables != ambient.variables:
                raise GeometryError("equation variables do not match ambient")
        if ambient.is_projective:
            for eq in self.equations:
                if eq.homogeneous_degree(ambient.weights) is None:
                    raise GeometryError(
                        f"non-homogeneous equation in projective ambient: "
                        f"{eq}")
        self._plan = _triangular_plan(self)

    @property
    def n(self):
        return self.ambient.n

    def __repr__(self):
        return f"VarietyModel({self.name or self.ambient.variables})"


class LocalPoint:
    """Coordinates over a local field, satisfying the model to precision."""

    __slots__ = ("field", "coords", "chart")

    def __init__(self, field, coords, chart=None):
        self.field = field
        self.coords = tuple(coords)
        self.chart = chart  # normalization index (projective)

    def verify(self, model, threshold=None):
        S = self.field
        if threshold is None:
            threshold = S.e * S.digits - 2 * S.e
        for eq in model.equations:
            if _fe(eq.evaluate(self.coords), S).val_floor() < threshold:
                return False
        for cond in model.open_conditions:
            if not _fe(cond.evaluate(self.coords), S).is_nonzero:
                return False
        if model.ambient.is_projective:
            if self.chart is None:
                return False
            if (self.coords[self.chart] - S.one()).core_val() is not None:
                return False
            if any(c.val_floor() < 0 for c in self.coords):
                return False
        return True

    def residue_key(self, depth=1):
        """Hashable reduction of the coordinates modulo pi^depth."""
        return (self.chart,
                tuple(c.digits(depth) for c in self.coords))

    def __repr__(self):
        return f"LocalPoint(chart={self.chart}, field={self.field!r})"


class RationalFunctionClass:
    """Equivalent (numerator, denominator) representative pairs."""

    def __init__(self, representatives, ambient=None):
        self.representatives = [(num, den) for num, den in representatives]
        if not self.representatives:
            raise GeometryError("at least one representative required")
        if ambient is not None and ambient.is_projective:
            for num, den in self.representatives:
                dn = num.homogeneous_degree(ambient.weights)
                dd = den.homogeneous_degree(ambient.weights)
                if dn is None or dd is None or (not num.is_zero and dn != dd):
                    raise GeometryError(
                        "projective representatives must be degree-0 "
                        "homogeneous ratios")

    def spot_check_equivalence(self, points, tol_digits=8):
        """Cross-multiplied values of every representative pair agree at the
        sampled points (when both are defined)."""
        for (n1, d1), (n2, d2) in itertools.combinations(
                self.representatives, 2):
            for P in points:
                S = P.field
                a = _fe(n1.evaluate(P.coords), S) * \
                    _fe(d2.evaluate(P.coords), S)
                b = _fe(n2.evaluate(P.coords), S) * \
                    _fe(d1.evaluate(P.coords), S)
                if (a - b).val_floor() < tol_digits:
                    return False
        return True

    def __repr__(self):
        num, den = self.representatives[0]
        return f"({num})/({den})"


class MorphismModel:
    """Coordinatewise polynomial map between variety models."""

    def __init__(self, source, target, coordinate_polys, name=""):
        self.source = source
        self.target = target
        self.coordinate_polys = list(coordinate_polys)
        self.name = name
        if len(self.coordinate_polys) != target.n:
            raise GeometryError("morphism needs one polynomial per "
                                "target coordinate")
        for poly in self.coordinate_polys:
            if poly.variables != source.ambient.variables:
                raise GeometryError("morphism polynomials must use source "
                                    "variables")

    def validate_on_samples(self, points):
        """Images of sampled source points satisfy the target equations."""
        for P in points:
            Q = apply_morphism(self, P)
            S = P.field
            for eq in self.target.equations:
                if _fe(eq.evaluate(Q.coords), S).val_floor() < S.e * 4:
                    return False
        return True


@dataclass(frozen=True)
class SearchCaps:
    depth: int = 6              # residue depth cap, in pi-digits
    budget: int = 10 ** 7       # residue vectors per enumeration
    samples: int = 50
    seed: int = 1
    oversample: int = 10

    def with_budget_env(self):
        import os
        raw = os.environ.get("OBSTRUCTOR_BUDGET")
        if raw:
            return SearchCaps(self.depth, int(raw), self.samples,
                              self.seed, self.oversample)
        return self


@dataclass
class ResidueVector:
    chart: object
    coords: tuple

    def ints(self, k):
        """Integer coordinates mod p^k (base-field enumeration only)."""
        out = []
        for c in self.coords:
            if c.field.degree != 1:
                raise GeometryError("ints() is for base-field residues")
            out.append(c.vec[0] % c.field.p ** k)
        return tuple(out)


@dataclass
class SolvabilityResult:
    status: str                  # "yes" | "no" | "inconclusive"
    witness: object = None
    depth: int = None            # certificate depth for "no"
    method: str = ""
    detail: str = ""

    @property
    def is_yes(self):
        return self.status == "yes"


# ---------------------------------------------------------------------------
# triangular structure
# ---------------------------------------------------------------------------

def _triangular_plan(model):
    """Peel equations that isolate one pure-power variable each; returns the
    execution order [(equation, var index, power, coefficient)] and the free
    variables, or None when the system has no such structure."""
    eqs = list(model.equations)
    solved = set()
    peeled = []
    while eqs:
        candidates = []
        for eq in eqs:
            used = eq.variables_used()
            for i in sorted(used - solved):
                if any(i in other.variables_used()
                       for other in eqs if other is not eq):
                    continue
                with_i = [(ev, c) for ev, c in eq.terms.items() if ev[i]]
                if len(with_i) != 1:
                    continue
                ev, c = with_i[0]
                if any(e and j != i for j, e in enumerate(ev)):
                    continue
                candidates.append((ev[i], i, eq, c))
        if not candidates:
            return None
        # low root order first: square roots exist more often than quartic
        d, i, eq, c = min(candidates, key=lambda t: (t[0], t[1]))
        found = (eq, i, d, c)
        peeled.append(found)
        solved.add(found[1])
        eqs.remove(found[0])
    order = list(reversed(peeled))
    free = [i for i in range(model.n) if i not in solved]
    return {"order": order, "free": free, "solved": solved}


def _solve_triangular(model, S, assignment, rng):
    """Complete a free-variable assignment through the triangular plan;
    returns full coords or None."""
    plan = model._plan
    coords = list(assignment)
    for eq, i, d, c in plan["order"]:
        rest = eq.specialize({model.ambient.variables[i]: 0})
        try:
            t = -_fe(rest.evaluate(coords), S) / S.from_int(c)
        except (ZeroDivisionError, PrecisionError):
            return None
        if t.is_exact_zero:
            coords[i] = S.zero()
            continue
        if t.is_zero_at_precision:
            return None
        try:
            root = nth_root_element(t, d)
        except PrecisionError:
            return None
        if root is None:
            return None
        if d % 2 == 0 and rng.random() < 0.5:
            root = -root
        coords[i] = root
    return tuple(coords)


def _plan_chart_options(model):
    plan = model._plan
    if plan is None:
        return []
    if not model.ambient.is_projective:
        return [None]
    return [i for i in model.ambient.chart_indexes() if i in plan["free"]]


# ---------------------------------------------------------------------------
# residue enumeration
# ---------------------------------------------------------------------------

def _chart_value_lists(model, p, k, chart):
    """Kernel value lists for canonical chart enumeration mod p^k."""
    m = p ** k
    lists = []
    for i in range(model.n):
        if i == chart:
            lists.append([1])
        elif (model.ambient.is_projective and chart is not None
              and i < chart and model.ambient.weights[i] == 1):
            lists.append([p * t for t in range(p ** (k - 1))])
        else:
            lists.append(list(range(m)))
    return lists


def _box_size(lists):
    size = 1
    for v in lists:
        size *= len(v)
    return size


def residue_solutions(model, S, k, budget=10 ** 7, limit=10 ** 6,
                      enforce_open="mod"):
    """All solutions of the system modulo pi^k.

    Projective models enumerate canonical chart forms (first weight-1 unit
    coordinate scaled to 1).  Open conditions are required nonzero mod pi^k
    when enforce_open="mod" (the documented contract), or ignored here and
    left to final point verification when "off".
    Raises BudgetExceeded when the search space is larger than budget.
    """
    out = []
    if S.degree == 1:
        p = int(S.p)
        m = p ** k
        eq_forms = [eq.kernel_form() for eq in model.equations]
        neq_forms = [c.kernel_form() for c in model.open_conditions] \
            if enforce_open == "mod" else []
        charts = model.ambient.chart_indexes() \
            if model.ambient.is_projective else [None]
        for chart in charts:
            lists = _chart_value_lists(model, p, k, chart)
            if _box_size(lists) > budget:
                raise BudgetExceeded(
                    f"residue box exceeds budget at depth {k}")
            sols, exhausted = solve_box(eq_forms, neq_forms, lists, m,
                                        limit, budget)
            if not exhausted and len(sols) < limit:
                raise BudgetExceeded("kernel budget exhausted")
            for sol in sols:
                out.append(ResidueVector(
                    chart, tuple(S.from_int(c) for c in sol)))
        return out
    # extension fields: breadth-first digit refinement
    charts = model.ambient.chart_indexes() \
        if model.ambient.is_projective else [None]
    for chart in charts:
        for sol in _bfs_solutions(model, S, k, chart, budget):
            out.append(ResidueVector(chart, sol))
    if enforce_open == "mod":
        kept = []
        for rv in out:
            ok = True
            for cond in model.open_conditions:
                if cond.evaluate(rv.coords).val_floor() >= k:
                    ok = False
                    break
            if ok:
                kept.append(rv)
        out = kept
    return out


def _bfs_solutions(model, S, k, chart, budget):
    """Solutions mod pi^k over an extension, by digit extension."""
    digits = S.residue_digits()
    zero = S.zero()
    one = S.one()
    n = model.n
    free = [i for i in range(n) if i != chart]
    pinned = [i for i in free
              if model.ambient.is_projective and chart is not None
              and i < chart and model.ambient.weights[i] == 1]
    level = [tuple(one if i == chart else zero for i in range(n))]
    visited = 0
    for depth in range(k):
        pik = S.pi_pow(depth)
        nxt = []
        for node in level:
            choices = []
            for i in free:
                if depth == 0 and i in pinned:
                    choices.append([zero])
                else:
                    choices.append(digits)
            for combo in itertools.product(*choices):
                visited += 1
                if visited > budget:
                    raise BudgetExceeded("extension residue budget exhausted")
                cand = list(node)
                for i, d in zip(free, combo):
                    cand[i] = cand[i] + d * pik
                cand = tuple(cand)
                if all(_fe(eq.evaluate(cand), S).val_floor() >= depth + 1
                       for eq in model.equations):
                    nxt.append(cand)
        level = nxt
        if not level:
            return []
    return level


# ---------------------------------------------------------------------------
# Newton lifting
# ---------------------------------------------------------------------------

def _det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def lift_point(model, S, coords, chart=None, target=None):
    """Refine residue coordinates to a point at working precision via the
    multivariate Newton criterion: some maximal minor M of the Jacobian
    satisfies val(F_i) > 2 val(det M) for every equation F_i.
    """
    coords = list(coords)
    n = model.n
    eqs = model.equations
    m = len(eqs)
    if target is None:
        target = S.e * S.digits - 2 * S.e
    if m == 0:
        pt = LocalPoint(S, coords, chart)
        return pt
    free = [i for i in range(n) if i != chart]
    names = model.ambient.variables
    derivs = [[eq.derivative(names[i]) for i in free] for eq in eqs]

    def f_vals(c):
        return [_fe(eq.evaluate(c), S) for eq in eqs]

    fv = f_vals(coords)
    min_fval = min(x.val_floor() for x in fv)
    best = None
    for cols in itertools.combinations(range(len(free)), m):
        sub = [[_fe(derivs[i][j].evaluate(coords), S) for j in cols]
               for i in range(m)]
        det = _det(sub)
        if det.is_nonzero:
            dv = det.valuation()
            if best is None or dv < best[0]:
                best = (dv, cols)
    if best is None:
        raise LiftError("Jacobian has no invertible maximal minor "
                        "at this residue")
    dv, cols = best
    if min_fval <= 2 * dv:
        raise LiftError(f"Newton criterion failed: val(F) = {min_fval} "
                        f"<= 2*val(minor) = {2 * dv}")
    for _ in range(60):
        if all(x.val_floor() >= target for x in fv):
            pt = LocalPoint(S, coords, chart)
            return pt
        sub = [[_fe(derivs[i][j].evaluate(coords), S) for j in cols]
               for i in range(m)]
        det = _det(sub)
        neg_f = [-x for x in fv]
        # Cramer solve for the update on the chosen coordinates
        delta = []
        for j in range(m):
            mod_m = [[sub[r][c] if c != j else neg_f[r]
                      for c in range(m)] for r in range(m)]
            delta.append(_det(mod_m) / det)
        for j, d in zip(cols, delta):
            coords[free[j]] = coords[free[j]] + d
        new_fv = f_vals(coords)
        new_min = min(x.val_floor() for x in new_fv)
        if new_min <= min(x.val_floor() for x in fv):
            raise PrecisionError("Newton iteration stalled before target "
                                 "precision")
        fv = new_fv
    raise PrecisionError("Newton iteration did not converge")


def _newton_ready(model, S, coords, chart):
    """Whether the Newton criterion fires at these residue coordinates."""
    try:
        lift_point(model, S, coords, chart)
        return True
    except (LiftError, PrecisionError):
        return False


# ---------------------------------------------------------------------------
# local solvability
# ---------------------------------------------------------------------------

EXHAUST_CEILING = 3 * 10 ** 6       # kernel-backed enumeration
PY_EXTEND_CEILING = 150_000         # pure-Python level extension


def has_local_point(model, S, caps=SearchCaps()):
    """Certified local-point decision at the given caps.

    Yes carries a verified witness; No carries the depth of an exhaustive
    empty residue level (projective models only, where every point reduces);
    Inconclusive is explicit.
    """
    if not model.equations:
        pt = _ambient_point(model, S)
        if pt is not None:
            return SolvabilityResult("yes", pt, method="ambient")
    rng = random.Random(caps.seed)
    # cheap witness attempt first: triangular completion when the system
    # has the structure (every bundled model does); failures cost a few
    # root tests each, so a large burst is still cheap
    if model._plan is not None:
        pt = _sample_triangular(model, S, rng, tries=40)
        if pt is None:
            guidance = _viable_free_classes(model, S)
            pt = _sample_triangular(model, S, rng,
                                    tries=max(60 * caps.oversample, 400),
                                    guidance=guidance)
        if pt is not None:
            return SolvabilityResult("yes", pt, method="triangular")
    # exhaustive phase with certificates, when the boxes are affordable
    ceiling = min(caps.budget, EXHAUST_CEILING)
    box1 = _depth_box_size(model, S, 1)
    if box1 <= ceiling:
        result = _exhaustive_search(model, S, caps, ceiling)
        if result is not None:
            return result
    pt = _sample_descent(model, S, caps, rng)
    if pt is not None:
        return SolvabilityResult("yes", pt, method="descent")
    return SolvabilityResult("inconclusive",
                             detail="no liftable point found at caps")


def _ambient_point(model, S):
    n = model.n
    charts = model.ambient.chart_indexes() \
        if model.ambient.is_projective else [None]
    for chart in charts or [None]:
        for trial in range(8):
            coords = [S.from_int(trial + 1 + i) for i in range(n)]
            if chart is not None:
                coords[chart] = S.one()
            pt = LocalPoint(S, coords, chart)
            if pt.verify(model):
                return pt
    return None


def _depth_box_size(model, S, k):
    q = int(S.q)
    nfree = model.n - (1 if model.ambient.is_projective else 0)
    return (q ** k) ** nfree * max(
        1, len(model.ambient.chart_indexes()) or 1)


def _exhaustive_search(model, S, caps, ceiling):
    """Depth-increasing exhaustive enumeration with Newton checks.

    Returns a SolvabilityResult or None to hand over to sampling.
    """
    prev = None
    for k in range(1, caps.depth + 1):
        if _depth_box_size(model, S, k) > ceiling:
            nfree = model.n - (1 if model.ambient.is_projective else 0)
            if prev is not None and len(prev) * int(S.q) ** nfree \
                    <= PY_EXTEND_CEILING:
                sols = _extend_level(model, S, prev, k - 1,
                                     PY_EXTEND_CEILING)
            else:
                return None
        else:
            try:
                sols = residue_solutions(model, S, k, budget=ceiling,
                                         enforce_open="off")
            except BudgetExceeded:
                return None
        if not sols:
            if model.ambient.is_projective:
                return SolvabilityResult("no", depth=k, method="exhaustive")
            return SolvabilityResult(
                "inconclusive", depth=k, method="exhaustive",
                detail="no integral residue solutions; affine models admit "
                       "non-integral points, so emptiness is not certified")
        for rv in sols:
            try:
                pt = lift_point(model, S, rv.coords, rv.chart)
            except (LiftError, PrecisionError):
                continue
            if pt.verify(model):
                return SolvabilityResult("yes", pt, method="exhaustive")
        prev = sols
    return None


def _extend_level(model, S, sols, k, ceiling):
    """Children (mod pi^(k+1)) of the solutions mod pi^k."""
    digits = S.residue_digits()
    out = []
    visited = 0
    pik = S.pi_pow(k)
    for rv in sols:
        free = [i for i in range(model.n) if i != rv.chart]
        for combo in itertools.product(digits, repeat=len(free)):
            visited += 1
            if visited > ceiling:
                raise BudgetExceeded("level extension budget")
            cand = list(rv.coords)
            for i, d in zip(free, combo):
                cand[i] = cand[i] + d * pik
            if all(_fe(eq.evaluate(cand), S).val_floor() >= k + 1
                   for eq in model.equations):
                out.append(ResidueVector(rv.chart, tuple(cand)))
    return out


def _random_integral(S, rng):
    return S.element(tuple(rng.randrange(S.modulus)
                           for _ in range(S.degree)))


_SIEVE_DEPTH = {2: 8, 3: 6, 5: 5, 7: 4}
_SIEVE_BEAM = 4096
_SIEVE_MAX_P = 31
_SIEVE_WORK_CAP = 250_000


def _dth_power_units(p, d, j):
    """Residues of d-th powers of units modulo p^j (sieve membership set)."""
    m = p ** j
    return {pow(w, d, m) for w in range(1, m) if w % p}


def _sieve_step_sets(p, plan):
    out = {}
    for _, _, d, _ in plan["order"]:
        from obstructor.padic import valuation as _val
        j = 2 * (_val(d, p) if d % p == 0 else 0) + 1
        out[d] = (j, _dth_power_units(p, d, j))
    return out


def _eval_with_squares(eq, skip_var, values, mod, p):
    """Evaluate eq (without the skip_var term) at a mix of plain residues
    and solved variables known only through their d-th power; returns None
    when a poisoned or odd-power use makes the value undecidable."""
    acc = 0
    for ev, c in eq.terms.items():
        if ev[skip_var]:
            continue
        t = c % mod
        for i, e in enumerate(ev):
            if not e:
                continue
            v = values[i]
            if v is None:
                return None
            kind, data = v
            if kind == "int":
                t = t * pow(data, e, mod) % mod
            else:  # ("pow", d, t_num): variable known via var^d = t_num
                d, t_num = data
                if e % d:
                    return None
                t = t * pow(t_num, e // d, mod) % mod
        acc = (acc + t) % mod
    return acc


def _class_survives(model, S, chart, cls, k, step_sets):
    """Conservative viability of a free-variable class modulo p^k: prune
    only when some solved value is certainly not a d-th power (visible odd
    valuation, negative valuation, or unit part outside the d-th power
    residues)."""
    from obstructor.padic import valuation as _val
    p = int(S.p)
    mod = p ** k
    plan = model._plan
    sampled = [i for i in plan["free"] if i != chart]
    values = [None] * model.n
    if chart is not None:
        values[chart] = ("int", 1)
    for i, v in zip(sampled, cls):
        values[i] = ("int", v % mod)
    for eq, i, d, c in plan["order"]:
        rest = _eval_with_squares(eq, i, values, mod, p)
        if rest is None:
            values[i] = None  # poisoned; later equations may still prune
            continue
        vc = _val(c, p)
        cu = c // p ** vc
        t_num = (-rest) * pow(cu, -1, mod) % mod
        if t_num == 0:
            values[i] = None  # valuation out of the visible window
            continue
        v_num = _val(t_num, p)
        v_t = v_num - vc
        if v_t < 0 or v_t % d:
            return False
        k_vis = k - v_num
        u = t_num // p ** v_num
        j, powers = step_sets[d]
        jj = min(k_vis, j)
        if jj >= 1 and (u % p ** jj) not in {w % p ** jj for w in powers}:
            return False
        if vc == 0:
            values[i] = ("pow", (d, t_num))
        else:
            values[i] = None
    return True


def _ext_class_survives(model, S, chart, cls_digits):
    """Depth-1 viability over an extension: solved values that are visibly
    units must have d-th power residues in F_q."""
    plan = model._plan
    sampled = [i for i in plan["free"] if i != chart]
    coords = [None] * model.n
    if chart is not None:
        coords[chart] = S.one()
    for i in range(model.n):
        if coords[i] is None:
            coords[i] = S.zero()
    for i, d in zip(sampled, cls_digits):
        coords[i] = d
    one = (1,) + (0,) * (S.f - 1)
    for eq, i, d, c in plan["order"]:
        rest = eq.specialize({model.ambient.variables[i]: 0})
        try:
            t = -_fe(rest.evaluate(coords), S) / S.from_int(c)
        except (ZeroDivisionError, PrecisionError):
            return True
        if not t.is_nonzero or t.valuation() != 0:
            coords[i] = S.zero()  # unknown at this window; keep class
            continue
        g = __import__("math").gcd(d, int(S.q) - 1)
        r = t.residue()
        if S.gf_pow(r, (int(S.q) - 1) // g) != one:
            return False
        coords[i] = S.zero()  # value known only through t; do not reuse
    return True


def _viable_ext_classes(model, S):
    """Depth-1 viable digit classes of the free variables over an
    extension field (the thin-tower phenomenon is field-independent)."""
    plan_charts = _plan_chart_options(model) or \
        ([None] if not model.ambient.is_projective else [])
    digits = S.residue_digits()
    classes = {}
    for chart in plan_charts:
        sampled = [i for i in model._plan["free"] if i != chart]
        if len(digits) ** len(sampled) > 32768:
            return None
        ok = []
        for combo in itertools.product(range(len(digits)),
                                       repeat=len(sampled)):
            if _ext_class_survives(model, S, chart,
                                   [digits[j] for j in combo]):
                ok.append(combo)
        if ok:
            classes[chart] = ok
    return (1, classes) if classes else None


def _viable_free_classes(model, S, ceiling=None):
    """Residue classes of the free variables that survive the valuation
    and power-residue sieve along the triangular plan.

    Solutions of systems like the bundled K3s concentrate in thin residue
    towers (coordinates forced divisible by p, correlated square conditions
    digit by digit), where uniform sampling of the free variables almost
    never lands.  The sieve walks the plan, computing each solved value
    modulo p^k with earlier solved variables substituted through their
    d-th powers, and discards classes whose solved values are certainly
    not d-th powers.  Returns (depth, {chart: [class tuples]}) or None;
    cached per field on the model.
    """
    if model._plan is None:
        return None
    if S.degree != 1:
        cache = getattr(model, "_class_cache", None)
        if cache is None:
            cache = model._class_cache = {}
        key = S._key()
        if key not in cache:
            cache[key] = _viable_ext_classes(model, S)
        return cache[key]
    if int(S.p) > _SIEVE_MAX_P:
        return None
    cache = getattr(model, "_class_cache", None)
    if cache is None:
        cache = model._class_cache = {}
    key = S._key()
    if key in cache:
        return cache[key]
    p = int(S.p)
    K = _SIEVE_DEPTH.get(p, 3)
    plan_charts = _plan_chart_options(model) or \
        ([None] if not model.ambient.is_projective else [])
    step_sets = _sieve_step_sets(p, model._plan)
    levels = {}
    for chart in plan_charts:
        sampled = [i for i in model._plan["free"] if i != chart]
        levels[chart] = [
            c for c in itertools.product(range(p), repeat=len(sampled))
            if _class_survives(model, S, chart, c, 1, step_sets)]
    depth = 1
    for k in range(2, K + 1):
        branch = max((p ** len([i for i in model._plan["free"]
                                if i != c])) for c in plan_charts) \
            if plan_charts else 1
        projected = sum(len(v) for v in levels.values()) * branch
        if projected > _SIEVE_WORK_CAP:
            break
        nxt_levels = {}
        for chart, level in levels.items():
            sampled = [i for i in model._plan["free"] if i != chart]
            step = p ** (k - 1)
            nxt = []
            for cls in level:
                for delta in itertools.product(range(p),
                                               repeat=len(sampled)):
                    child = tuple(c + step * d
                                  for c, d in zip(cls, delta))
                    if _class_survives(model, S, chart, child, k,
                                       step_sets):
                        nxt.append(child)
            nxt_levels[chart] = nxt
        if sum(len(v) for v in nxt_levels.values()) > \
                _SIEVE_BEAM * max(1, len(plan_charts)):
            break
        levels = nxt_levels
        depth = k
    classes = {c: sorted(v) for c, v in levels.items() if v}
    result = (depth, classes) if classes else None
    cache[key] = result
    return result


def _sample_triangular(model, S, rng, tries, want_shifted=False,
                       guidance=None):
    plan = model._plan
    charts = _plan_chart_options(model) or \
        ([None] if not model.ambient.is_projective else [])
    if model.ambient.is_projective and not charts:
        return None
    n = model.n
    digit_elems = S.residue_digits() if S.degree > 1 else None
    if guidance:
        k0, class_map = guidance
        if S.degree == 1:
            m0 = int(S.p) ** k0
            span = S.modulus // m0
        charts = [c for c in charts if c in class_map] or charts
    for _ in range(tries):
        chart = rng.choice(charts) if charts else None
        assignment = [None] * n
        guided = guidance and chart in guidance[1]
        cls = rng.choice(guidance[1][chart]) if guided else None
        pos = 0
        for i in range(n):
            if i == chart:
                assignment[i] = S.one()
            elif i in plan["free"]:
                if guided and S.degree == 1:
                    assignment[i] = S.from_int(
                        cls[pos] + m0 * rng.randrange(span))
                    pos += 1
                elif guided:
                    assignment[i] = digit_elems[cls[pos]] + \
                        S.uniformizer() * _random_integral(S, rng)
                    pos += 1
                else:
                    x = _random_integral(S, rng)
                    if (want_shifted and not model.ambient.is_projective
                            and rng.random() < 0.25):
                        x = x * S.pi_pow(
                            rng.randrange(1, 2 * S.e + 1)).inverse()
                    assignment[i] = x
            else:
                assignment[i] = S.zero()  # placeholder, solved below
        coords = _solve_triangular(model, S, assignment, rng)
        if coords is None:
            continue
        pt = LocalPoint(S, coords, chart)
        if pt.verify(model):
            return pt
    return None


def _sample_descent(model, S, caps, rng, max_starts=40):
    """Random residue descent with Newton checks (generic fallback)."""
    digits = S.residue_digits()
    charts = model.ambient.chart_indexes() \
        if model.ambient.is_projective else [None]
    n = model.n
    for _ in range(max_starts):
        chart = rng.choice(charts) if charts else None
        free = [i for i in range(n) if i != chart]
        node = None
        for _ in range(3 * len(digits) + 10):
            cand = [S.one() if i == chart else
                    rng.choice(digits) for i in range(n)]
            if all(_fe(eq.evaluate(cand), S).val_floor() >= 1
                   for eq in model.equations):
                node = cand
                break
        if node is None:
            continue
        depth = 1
        while depth <= caps.depth + 2 * S.e:
            try:
                pt = lift_point(model, S, node, chart)
                if pt.verify(model):
                    return pt
            except (LiftError, PrecisionError):
                pass
            pik = S.pi_pow(depth)
            ok = False
            for _ in range(3 * len(digits)):
                cand = list(node)
                for i in free:
                    cand[i] = cand[i] + rng.choice(digits) * pik
                if all(_fe(eq.evaluate(cand), S).val_floor() >= depth + 1
                       for eq in model.equations):
                    node = cand
                    ok = True
                    break
            if not ok:
                break
            depth += 1
    return None


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_points(model, S, n, seed, caps=None):
    """n seeded-deterministic points, spread over distinct depth-1 residue
    classes where available.  Returns (points, shortfall)."""
    caps = caps or SearchCaps()
    rng = random.Random(seed)
    if n <= 0:
        return [], 0
    points = []
    seen = {}
    tries_per_point = 8 * caps.oversample
    budget = n * tries_per_point
    spent = 0
    guidance = _viable_free_classes(model, S) \
        if model._plan is not None else None
    while len(points) < n and spent < budget:
        spent += 1
        pt = None
        if model._plan is not None:
            pt = _sample_triangular(model, S, rng, tries=4,
                                    want_shifted=True)
            if pt is None and guidance is not None:
                pt = _sample_triangular(model, S, rng, tries=6,
                                        guidance=guidance)
        if pt is None:
            pt = _sample_descent(model, S, caps, rng, max_starts=2)
        if pt is None:
            continue
        try:
            key = pt.residue_key(1)
        except (ValueError, PrecisionError):
            key = ("shifted", len(points))
        count = seen.get(key, 0)
        # prefer new depth-1 classes; accept repeats progressively
        if count and count >= 1 + spent // max(1, n):
            continue
        seen[key] = count + 1
        points.append(pt)
    return points, max(0, n - len(points))


# ---------------------------------------------------------------------------
# function evaluation
# ---------------------------------------------------------------------------

def eval_rational(h, P):
    """Value at P of the first representative whose denominator is
    certified nonzero and whose numerator is distinguishable from zero."""
    S = P.field
    for num, den in h.representatives:
        d = den.evaluate(P.coords)
        if isinstance(d, int):  # constant polynomial
            d = S.from_int(d)
        if not d.is_nonzero:
            continue
        nv = num.evaluate(P.coords)
        if isinstance(nv, int):
            nv = S.from_int(nv)
        if not nv.is_nonzero:
            continue
        return nv / d
    raise NoUsableRepresentative(
        "all representatives vanish or are undefined at the point")


# ---------------------------------------------------------------------------
# real points
# ---------------------------------------------------------------------------

def _real_charts(model):
    if model.ambient.is_projective:
        return model.ambient.chart_indexes()
    return [None]


def _real_residual(model, chart):
    import numpy as np
    n = model.n
    free = [i for i in range(n) if i != chart]

    def fn(x):
        coords = [0.0] * n
        if chart is not None:
            coords[chart] = 1.0
        for i, xi in zip(free, x):
            coords[i] = xi
        return np.array([eq.evaluate(coords) for eq in model.equations],
                        dtype=float)
    return fn, free


def real_scan(model, n=150, seed=0, tol=1e-9):
    """Floating-point search for a real point: seeded random starts refined
    by least squares.  NotFound is not a certificate."""
    from scipy.optimize import least_squares
    rng = random.Random(seed)
    charts = _real_charts(model)
    if not model.equations:
        chart = charts[0] if charts else None
        coords = [1.0] * model.n
        return coords, chart
    for trial in range(n):
        chart = charts[trial % len(charts)] if charts else None
        fn, free = _real_residual(model, chart)
        x0 = [rng.uniform(-3, 3) for _ in free]
        try:
            res = least_squares(fn, x0, method="trf", max_nfev=1000,
                                ftol=3e-16, xtol=3e-16, gtol=3e-16)
        except Exception:
            continue
        if max(abs(v) for v in fn(res.x)) < tol:
            coords = [0.0] * model.n
            if chart is not None:
                coords[chart] = 1.0
            for i, xi in zip(free, res.x):
                coords[i] = float(xi)
            if all(abs(c.evaluate(coords)) > 1e-7
                   for c in model.open_conditions):
                return coords, chart
    return None


def real_sample(model, n, seed, tol=1e-9, tries=None):
    """Up to n refined real witnesses (list of coordinate tuples)."""
    from scipy.optimize import least_squares
    rng = random.Random(seed)
    charts = _real_charts(model)
    out = []
    tries = tries or 12 * n
    for trial in range(tries):
        if len(out) >= n:
            break
        chart = charts[trial % len(charts)] if charts else None
        fn, free = _real_residual(model, chart)
        x0 = [rng.uniform(-3, 3) for _ in free]
        try:
            res = least_squares(fn, x0, method="trf", max_nfev=1000,
                                ftol=3e-16, xtol=3e-16, gtol=3e-16)
        except Exception:
            continue
        if max(abs(v) for v in fn(res.x)) < tol:
            coords = [0.0] * model.n
            if chart is not None:
                coords[chart] = 1.0
            for i, xi in zip(free, res.x):
                coords[i] = float(xi)
            if all(abs(c.evaluate(coords)) > 1e-7
                   for c in model.open_conditions):
                out.append(tuple(coords))
    return out


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

def pushforward_compose(morphism, h_on_target):
    """Pull a target function class back along the morphism (h -> h o g)."""
    reps = []
    for num, den in h_on_target.representatives:
        new_num = num.substitute(morphism.coordinate_polys)
        new_den = den.substitute(morphism.coordinate_polys)
        reps.append((new_num, new_den))
    try:
        return RationalFunctionClass(reps, morphism.source.ambient)
    except GeometryError as exc:
        raise GeometryError(f"grading mismatch under pullback: {exc}")


def apply_morphism(morphism, P):
    """Image point on the target model, normalized in the target ambient."""
    S = P.field
    coords = [_fe(poly.evaluate(P.coords), S)
              for poly in morphism.coordinate_polys]
    target = morphism.target
    if not target.ambient.is_projective:
        return LocalPoint(S, coords, None)
    best = None
    for i in target.ambient.chart_indexes():
        c = coords[i]
        if c.is_nonzero:
            v = c.valuation()
            if best is None or v < best[0]:
                best = (v, i)
    if best is None:
        raise GeometryError("image has no usable weight-1 coordinate")
    _, j = best
    lam = coords[j].inverse()
    weights = target.ambient.weights
    out = [c * lam ** w for c, w in zip(coords, weights)]
    return LocalPoint(S, out, j)
