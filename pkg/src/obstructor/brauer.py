"""Quaternion classes on variety models and per-place constancy scans.

A class is a pair (a, h): a nonzero rational constant and a rational
function class on the model (possibly pulled back along a morphism).  Its
value at a local point is the Hilbert symbol of (a, h(P)) over the point's
field, as an element of Q/Z.  A place scan samples points over every
extension of bounded degree and aggregates the observed values into a
PlaceProfile; profiles feed the degree-arithmetic verdicts.

Constancy is evidence, not proof: profiles record sample counts, and a
"constant" status means constant on all tested points at the tested bound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from obstructor.geometry import (
    NoUsableRepresentative,
    SearchCaps,
    eval_rational,
    pushforward_compose,
    real_sample,
    sample_points,
)
from obstructor.hilbert import Place, hilbert_ext, hilbert_real
from obstructor.localfields import InconclusiveError, enumerate_extensions
from obstructor.padic import QmodZ, ZERO_QZ


def derive_seed(*parts) -> int:
    """Stable sub-seed from labels (hash-based, platform independent)."""
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


class QuaternionClass:
    """A = (a, h) with optional pullback provenance; order 2."""

    def __init__(self, a, h, name="A", morphism=None):
        self.a = Fraction(a)
        if self.a == 0:
            raise ValueError("the constant slot of a quaternion class "
                             "must be nonzero")
        self.h = h
        self.name = name
        self.morphism = morphism  # None for direct classes
        self.order = 2
        self._effective = None

    @property
    def origin(self):
        return "direct" if self.morphism is None else "pulled_back"

    def effective_h(self):
        """The representative class on the model the evaluations run on
        (h o g for pulled-back classes)."""
        if self.morphism is None:
            return self.h
        if self._effective is None:
            self._effective = pushforward_compose(self.morphism, self.h)
        return self._effective

    def __repr__(self):
        tag = "" if self.morphism is None else " (pulled back)"
        return f"({self.a}, {self.h}){tag}"


@dataclass
class EvaluationRecord:
    place: Place
    field_descriptor: dict
    point: object
    value: QmodZ


@dataclass
class FieldEvidence:
    descriptor: object        # field descriptor dict, or "real"
    degree: int
    samples: int
    skipped: int
    values: list              # sorted distinct QmodZ values observed

    def as_dict(self):
        return {"field": self.descriptor, "degree": self.degree,
                "samples": self.samples, "skipped": self.skipped,
                "values": [str(v) for v in self.values]}


@dataclass
class PlaceProfile:
    place: Place
    status: str = "incomplete"     # constant | nonconstant | incomplete
    c_v: QmodZ = None
    evidence: list = dc_field(default_factory=list)
    witness_note: str = ""
    base_witness: object = None
    degree_bound: int = 1
    catalog_complete: bool = True

    def as_dict(self):
        return {
            "place": self.place.label(),
            "status": self.status,
            "c": str(self.c_v) if self.c_v is not None else None,
            "degree_bound": self.degree_bound,
            "catalog_complete": self.catalog_complete,
            "witness": self.witness_note or None,
            "evidence": [e.as_dict() for e in self.evidence],
        }


def evaluate(A: QuaternionClass, P) -> EvaluationRecord:
    """Evaluation record of the class at a local point.

    Raises NoUsableRepresentative when h is undefined or indistinguishable
    from zero at P (callers resample), and propagates inconclusive symbol
    searches.
    """
    h_val = eval_rational(A.effective_h(), P)
    value = hilbert_ext(A.a, h_val, P.field)
    return EvaluationRecord(Place.finite(P.field.p), P.field.descriptor(),
                            P, value)


def _evaluate_batch(model, A, S, n, seed, caps):
    """Evaluate the class on n sampled points, resampling past undefined
    representatives up to the oversampling cap.  Returns (values, kept,
    skipped, first_point, inconclusive)."""
    values = []
    kept = 0
    skipped = 0
    first = None
    inconclusive = 0
    rounds = 0
    seed_round = seed
    while kept < n and rounds < caps.oversample:
        rounds += 1
        want = n - kept
        pts, short = sample_points(model, S, want, seed_round, caps)
        seed_round = derive_seed(seed_round, "resample")
        if not pts:
            break
        for P in pts:
            try:
                rec = evaluate(A, P)
            except NoUsableRepresentative:
                skipped += 1
                continue
            except InconclusiveError:
                inconclusive += 1
                continue
            if first is None:
                first = P
            values.append(rec.value)
            kept += 1
            if kept >= n:
                break
        if short and kept < n:
            break
    return values, kept, skipped, first, inconclusive


def scan_place(model, A: QuaternionClass, place, degree_bound, n, seed,
               caps: SearchCaps = None) -> PlaceProfile:
    """Constancy scan of the class at one place.

    Finite places: evaluate on n sampled points over every extension of
    degree up to the bound; the profile is constant when the base values
    form a singleton {c} and every degree-m extension's value set is the
    singleton {m*c}.  The real place evaluates the symbol sign rule on
    refined real witnesses.
    """
    caps = caps or SearchCaps()
    place = Place.parse(place)
    if place.is_real:
        return _scan_real(model, A, n, seed)
    profile = PlaceProfile(place, degree_bound=degree_bound)
    p = place.p
    c_v = None
    consistent = True
    complete = True
    witness = ""
    for m in range(1, degree_bound + 1):
        catalog = enumerate_extensions(p, m)
        profile.catalog_complete = profile.catalog_complete and \
            catalog.complete
        for idx, S in enumerate(catalog):
            sub_seed = derive_seed(seed, A.name, place.label(), m, idx)
            values, kept, skipped, first, inconclusive = _evaluate_batch(
                model, A, S, n, sub_seed, caps)
            distinct = sorted(set(values), key=str)
            profile.evidence.append(FieldEvidence(
                S.descriptor(), m, kept, skipped, distinct))
            if m == 1 and first is not None and profile.base_witness is None:
                profile.base_witness = first
            if kept < n or inconclusive:
                complete = False
            if not distinct:
                continue
            if len(distinct) > 1:
                consistent = False
                witness = (f"distinct values {[str(v) for v in distinct]} "
                           f"over {S!r}")
                continue
            val = distinct[0]
            if m == 1:
                if c_v is None:
                    c_v = val
                elif val != c_v:
                    consistent = False
                    witness = f"base fields disagree: {val} vs {c_v}"
            elif c_v is not None:
                expected = m * c_v
                if val != expected:
                    consistent = False
                    witness = (f"degree-{m} field {S!r} gives {val}, "
                               f"but {m}*c_v = {expected}")
    if not consistent:
        profile.status = "nonconstant"
        profile.witness_note = witness
        profile.c_v = None
    elif c_v is None or not complete:
        profile.status = "incomplete"
        profile.c_v = None
        profile.witness_note = witness or "sampling shortfall"
    else:
        profile.status = "constant"
        profile.c_v = c_v
    return profile


def _scan_real(model, A, n, seed) -> PlaceProfile:
    place = Place.real()
    profile = PlaceProfile(place, degree_bound=1)
    witnesses = real_sample(model, n, seed)
    values = []
    skipped = 0
    for w in witnesses:
        val = _real_value(A, w)
        if val is None:
            skipped += 1
            continue
        values.append(val)
    distinct = sorted(set(values), key=str)
    profile.evidence.append(FieldEvidence("real", 1, len(values), skipped,
                                          distinct))
    if len(distinct) == 1 and len(values) >= max(1, n // 2):
        profile.status = "constant"
        profile.c_v = distinct[0]
    elif len(distinct) > 1:
        profile.status = "nonconstant"
        profile.witness_note = (
            f"distinct real values {[str(v) for v in distinct]}")
    else:
        profile.status = "incomplete"
        profile.witness_note = "not enough real witnesses"
    return profile


def _real_value(A, coords, tol=1e-8):
    """Symbol value at a real witness, or None when no representative has a
    certified sign."""
    for num, den in A.effective_h().representatives:
        d = den.evaluate(list(coords))
        if abs(d) < tol:
            continue
        v = num.evaluate(list(coords)) / d
        if abs(v) < tol:
            continue
        return hilbert_real(A.a, Fraction(v).limit_denominator(10 ** 9))
    return None


@dataclass
class AdelicProfile:
    """Per-place constants of one class, with the good-place default."""

    class_name: str
    profiles: dict                   # place label -> PlaceProfile
    declared_bad: list               # place labels
    good_place_assumption: bool = True
    a: QmodZ = None
    blocking: str = None

    def as_dict(self):
        return {
            "class": self.class_name,
            "declared_bad_places": list(self.declared_bad),
            "good_places_default_zero": self.good_place_assumption,
            "adelic_sum": str(self.a) if self.a is not None else None,
            "blocking_place": self.blocking,
            "profiles": {label: prof.as_dict()
                         for label, prof in sorted(self.profiles.items())},
        }


def constancy_report(A: QuaternionClass, profiles, declared_bad
                     ) -> AdelicProfile:
    """Assemble per-place profiles into an adelic profile.

    The sum a = sum of c_v is defined only when every declared bad place
    carries a constant profile; good places contribute 0 under the
    good-reduction assumption, which stays flagged in the output.
    """
    declared = [Place.parse(v).label() for v in declared_bad]
    prof_map = {prof.place.label(): prof for prof in profiles}
    out = AdelicProfile(A.name, prof_map, declared)
    missing = [lbl for lbl in declared if lbl not in prof_map]
    if missing:
        out.blocking = (f"declared bad place {missing[0]} has no profile")
        return out
    total = ZERO_QZ
    for lbl, prof in sorted(prof_map.items()):
        if prof.status != "constant":
            out.blocking = f"place {lbl} profile is {prof.status}"
            return out
        total = total + prof.c_v
    out.a = total
    return out
