"""Degree arithmetic on adelic profiles and the full report pipeline.

A class whose evaluation is constant c_v at every place pairs with a
zero-cycle of degree d to give d * (sum of c_v) in Q/Z; the verdict for
degree d is Obstructed exactly when that multiple is nonzero.  The engine
never claims an obstruction from degraded evidence: a nonconstant or
incomplete profile at any covered place makes every verdict NotDerivable,
and conclusions are always relative to the declared bad set and the tested
degree bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

from obstructor.brauer import (
    AdelicProfile,
    NoUsableRepresentative,
    constancy_report,
    derive_seed,
    evaluate,
    scan_place,
)
from obstructor.geometry import (
    SearchCaps,
    has_local_point,
    real_scan,
    sample_points,
)
from obstructor.hilbert import Place
from obstructor.localfields import InconclusiveError, LocalField
from obstructor.padic import ZERO_QZ


@dataclass
class Verdict:
    class_name: str
    degree: int
    outcome: str          # Obstructed | NoObstructionFromClass | NotDerivable
    reason: str = ""
    trace: list = dc_field(default_factory=list)

    def as_dict(self):
        return {"class": self.class_name, "degree": self.degree,
                "outcome": self.outcome, "reason": self.reason or None,
                "trace": self.trace}


def verdict_for_degree(adelic: AdelicProfile, d: int) -> Verdict:
    """Obstructed iff the adelic sum a is defined and d*a != 0 in Q/Z.

    The sum is defined only when every covered place is constant and every
    declared bad place is covered; otherwise the verdict is NotDerivable
    and carries the blocking place.
    """
    if d == 0:
        raise ValueError("degree must be nonzero")
    if adelic.a is None:
        return Verdict(adelic.class_name, d, "NotDerivable",
                       reason=adelic.blocking or "adelic sum undefined")
    trace = []
    for label, prof in sorted(adelic.profiles.items()):
        contrib = d * prof.c_v
        trace.append(f"place {label}: d*c_v = {d}*{prof.c_v} = {contrib}")
    da = d * adelic.a
    if da != ZERO_QZ:
        return Verdict(adelic.class_name, d, "Obstructed",
                       reason=f"d*a = {d}*{adelic.a} = {da} != 0",
                       trace=trace)
    return Verdict(adelic.class_name, d, "NoObstructionFromClass",
                   reason=f"d*a = {d}*{adelic.a} = 0", trace=trace)


def global_point_contradiction(adelic: AdelicProfile):
    """Self-test for scenarios that supply a global point: the point is a
    degree-1 zero-cycle, so a defined nonzero adelic sum contradicts it.
    Returns a description of the contradiction, or None."""
    if adelic.a is not None and adelic.a != ZERO_QZ:
        return (f"class {adelic.class_name}: adelic sum {adelic.a} != 0 "
                "is incompatible with a global point")
    return None


@dataclass
class ObstructionReport:
    scenario: str
    seed: int
    caps: dict
    solvability: list = dc_field(default_factory=list)
    adelic: list = dc_field(default_factory=list)
    verdicts: list = dc_field(default_factory=list)
    assumptions: dict = dc_field(default_factory=dict)
    good_place_checks: list = dc_field(default_factory=list)
    partial: bool = False
    notes: list = dc_field(default_factory=list)
    timing: dict = dc_field(default_factory=dict)

    def as_dict(self):
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "caps": self.caps,
            "solvability": self.solvability,
            "classes": self.adelic,
            "verdicts": self.verdicts,
            "good_place_checks": self.good_place_checks,
            "assumptions": self.assumptions,
            "partial": self.partial,
            "notes": self.notes,
            "timing": self.timing,
        }


def _primes_upto(n):
    out = []
    for p in range(2, n + 1):
        if all(p % d for d in range(2, int(p ** 0.5) + 1)):
            out.append(p)
    return out


def solvability_table(model, caps: SearchCaps, prime_cap=100,
                      digits=24) -> list:
    """Local-point status over the real place, every prime up to the cap,
    and the declared bad primes."""
    places = [Place.real()]
    primes = set(_primes_upto(prime_cap))
    primes |= {int(v.p) for v in model.bad_places if not v.is_real}
    places += [Place.finite(p) for p in sorted(primes)]
    rows = []
    for v in places:
        t0 = time.time()
        if v.is_real:
            witness = real_scan(model, seed=derive_seed(caps.seed, "real"))
            status = "yes" if witness is not None else "not_found"
            row = {"place": "real", "status": status,
                   "witness": [round(c, 6) for c in witness[0]]
                   if witness else None}
        else:
            S = LocalField.qp(v.p, digits=digits)
            sub = SearchCaps(caps.depth, caps.budget, caps.samples,
                             derive_seed(caps.seed, "solv", v.label()),
                             caps.oversample)
            res = has_local_point(model, S, sub)
            row = {"place": v.label(), "status": res.status,
                   "method": res.method or None}
            if res.status == "no":
                row["certified_empty_depth"] = res.depth
        row["seconds"] = round(time.time() - t0, 3)
        rows.append(row)
    return rows


def good_place_spot_check(model, classes, bad_labels, caps, prime_cap=100,
                          n_primes=4, n_points=5, digits=24):
    """Sampled sanity check that evaluations vanish at good places."""
    import random as _random
    good = [p for p in _primes_upto(prime_cap)
            if str(p) not in bad_labels]
    rng = _random.Random(derive_seed(caps.seed, "goodcheck"))
    chosen = sorted(rng.sample(good, min(n_primes, len(good))))
    rows = []
    for p in chosen:
        S = LocalField.qp(p, digits=24)
        sub_seed = derive_seed(caps.seed, "goodpts", p)
        pts, short = sample_points(model, S, n_points, sub_seed, caps)
        for A in classes:
            vals = set()
            skipped = 0
            for P in pts:
                try:
                    vals.add(str(evaluate(A, P).value))
                except (NoUsableRepresentative, InconclusiveError):
                    skipped += 1
            rows.append({"place": str(p), "class": A.name,
                         "points": len(pts) - skipped,
                         "values": sorted(vals),
                         "all_zero": vals <= {"0"}})
    return rows


def hyp_report(scenario) -> ObstructionReport:
    """Full pipeline: solvability table, per-class scans, adelic profiles,
    verdicts per degree, and the good-place spot check."""
    t_start = time.time()
    model = scenario.model
    caps = scenario.caps
    report = ObstructionReport(
        scenario=scenario.name, seed=caps.seed,
        caps={"depth": caps.depth, "budget": caps.budget,
              "samples": caps.samples, "oversample": caps.oversample,
              "degree_bounds": {str(pl.place.label()): pl.degree_bound
                                for pl in scenario.places_to_scan},
              "prime_cap": scenario.prime_cap})
    t0 = time.time()
    report.solvability = solvability_table(model, caps, scenario.prime_cap)
    report.timing["solvability_s"] = round(time.time() - t0, 3)
    bad_labels = [v.label() for v in model.bad_places]
    by_label = {row["place"]: row for row in report.solvability}
    for lbl in bad_labels:
        row = by_label.get(lbl)
        if row is not None and row["status"] == "inconclusive":
            report.partial = True
            report.notes.append(
                f"solvability inconclusive at declared bad place {lbl}; "
                "scans aborted")
            return report
    not_solvable = [row["place"] for row in report.solvability
                    if row["status"] in ("no",)]
    if not_solvable:
        report.notes.append(
            "no local points at " + ", ".join(not_solvable) +
            "; the adelic point set is empty")

    if scenario.classes and model.bad_places == []:
        report.partial = True
        report.notes.append("obstruction analysis requested without a "
                            "declared bad set; refusing silent "
                            "good-reduction assumptions")
        return report

    t0 = time.time()
    all_verdicts = []
    for A in scenario.classes:
        profiles = []
        for spec_pl in scenario.places_to_scan:
            sub_seed = derive_seed(caps.seed, "scan", A.name,
                                   spec_pl.place.label())
            prof = scan_place(model, A, spec_pl.place,
                              spec_pl.degree_bound,
                              spec_pl.samples or caps.samples,
                              sub_seed, caps)
            profiles.append(prof)
        adelic = constancy_report(A, profiles, model.bad_places)
        report.adelic.append(adelic.as_dict())
        for d in scenario.degrees:
            all_verdicts.append(verdict_for_degree(adelic, d))
    report.timing["scans_s"] = round(time.time() - t0, 3)
    report.verdicts = [v.as_dict() for v in all_verdicts]

    if scenario.classes:
        t0 = time.time()
        report.good_place_checks = good_place_spot_check(
            model, scenario.classes, bad_labels, caps, scenario.prime_cap,
            n_primes=scenario.good_place_samples)
        report.timing["good_place_s"] = round(time.time() - t0, 3)

    report.assumptions = {
        "good_places_default_zero": True,
        "good_place_spot_check_primes": sorted(
            {row["place"] for row in report.good_place_checks}),
        "conclusions_relative_to": {
            "declared_bad_places": bad_labels,
            "tested_degree_bounds": report.caps["degree_bounds"],
        },
        "boundary_hypothesis": (
            "affine models are scanned on the open set itself; boundary "
            "contributions on a compactification are outside this "
            "computation" if model.ambient.kind == "affine" else None),
    }
    report.timing["total_s"] = round(time.time() - t_start, 3)
    return report
