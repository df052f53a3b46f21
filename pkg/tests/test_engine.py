"""Tests for degree verdicts and the report pipeline."""

import pytest

from obstructor.brauer import AdelicProfile, PlaceProfile
from obstructor.engine import (
    global_point_contradiction,
    hyp_report,
    solvability_table,
    verdict_for_degree,
)
from obstructor.hilbert import Place
from obstructor.padic import HALF, ZERO_QZ
from obstructor.scenario import load_scenario


def _adelic(a=None, blocking=None, places=()):
    profs = {}
    for label, status, c in places:
        prof = PlaceProfile(Place.parse(label))
        prof.status = status
        prof.c_v = c
        profs[str(label)] = prof
    return AdelicProfile("A", profs, [lbl for lbl, _, _ in places],
                        a=a, blocking=blocking)


class TestVerdicts:
    def test_half_odd_degree_obstructed(self):
        ad = _adelic(a=HALF, places=[(2, "constant", HALF)])
        v = verdict_for_degree(ad, 3)
        assert v.outcome == "Obstructed"
        assert "3*1/2" in v.reason

    def test_half_even_degree_unobstructed(self):
        ad = _adelic(a=HALF, places=[(2, "constant", HALF)])
        assert verdict_for_degree(ad, 2).outcome == "NoObstructionFromClass"

    def test_undefined_sum_not_derivable(self):
        ad = _adelic(blocking="place 2 profile is nonconstant")
        v = verdict_for_degree(ad, 1)
        assert v.outcome == "NotDerivable"
        assert "place 2" in v.reason

    def test_zero_degree_rejected(self):
        with pytest.raises(ValueError):
            verdict_for_degree(_adelic(a=HALF), 0)

    def test_period_two_linearity(self):
        # order-2 classes: the verdict depends on d only through d mod 2
        for a in (ZERO_QZ, HALF):
            ad = _adelic(a=a, places=[(2, "constant", a)])
            for d in (1, 2, 3, 4, 5, -1, -3):
                assert verdict_for_degree(ad, d).outcome == \
                    verdict_for_degree(ad, d + 2).outcome

    def test_soundness_gate(self):
        # Obstructed is never emitted from degraded evidence
        ad = _adelic(blocking="place 2 profile is incomplete")
        for d in (1, 2, 3):
            assert verdict_for_degree(ad, d).outcome == "NotDerivable"

    def test_trace_lists_contributions(self):
        ad = _adelic(a=HALF, places=[(2, "constant", HALF),
                                     (3, "constant", ZERO_QZ)])
        v = verdict_for_degree(ad, 3)
        assert any("place 2" in line for line in v.trace)
        assert any("place 3" in line for line in v.trace)


class TestGlobalPointSelfTest:
    def test_contradiction_detected(self):
        ad = _adelic(a=HALF)
        assert global_point_contradiction(ad) is not None

    def test_zero_sum_consistent(self):
        ad = _adelic(a=ZERO_QZ)
        assert global_point_contradiction(ad) is None

    def test_undefined_sum_consistent(self):
        ad = _adelic(blocking="nonconstant somewhere")
        assert global_point_contradiction(ad) is None


class TestSolvabilityTable:
    def test_conic_table_includes_bad_and_real(self):
        scn = load_scenario("cubic-p2-q5")
        table = solvability_table(scn.model, scn.caps, prime_cap=13)
        places = [row["place"] for row in table]
        assert places[0] == "real"
        assert "2" in places and "5" in places and "13" in places
        assert all(row["status"] == "yes" for row in table)


class TestHypReport:
    def test_threefold_full_pipeline(self):
        scn = load_scenario("threefold-q5")
        report = hyp_report(scn)
        d = report.as_dict()
        assert not report.partial
        assert all(row["status"] == "yes" for row in d["solvability"])
        entry = d["classes"][0]
        assert entry["adelic_sum"] == "1/2"
        outcomes = {(v["degree"]): v["outcome"] for v in d["verdicts"]}
        assert outcomes[1] == "Obstructed"
        assert outcomes[2] == "NoObstructionFromClass"
        assert outcomes[3] == "Obstructed"
        assert d["assumptions"]["good_places_default_zero"] is True
        for row in d["good_place_checks"]:
            assert row["all_zero"]

    def test_kres_tch_not_derivable(self):
        scn = load_scenario("kres-tch-dp2")
        report = hyp_report(scn)
        d = report.as_dict()
        outcomes = {v["degree"]: v["outcome"] for v in d["verdicts"]}
        assert outcomes == {1: "NotDerivable", 3: "NotDerivable",
                            5: "NotDerivable"}
        prof2 = d["classes"][0]["profiles"]["2"]
        assert prof2["status"] == "nonconstant"
