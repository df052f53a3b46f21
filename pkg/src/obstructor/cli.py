"""Command-line interface.

Commands: solvability | scan | verdict | all | list-examples.
Exit codes: 0 when the expected block matches (or there is none), 1 on a
mismatch, 2 when a required decision was inconclusive at the caps.
"""

from __future__ import annotations

import argparse
import sys
import time

from obstructor.brauer import constancy_report, derive_seed, scan_place
from obstructor.engine import (
    hyp_report,
    solvability_table,
    verdict_for_degree,
)
from obstructor.scenario import (
    ScenarioError,
    catalog_names,
    check_expected,
    load_scenario,
    render_text,
    serialize_report,
    with_overrides,
)

COMMANDS = ("solvability", "scan", "verdict", "all", "list-examples")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="obstructor",
        description="Local evaluation of quaternion classes on explicit "
                    "varieties and zero-cycle obstruction reports.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--scenario", help="bundled scenario name or a JSON "
                                       "scenario file")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--depth", type=int, default=None,
                    help="residue search depth cap")
    ap.add_argument("--samples", type=int, default=None,
                    help="sample count per field in scans")
    ap.add_argument("--degree-bound", type=int, default=None,
                    help="override every place's extension degree bound")
    ap.add_argument("--out", help="write the report to this file")
    return ap


def _scan_only_report(scn, with_verdicts):
    report = {
        "scenario": scn.name,
        "seed": scn.caps.seed,
        "classes": [],
        "verdicts": [],
        "timing": {},
    }
    t0 = time.time()
    for A in scn.classes:
        profiles = []
        for pl in scn.places_to_scan:
            sub_seed = derive_seed(scn.caps.seed, "scan", A.name,
                                   pl.place.label())
            profiles.append(scan_place(scn.model, A, pl.place,
                                       pl.degree_bound,
                                       pl.samples or scn.caps.samples,
                                       sub_seed, scn.caps))
        adelic = constancy_report(A, profiles, scn.model.bad_places)
        report["classes"].append(adelic.as_dict())
        if with_verdicts:
            for d in scn.degrees:
                report["verdicts"].append(
                    verdict_for_degree(adelic, d).as_dict())
    report["timing"]["total_s"] = round(time.time() - t0, 3)
    return report


def run(command, scenario, fmt="text", out=None):
    """Execute one command; returns (report_dict, exit_code)."""
    if command == "list-examples":
        names = catalog_names()
        report = {"examples": names}
        text = "\n".join(names) + "\n"
        _emit(report, text, fmt, out)
        return report, 0
    scn = scenario
    partial = False
    if command == "solvability":
        t0 = time.time()
        table = solvability_table(scn.model, scn.caps, scn.prime_cap)
        report = {"scenario": scn.name, "seed": scn.caps.seed,
                  "solvability": table,
                  "timing": {"total_s": round(time.time() - t0, 3)}}
        partial = any(row["status"] == "inconclusive" for row in table
                      if row["place"] in
                      {v.label() for v in scn.model.bad_places})
    elif command in ("scan", "verdict"):
        report = _scan_only_report(scn, with_verdicts=(command == "verdict"))
    elif command == "all":
        rep = hyp_report(scn)
        report = rep.as_dict()
        partial = rep.partial
    else:
        raise ScenarioError(f"unknown command {command!r}")
    problems = check_expected(scn.expected, report)
    report["expected_match"] = not problems
    report["expected_mismatches"] = problems
    _emit(report, render_text(report), fmt, out)
    if partial:
        return report, 2
    return report, (1 if problems else 0)


def _emit(report, text, fmt, out):
    payload = serialize_report(report) if fmt == "json" else text
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "list-examples":
        _, code = run("list-examples", None, args.format, args.out)
        return code
    if not args.scenario:
        ap.error("--scenario is required for this command")
    try:
        scn = load_scenario(args.scenario)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    scn = with_overrides(scn, seed=args.seed, depth=args.depth,
                         samples=args.samples,
                         degree_bound=args.degree_bound)
    try:
        _, code = run(args.command, scn, args.format, args.out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
