"""Scenario configuration: JSON schema, validation, bundled catalog.

A scenario wires a variety model, optional morphisms, quaternion classes,
the places to scan with their degree bounds, the degrees to judge, caps,
and an optional expected block used for regression (the block constrains
outcomes only, never inputs).  Polynomials are strings in a minimal infix
grammar over the declared variables; Q/Z values are "num/den" strings;
field descriptors are coefficient arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from obstructor.brauer import QuaternionClass
from obstructor.geometry import (
    Ambient,
    MorphismModel,
    RationalFunctionClass,
    SearchCaps,
    VarietyModel,
)
from obstructor.hilbert import Place
from obstructor.poly import MultiPolynomial, PolyError


class ScenarioError(ValueError):
    """Schema violation, with a field path in the message."""


@dataclass
class PlaceScan:
    place: Place
    degree_bound: int = 1
    samples: int = None


@dataclass
class Scenario:
    name: str
    description: str
    model: VarietyModel
    morphisms: dict
    classes: list
    places_to_scan: list
    degrees: list
    caps: SearchCaps
    good_place_samples: int
    prime_cap: int
    expected: dict
    raw: dict


def _need(obj, key, path, kind=None):
    if key not in obj:
        raise ScenarioError(f"{path}: missing required field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ScenarioError(
            f"{path}.{key}: expected {getattr(kind, '__name__', kind)}, "
            f"got {type(val).__name__}")
    return val


def _parse_polys(texts, variables, path):
    out = []
    for i, text in enumerate(texts):
        if not isinstance(text, str):
            raise ScenarioError(f"{path}[{i}]: polynomial must be a string")
        try:
            out.append(MultiPolynomial.parse(text, variables))
        except PolyError as exc:
            raise ScenarioError(f"{path}[{i}]: {exc}") from None
    return out


def _parse_variety(block, path, bad_required=False):
    kind = _need(block, "ambient", path, str)
    variables = tuple(_need(block, "variables", path, list))
    if len(set(variables)) != len(variables) or not variables:
        raise ScenarioError(f"{path}.variables: names must be distinct "
                            "and nonempty")
    weights = block.get("weights")
    try:
        ambient = Ambient(kind, variables,
                          tuple(weights) if weights else None)
    except Exception as exc:
        raise ScenarioError(f"{path}.ambient: {exc}") from None
    equations = _parse_polys(_need(block, "equations", path, list),
                             variables, f"{path}.equations")
    opens = _parse_polys(block.get("open_conditions", []), variables,
                         f"{path}.open_conditions")
    bad = block.get("bad_places", [])
    for i, v in enumerate(bad):
        try:
            Place.parse(v)
        except Exception as exc:
            raise ScenarioError(f"{path}.bad_places[{i}]: {exc}") from None
    try:
        return VarietyModel(ambient, equations, opens, bad,
                            name=block.get("name", ""))
    except Exception as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _parse_fraction(val, path):
    try:
        if isinstance(val, str):
            return Fraction(val)
        if isinstance(val, int):
            return Fraction(val)
    except ValueError:
        pass
    raise ScenarioError(f"{path}: expected an integer or fraction string")


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (UTF-8 JSON)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno}): "
            f"{exc.msg}") from None
    if not isinstance(raw, dict):
        raise ScenarioError("top level must be an object")
    name = _need(raw, "name", "$", str)
    model = _parse_variety(_need(raw, "variety", "$", dict), "$.variety")

    morphisms = {}
    for i, mblock in enumerate(raw.get("morphisms", [])):
        path = f"$.morphisms[{i}]"
        mname = _need(mblock, "name", path, str)
        target = _parse_variety(_need(mblock, "target", path, dict),
                                f"{path}.target")
        polys = _parse_polys(_need(mblock, "coordinate_polys", path, list),
                             model.ambient.variables,
                             f"{path}.coordinate_polys")
        try:
            morphisms[mname] = MorphismModel(model, target, polys,
                                             name=mname)
        except Exception as exc:
            raise ScenarioError(f"{path}: {exc}") from None

    classes = []
    for i, cblock in enumerate(raw.get("classes", [])):
        path = f"$.classes[{i}]"
        cname = _need(cblock, "name", path, str)
        a = _parse_fraction(_need(cblock, "a", path), f"{path}.a")
        on = cblock.get("on", "self")
        if on == "self":
            morphism = None
            h_vars = model.ambient.variables
            h_ambient = model.ambient
        else:
            if not (isinstance(on, dict) and "morphism" in on):
                raise ScenarioError(
                    f"{path}.on: expected \"self\" or "
                    "{\"morphism\": name}")
            mname = on["morphism"]
            if mname not in morphisms:
                raise ScenarioError(
                    f"{path}.on: unknown morphism {mname!r}")
            morphism = morphisms[mname]
            h_vars = morphism.target.ambient.variables
            h_ambient = morphism.target.ambient
        reps_raw = _need(cblock, "h", path, list)
        reps = []
        for j, pair in enumerate(reps_raw):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ScenarioError(
                    f"{path}.h[{j}]: expected [numerator, denominator]")
            num, den = _parse_polys(pair, h_vars, f"{path}.h[{j}]")
            reps.append((num, den))
        try:
            h = RationalFunctionClass(reps, h_ambient)
            classes.append(QuaternionClass(a, h, name=cname,
                                           morphism=morphism))
        except Exception as exc:
            raise ScenarioError(f"{path}: {exc}") from None

    scans = []
    for i, sblock in enumerate(raw.get("places_to_scan", [])):
        path = f"$.places_to_scan[{i}]"
        try:
            place = Place.parse(_need(sblock, "place", path))
        except Exception as exc:
            raise ScenarioError(f"{path}.place: {exc}") from None
        bound = sblock.get("degree_bound", 1)
        if not isinstance(bound, int) or bound < 1:
            raise ScenarioError(f"{path}.degree_bound: positive integer "
                                "required")
        scans.append(PlaceScan(place, bound, sblock.get("samples")))

    degrees = raw.get("degrees", [])
    for i, d in enumerate(degrees):
        if not isinstance(d, int) or d == 0:
            raise ScenarioError(f"$.degrees[{i}]: nonzero integer required")
    if classes and not scans:
        raise ScenarioError("$.places_to_scan: required when classes are "
                            "declared")
    if classes and not model.bad_places:
        raise ScenarioError("$.variety.bad_places: required when "
                            "obstruction analysis is requested")

    caps_block = raw.get("caps", {})
    caps = SearchCaps(
        depth=caps_block.get("depth", 6),
        budget=caps_block.get("budget", 10 ** 7),
        samples=caps_block.get("samples", 50),
        seed=caps_block.get("seed", 1729),
        oversample=caps_block.get("oversample", 10),
    ).with_budget_env()

    return Scenario(
        name=name,
        description=raw.get("description", ""),
        model=model,
        morphisms=morphisms,
        classes=classes,
        places_to_scan=scans,
        degrees=degrees,
        caps=caps,
        good_place_samples=caps_block.get("good_place_samples", 4),
        prime_cap=caps_block.get("prime_cap", 100),
        expected=raw.get("expected"),
        raw=raw,
    )


def with_overrides(scn: Scenario, seed=None, depth=None, samples=None,
                   degree_bound=None) -> Scenario:
    caps = scn.caps
    caps = SearchCaps(
        depth=depth if depth is not None else caps.depth,
        budget=caps.budget,
        samples=samples if samples is not None else caps.samples,
        seed=seed if seed is not None else caps.seed,
        oversample=caps.oversample,
    )
    scans = scn.places_to_scan
    if degree_bound is not None:
        scans = [PlaceScan(pl.place, degree_bound, pl.samples)
                 for pl in scans]
    return Scenario(scn.name, scn.description, scn.model, scn.morphisms,
                    scn.classes, scans, scn.degrees, caps,
                    scn.good_place_samples, scn.prime_cap, scn.expected,
                    scn.raw)


# ---------------------------------------------------------------------------
# bundled catalog
# ---------------------------------------------------------------------------

def catalog_names():
    from importlib import resources
    pkg = resources.files("obstructor.catalog")
    return sorted(f.name[:-5] for f in pkg.iterdir()
                  if f.name.endswith(".json"))


def load_catalog_text(name: str) -> str:
    from importlib import resources
    pkg = resources.files("obstructor.catalog")
    f = pkg / f"{name}.json"
    if not f.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}; "
                            f"known: {', '.join(catalog_names())}")
    return f.read_text()


def load_scenario(name_or_path: str) -> Scenario:
    """A bundled scenario by name, or a scenario file by path."""
    import os
    if os.path.exists(name_or_path):
        with open(name_or_path, "r", encoding="utf-8") as fh:
            return parse_scenario(fh.read())
    return parse_scenario(load_catalog_text(name_or_path))


# ---------------------------------------------------------------------------
# reports: serialization and expectation checks
# ---------------------------------------------------------------------------

def serialize_report(report_dict: dict) -> str:
    """Canonical JSON: stable key order, trailing newline."""
    return json.dumps(report_dict, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def report_roundtrips(report_dict: dict) -> bool:
    return json.loads(serialize_report(report_dict)) == report_dict


def check_expected(expected: dict, report: dict) -> list:
    """Mismatch descriptions for every constraint the block places on the
    report; empty means a clean match."""
    problems = []
    if not expected:
        return problems
    solv = expected.get("solvability")
    if solv and "solvability" in report:
        table = {row["place"]: row["status"]
                 for row in report["solvability"]}
        if solv.get("all_yes"):
            bad = {pl: st for pl, st in table.items() if st != "yes"}
            if bad:
                problems.append(f"solvability not all yes: {bad}")
        for pl, want in (solv.get("places") or {}).items():
            got = table.get(str(pl))
            if got != want:
                problems.append(
                    f"solvability at {pl}: expected {want}, got {got}")
        other = solv.get("otherwise")
        if other:
            pinned = set((solv.get("places") or {}).keys())
            for pl, st in table.items():
                if pl not in pinned and st != other:
                    problems.append(
                        f"solvability at {pl}: expected {other}, got {st}")
    for cname, cexp in (expected.get("classes") or {}).items():
        entry = next((c for c in report.get("classes", [])
                      if c["class"] == cname), None)
        if entry is None:
            problems.append(f"class {cname}: no profile in report")
            continue
        want_sum = cexp.get("adelic_sum", "__skip__")
        if want_sum != "__skip__" and entry["adelic_sum"] != want_sum:
            problems.append(f"class {cname}: adelic sum "
                            f"{entry['adelic_sum']} != {want_sum}")
        for pl, pexp in (cexp.get("profiles") or {}).items():
            prof = entry["profiles"].get(str(pl))
            if prof is None:
                problems.append(f"class {cname}: no profile at {pl}")
                continue
            for key in ("status", "c"):
                if key in pexp and prof.get(key) != pexp[key]:
                    problems.append(
                        f"class {cname} at {pl}: {key} = {prof.get(key)}"
                        f" != {pexp[key]}")
    for cname, vexp in (expected.get("verdicts") or {}).items():
        for deg, want in vexp.items():
            got = next((v["outcome"] for v in report.get("verdicts", [])
                        if v["class"] == cname
                        and v["degree"] == int(deg)), None)
            if got != want:
                problems.append(f"verdict {cname} degree {deg}: "
                                f"expected {want}, got {got}")
    return problems


def render_text(report: dict) -> str:
    """Human-readable report."""
    lines = [f"scenario: {report.get('scenario', '?')}"]
    if "seed" in report:
        lines.append(f"seed: {report['seed']}")
    table = report.get("solvability")
    if table:
        lines.append("local points:")
        for row in table:
            extra = ""
            if row.get("certified_empty_depth") is not None:
                extra = f" (empty residue level at depth " \
                        f"{row['certified_empty_depth']})"
            lines.append(f"  {row['place']:>5}: {row['status']}{extra}")
    for entry in report.get("classes", []):
        lines.append(f"class {entry['class']}: adelic sum = "
                     f"{entry['adelic_sum']}")
        for lbl, prof in entry["profiles"].items():
            c = f", c = {prof['c']}" if prof.get("c") is not None else ""
            note = f" [{prof['witness']}]" if prof.get("witness") else ""
            lines.append(f"  place {lbl}: {prof['status']}{c}{note}")
    for v in report.get("verdicts", []):
        reason = f" ({v['reason']})" if v.get("reason") else ""
        lines.append(f"degree {v['degree']:>2} [{v['class']}]: "
                     f"{v['outcome']}{reason}")
    for row in report.get("good_place_checks", []):
        flag = "ok" if row["all_zero"] else "NONZERO"
        lines.append(f"good place {row['place']} [{row['class']}]: "
                     f"{flag} on {row['points']} points")
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"
