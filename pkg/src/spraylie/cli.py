"""Command-line front end: problem files, analysis reports, tables, oracles.

A problem file is a JSON document holding a metric, named base fields, named
generator sets, and optionally the bracket tables those sets are expected to
produce.  `analyze` runs the whole pipeline and emits a deterministic report;
`table` prints one multiplication table; `oracle` evaluates a selected
identity numerically at seeded rational points; `solve` runs the span solver.

Exit codes: 0 success, 1 input error, 2 verification mismatch, 3 internal
invariant failure.  An expected-table mismatch that is listed in the file's
`accepted_corrections` block and that the numeric oracle resolves in favour
of the computation is reported as a discrepancy but does not fail the run.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from . import geom, liealg, linalg
from .fields import (
    BaseField,
    bracket_base,
    bracket_tm,
    combine_fields,
    in_AGamma,
    in_Ag,
    in_AS,
    lie_derivative_oneform,
    nullity_rank_numeric,
    solve_in_span,
    spray_field,
)
from .symexpr import CanonicalExpr, ParseError, SymExprError, parse_expr

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2
EXIT_INTERNAL = 3

DEFAULT_SEED = 0
DEFAULT_POINTS = 10
IDENTITY_REL_TOL = 1e-12
FD_REL_TOL = 1e-6
FD_STEP = Fraction(1, 10_000)
ARBITRATION_REL_TOL = 1e-9

_POINT_POOL = tuple(Fraction(k, 2) for k in range(-4, 5) if k != 0)


class InputError(Exception):
    """Anything wrong with the problem file or the request itself."""


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    name: str
    dim: int
    coordinates: tuple[str, ...]
    metric: geom.MetricSpec
    fields: dict[str, BaseField]
    sets: dict[str, tuple[str, ...]]
    expected_tables: dict[str, list[list[str]]]
    accepted_corrections: dict[str, set[tuple[str, str]]]
    analyses: tuple[str, ...]


def _reject_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise InputError(f"duplicate key {key!r} in problem file")
        out[key] = value
    return out


def _parse_entry(text, where: str) -> CanonicalExpr:
    if not isinstance(text, str):
        raise InputError(f"{where}: expected an expression string, got {type(text).__name__}")
    try:
        return parse_expr(text)
    except SymExprError as exc:
        raise InputError(f"{where}: {exc}") from exc


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")

    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise InputError("dim must be a positive integer")

    coords = tuple(doc.get("coordinates", [f"x{i}" for i in range(1, dim + 1)]))
    if len(coords) != dim:
        raise InputError(f"coordinates must list {dim} names")

    metric_doc = doc.get("metric")
    if not isinstance(metric_doc, dict):
        raise InputError("metric block is required")
    kind = metric_doc.get("kind")
    if kind not in ("diagonal", "general"):
        raise InputError("metric kind must be 'diagonal' or 'general'")
    entries = metric_doc.get("entries")
    if isinstance(entries, list) and entries and not isinstance(entries[0], list):
        if kind != "diagonal":
            raise InputError("flat metric entry list is only allowed for diagonal metrics")
        matrix = [["0"] * dim for _ in range(dim)]
        for i, cell in enumerate(entries):
            matrix[i][i] = cell
        entries = matrix
    if (
        not isinstance(entries, list)
        or len(entries) != dim
        or any(not isinstance(r, list) or len(r) != dim for r in entries)
    ):
        raise InputError(f"metric entries must form a {dim}x{dim} matrix")
    g = tuple(
        tuple(_parse_entry(entries[i][j], f"metric entry ({i + 1},{j + 1})") for j in range(dim))
        for i in range(dim)
    )
    try:
        if kind == "general":
            inverse = metric_doc.get("inverse")
            if inverse is None:
                raise InputError("general metrics require an 'inverse' matrix")
            g_inv = tuple(
                tuple(
                    _parse_entry(inverse[i][j], f"metric inverse ({i + 1},{j + 1})")
                    for j in range(dim)
                )
                for i in range(dim)
            )
            metric = geom.MetricSpec(dim, g, kind="general", g_inv=g_inv)
        else:
            metric = geom.MetricSpec(dim, g, kind="diagonal")
    except geom.MetricError as exc:
        raise InputError(f"metric: {exc}") from exc

    fields: dict[str, BaseField] = {}
    for name, comps in (doc.get("fields") or {}).items():
        if not isinstance(comps, list) or len(comps) != dim:
            raise InputError(f"field {name!r} must list {dim} component expressions")
        parsed = [_parse_entry(c, f"field {name!r} component {i + 1}") for i, c in enumerate(comps)]
        for i, comp in enumerate(parsed):
            if comp.uses_y():
                raise InputError(f"field {name!r} component {i + 1} depends on fibre coordinates")
            if comp.max_x_index() > dim:
                raise InputError(f"field {name!r} component {i + 1} uses an index beyond dim={dim}")
        fields[name] = BaseField.make(parsed)

    sets: dict[str, tuple[str, ...]] = {}
    for set_name, members in (doc.get("sets") or {}).items():
        if not isinstance(members, list) or not members:
            raise InputError(f"set {set_name!r} must be a nonempty list of field names")
        for member in members:
            if member not in fields:
                raise InputError(f"set {set_name!r} references unknown field {member!r}")
        if len(set(members)) != len(members):
            raise InputError(f"set {set_name!r} repeats a field name")
        sets[set_name] = tuple(members)

    expected: dict[str, list[list[str]]] = {}
    for set_name, table in (doc.get("expected_tables") or {}).items():
        if set_name not in sets:
            raise InputError(f"expected_tables references unknown set {set_name!r}")
        m = len(sets[set_name])
        if (
            not isinstance(table, list)
            or len(table) != m
            or any(not isinstance(r, list) or len(r) != m for r in table)
        ):
            raise InputError(f"expected table for {set_name!r} must be {m}x{m}")
        expected[set_name] = table

    corrections: dict[str, set[tuple[str, str]]] = {}
    for set_name, cells in (doc.get("accepted_corrections") or {}).items():
        if set_name not in expected:
            raise InputError(
                f"accepted_corrections for {set_name!r} needs a matching expected table"
            )
        marked = set()
        for cell in cells:
            if not isinstance(cell, list) or len(cell) != 2:
                raise InputError("accepted_corrections cells must be [row, col] pairs")
            row, col = cell
            if row not in sets[set_name] or col not in sets[set_name]:
                raise InputError(f"accepted_corrections cell ({row},{col}) is outside the set")
            marked.add((row, col))
        corrections[set_name] = marked

    analyses = tuple(doc.get("analyses", ("pipeline", "membership", "tables", "algebra")))
    known = {"pipeline", "membership", "tables", "algebra"}
    for item in analyses:
        if item not in known:
            raise InputError(f"unknown analysis {item!r}")

    return Problem(
        name=str(doc.get("name", path.stem)),
        dim=dim,
        coordinates=coords,
        metric=metric,
        fields=fields,
        sets=sets,
        expected_tables=expected,
        accepted_corrections=corrections,
        analyses=analyses,
    )


# ---------------------------------------------------------------------------
# rational combinations of named generators
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"(?:(?P<pre>\d+(?:/\d+)?)\*)?(?P<name>[A-Za-z_]\w*)(?:/(?P<post>\d+))?"
)


def parse_combination(text: str, labels: Sequence[str]) -> list[Fraction]:
    """Parse e.g. '-e1/2+e6/2' or '3/2*e4 - e1' into a coefficient vector."""
    compact = text.replace(" ", "")
    coeffs = [Fraction(0)] * len(labels)
    if compact in ("0", ""):
        return coeffs
    index = {label: i for i, label in enumerate(labels)}
    pos = 0
    while pos < len(compact):
        sign = 1
        if compact[pos] == "+":
            pos += 1
        elif compact[pos] == "-":
            sign = -1
            pos += 1
        match = _TERM_RE.match(compact, pos)
        if not match:
            raise InputError(f"cannot parse combination {text!r} at position {pos}")
        name = match.group("name")
        if name not in index:
            raise InputError(f"combination {text!r} uses unknown generator {name!r}")
        coeff = Fraction(match.group("pre") or 1) / Fraction(match.group("post") or 1)
        coeffs[index[name]] += sign * coeff
        pos = match.end()
    return coeffs


def render_combination(coeffs: Sequence[Fraction], labels: Sequence[str]) -> str:
    parts = []
    for coeff, label in zip(coeffs, labels):
        if not coeff:
            continue
        magnitude = label if abs(coeff) == 1 else f"{abs(coeff)}*{label}"
        if not parts:
            parts.append(magnitude if coeff > 0 else f"-{magnitude}")
        else:
            parts.append(f"+ {magnitude}" if coeff > 0 else f"- {magnitude}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# numeric sampling and deviations
# ---------------------------------------------------------------------------


def sample_points(dim: int, count: int, seed: int) -> list[dict[str, Fraction]]:
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        point: dict[str, Fraction] = {}
        for i in range(1, dim + 1):
            point[f"x{i}"] = rng.choice(_POINT_POOL)
            point[f"y{i}"] = rng.choice(_POINT_POOL)
        points.append(point)
    return points


def _rel_dev(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _field_max_dev(a, b, points) -> float:
    worst = 0.0
    for point in points:
        for ca, cb in zip(a.components, b.components):
            worst = max(worst, _rel_dev(ca.eval(point), cb.eval(point)))
    return worst


def _two_form_max_dev(a, b, points) -> float:
    worst = 0.0
    size = 2 * a.dim
    for i in range(size):
        for j in range(i + 1, size):
            worst = max(worst, _field_max_dev(a.entry(i, j), b.entry(i, j), points))
    return worst


def _one_form_max_dev(a, b, points) -> float:
    worst = 0.0
    for col in range(2 * a.dim):
        worst = max(worst, _field_max_dev(a.frame_image(col), b.frame_image(col), points))
    return worst


def _format_points(points) -> list[dict[str, str]]:
    return [{k: str(v) for k, v in point.items()} for point in points]


# ---------------------------------------------------------------------------
# pipeline assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pipeline:
    metric: geom.MetricSpec
    spray: geom.SprayData
    connection: geom.ConnectionData
    curvature: geom.CurvatureData


def build_pipeline(metric: geom.MetricSpec) -> Pipeline:
    spray = geom.spray_from_metric(metric)
    connection = geom.connection_from_spray(spray)
    curvature = geom.curvature(connection)
    return Pipeline(metric, spray, connection, curvature)


def _check_structural_identities(pipe: Pipeline) -> dict[str, bool]:
    n = pipe.metric.dim
    component_form = geom.curvature_two_form(pipe.curvature)
    h, v = geom.projectors(pipe.connection)
    identity_form = h.__class__.identity(n)
    J = geom.tangent_structure(n)
    C = geom.liouville(n)
    S = spray_field(pipe.spray)
    results = {
        "curvature equals half the horizontal self-bracket": (
            component_form - geom.curvature_via_projector(pipe.connection)
        ).is_zero(),
        "curvature equals an eighth of the connection self-bracket": (
            component_form - geom.curvature_via_almost_product(pipe.connection)
        ).is_zero(),
        "spray-tangent bracket reproduces the connection": (
            geom.connection_via_bracket(pipe.spray) - geom.connection_oneform(pipe.connection)
        ).is_zero(),
        "horizontal projector is idempotent": (h.compose(h) - h).is_zero(),
        "projectors sum to the identity": ((h + v) - identity_form).is_zero(),
        "dilation bracket fixes the spray": (bracket_tm(C, S) - S).is_zero(),
        "dilation derivative negates the tangent structure": (
            lie_derivative_oneform(C, J) + J
        ).is_zero(),
    }
    return results


def _structure_constants(problem: Problem, set_name: str) -> liealg.StructureConstants:
    labels = problem.sets[set_name]
    generators = [problem.fields[name] for name in labels]
    try:
        return liealg.structure_constants_from_fields(generators, labels)
    except liealg.NonClosureError as exc:
        raise InputError(f"set {set_name!r} does not close under the bracket: {exc}") from exc
    except liealg.DependentGeneratorsError as exc:
        raise InputError(f"set {set_name!r}: {exc}") from exc


def _table_cells(sc: liealg.StructureConstants) -> list[list[str]]:
    m = sc.dim
    return [
        [render_combination(sc.c[i][j], sc.labels) for j in range(m)]
        for i in range(m)
    ]


def _compare_expected(problem: Problem, set_name: str, sc, points):
    """Diff the computed table against the expected block, oracle-arbitrated."""
    expected = problem.expected_tables[set_name]
    labels = problem.sets[set_name]
    generators = [problem.fields[name] for name in labels]
    marked = problem.accepted_corrections.get(set_name, set())
    mismatches = []
    total = len(labels) ** 2
    for i, row in enumerate(labels):
        for j, col in enumerate(labels):
            want = parse_combination(expected[i][j], labels)
            have = list(sc.c[i][j])
            if want == have:
                continue
            direct = bracket_base(generators[i], generators[j])
            want_dev = _field_max_dev(direct, combine_fields(generators, want), points)
            have_dev = _field_max_dev(direct, combine_fields(generators, have), points)
            if have_dev <= ARBITRATION_REL_TOL < want_dev:
                verdict = "computation"
            elif want_dev <= ARBITRATION_REL_TOL < have_dev:
                verdict = "expected"
            else:
                verdict = "inconclusive"
            mismatches.append(
                {
                    "row": row,
                    "col": col,
                    "expected": expected[i][j],
                    "computed": render_combination(have, labels),
                    "expected_deviation": f"{want_dev:.3e}",
                    "computed_deviation": f"{have_dev:.3e}",
                    "verdict": verdict,
                    "accepted_correction": (row, col) in marked,
                }
            )
    return {
        "present": True,
        "total_cells": total,
        "matched_cells": total - len(mismatches),
        "mismatches": mismatches,
    }


def _analyze_algebra(problem: Problem, set_name: str, sc) -> dict:
    labels = problem.sets[set_name]
    jacobi_ok, witness = liealg.jacobi_check(sc)
    if not jacobi_ok:
        raise geom.InvariantViolation(
            f"Jacobi identity failed for set {set_name!r} at indices {witness}"
        )
    killing_det = liealg.killing_det(sc)
    semisimple = killing_det != 0
    radical = liealg.radical(sc)
    levi = liealg.levi_decomposition(sc)
    derivation_space = liealg.derivations(sc)
    ideals = liealg.find_abelian_ideals_coordinate(sc)
    out = {
        "dimension": sc.dim,
        "jacobi": "pass",
        "killing_determinant": str(killing_det),
        "semisimple": semisimple,
        "simple": liealg.is_simple(sc),
        "derived_dimension": liealg.derived_subalgebra(sc).dim,
        "center_dimension": liealg.center(sc).dim,
        "radical": {
            "dimension": radical.dim,
            "basis": [render_combination(v, labels) for v in radical.basis],
        },
        "levi": {
            "radical_dimension": levi.radical.dim,
            "complement_dimension": levi.levi.dim,
            "complement_basis": [render_combination(v, labels) for v in levi.levi.basis],
        },
        "derivations": {
            "dimension": derivation_space.dimension,
            "inner": derivation_space.inner_dimension,
            "outer": derivation_space.outer_dimension,
        },
        "abelian_coordinate_ideals": [
            [labels[next(k for k, q in enumerate(v) if q)] for v in ideal.basis]
            for ideal in ideals
        ],
    }
    if sc.dim == 3:
        out["three_dim_class"] = liealg.classify_3dim_simple(sc)
    return out


def build_report(problem: Problem, seed: int, count: int) -> dict:
    pipe = build_pipeline(problem.metric)
    n = problem.dim
    identities = _check_structural_identities(pipe)
    for description, ok in identities.items():
        if not ok:
            raise geom.InvariantViolation(f"structural identity failed: {description}")

    points = sample_points(n, count, seed)
    rank = nullity_rank_numeric(pipe.curvature, points)
    nonzero_curvature = sum(
        1
        for k in range(n)
        for i in range(n)
        for j in range(i + 1, n)
        if not pipe.curvature.R1[k][i][j].is_zero()
    )

    report: dict = {
        "problem": {
            "name": problem.name,
            "dim": n,
            "coordinates": list(problem.coordinates),
            "metric_kind": problem.metric.kind,
            "metric_diagonal": [str(pipe.metric.g[i][i]) for i in range(n)]
            if problem.metric.kind == "diagonal"
            else None,
        },
        "pipeline": {
            "energy": str(geom.energy_from_metric(pipe.metric)),
            "spray": [str(g) for g in pipe.spray.G],
            "connection_nonzero": [
                {"row": j + 1, "col": i + 1, "value": str(pipe.connection.gamma1[j][i])}
                for j in range(n)
                for i in range(n)
                if not pipe.connection.gamma1[j][i].is_zero()
            ],
            "curvature_zero": pipe.curvature.is_zero(),
            "curvature_nonzero_components": nonzero_curvature,
            "identities": {k: "ok" for k in identities},
            "numeric_nullity": {
                "seed": seed,
                "points": count,
                "rank": rank,
                "nullity_dimension": n - rank,
            },
        },
    }

    if "membership" in problem.analyses:
        rows = []
        for name, field in problem.fields.items():
            rows.append(
                {
                    "field": name,
                    "spray_symmetry": bool(in_AS(field, pipe.spray)),
                    "connection_symmetry": bool(in_AGamma(field, pipe.connection)),
                    "isometry": bool(in_Ag(field, pipe.metric, pipe.spray)),
                }
            )
        report["membership"] = rows

    set_reports = []
    discrepancies = []
    verification_failed = False
    if "tables" in problem.analyses or "algebra" in problem.analyses:
        for set_name in problem.sets:
            sc = _structure_constants(problem, set_name)
            entry: dict = {"name": set_name, "labels": list(sc.labels)}
            if "tables" in problem.analyses:
                entry["table"] = _table_cells(sc)
                if set_name in problem.expected_tables:
                    comparison = _compare_expected(problem, set_name, sc, points)
                    entry["expected_comparison"] = comparison
                    for mismatch in comparison["mismatches"]:
                        mismatch_entry = dict(mismatch, set=set_name)
                        discrepancies.append(mismatch_entry)
                        if not (
                            mismatch["accepted_correction"]
                            and mismatch["verdict"] == "computation"
                        ):
                            verification_failed = True
                else:
                    entry["expected_comparison"] = {"present": False}
            if "algebra" in problem.analyses:
                entry["algebra"] = _analyze_algebra(problem, set_name, sc)
            set_reports.append(entry)
    report["sets"] = set_reports
    report["discrepancies"] = discrepancies
    report["verification_failed"] = verification_failed
    return report


# ---------------------------------------------------------------------------
# markdown rendering
# ---------------------------------------------------------------------------


def _md_table(labels: Sequence[str], cells: Sequence[Sequence[str]]) -> list[str]:
    header = "| [.,.] | " + " | ".join(labels) + " |"
    rule = "|" + "---|" * (len(labels) + 1)
    lines = [header, rule]
    for label, row in zip(labels, cells):
        lines.append("| " + label + " | " + " | ".join(row) + " |")
    return lines


def render_markdown(report: dict) -> str:
    problem = report["problem"]
    pipeline = report["pipeline"]
    lines = [f"# Analysis report: {problem['name']}", ""]
    lines.append(f"- dimension: {problem['dim']}")
    lines.append(f"- coordinates: {', '.join(problem['coordinates'])}")
    lines.append(f"- metric kind: {problem['metric_kind']}")
    if problem.get("metric_diagonal"):
        lines.append(f"- metric diagonal: {', '.join(problem['metric_diagonal'])}")
    lines.append("")
    lines.append("## Pipeline")
    lines.append("")
    lines.append(f"- energy: {pipeline['energy']}")
    for i, g in enumerate(pipeline["spray"], start=1):
        lines.append(f"- spray G{i} = {g}")
    lines.append("- nonzero connection coefficients (upper index, lower index):")
    for coeff in pipeline["connection_nonzero"]:
        lines.append(f"  - ({coeff['row']},{coeff['col']}): {coeff['value']}")
    if pipeline["curvature_zero"]:
        lines.append("- curvature: structurally zero")
    else:
        lines.append(
            f"- curvature: nonzero ({pipeline['curvature_nonzero_components']} independent components)"
        )
    for name in pipeline["identities"]:
        lines.append(f"- identity ok: {name}")
    nullity = pipeline["numeric_nullity"]
    lines.append(
        f"- numeric nullity: rank {nullity['rank']}, nullity dimension "
        f"{nullity['nullity_dimension']} (seed {nullity['seed']}, {nullity['points']} points)"
    )
    lines.append("")

    if "membership" in report:
        lines.append("## Membership")
        lines.append("")
        lines.append("| field | spray symmetry | connection symmetry | isometry |")
        lines.append("|---|---|---|---|")
        for row in report["membership"]:
            cells = [
                row["field"],
                "yes" if row["spray_symmetry"] else "no",
                "yes" if row["connection_symmetry"] else "no",
                "yes" if row["isometry"] else "no",
            ]
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")

    for entry in report["sets"]:
        lines.append(f"## Set: {entry['name']}")
        lines.append("")
        if "table" in entry:
            lines.extend(_md_table(entry["labels"], entry["table"]))
            lines.append("")
            comparison = entry.get("expected_comparison", {"present": False})
            if comparison["present"]:
                if not comparison["mismatches"]:
                    lines.append(
                        f"- expected table: all {comparison['total_cells']} cells match"
                    )
                else:
                    lines.append(
                        f"- expected table: {comparison['matched_cells']} of "
                        f"{comparison['total_cells']} cells match"
                    )
                lines.append("")
        if "algebra" in entry:
            algebra = entry["algebra"]
            lines.append(f"- dimension: {algebra['dimension']}")
            lines.append(f"- Jacobi identity: {algebra['jacobi']}")
            lines.append(f"- Killing determinant: {algebra['killing_determinant']}")
            lines.append(f"- semisimple: {'yes' if algebra['semisimple'] else 'no'}")
            lines.append(f"- simple: {'yes' if algebra['simple'] else 'no'}")
            lines.append(f"- derived subalgebra dimension: {algebra['derived_dimension']}")
            lines.append(f"- center dimension: {algebra['center_dimension']}")
            radical = algebra["radical"]
            basis = ", ".join(radical["basis"]) if radical["basis"] else "none"
            lines.append(f"- radical: dimension {radical['dimension']} ({basis})")
            levi = algebra["levi"]
            lines.append(
                f"- Levi decomposition: radical {levi['radical_dimension']} + "
                f"semisimple {levi['complement_dimension']}, verified"
            )
            derivations = algebra["derivations"]
            lines.append(
                f"- derivations: dimension {derivations['dimension']}, inner "
                f"{derivations['inner']}, outer {derivations['outer']}"
            )
            ideals = algebra["abelian_coordinate_ideals"]
            if ideals:
                rendered = "; ".join("{" + ", ".join(ideal) + "}" for ideal in ideals)
                lines.append(f"- abelian coordinate ideals: {rendered}")
            else:
                lines.append("- abelian coordinate ideals: none")
            if "three_dim_class" in algebra:
                lines.append(f"- 3-dim classification: {algebra['three_dim_class']}")
            lines.append("")

    lines.append("## Discrepancies")
    lines.append("")
    if not report["discrepancies"]:
        lines.append("- none")
    else:
        for item in report["discrepancies"]:
            status = "accepted correction" if item["accepted_correction"] else "UNRESOLVED"
            lines.append(
                f"- [{item['row']},{item['col']}] in {item['set']}: expected "
                f"{item['expected']}, computed {item['computed']} "
                f"(deviation {item['expected_deviation']} vs {item['computed_deviation']}; "
                f"oracle favours {item['verdict']}; {status})"
            )
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    problem = load_problem(args.file)
    report = build_report(problem, args.seed, args.points)
    failed = report.pop("verification_failed")
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = render_markdown(report)
    if args.out:
        Path(args.out).write_text(text)
        print(f"report written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_table(args) -> int:
    problem = load_problem(args.file)
    if args.set not in problem.sets:
        raise InputError(f"unknown set {args.set!r}; available: {', '.join(problem.sets)}")
    sc = _structure_constants(problem, args.set)
    cells = _table_cells(sc)
    if args.format == "csv":
        lines = ["," + ",".join(sc.labels)]
        for label, row in zip(sc.labels, cells):
            lines.append(label + "," + ",".join(cell.replace(" ", "") for cell in row))
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write("\n".join(_md_table(sc.labels, cells)) + "\n")
    return EXIT_OK


def _oracle_curvature(problem, pipe, points, flavour: str):
    component_form = geom.curvature_two_form(pipe.curvature)
    if flavour == "projector":
        other = geom.curvature_via_projector(pipe.connection)
        label = "curvature component formula vs half horizontal self-bracket"
    else:
        other = geom.curvature_via_almost_product(pipe.connection)
        label = "curvature component formula vs eighth connection self-bracket"
    return label, _two_form_max_dev(component_form, other, points), IDENTITY_REL_TOL


def _oracle_connection(problem, pipe, points):
    a = geom.connection_via_bracket(pipe.spray)
    b = geom.connection_oneform(pipe.connection)
    return (
        "spray-tangent bracket vs assembled connection",
        _one_form_max_dev(a, b, points),
        IDENTITY_REL_TOL,
    )


def _oracle_fd(problem, pipe, points, target: str):
    if target == "E":
        expr = geom.energy_from_metric(pipe.metric)
    elif target.startswith("G"):
        try:
            k = int(target[1:])
        except ValueError:
            raise InputError(f"unknown derivative target {target!r}")
        if not 1 <= k <= problem.dim:
            raise InputError(f"spray index out of range in {target!r}")
        expr = pipe.spray.G[k - 1]
    elif target in problem.fields:
        raise InputError("derivative targets are E or G<k>, not field names")
    else:
        raise InputError(f"unknown derivative target {target!r}")
    worst = 0.0
    variables = [f"{axis}{i}" for i in range(1, problem.dim + 1) for axis in ("x", "y")]
    for point in points:
        for var in variables:
            exact = expr.diff(var).eval(point)
            forward = dict(point)
            forward[var] = point[var] + FD_STEP
            backward = dict(point)
            backward[var] = point[var] - FD_STEP
            fd = (expr.eval(forward) - expr.eval(backward)) / (2 * float(FD_STEP))
            worst = max(worst, _rel_dev(exact, fd))
    return f"symbolic derivative of {target} vs central differences", worst, FD_REL_TOL


def _oracle_table_cell(problem, pipe, points, tokens: list[str]):
    if len(tokens) == 3:
        set_name, f1, f2 = tokens
        if set_name not in problem.sets:
            raise InputError(f"unknown set {set_name!r}")
    elif len(tokens) == 2:
        if len(problem.sets) != 1:
            raise InputError("table-cell needs a set name when several sets are defined")
        set_name = next(iter(problem.sets))
        f1, f2 = tokens
    else:
        raise InputError("table-cell expects [set] field field")
    labels = problem.sets[set_name]
    if f1 not in labels or f2 not in labels:
        raise InputError(f"table-cell fields must belong to set {set_name!r}")
    generators = [problem.fields[name] for name in labels]
    direct = bracket_base(problem.fields[f1], problem.fields[f2])
    if set_name in problem.expected_tables:
        i, j = labels.index(f1), labels.index(f2)
        coeffs = parse_combination(problem.expected_tables[set_name][i][j], labels)
        source = "expected table cell"
    else:
        sc = _structure_constants(problem, set_name)
        coeffs = list(sc.c[labels.index(f1)][labels.index(f2)])
        source = "computed table cell"
    combo = combine_fields(generators, coeffs)
    dev = _field_max_dev(direct, combo, points)
    return f"[{f1},{f2}] vs {source}", dev, IDENTITY_REL_TOL


def cmd_oracle(args) -> int:
    problem = load_problem(args.file)
    pipe = build_pipeline(problem.metric)
    points = sample_points(problem.dim, args.points, args.seed)
    tokens = args.check.split()
    if not tokens:
        raise InputError("empty selector")
    head, rest = tokens[0], tokens[1:]
    if head in ("R-vs-half-[h,h]", "R-vs-half-hh") and not rest:
        label, deviation, tolerance = _oracle_curvature(problem, pipe, points, "projector")
    elif head in ("R-vs-eighth-[Gamma,Gamma]", "R-vs-eighth-GG") and not rest:
        label, deviation, tolerance = _oracle_curvature(problem, pipe, points, "almost-product")
    elif head == "connection-vs-bracket" and not rest:
        label, deviation, tolerance = _oracle_connection(problem, pipe, points)
    elif head == "diff-vs-fd" and len(rest) == 1:
        label, deviation, tolerance = _oracle_fd(problem, pipe, points, rest[0])
    elif head == "table-cell":
        label, deviation, tolerance = _oracle_table_cell(problem, pipe, points, rest)
    else:
        raise InputError(f"unknown selector {args.check!r}")
    ok = deviation <= tolerance
    lines = [
        f"# Oracle report: {problem.name}",
        "",
        f"- check: {label}",
        f"- seed: {args.seed}",
        f"- points: {args.points}",
        f"- sampled points: {json.dumps(_format_points(points))}",
        f"- max relative deviation: {deviation:.3e}",
        f"- tolerance: {tolerance:.1e}",
        f"- verdict: {'within tolerance' if ok else 'EXCEEDED'}",
        "",
    ]
    sys.stdout.write("\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_solve(args) -> int:
    problem = load_problem(args.file)
    if args.dict not in problem.sets:
        raise InputError(f"unknown dictionary {args.dict!r}; available: {', '.join(problem.sets)}")
    conditions = []
    if args.spray_symmetry:
        conditions.append("spray-symmetry")
    if args.isometry:
        conditions.append("isometry")
    if args.horizontal:
        conditions.append("horizontality")
    if not conditions:
        raise InputError("choose at least one of --spray-symmetry, --isometry, --horizontal")
    pipe = build_pipeline(problem.metric)
    labels = problem.sets[args.dict]
    dictionary = [problem.fields[name] for name in labels]
    solutions = solve_in_span(
        dictionary,
        conditions,
        metric=pipe.metric,
        spray=pipe.spray,
        connection=pipe.connection,
    )
    lines = [
        f"# Solve report: {problem.name}",
        "",
        f"- dictionary: {args.dict} ({len(labels)} fields)",
        f"- conditions: {', '.join(conditions)}",
        f"- solution dimension: {len(solutions)}",
    ]
    for idx, coeffs in enumerate(solutions, start=1):
        combo = combine_fields(dictionary, list(coeffs))
        components = ", ".join(str(c) for c in combo.components)
        lines.append(f"- basis {idx}: {render_combination(coeffs, labels)}")
        lines.append(f"  components: ({components})")
    lines.append("")
    sys.stdout.write("\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad arguments are input errors, not usage bugs
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spraylie",
        description="Exact sprays, connections, curvature, and Lie-algebra analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[], help="full pipeline report")
    analyze.add_argument("file")
    analyze.add_argument("--out", default=None)
    analyze.add_argument("--format", choices=("md", "json"), default="md")
    analyze.add_argument("--seed", type=int, default=DEFAULT_SEED)
    analyze.add_argument("--points", type=int, default=DEFAULT_POINTS)
    analyze.set_defaults(func=cmd_analyze)

    table = sub.add_parser("table", help="multiplication table of one generator set")
    table.add_argument("file")
    table.add_argument("--set", required=True)
    table.add_argument("--format", choices=("md", "csv"), default="md")
    table.set_defaults(func=cmd_table)

    oracle = sub.add_parser("oracle", help="numeric check of a pipeline identity")
    oracle.add_argument("file")
    oracle.add_argument("--check", required=True)
    oracle.add_argument("--points", type=int, default=DEFAULT_POINTS)
    oracle.add_argument("--seed", type=int, default=DEFAULT_SEED)
    oracle.set_defaults(func=cmd_oracle)

    solve = sub.add_parser("solve", help="span solver over a field dictionary")
    solve.add_argument("file")
    solve.add_argument("--dict", required=True)
    solve.add_argument("--isometry", action="store_true")
    solve.add_argument("--spray-symmetry", action="store_true")
    solve.add_argument("--horizontal", action="store_true")
    solve.set_defaults(func=cmd_solve)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (liealg.NonClosureError, liealg.DependentGeneratorsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, SymExprError, geom.MetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (geom.InvariantViolation, liealg.LieAlgebraError) as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
