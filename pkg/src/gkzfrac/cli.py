"""Command line surface: JSON input schema, commands, reports.

Reports are deterministic for a fixed input: JSON payloads are dumped with
sorted keys and contain no timestamps (timing goes to standard error).
Exit codes: 0 success, 1 check failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys as _sysmod
import time
from dataclasses import dataclass
from importlib import resources

from . import checks as checks_mod
from . import degeneracy as dg
from . import gkz
from . import polytopes as pt
from . import series as se
from . import toric
from . import triangulations as tr
from .errors import GkzfracError, ParseError, SchemaError, SemanticError

COMMANDS = ("validate", "system", "cohomology", "series", "bseries",
            "fans", "groebner", "degeneracy", "check-all")


@dataclass
class InputSpec:
    name: str
    rank: int
    rays: list
    max_cones: list
    nef_partition: list
    ample_weight: list = None
    order: int = 8

    def fan(self):
        return toric.make_fan(self.rank, self.rays, self.max_cones,
                              self.nef_partition, name=self.name,
                              ample_weight=self.ample_weight)


def _expect(data, key, kind, pointer):
    if key not in data:
        raise SchemaError(f"missing field at {pointer}/{key}")
    value = data[key]
    if kind == "int" and not isinstance(value, int):
        raise SchemaError(f"expected integer at {pointer}/{key}")
    if kind == "str" and not isinstance(value, str):
        raise SchemaError(f"expected string at {pointer}/{key}")
    if kind == "list" and not isinstance(value, list):
        raise SchemaError(f"expected array at {pointer}/{key}")
    return value


def _int_matrix(value, pointer, width=None):
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or not all(
                isinstance(x, int) for x in row):
            raise SchemaError(f"expected integer array at {pointer}/{i}")
        if width is not None and len(row) != width:
            raise SchemaError(
                f"expected {width} entries at {pointer}/{i}, got {len(row)}")
        out.append(tuple(row))
    return out


def parse_input(path):
    """Validated InputSpec from a UTF-8 JSON file."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at byte offset {exc.pos}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise SchemaError("top-level value must be an object")
    name = _expect(data, "name", "str", "")
    rank = _expect(data, "rank", "int", "")
    rays = _int_matrix(_expect(data, "rays", "list", ""), "/rays", width=rank)
    cones = _int_matrix(_expect(data, "max_cones", "list", ""), "/max_cones")
    partition = _int_matrix(_expect(data, "nef_partition", "list", ""),
                            "/nef_partition")
    p = len(rays)
    for ci, cone in enumerate(cones):
        for x in cone:
            if not 0 <= x < p:
                raise SemanticError(
                    f"/max_cones/{ci}: ray index {x} out of range 0..{p - 1}")
    for bi, block in enumerate(partition):
        for x in block:
            if not 0 <= x < p:
                raise SemanticError(
                    f"/nef_partition/{bi}: ray index {x} out of range")
    weight = None
    if "ample_weight" in data:
        weight = _expect(data, "ample_weight", "list", "")
        if not all(isinstance(x, int) for x in weight):
            raise SchemaError("expected integer array at /ample_weight")
        if len(weight) != p + len(partition):
            raise SchemaError(
                f"/ample_weight must have {p + len(partition)} entries")
    order = data.get("order", 8)
    if not isinstance(order, int) or order < 0:
        raise SchemaError("expected nonnegative integer at /order")
    spec = InputSpec(name=name, rank=rank, rays=rays, max_cones=cones,
                     nef_partition=partition, ample_weight=weight,
                     order=order)
    spec.fan()  # surfaces SemanticError for bad partitions early
    return spec


def fixture_path(name):
    """Filesystem path of a bundled corpus input."""
    return str(resources.files("gkzfrac.fixtures").joinpath(f"{name}.json"))


# --- reports -----------------------------------------------------------------------

@dataclass
class Report:
    command: str
    name: str
    payload: dict
    failed: bool = False

    def to_json(self):
        body = {"command": self.command, "input": self.name,
                "payload": self.payload}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"

    def to_markdown(self):
        lines = [f"# {self.command} on {self.name}", ""]
        lines.extend(_markdown_value(self.payload, 0))
        return "\n".join(lines) + "\n"


def _markdown_value(value, depth):
    pad = "  " * depth
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            inner = value[key]
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}- **{key}**:")
                lines.extend(_markdown_value(inner, depth + 1))
            else:
                lines.append(f"{pad}- **{key}**: {inner}")
    elif isinstance(value, list):
        for inner in value:
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_markdown_value(inner, depth + 1))
            else:
                lines.append(f"{pad}- {inner}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def _context(spec, flags):
    fan = spec.fan()
    sys = gkz.build_system(fan)
    order = flags.get("order") or spec.order
    omega = flags.get("weight") or spec.ample_weight
    if omega is None:
        omega = se.default_weight(sys)
    omega = se.check_weight(sys, omega)
    return fan, sys, order, omega


def _binomial_string(sys, u, v):
    def mono(expo):
        parts = []
        for (i, j), e in zip(sys.j_indices(), expo):
            if e:
                head = f"y_{i + 1}_{j}"
                parts.append(head if e == 1 else f"{head}^{e}")
        return "*".join(parts) if parts else "1"

    return f"{mono(u)} - {mono(v)}"


def run_command(cmd, spec, flags=None):
    """Execute one command over a parsed input; returns a Report."""
    flags = dict(flags or {})
    if cmd == "validate":
        fan = spec.fan()
        report = toric.validate_fan(fan)
        return Report("validate", spec.name, {"checks": report.as_dict()})

    fan, sys, order, omega = _context(spec, flags)

    if cmd == "system":
        payload = {
            "rank": fan.rank,
            "blocks": [list(b) for b in fan.blocks],
            "double_indices": [[i + 1, j] for (i, j) in sys.j_indices()],
            "a_matrix": [list(row) for row in sys.a],
            "a_ext_matrix": [list(row) for row in sys.a_ext],
            "beta": [se.fraction_str(x) for x in sys.beta],
            "relation_basis": [list(b) for b in sys.basis],
            "canonical_alpha": [se.fraction_str(x)
                                for x in gkz.canonical_alpha(sys)],
            "box_generators": [list(pc.ell_ext) for pc in sys.collections],
        }
        return Report("system", spec.name, payload)

    if cmd == "cohomology":
        ring = toric.cohomology_ring(fan)
        sr = toric.stanley_reisner_ideal(fan)
        payload = {
            "dimension": ring.dim,
            "basis": ring.basis_names(),
            "basis_degrees": list(ring.basis_degrees),
            "stanley_reisner": [[list(fan.double_index_of_ray(i)) for i in s]
                                for s in sr],
            "surjection_consistent":
                gkz.indicial_ring_surjection_check(sys, ring),
        }
        return Report("cohomology", spec.name, payload)

    if cmd == "series":
        period = se.normalized_period_series(sys, omega, order)
        alpha = gkz.canonical_alpha(sys)
        gamma = se.gamma_series(sys, alpha, omega, order)
        oracle_ok = all(
            coeff == se.residue_oracle(sys, ell)
            for (ell, _), coeff in period.terms.items())
        payload = {
            "weight": [se.fraction_str(w) for w in omega],
            "order": order,
            "period": se.series_to_dict(period),
            "gamma": se.series_to_dict(gamma),
            "oracle_match": oracle_ok,
        }
        return Report("series", spec.name, payload, failed=not oracle_ok)

    if cmd == "bseries":
        ring = toric.cohomology_ring(fan)
        b = se.b_series(sys, ring, omega, order)
        payload = {
            "weight": [se.fraction_str(w) for w in omega],
            "order": order,
            "dual_basis": ring.basis_names(),
            "pairings": [se.series_to_dict(se.pair_with_dual(b, h))
                         for h in range(ring.dim)],
        }
        return Report("bseries", spec.name, payload)

    if cmd == "fans":
        pc = tr.PointConfiguration.from_system(sys)
        tmax = tr.maximal_triangulation(sys, fan)
        cone = tr.secondary_cone(sys, pc, tmax)
        chamber = tr.regular_subdivision(pc, omega)
        payload = {
            "points": [list(p) for p in pc.points],
            "maximal_triangulation": [list(s) for s in tmax.simplices],
            "normalized_volume": tr.normalized_volume(pc, tmax),
            "max_cones": len(fan.max_cones),
            "secondary_cone": {
                "inequalities": [list(g) for g in cone.inequalities],
                "rays": [list(ray) for ray in cone.rays],
            },
            "kahler_cone": {
                "inequalities": [list(g) for g in sys.kahler.inequalities],
                "rays": [list(ray) for ray in sys.kahler.rays],
            },
            "weight_chamber_is_maximal":
                isinstance(chamber, tr.Triangulation)
                and chamber.simplex_set() == tmax.simplex_set(),
            "nonvertex_clause_vacuous":
                tr.nonvertex_points(pc, tmax) == [],
        }
        if len(sys.basis) <= 2:
            payload["secondary_fan"] = [
                {"rays": [list(r) for r in c.rays],
                 "simplices": [list(s) for s in t.simplices]}
                for c, t in tr.secondary_fan(sys)]
            payload["groebner_fan"] = [
                {"rays": [list(r) for r in c.rays],
                 "leading_terms": sorted(list(lt) for lt in label)}
                for c, label in tr.groebner_fan(sys)]
        return Report("fans", spec.name, payload)

    if cmd == "groebner":
        ideal = tr.toric_groebner_basis(sys, omega)
        candidates = tr.primitive_collection_binomials(sys, omega)
        minimal = tr.minimal_gb_is_primitive_collections(sys, fan, omega)
        matches = sorted(ideal.generators) == sorted(candidates)
        payload = {
            "weight": [se.fraction_str(w) for w in omega],
            "reduced_basis": [
                {"leading": list(u), "trailing": list(v),
                 "binomial": _binomial_string(sys, u, v)}
                for u, v in ideal.generators],
            "leading_terms_are_stanley_reisner": minimal,
            "equals_primitive_collection_binomials": matches,
        }
        return Report("groebner", spec.name, payload,
                      failed=not (minimal and matches))

    if cmd == "degeneracy":
        ring = toric.cohomology_ring(fan)
        charts = dg.subdivide_kahler_cone(sys)
        chart_reports = []
        all_ok = True
        for chart in charts:
            report = dg.maximal_degeneracy_check(sys, ring, chart, order,
                                                 omega=omega)
            all_ok = all_ok and report.passed
            chart_reports.append({
                "cone_rays": [list(r) for r in chart.cone_rays],
                "coordinate_relations": [list(v) for v in chart.basis_vectors],
                "coordinate_signs": list(chart.signs),
                "certificate": report.as_dict(),
            })
        return Report("degeneracy", spec.name, {"charts": chart_reports},
                      failed=not all_ok)

    if cmd == "check-all":
        results = checks_mod.run_all(fan, order=order, omega=omega)
        ok = all(r["ok"] for r in results)
        return Report("check-all", spec.name,
                      {"checks": results, "passed": ok}, failed=not ok)

    raise SchemaError(f"unknown command {cmd!r}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="gkzfrac",
        description="Exact fractional GKZ systems of nef-partitioned smooth "
                    "toric fans: periods, cohomology-valued solutions and "
                    "structural checks.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", help="path to a fan description (JSON)")
    parser.add_argument("--order", type=int, default=None,
                        help="series truncation order (default: input file)")
    parser.add_argument("--weight", type=str, default=None,
                        help="comma-separated ample weight over the "
                             "extended point set")
    parser.add_argument("--out", type=str, default=None,
                        help="write the report here instead of stdout")
    parser.add_argument("--format", dest="fmt", choices=("json", "md"),
                        default="json")
    args = parser.parse_args(argv)

    try:
        spec = parse_input(args.input)
        flags = {"order": args.order}
        if args.weight:
            try:
                flags["weight"] = tuple(int(x) for x in
                                        args.weight.split(","))
            except ValueError as exc:
                raise SchemaError(f"bad --weight: {exc}") from exc
        started = time.perf_counter()
        report = run_command(args.command, spec, flags)
        elapsed = time.perf_counter() - started
        print(f"gkzfrac: {args.command} on {spec.name} finished in "
              f"{elapsed:.3f}s", file=_sysmod.stderr)
    except (ParseError, SchemaError, SemanticError) as exc:
        print(f"gkzfrac: input error: {exc}", file=_sysmod.stderr)
        return 2
    except GkzfracError as exc:
        print(f"gkzfrac: {type(exc).__name__}: {exc}", file=_sysmod.stderr)
        print("hint: run the validate command for a structural report",
              file=_sysmod.stderr)
        return 1

    text = report.to_json() if args.fmt == "json" else report.to_markdown()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        _sysmod.stdout.write(text)
    return 1 if report.failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
