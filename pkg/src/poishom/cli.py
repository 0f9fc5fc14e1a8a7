"""Batch front end: parse problem files, run checks, emit tables or JSON.

Problem file schema (JSON)::

    {
      "variables": ["x", "y"],              # coordinate names
      "poisson":   {"1,2": "x*y"},          # {x_i,x_j} for i<j, 1-based
      "volume":    "1",                     # nonzero rational constant
      "module":    {"rank": 2,              # optional; default trivial rank 1
                    "bracket": {"x": [["x","0"],["0","0"]],
                                "y": [["0","0"],["0","y"]]}},
      "twist":     "modular"                # optional; or {"components": [...]}
    }

A ``twist`` entry transforms the coefficient module before any computation:
``"modular"`` twists by the modular vector field of the declared volume,
an explicit component list is validated as a Poisson vector field first.

Exit codes: 0 success, 1 mathematical check failed (witness reported),
2 graded-mode/precondition violation, 3 input error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from fractions import Fraction

from .calculus import MultiVector
from .complexes import graded_weight_shift
from .errors import (
    GradedModeError,
    JacobiError,
    ParseError,
    PoishomError,
    PoissonFieldError,
    SchemaError,
    FlatnessError,
)
from .homology import betti_table, structure_digest, verify_duality
from .pmodule import PoissonModule, flatness_defect, twist
from .poisson import PoissonStructure, VolumeForm
from .poly import Poly

EXIT_OK = 0
EXIT_MATH = 1
EXIT_MODE = 2
EXIT_INPUT = 3


class ProblemSpec:
    """A validated problem file."""

    def __init__(self, variables, structure, volume, module, twist_spec):
        self.variables = variables
        self.structure = structure  # PoissonStructure, possibly unverified
        self.volume = volume
        self.module = module  # PoissonModule, not yet flat-verified
        self.twist_spec = twist_spec  # None | "modular" | MultiVector


def _require(condition, path, message):
    if not condition:
        raise SchemaError(path, message)


def _parse_poly(text, variables, path):
    _require(isinstance(text, str), path, "expected a polynomial string")
    try:
        return Poly.parse(text, variables)
    except ParseError as exc:
        raise SchemaError(path, str(exc)) from exc


def load(path: str) -> ProblemSpec:
    """Load and fully validate a problem file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(path, f"invalid JSON: {exc}") from exc
    _require(isinstance(data, dict), "$", "top level must be an object")
    known = {"variables", "poisson", "volume", "module", "twist"}
    for key in data:
        _require(key in known, key, "unknown field")

    variables = data.get("variables")
    _require(isinstance(variables, list) and variables, "variables",
             "expected a nonempty array of names")
    _require(all(isinstance(v, str) and v for v in variables), "variables",
             "names must be nonempty strings")
    _require(len(set(variables)) == len(variables), "variables", "duplicate names")
    n = len(variables)

    poisson = data.get("poisson")
    _require(isinstance(poisson, dict), "poisson", "expected an object")
    components = {}
    for key, text in poisson.items():
        parts = key.split(",")
        _require(len(parts) == 2, f"poisson.{key}", 'keys must look like "i,j"')
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise SchemaError(f"poisson.{key}", "indices must be integers")
        _require(1 <= i <= n and 1 <= j <= n, f"poisson.{key}", "index out of range")
        _require(i < j, f"poisson.{key}", "indices must be increasing (i < j)")
        components[(i - 1, j - 1)] = _parse_poly(text, variables, f"poisson.{key}")
    structure = PoissonStructure.from_components(n, components, require_jacobi=False)

    volume_text = data.get("volume")
    _require(isinstance(volume_text, str), "volume", "expected a rational string")
    try:
        value = Fraction(volume_text)
    except (ValueError, ZeroDivisionError):
        raise SchemaError("volume", f"not a rational constant: {volume_text!r}")
    _require(value != 0, "volume", "volume must be nonzero")
    volume = VolumeForm(value)

    module_data = data.get("module")
    if module_data is None:
        module = PoissonModule.trivial(n, 1)
    else:
        _require(isinstance(module_data, dict), "module", "expected an object")
        rank = module_data.get("rank")
        _require(isinstance(rank, int) and rank >= 1, "module.rank",
                 "expected a positive integer")
        bracket = module_data.get("bracket")
        _require(isinstance(bracket, dict), "module.bracket", "expected an object")
        zero = Poly.zero(n)
        matrices = [[[zero] * rank for _ in range(rank)] for _ in range(n)]
        for name, rows in bracket.items():
            _require(name in variables, f"module.bracket.{name}", "unknown variable")
            i = variables.index(name)
            _require(isinstance(rows, list) and len(rows) == rank,
                     f"module.bracket.{name}", f"expected {rank} rows")
            for a, row in enumerate(rows):
                _require(isinstance(row, list) and len(row) == rank,
                         f"module.bracket.{name}[{a}]", f"expected {rank} entries")
                for b, text in enumerate(row):
                    matrices[i][a][b] = _parse_poly(
                        text, variables, f"module.bracket.{name}[{a}][{b}]"
                    )
        module = PoissonModule(
            n, rank, tuple(tuple(tuple(row) for row in m) for m in matrices)
        )

    twist_data = data.get("twist")
    if twist_data is None:
        twist_spec = None
    elif twist_data == "modular":
        twist_spec = "modular"
    else:
        _require(isinstance(twist_data, dict), "twist",
                 'expected "modular" or {"components": [...]}')
        comps = twist_data.get("components")
        _require(isinstance(comps, list) and len(comps) == n, "twist.components",
                 f"expected {n} polynomial strings")
        terms = {}
        for i, text in enumerate(comps):
            poly = _parse_poly(text, variables, f"twist.components[{i}]")
            if not poly.is_zero():
                terms[(i,)] = poly
        twist_spec = MultiVector(n, 1, terms)

    return ProblemSpec(variables, structure, volume, module, twist_spec)


# ----------------------------------------------------------------------


def _poly_list(polys, names):
    return [p.text(names) for p in polys]


def _jacobi_witness_payload(witness, names):
    i, j, k, poly = witness
    return {
        "check": "jacobi",
        "triple": [names[i], names[j], names[k]],
        "jacobiator": poly.text(names),
    }


def _flatness_witness_payload(witness, names):
    a, i, j, disc = witness
    return {
        "check": "flatness",
        "section": a + 1,
        "pair": [names[i], names[j]],
        "discrepancy": _poly_list(disc, names),
    }


def _poisson_field_witness_payload(witness, names):
    i, j, poly = witness
    return {
        "check": "poisson_vector_field",
        "pair": [names[i], names[j]],
        "defect": poly.text(names),
    }


class _Run:
    """Collects results and witnesses for one CLI invocation."""

    def __init__(self, command, problem: ProblemSpec):
        self.command = command
        self.problem = problem
        self.names = problem.variables
        self.results = {}
        self.witnesses = []
        self.exit_code = EXIT_OK

    def fail(self, payload):
        self.witnesses.append(payload)
        self.exit_code = EXIT_MATH

    def report(self):
        return {
            "command": self.command,
            "spec_digest": structure_digest(
                self.problem.structure, self.problem.module, self.problem.volume
            ),
            "results": self.results,
            "witnesses": self.witnesses,
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }


def _verify_inputs(run: _Run, need_twist: bool = True):
    """Jacobi + flatness (+ twist validity) gate shared by all commands.

    Returns (structure, working module, modular-or-None) or None after
    recording witnesses; the working module has the file's twist applied.
    """
    problem = run.problem
    structure = problem.structure
    names = run.names
    if not structure.jacobi_verified:
        run.fail(_jacobi_witness_payload(structure.jacobi_witness, names))
        return None
    witness = flatness_defect(problem.module, structure)
    if witness is not None:
        run.fail(_flatness_witness_payload(witness, names))
        return None
    module = PoissonModule(
        problem.module.nvars, problem.module.rank, problem.module.brackets,
        flat_verified=True,
    )
    if need_twist and problem.twist_spec is not None:
        if problem.twist_spec == "modular":
            phi = structure.modular_vector_field(problem.volume)
        else:
            phi = problem.twist_spec
            defect = structure.poisson_field_defect(phi)
            if defect is not None:
                run.fail(_poisson_field_witness_payload(defect, names))
                return None
        module = twist(module, structure, phi)
    return structure, module


def _cmd_check(run: _Run, args):
    verified = _verify_inputs(run)
    run.results["jacobi"] = run.problem.structure.jacobi_verified
    if run.problem.structure.jacobi_verified:
        run.results["flat"] = not any(w["check"] == "flatness" for w in run.witnesses)
    run.results["ok"] = verified is not None
    if verified is not None:
        run.results["rank"] = verified[1].rank


def _cmd_modular(run: _Run, args):
    verified = _verify_inputs(run, need_twist=False)
    if verified is None:
        return
    structure, _ = verified
    phi = structure.modular_vector_field(run.problem.volume)
    components = [
        phi.evaluate(structure.coordinate(i)) for i in range(structure.nvars)
    ]
    run.results["modular_field"] = _poly_list(components, run.names)
    run.results["is_poisson_vector_field"] = structure.is_poisson_vector_field(phi)


def _cmd_betti(run: _Run, args, kind):
    verified = _verify_inputs(run)
    if verified is None:
        return
    structure, module = verified
    table = betti_table(structure, module, kind, args.max_weight)
    entries = table.to_dict()["entries"]
    if args.degree is not None:
        entries = [e for e in entries if e["degree"] == args.degree]
    if args.weight is not None:
        entries = [e for e in entries if e["weight"] == args.weight]
    run.results["kind"] = kind
    run.results["entries"] = entries
    run.results["metadata"] = table.metadata


def _cmd_duality(run: _Run, args):
    verified = _verify_inputs(run)
    if verified is None:
        return
    structure, module = verified
    report = verify_duality(
        structure, module, run.problem.volume,
        max_weight=args.max_weight, trials=args.trials, seed=args.seed,
    )
    run.results["duality"] = report.to_dict(run.names)
    if not report.ok():
        run.exit_code = EXIT_MATH
        for failure in report.diagram_failures + report.random_failures:
            run.witnesses.append({"check": "duality_diagram", **failure})
        for pair in report.betti_pairs:
            if not pair["equal"]:
                run.witnesses.append({"check": "duality_betti", **pair})


# ----------------------------------------------------------------------
# rendering


def _render_table(report: dict) -> str:
    lines = [f"command: {report['command']}", f"spec: {report['spec_digest']}"]
    results = report["results"]
    for key, value in results.items():
        if key == "entries":
            lines.append("degree weight dim")
            for entry in value:
                lines.append(
                    f"{entry['degree']:>6} {entry['weight']:>6} {entry['dim']:>4}"
                )
        elif key == "duality":
            lines.append(f"modular field: {value['modular_field']}")
            diagram = value["diagram"]
            lines.append(
                f"diagram checks: {diagram['checked']} basis + "
                f"{diagram['random_checked']} random, "
                f"{'ok' if diagram['ok'] else 'FAILED'}"
            )
            betti = value["betti"]
            if betti["computed"]:
                lines.append(
                    f"betti pairs: {len(betti['pairs'])}, "
                    f"{'ok' if betti['ok'] else str(betti['failures']) + ' FAILED'}"
                )
                for pair in betti["pairs"]:
                    mark = "==" if pair["equal"] else "!="
                    lines.append(
                        f"  HP^{pair['degree']}[w={pair['weight']}] = "
                        f"{pair['cohomology_dim']} {mark} "
                        f"{pair['homology_dim']} = HP_{pair['homology_degree']}"
                        f"[w={pair['homology_weight']}]"
                    )
            else:
                lines.append(betti["note"])
            lines.append(f"duality: {'ok' if value['ok'] else 'FAILED'}")
        elif key == "metadata":
            lines.append(f"metadata: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{key}: {value}")
    for witness in report["witnesses"]:
        lines.append(f"witness: {json.dumps(witness, sort_keys=True)}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poishom",
        description="Exact Poisson (co)homology and twisted duality checks "
        "on polynomial data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("check", "verify the Jacobi identity and module flatness"),
        ("modular", "print the modular vector field of the declared volume"),
        ("cohomology", "weight-graded cohomology Betti table"),
        ("homology", "weight-graded homology Betti table"),
        ("duality", "verify the twisted duality square and Betti equalities"),
    ]:
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("problem", help="path to a JSON problem file")
        cmd.add_argument("--format", choices=["table", "json"], default="table")
        if name in ("cohomology", "homology"):
            cmd.add_argument("--degree", type=int, default=None)
            cmd.add_argument("--weight", type=int, default=None)
            cmd.add_argument("--max-weight", type=int, default=6)
        if name == "duality":
            cmd.add_argument("--max-weight", type=int, default=6)
            cmd.add_argument("--trials", type=int, default=25)
            cmd.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load(args.problem)
    except (SchemaError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    run = _Run(args.command, problem)
    try:
        if args.command == "check":
            _cmd_check(run, args)
        elif args.command == "modular":
            _cmd_modular(run, args)
        elif args.command == "cohomology":
            _cmd_betti(run, args, "cohomology")
        elif args.command == "homology":
            _cmd_betti(run, args, "homology")
        elif args.command == "duality":
            _cmd_duality(run, args)
    except GradedModeError as exc:
        print(f"graded-mode violation: {exc}", file=sys.stderr)
        return EXIT_MODE
    except (JacobiError, FlatnessError, PoissonFieldError) as exc:
        print(f"mathematical check failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    except PoishomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE

    report = run.report()
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render_table(report))
    return run.exit_code


if __name__ == "__main__":
    sys.exit(main())
