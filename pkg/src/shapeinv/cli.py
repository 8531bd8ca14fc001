"""Command-line frontend.

Subcommands::

    check EXPR   verify that an operator expression is the zero operator
    suite        run the registered verification battery
    eigen2d      display and check one two-angle eigenfunction
    shape2d      ladder and reconstruction checks at one two-angle level
    osc3d        display and check one oscillator eigenfunction
    dump NAME    print an operator in derived and transcribed forms

One exit-code contract holds across subcommands and output formats: 0 when
every reported check passes, 1 when any check fails, and 2 for usage
errors, parse errors, or invalid quantum numbers.  The default sampling
seed may be supplied through the SHAPEINV_SEED environment variable; an
explicit ``--seed`` always wins.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import ladders2d, osc3d, su2
from .dsl import DslError, GENERATOR_NAMES, parse_and_build
from .ladders2d import QNum2D
from .opalg import apply_canonical
from .osc3d import QNum3D
from .suite import SuiteConfig, render_text, report_json, run_suite
from .symx import render
from .verify import (DegenerateBattery, IdentityReport, PlanDegenerate,
                     SamplePlan, check_op_zero, check_zero)


@dataclass(frozen=True)
class CliConfig:
    """Validated flag bundle shared by the subcommands.

    Quantum-number flags stay ``None`` unless the subcommand defines them;
    each command constructs its QNum value (which enforces the invariants)
    before any other computation runs.
    """

    command: str
    seed: int = 0
    points: int | None = None
    tol: float | None = None
    format: str = "text"
    out: str | None = None
    omega: Fraction = Fraction(1)
    twol: int | None = None
    q: int | None = None
    m: int | None = None
    n: int | None = None
    n3: int = 0
    n4: int = 0

    def plan(self, default_count: int) -> SamplePlan:
        return SamplePlan(seed=self.seed, count=self.points or default_count)

    def tolerance(self, default: float) -> float:
        return self.tol if self.tol is not None else default


def _usage_error(command: str, message: str) -> int:
    print(f"shapeinv {command}: {message}", file=sys.stderr)
    return 2


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _summary(reports) -> str:
    passed = sum(1 for r in reports if r.passed)
    return f"checks: {passed} passed / {len(reports) - passed} failed"


def _finish(cfg: CliConfig, header: list, payload: dict, reports: list) -> int:
    """Emit the per-command report in the requested format; exit by pass/fail."""
    if cfg.format == "json":
        doc = dict(payload)
        doc["checks"] = [r.as_dict() for r in reports]
        doc["summary"] = _summary(reports)
        _emit(_json_doc(doc), cfg.out)
    else:
        lines = list(header) + [str(r) for r in reports] + [_summary(reports)]
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(cfg: CliConfig, expr: str) -> int:
    """Parse an operator expression and verify it vanishes on the battery."""
    try:
        op = parse_and_build(expr, omega=cfg.omega)
    except DslError as exc:
        return _usage_error("check", str(exc))
    try:
        rep = check_op_zero(op, cfg.plan(32), tol=cfg.tolerance(1e-10),
                            name=expr.strip())
    except (PlanDegenerate, DegenerateBattery) as exc:
        return _usage_error("check", str(exc))
    payload = {"expression": expr.strip(), "lattice": op.param}
    return _finish(cfg, [], payload, [rep])


def cmd_suite(cfg: CliConfig, sectors=None) -> int:
    overrides = {"seed": cfg.seed}
    if cfg.points is not None:
        overrides["points"] = cfg.points
    if cfg.tol is not None:
        overrides["tol_eigen"] = cfg.tol
    report = run_suite(SuiteConfig(**overrides), sectors=sectors)
    text = report_json(report) if cfg.format == "json" else render_text(report)
    _emit(text, cfg.out)
    return 0 if all(e["pass"] for e in report["checks"]) else 1


def cmd_eigen2d(cfg: CliConfig) -> int:
    try:
        qn = QNum2D(cfg.twol, cfg.q, cfg.m)
    except ValueError as exc:
        return _usage_error("eigen2d", str(exc))
    plan, tol = cfg.plan(32), cfg.tolerance(1e-8)
    chi = ladders2d.chi_reduced(qn)
    reports = ladders2d.verify_eigen(qn, plan, tol=tol)
    header = [
        f"state: 2l={qn.twol} q={qn.q} m={qn.m}",
        f"eigenvalue: {qn.eigenvalue()}",
        f"eigenfunction: {render(chi)}",
    ]
    payload = {
        "state": {"twol": qn.twol, "q": qn.q, "m": qn.m},
        "eigenvalue": str(qn.eigenvalue()),
        "eigenfunction": render(chi),
    }
    return _finish(cfg, header, payload, reports)


def cmd_shape2d(cfg: CliConfig) -> int:
    if cfg.twol < 0:
        return _usage_error("shape2d", "level label --twol must be nonnegative")
    if (cfg.q is None) != (cfg.m is None):
        return _usage_error("shape2d", "--q and --m must be given together")
    plan, tol = cfg.plan(24), cfg.tolerance(1e-8)
    reports = [ladders2d.verify_ladder_actions(cfg.twol, plan, tol=tol)]
    res = ladders2d.reorder_identity_residuals()
    ok = (res["valid"].normalized().is_zero()
          and not res["stated"].normalized().is_zero())
    reports.append(IdentityReport(
        "lowering-pair exchange identity", 0.0 if ok else 1.0, 1.0, 1e-12,
        notes="the two descending compositions agree exactly once the "
              "leading label sits one site down"))
    header = [f"level: 2l={cfg.twol}"]
    payload = {"level": {"twol": cfg.twol}}
    if cfg.q is not None:
        try:
            qn = QNum2D(cfg.twol, cfg.q, cfg.m)
        except ValueError as exc:
            return _usage_error("shape2d", str(exc))
        reports.extend(ladders2d.reconstruct_chain_reports(qn, plan, tol=tol))
        chi = ladders2d.chi_reduced(qn)
        for label, op in sorted(ladders2d.annihilation_ops(qn).items()):
            reports.append(check_zero(
                apply_canonical(op, chi), plan, reference=[chi], tol=tol,
                name=f"{label} annihilates the state"))
        header[0] += f"  (state q={cfg.q} m={cfg.m})"
        payload["level"].update(q=cfg.q, m=cfg.m)
    return _finish(cfg, header, payload, reports)


def cmd_osc3d(cfg: CliConfig, suite_flag: bool = False) -> int:
    if suite_flag:
        return cmd_suite(cfg, sectors=("3d",))
    if cfg.n is None or cfg.m is None:
        return _usage_error("osc3d", "--n and --m are required (or use --suite)")
    try:
        qn = QNum3D(cfg.n, cfg.m, cfg.n3, cfg.n4, cfg.omega)
    except ValueError as exc:
        return _usage_error("osc3d", str(exc))
    plan, tol = cfg.plan(32), cfg.tolerance(1e-8)
    closed = osc3d.psi_closed(qn)
    ladder = osc3d.psi_ladder(qn)
    reports = [
        osc3d.verify_eigen(qn, plan, closed=True, tol=tol),
        osc3d.verify_eigen(qn, plan, closed=False, tol=tol),
        osc3d.ladder_closed_ratio(qn, plan, tol=tol),
    ]
    reports.extend(osc3d.verify_pair_eigen(qn, plan, tol=tol))
    header = [
        f"state: n={qn.n} m={qn.m} n3={qn.n3} n4={qn.n4} omega={qn.omega}",
        f"energy: {qn.energy()}",
        f"pair scalar: {osc3d.pair_energy(qn.n, qn.m)}",
        f"closed form: {render(closed)}",
        f"ladder form: {render(ladder)}",
    ]
    payload = {
        "state": {"n": qn.n, "m": qn.m, "n3": qn.n3, "n4": qn.n4,
                  "omega": str(qn.omega)},
        "energy": str(qn.energy()),
        "pair_scalar": str(osc3d.pair_energy(qn.n, qn.m)),
        "closed_form": render(closed),
        "ladder_form": render(ladder),
    }
    return _finish(cfg, header, payload, reports)


def _dump_entry(name: str, omega, plan: SamplePlan):
    """Derived/transcribed operator pair plus a note on their relation."""
    if name in ("Lp", "Lm", "L3", "Rp", "Rm", "R3"):
        derived = getattr(su2.build_reduced_generators(), name)
        printed = su2.reduced_ladder_reference(name)
        full = getattr(su2.build_raw_generators(), name)
        return derived, printed, (
            "generator reduced to the integer lattice, against the "
            "transcribed shift-operator closed form"), \
            {"full_form": full.render()}
    if name == "Casimir":
        return su2.casimir(su2.build_raw_generators()), \
            su2.casimir_reference(), (
            "assembled from the generators, against the transcribed "
            "second-order closed form"), {}
    if name == "Hq":
        bundle = su2.build_Hq(plan)
        offset = bundle.offset.data["value"]
        return bundle.derived, bundle.reference, (
            "weight-conjugated derivation against the transcribed potential "
            f"form; measured additive offset magnitude {abs(offset):.3e}"), {}
    if name == "Hm":
        return osc3d.build_Hm(omega), osc3d.hm_reference(omega), (
            "radial-lattice Hamiltonian; the transcription is correct as "
            "printed"), {}
    if name in ("A1", "A1d", "A2", "A2d"):
        derived = getattr(osc3d.build_combos(omega), name)
        printed = osc3d.combo_reference(name, omega, printed=True)
        notes = {
            "A1": "the transcribed form flips only the psi-derivative sign",
            "A1d": "the transcribed form flips its whole derivative group, "
                   "collapsing onto the second lowering combination",
            "A2": "printed and derived forms agree exactly",
            "A2d": "printed and derived forms agree exactly",
        }[name]
        return derived, printed, notes, {}
    derived = getattr(osc3d.cartesian_ladders(omega), name)
    return derived, None, (
        "built from the chart gradient of its cartesian coordinate; no "
        "separately transcribed closed form is tracked"), {}


def cmd_dump(cfg: CliConfig, name: str) -> int:
    derived, printed, notes, extra = _dump_entry(name, cfg.omega,
                                                 cfg.plan(120))
    match = derived.same_operator(printed) if printed is not None else None
    if cfg.format == "json":
        payload = {
            "name": name,
            "omega": str(cfg.omega),
            "derived": {"form": derived.render(), **derived.to_json()},
            "printed": (None if printed is None else
                        {"form": printed.render(), **printed.to_json()}),
            "match": match,
            "notes": notes,
        }
        payload.update(extra)
        _emit(_json_doc(payload), cfg.out)
    else:
        lines = [f"operator: {name} (omega = {cfg.omega})"]
        lines += [f"{k.replace('_', ' ')}: {v}" for k, v in extra.items()]
        lines.append(f"derived: {derived.render()}")
        if printed is not None:
            lines.append(f"printed: {printed.render()}")
            lines.append(f"match: {'yes' if match else 'no'}")
        lines.append(f"notes: {notes}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("frequency must be positive")
    return value


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (default: SHAPEINV_SEED or 0)")
    p.add_argument("--points", type=int, default=None,
                   help="sample points per check")
    p.add_argument("--tol", type=float, default=None,
                   help="relative-tolerance override")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="report format (default: text)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write the report to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapeinv",
        description="symbolic-numeric verification of a pair of "
                    "ladder-generated Hamiltonian families")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")

    p = sub.add_parser("check",
                       help="verify that an operator expression is zero")
    p.add_argument("expr", metavar="EXPR",
                   help="operator expression, e.g. '[Lp, Lm] - 2*L3'")
    p.add_argument("--omega", type=_positive_fraction, default=Fraction(1),
                   help="frequency used by the oscillator generators")
    _add_common(p)

    p = sub.add_parser("suite", help="run the registered verification battery")
    _add_common(p)

    p = sub.add_parser("eigen2d",
                       help="display and check one two-angle eigenfunction")
    p.add_argument("--twol", type=int, required=True,
                   help="doubled level label")
    p.add_argument("--q", type=int, required=True, help="lattice label")
    p.add_argument("--m", type=int, required=True, help="axis label")
    _add_common(p)

    p = sub.add_parser("shape2d",
                       help="ladder and reconstruction checks at one level")
    p.add_argument("--twol", type=int, required=True,
                   help="doubled level label")
    p.add_argument("--q", type=int, default=None,
                   help="state for reconstruction checks (with --m)")
    p.add_argument("--m", type=int, default=None,
                   help="state for reconstruction checks (with --q)")
    _add_common(p)

    p = sub.add_parser("osc3d",
                       help="display and check one oscillator eigenfunction")
    p.add_argument("--n", type=int, default=None, help="pair-ladder level")
    p.add_argument("--m", type=int, default=None, help="lattice label")
    p.add_argument("--n3", type=int, default=0, help="third cartesian level")
    p.add_argument("--n4", type=int, default=0, help="fourth cartesian level")
    p.add_argument("--omega", type=_positive_fraction, default=Fraction(1),
                   help="oscillator frequency")
    p.add_argument("--suite", action="store_true", dest="run_suite",
                   help="run the oscillator sector of the battery instead")
    _add_common(p)

    p = sub.add_parser("dump",
                       help="print an operator in derived and transcribed "
                            "forms")
    p.add_argument("name", metavar="NAME", choices=GENERATOR_NAMES,
                   help="one of: " + ", ".join(GENERATOR_NAMES))
    p.add_argument("--omega", type=_positive_fraction, default=Fraction(1),
                   help="frequency used by the oscillator operators")
    _add_common(p)

    return parser


def _config_from(args: argparse.Namespace) -> CliConfig:
    names = {f.name for f in dataclasses.fields(CliConfig)}
    return CliConfig(**{k: v for k, v in vars(args).items() if k in names})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        raw = os.environ.get("SHAPEINV_SEED", "0")
        try:
            args.seed = int(raw)
        except ValueError:
            parser.error(f"SHAPEINV_SEED must be an integer (got {raw!r})")
    cfg = _config_from(args)
    if args.command == "check":
        return cmd_check(cfg, args.expr)
    if args.command == "suite":
        return cmd_suite(cfg)
    if args.command == "eigen2d":
        return cmd_eigen2d(cfg)
    if args.command == "shape2d":
        return cmd_shape2d(cfg)
    if args.command == "osc3d":
        return cmd_osc3d(cfg, suite_flag=args.run_suite)
    return cmd_dump(cfg, args.name)


if __name__ == "__main__":
    sys.exit(main())
