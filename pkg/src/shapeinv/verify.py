"""Randomized-evaluation identity engine.

All algebraic claims in this package are double-checked numerically: exact
symbolic construction first, then evaluation of residuals on a seeded cloud
of sample points that stays away from coordinate singularities.  The
primitives here know nothing about the physics modules; they consume plain
expressions and anything with an ``apply(expr) -> expr`` operator interface.

Conventions
-----------
* a report's ``relative`` residual is max-abs residual divided by the largest
  magnitude the compared quantities reach on the plan (floored at 1e-300);
* proportionality checks report the pointwise-ratio dispersion stddev/|mean|;
* points where evaluation hits a singularity are skipped, but more than 20%
  skipped points invalidates the plan.
"""
from __future__ import annotations

import hashlib
import math
import random
from fractions import Fraction

from .rationals import GaussRat
from .symx import (
    Add,
    Const,
    Cos,
    EvalError,
    Exp,
    Expr,
    IMAG,
    Mul,
    ONE,
    PHI,
    PSI,
    Pow,
    R,
    Sin,
    Sym,
    THETA,
    evaluate_fast,
    free_symbols,
    render,
)

DEFAULT_BOXES = {
    "theta": (0.3, math.pi - 0.3),
    "psi": (0.3, math.pi - 0.3),
    "phi": (0.0, 2.0 * math.pi),
    "r": (0.4, 2.5),
}

# integer parameter pools; everything else falls back to a generic box
INT_POOLS = {
    "q": (-3, 3),
    "m": (-3, 3),
    "twol": (0, 4),
    "n": (0, 4),
    "n3": (0, 3),
    "n4": (0, 3),
}
OMEGA_POOL = (1.0, 2.0, 0.5)
GENERIC_BOX = (0.4, 1.7)

SKIP_BUDGET = 0.20
SCALE_FLOOR = 1e-300

# default tolerances (see package docs): operator identities are tight,
# eigen/ladder chains accumulate more roundoff, finite differences are loose
TOL_OPERATOR = 1e-10
TOL_EIGEN = 1e-8
TOL_FD = 1e-6


class PlanDegenerate(RuntimeError):
    """Too many sample points skipped or no usable reference scale."""


class DegenerateBattery(RuntimeError):
    """Operator comparison where every probe is annihilated: inconclusive."""


class SamplePlan:
    """Deterministic cloud of evaluation points avoiding singular loci."""

    def __init__(self, seed: int = 0, count: int = 56, boxes: dict | None = None):
        if count < 1:
            raise ValueError("count must be >= 1")
        self.seed = int(seed)
        self.count = int(count)
        self.boxes = dict(DEFAULT_BOXES)
        if boxes:
            self.boxes.update(boxes)

    def points(self, extra_symbols=()) -> list:
        """Bindings for the four coordinates plus any extra named symbols.

        Extras are drawn from integer pools for quantum-number-like names,
        from the frequency pool for 'omega', and from a generic positive box
        otherwise.  The sequence is a pure function of (seed, count, extras);
        the mix-in below is content-stable so reruns in fresh processes
        (randomized string hashing) see identical clouds.
        """
        key = f"{self.seed}|{','.join(sorted(set(extra_symbols)))}"
        rng = random.Random(int.from_bytes(
            hashlib.sha256(key.encode()).digest()[:8], "big"))
        pts = []
        for _ in range(self.count):
            b = {}
            for name in ("theta", "psi", "phi", "r"):
                lo, hi = self.boxes[name]
                b[name] = lo + (hi - lo) * rng.random()
            for name in sorted(set(extra_symbols)):
                if name in b:
                    continue
                if name == "omega":
                    b[name] = OMEGA_POOL[rng.randrange(len(OMEGA_POOL))]
                elif name in INT_POOLS:
                    lo, hi = INT_POOLS[name]
                    b[name] = float(rng.randint(lo, hi))
                else:
                    lo, hi = GENERIC_BOX
                    b[name] = lo + (hi - lo) * rng.random()
            pts.append(b)
        return pts


class IdentityReport:
    """Outcome of one verification."""

    __slots__ = ("name", "max_abs", "scale", "relative", "tol", "passed",
                 "worst", "notes", "data")

    def __init__(self, name, max_abs, scale, tol, worst=None, notes="", data=None):
        self.name = name
        self.max_abs = float(max_abs)
        self.scale = float(scale)
        self.relative = self.max_abs / max(self.scale, SCALE_FLOOR)
        self.tol = float(tol)
        self.passed = self.relative <= self.tol
        self.worst = worst
        self.notes = notes
        self.data = dict(data or {})

    def fail(self, reason: str) -> "IdentityReport":
        self.passed = False
        self.notes = (self.notes + "; " if self.notes else "") + reason
        return self

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_abs": self.max_abs,
            "scale": self.scale,
            "relative_residual": self.relative,
            "tolerance": self.tol,
            "pass": self.passed,
            "worst": self.worst,
            "notes": self.notes,
            "data": {k: _jsonable(v) for k, v in sorted(self.data.items())},
        }

    def __str__(self):
        tag = "PASS" if self.passed else "FAIL"
        return (f"[{tag}] {self.name}: relative={self.relative:.3e} "
                f"(tol {self.tol:.1e}){'; ' + self.notes if self.notes else ''}")

    def __repr__(self):
        return f"IdentityReport({self})"


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _eval_many(exprs, pts):
    """Evaluate several expressions over the plan with a shared atom cache.

    Returns (values: list per expr of list per point, skipped point count).
    Points where any expression is singular or overflows are dropped for all
    expressions, keeping the value lists aligned.
    """
    values = [[] for _ in exprs]
    kept_pts = []
    skipped = 0
    for b in pts:
        cache = {}
        row = []
        try:
            for e in exprs:
                v = evaluate_fast(e, b, cache)
                if v != v or abs(v) > 1e100:  # nan or blow-up
                    raise EvalError("non-finite evaluation")
                row.append(v)
        except (EvalError, OverflowError, ZeroDivisionError):
            skipped += 1
            continue
        for lst, v in zip(values, row):
            lst.append(v)
        kept_pts.append(b)
    return values, kept_pts, skipped


def _guard_skips(skipped: int, total: int, name: str):
    if total == 0 or skipped > SKIP_BUDGET * total:
        raise PlanDegenerate(
            f"{name}: {skipped}/{total} sample points skipped (budget 20%)")


def check_zero(f: Expr, plan: SamplePlan, reference=(ONE,), tol=TOL_OPERATOR,
               name="zero-check") -> IdentityReport:
    """Residual of f against 0, scaled by reference expression magnitudes."""
    refs = list(reference)
    syms = free_symbols(f)
    for rexpr in refs:
        syms |= free_symbols(rexpr)
    pts = plan.points(syms - {"theta", "psi", "phi", "r"})
    vals, kept, skipped = _eval_many([f] + refs, pts)
    _guard_skips(skipped, plan.count, name)
    fvals = vals[0]
    scale = 0.0
    for rv in vals[1:]:
        for v in rv:
            scale = max(scale, abs(v))
    max_abs, worst = 0.0, None
    for b, v in zip(kept, fvals):
        if abs(v) > max_abs:
            max_abs, worst = abs(v), {k: round(x, 6) for k, x in b.items()}
    notes = ""
    if scale < 1e-20:
        notes = "reference scale degenerate; using absolute residual"
        scale = 1.0
    return IdentityReport(name, max_abs, scale, tol, worst=worst, notes=notes,
                          data={"skipped": skipped})


def check_proportional(f: Expr, g: Expr, plan: SamplePlan, tol=TOL_EIGEN,
                       name="proportionality") -> IdentityReport:
    """Pointwise f/g must be constant; reports mean ratio and dispersion."""
    syms = free_symbols(f) | free_symbols(g)
    pts = plan.points(syms - {"theta", "psi", "phi", "r"})
    vals, kept, skipped = _eval_many([f, g], pts)
    fv, gv = vals
    _guard_skips(skipped, plan.count, name)
    gscale = max((abs(v) for v in gv), default=0.0)
    if gscale < 1e-20:
        raise PlanDegenerate(f"{name}: proportionality undefined (divisor ~ 0)")
    usable = [(a, b) for a, b in zip(fv, gv) if abs(b) > 1e-6 * gscale]
    if len(usable) < 0.8 * len(gv):
        raise PlanDegenerate(
            f"{name}: divisor vanishes at {len(gv)-len(usable)}/{len(gv)} points")
    ratios = [a / b for a, b in usable]
    mean = sum(ratios) / len(ratios)
    var = sum(abs(r - mean) ** 2 for r in ratios) / len(ratios)
    stddev = math.sqrt(var)
    rep = IdentityReport(name, stddev, max(abs(mean), SCALE_FLOOR), tol,
                         notes=f"ratio={mean:.12g}",
                         data={"ratio": mean, "skipped": skipped})
    return rep


def measure_constant(f: Expr, plan: SamplePlan, tol=1e-9,
                     name="constant") -> IdentityReport:
    """Verify f is a constant function; the measured value goes in `data`."""
    syms = free_symbols(f)
    pts = plan.points(syms - {"theta", "psi", "phi", "r"})
    vals, kept, skipped = _eval_many([f], pts)
    _guard_skips(skipped, plan.count, name)
    fv = vals[0]
    mean = sum(fv) / len(fv)
    stddev = math.sqrt(sum(abs(v - mean) ** 2 for v in fv) / len(fv))
    # absolute dispersion criterion: a constant is constant at any magnitude
    rep = IdentityReport(name, stddev, 1.0, tol,
                         notes=f"value={mean:.12g}",
                         data={"value": mean, "skipped": skipped})
    return rep


# ---------------------------------------------------------------------------
# Operator comparison
# ---------------------------------------------------------------------------

def default_battery(param: str = "q") -> list:
    """Probe functions exercising every derivative slot, the periodic
    coordinate, the radial direction and the shift parameter (polynomially
    and exponentially, so mismatched shifts cannot hide)."""
    p = Sym(param)
    half = Const(Fraction(1, 2))
    third = Const(Fraction(1, 3))
    return [
        Add(Mul(Sin(THETA), Cos(PSI)), Mul(Cos(THETA), Sin(PSI))),
        Add(Mul(Pow(R, 2), Sin(PSI), Cos(THETA)), Mul(R, Cos(PSI), Sin(THETA))),
        Mul(Exp(Mul(IMAG, PHI)), Sin(THETA), Sin(PSI)),
        Mul(Add(ONE, Mul(half, p), Mul(third, Pow(p, 2))), Sin(PSI), Cos(THETA)),
        Mul(Exp(Mul(Const(Fraction(-1, 3)), Pow(R, 2))), R, Sin(THETA), Sin(PSI)),
        Mul(Exp(Add(Mul(Const(GaussRat(Fraction(1, 3), Fraction(1, 3))), p),
                    Mul(Const(Fraction(-1, 3)), Pow(R, 2)))), Sin(PSI), Cos(THETA)),
    ]


def op_equal(a, b, plan: SamplePlan, testfns=None, tol=TOL_OPERATOR,
             name="operator-equality") -> IdentityReport:
    """Compare two operators by applying their difference to a probe battery.

    The residual of (a-b)f is scaled per probe by the larger of |af| and
    |bf| over the plan; the reported relative residual is the worst over
    probes.  If every probe is annihilated by both operators the comparison
    is inconclusive, unless both normalize to the structural zero operator.
    """
    param = getattr(a, "param", None) or getattr(b, "param", None) or "q"
    fns = list(testfns) if testfns is not None else default_battery(param)
    d = a - b
    worst_rel, worst_info, max_abs_all, scale_all = -1.0, None, 0.0, 0.0
    degenerate = True
    for idx, fn in enumerate(fns):
        rd = d.apply(fn)
        ra = a.apply(fn)
        rb = b.apply(fn)
        syms = free_symbols(rd) | free_symbols(ra) | free_symbols(rb)
        pts = plan.points(syms - {"theta", "psi", "phi", "r"})
        vals, kept, skipped = _eval_many([rd, ra, rb], pts)
        _guard_skips(skipped, plan.count, f"{name}[probe {idx}]")
        dv, av, bv = vals
        scale = max(max((abs(v) for v in av), default=0.0),
                    max((abs(v) for v in bv), default=0.0))
        max_abs, wpt = 0.0, None
        for bnd, v in zip(kept, dv):
            if abs(v) > max_abs:
                max_abs, wpt = abs(v), {k: round(x, 6) for k, x in bnd.items()}
        if scale >= 1e-20:
            degenerate = False
            rel = max_abs / max(scale, SCALE_FLOOR)
            if rel > worst_rel:
                worst_rel = rel
                worst_info = {"probe": idx, "point": wpt}
            max_abs_all = max(max_abs_all, max_abs)
            scale_all = max(scale_all, scale)
    if degenerate:
        if a.is_zero() and b.is_zero():
            return IdentityReport(name, 0.0, 1.0, tol,
                                  notes="both operators structurally zero")
        raise DegenerateBattery(f"{name}: inconclusive: degenerate test battery")
    # reconstruct a report whose relative residual equals the worst per-probe one
    return IdentityReport(name, worst_rel, 1.0, tol, worst=worst_info,
                          data={"max_abs": max_abs_all, "scale": scale_all})


def check_op_zero(op, plan: SamplePlan, reference_ops=(), testfns=None,
                  tol=TOL_OPERATOR, name="operator-zero") -> IdentityReport:
    """Check an operator is zero, scaling residuals by reference operators.

    Convenience wrapper over op_equal for commutator-style identities where
    the natural scale comes from the operators being commuted.
    """
    param = getattr(op, "param", None)
    if param is None:
        for r in reference_ops:
            param = getattr(r, "param", None)
            if param:
                break
    fns = list(testfns) if testfns is not None else default_battery(param or "q")
    worst_rel, worst_info = -1.0, None
    degenerate = True
    for idx, fn in enumerate(fns):
        exprs = [op.apply(fn)] + [r.apply(fn) for r in reference_ops]
        syms = set()
        for e in exprs:
            syms |= free_symbols(e)
        pts = plan.points(syms - {"theta", "psi", "phi", "r"})
        vals, kept, skipped = _eval_many(exprs, pts)
        _guard_skips(skipped, plan.count, f"{name}[probe {idx}]")
        dv = vals[0]
        scale = 0.0
        for rv in vals[1:]:
            scale = max(scale, max((abs(v) for v in rv), default=0.0))
        if not reference_ops:
            scale = 1.0
        max_abs, wpt = 0.0, None
        for bnd, v in zip(kept, dv):
            if abs(v) > max_abs:
                max_abs, wpt = abs(v), {k: round(x, 6) for k, x in bnd.items()}
        if scale >= 1e-20:
            degenerate = False
            rel = max_abs / max(scale, SCALE_FLOOR)
            if rel > worst_rel:
                worst_rel, worst_info = rel, {"probe": idx, "point": wpt}
    if degenerate:
        if op.is_zero():
            return IdentityReport(name, 0.0, 1.0, tol,
                                  notes="operator structurally zero")
        raise DegenerateBattery(f"{name}: inconclusive: degenerate test battery")
    return IdentityReport(name, worst_rel, 1.0, tol, worst=worst_info)


def run_suite(config=None):
    """Run every registered check plus fault-injection controls.

    Thin delegation: the registry lives in `shapeinv.suite` so that this
    module stays free of physics imports.
    """
    from .suite import run_suite as _run
    return _run(config)
