"""Four equal-frequency oscillators reduced to a three-coordinate chart.

The cartesian ladder operators of four oscillators are rewritten in the
chart (r, psi, theta, phi) induced by the two-angle sphere parametrization,
combined into phi-diagonal pairs, and Fourier-reduced over phi to a family
of operators labelled by the integer lattice parameter m.  The module
builds:

* the four cartesian gradients and ladder operators (exact, symbolic
  frequency), with the dual-basis identity d/dx_i (x_j) = delta_ij as the
  independent anchor for every coefficient;
* the phi-full lowering/raising combos, their closed transcriptions, and
  the reduced (shift-operator) family;
* the full and reduced Hamiltonians, derived from the gradient Laplacian
  and cross-checked against closed transcriptions, the ladder
  factorization and the four intertwining relations (uniformly in m);
* joint eigenfunctions both as operator chains (raising chain to the
  m = n corner, then paired descent with the exact normalization product)
  and as finite closed-form sums, plus the scalar spectrum.

Transcription policy: derived operators are the source of truth; each
closed transcription either matches structurally or is kept verbatim and
reported as a deviation isolated to the offending term (see the decisions
ledger).  The frequency stays symbolic in operators and is pinned to an
exact rational value for eigenfunction work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .rationals import GaussRat
from .symx import (
    Add,
    Const,
    Cos,
    Expr,
    Exp,
    Hermite,
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
    ZERO,
    canonical,
    is_zero_expr,
    trig_to_exp,
)
from .opalg import (
    DiffOp,
    OpTerm,
    apply_canonical,
    commutator,
    fourier_reduce,
)
from . import su2
from .verify import (
    IdentityReport,
    PlanDegenerate,
    SamplePlan,
    check_op_zero,
    check_proportional,
    check_zero,
    op_equal,
)

OMEGA = Sym("omega")

_P = DiffOp.from_expr
_HALF = Fraction(1, 2)
_INV_SQRT2 = Pow(Const(2), Fraction(-1, 2))

# derivative multi-indices in the (theta, psi, phi, r) slot order
_NOD = (0, 0, 0, 0)
_DTH = (1, 0, 0, 0)
_DPS = (0, 1, 0, 0)
_DPH = (0, 0, 1, 0)
_DR = (0, 0, 0, 1)


def _as_omega(omega) -> Expr:
    """Symbolic frequency by default; exact positive rational when pinned."""
    if omega is None:
        return OMEGA
    if isinstance(omega, Expr):
        return omega
    w = Fraction(omega)
    if w <= 0:
        raise ValueError(f"frequency must be positive, got {omega!r}")
    return Const(w)


def _sqrt_w_half(w: Expr) -> Expr:
    return Pow(Mul(Const(_HALF), w), Fraction(1, 2))


# ---------------------------------------------------------------------------
# Cartesian layer: coordinates, gradients, ladder operators
# ---------------------------------------------------------------------------

def cartesian_coords() -> tuple:
    """The four cartesian coordinates as functions on the chart."""
    spst = Mul(Sin(PSI), Sin(THETA))
    return (
        Mul(Const(-1), R, spst, Sin(PHI)),
        Mul(R, spst, Cos(PHI)),
        Mul(R, Sin(PSI), Cos(THETA)),
        Mul(R, Cos(PSI)),
    )


@lru_cache(maxsize=None)
def cartesian_gradients() -> tuple:
    """d/dx_i as first-order operators on the chart.

    Anchored by gradient_duality_residuals(): d/dx_i applied to x_j gives
    exactly delta_ij, which pins every coefficient below.
    """
    rinv = Pow(R, Fraction(-1))
    sp, cp = Sin(PSI), Cos(PSI)
    st, ct = Sin(THETA), Cos(THETA)
    sf, cf = Sin(PHI), Cos(PHI)
    sp_inv = Pow(sp, Fraction(-1))
    st_inv = Pow(st, Fraction(-1))

    def grad(c_r, c_ps, c_th=None, c_ph=None):
        terms = [OpTerm(c_r, _DR), OpTerm(c_ps, _DPS)]
        if c_th is not None:
            terms.append(OpTerm(c_th, _DTH))
        if c_ph is not None:
            terms.append(OpTerm(c_ph, _DPH))
        return DiffOp(tuple(terms)).normalized()

    d1 = grad(Mul(Const(-1), sp, st, sf),
              Mul(Const(-1), rinv, cp, st, sf),
              Mul(Const(-1), rinv, ct, sf, sp_inv),
              Mul(Const(-1), rinv, cf, sp_inv, st_inv))
    d2 = grad(Mul(sp, st, cf),
              Mul(rinv, cp, st, cf),
              Mul(rinv, ct, cf, sp_inv),
              Mul(Const(-1), rinv, sf, sp_inv, st_inv))
    d3 = grad(Mul(sp, ct),
              Mul(rinv, cp, ct),
              Mul(Const(-1), rinv, st, sp_inv))
    d4 = grad(cp, Mul(Const(-1), rinv, sp))
    return (d1, d2, d3, d4)


def gradient_duality_residuals() -> list:
    """Canonical residuals of d/dx_i (x_j) - delta_ij over all 16 pairs."""
    xs = cartesian_coords()
    out = []
    for i, d in enumerate(cartesian_gradients()):
        for j, x in enumerate(xs):
            delta = ONE if i == j else ZERO
            res = canonical(Add(d.apply(x), Mul(Const(-1), delta)))
            out.append((f"d/dx{i + 1}(x{j + 1})", res))
    return out


class CartesianSet(NamedTuple):
    a1: DiffOp
    a1d: DiffOp
    a2: DiffOp
    a2d: DiffOp
    a3: DiffOp
    a3d: DiffOp
    a4: DiffOp
    a4d: DiffOp


@lru_cache(maxsize=None)
def cartesian_ladders(omega=None) -> CartesianSet:
    """a_i = sqrt(w/2)(x_i + (1/w) d/dx_i) and the adjoints (gradient sign
    flipped); coefficients come from the verified gradients, not from any
    transcription."""
    w = _as_omega(omega)
    pref = _sqrt_w_half(w)
    grad_scale = Mul(pref, Pow(w, Fraction(-1)))
    ops = []
    for x, d in zip(cartesian_coords(), cartesian_gradients()):
        mul_part = _P(Mul(pref, x))
        grad_part = _P(grad_scale) @ d
        ops.append((mul_part + grad_part).normalized())
        ops.append((mul_part - grad_part).normalized())
    a1, a1d, a2, a2d, a3, a3d, a4, a4d = ops
    return CartesianSet(a1, a1d, a2, a2d, a3, a3d, a4, a4d)


def cartesian_a1_printed(omega=None, dagger=False) -> DiffOp:
    """Verbatim transcription of the first cartesian ladder operator: its
    psi-derivative slot carries cos(phi) where the derived gradient has
    sin(phi) (the other three slots agree)."""
    w = _as_omega(omega)
    pref = _sqrt_w_half(w)
    gsign = Fraction(-1 if dagger else 1)
    gs = Mul(Const(gsign), pref, Pow(w, Fraction(-1)))
    rinv = Pow(R, Fraction(-1))
    sp, cp, st, ct = Sin(PSI), Cos(PSI), Sin(THETA), Cos(THETA)
    sf, cf = Sin(PHI), Cos(PHI)
    x1 = Mul(Const(-1), R, sp, st, sf)
    terms = (
        OpTerm(Mul(pref, x1), _NOD),
        OpTerm(Mul(gs, Const(-1), sp, st, sf), _DR),
        OpTerm(Mul(gs, Const(-1), rinv, cp, st, cf), _DPS),   # cos(phi) slot
        OpTerm(Mul(gs, Const(-1), rinv, ct, sf, Pow(sp, Fraction(-1))), _DTH),
        OpTerm(Mul(gs, Const(-1), rinv, cf, Pow(sp, Fraction(-1)),
                   Pow(st, Fraction(-1))), _DPH),
    )
    return DiffOp(terms).normalized()


# ---------------------------------------------------------------------------
# Phi-diagonal combos and their closed transcriptions
# ---------------------------------------------------------------------------

class ComboSet(NamedTuple):
    A1: DiffOp
    A1d: DiffOp
    A2: DiffOp
    A2d: DiffOp


def _phi_exponential(op: DiffOp) -> DiffOp:
    """Rewrite sin/cos of the periodic angle into exponentials so that the
    phi-diagonal structure is visible to the canonical form."""
    return DiffOp(tuple(OpTerm(trig_to_exp(t.coeff, "phi"), t.derivs, t.shift)
                        for t in op.terms), op.param).normalized()


@lru_cache(maxsize=None)
def build_combos(omega=None) -> ComboSet:
    """A1 = (a1 + i a2)/sqrt2, A2 = (a1 - i a2)/sqrt2 and the adjoints."""
    c = cartesian_ladders(omega)
    s = _P(_INV_SQRT2)
    i_ = _P(IMAG)
    A1 = _phi_exponential(s @ (c.a1 + (i_ @ c.a2)))
    A1d = _phi_exponential(s @ (c.a1d - (i_ @ c.a2d)))
    A2 = _phi_exponential(s @ (c.a1 - (i_ @ c.a2)))
    A2d = _phi_exponential(s @ (c.a1d + (i_ @ c.a2d)))
    return ComboSet(A1, A1d, A2, A2d)


# Sign pattern of one combo against the shared skeleton
#   (pre * i/sqrt2) sqrt(w/2) e^{eps*i*phi} [ r sin(psi)sin(theta)
#     + g (1/w)( sin(psi)sin(theta) d_r + ps (1/r)cos(psi)sin(theta) d_psi
#                + (1/r)(cos(theta)/sin(psi)) d_theta
#                + ph (1/r)(i/(sin(psi)sin(theta))) d_phi ) ]
# as (pre, eps, g, ps, ph).  The phi-full printed table differs from the
# derived one in two places: the first lowering combo's psi slot sign, and
# the whole derivative-group sign of the first raising combo (which, as
# printed, makes it collapse onto the second lowering combo).  The reduced
# printed table inherits only the psi-slot flip; the raising combo's group
# sign is printed correctly there.
_COMBO_DERIVED = {
    "A1": (+1, +1, +1, +1, +1),
    "A1d": (-1, -1, -1, +1, -1),
    "A2": (-1, -1, +1, +1, -1),
    "A2d": (+1, +1, -1, +1, +1),
}
_COMBO_PRINTED_FULL = {
    "A1": (+1, +1, +1, -1, +1),
    "A1d": (-1, -1, +1, +1, -1),
    "A2": (-1, -1, +1, +1, -1),
    "A2d": (+1, +1, -1, +1, +1),
}
_COMBO_PRINTED_REDUCED = {
    "A1": (+1, +1, +1, -1, +1),
    "A1d": (-1, -1, -1, +1, -1),
    "A2": (-1, -1, +1, +1, -1),
    "A2d": (+1, +1, -1, +1, +1),
}


def _combo_parts(name: str, w: Expr, table: dict):
    pre, eps, g, ps, ph = table[name]
    pref = Mul(Const(GaussRat(0, Fraction(pre))), _INV_SQRT2, _sqrt_w_half(w))
    gw = Mul(Const(Fraction(g)), Pow(w, Fraction(-1)))
    rinv = Pow(R, Fraction(-1))
    sp, cp, st, ct = Sin(PSI), Cos(PSI), Sin(THETA), Cos(THETA)
    slots = {
        _NOD: Mul(pref, R, sp, st),
        _DR: Mul(pref, gw, sp, st),
        _DPS: Mul(pref, gw, Const(Fraction(ps)), rinv, cp, st),
        _DTH: Mul(pref, gw, rinv, ct, Pow(sp, Fraction(-1))),
    }
    phi_slot = Mul(pref, gw, Const(GaussRat(0, Fraction(ph))), rinv,
                   Pow(sp, Fraction(-1)), Pow(st, Fraction(-1)))
    return eps, slots, phi_slot


def combo_reference(name: str, omega=None, printed: bool = False) -> DiffOp:
    """Closed transcription of one phi-full combo (printed or corrected)."""
    w = _as_omega(omega)
    eps, slots, phi_slot = _combo_parts(
        name, w, _COMBO_PRINTED_FULL if printed else _COMBO_DERIVED)
    phase = Exp(Mul(Const(GaussRat(0, Fraction(eps))), PHI))
    terms = [OpTerm(Mul(phase, c), d) for d, c in slots.items()]
    terms.append(OpTerm(Mul(phase, phi_slot), _DPH))
    return DiffOp(tuple(terms)).normalized()


def reduced_reference(name: str, omega=None, printed: bool = False) -> DiffOp:
    """Closed transcription of one reduced combo as a shift operator.

    The printed concrete operators carry the incoming label m; on the
    lattice that is the parameter minus the shift, so the scalar slot reads
    -ph*(m_param - eps)/(w r sin(psi)sin(theta)) times the group sign."""
    w = _as_omega(omega)
    eps, slots, phi_slot = _combo_parts(
        name, w, _COMBO_PRINTED_REDUCED if printed else _COMBO_DERIVED)
    lat = Add(Sym("m"), Const(-eps))
    terms = [OpTerm(c, d, eps) for d, c in slots.items()]
    terms.append(OpTerm(Mul(phi_slot, IMAG, lat), _NOD, eps))
    return DiffOp(tuple(terms), "m").normalized()


class OscillatorSet(NamedTuple):
    a3: DiffOp
    a3d: DiffOp
    a4: DiffOp
    a4d: DiffOp
    A1: DiffOp
    A1d: DiffOp
    A2: DiffOp
    A2d: DiffOp


@lru_cache(maxsize=None)
def build_oscillators(omega=None) -> OscillatorSet:
    """The reduced operator family on the m-lattice (symbolic m).

    a3, a4 act within one lattice site; A1, A2d shift m up by one, A2, A1d
    shift it down by one.  All eight are Fourier reductions of the derived
    phi-full operators."""
    cart = cartesian_ladders(omega)
    comb = build_combos(omega)
    red = lambda op: fourier_reduce(op, "m")
    return OscillatorSet(red(cart.a3), red(cart.a3d), red(cart.a4),
                         red(cart.a4d), red(comb.A1), red(comb.A1d),
                         red(comb.A2), red(comb.A2d))


# ---------------------------------------------------------------------------
# Canonical commutators
# ---------------------------------------------------------------------------

def commutator_residuals(omega=None, reduced: bool = True) -> list:
    """All 28 canonical-commutator residuals of the 8-operator set.

    Returns (label, residual DiffOp, reference ops); every residual must be
    the zero operator ([low_i, up_j] = delta_ij, same-kind pairs commute).
    """
    if reduced:
        s = build_oscillators(omega)
        lows = [("A1", s.A1), ("A2", s.A2), ("a3", s.a3), ("a4", s.a4)]
        ups = [("A1d", s.A1d), ("A2d", s.A2d), ("a3d", s.a3d), ("a4d", s.a4d)]
        ident = DiffOp.identity("m")
    else:
        c = build_combos(omega)
        cart = cartesian_ladders(omega)
        lows = [("A1", c.A1), ("A2", c.A2), ("a3", cart.a3), ("a4", cart.a4)]
        ups = [("A1d", c.A1d), ("A2d", c.A2d), ("a3d", cart.a3d),
               ("a4d", cart.a4d)]
        ident = DiffOp.identity()
    out = []
    for i, (ln, lo) in enumerate(lows):
        for j, (un, up) in enumerate(ups):
            res = commutator(lo, up)
            if i == j:
                res = res - ident
            out.append((f"[{ln},{un}]", res, (lo, up)))
    for group in (lows, ups):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                (an, a), (bn, b) = group[i], group[j]
                out.append((f"[{an},{bn}]", commutator(a, b), (a, b)))
    return out


def verify_canonical_commutators(plan: SamplePlan = None, omega=None,
                                 reduced: bool = True, testfns=None,
                                 tol: float = 1e-10) -> IdentityReport:
    """Worst-case report over the full 28-commutator battery."""
    plan = plan or SamplePlan(seed=31, count=24)
    worst = None
    failures = []
    for label, res, refs in commutator_residuals(omega, reduced):
        rep = check_op_zero(res, plan, reference_ops=refs, tol=tol,
                            testfns=testfns, name=f"commutator {label}")
        if worst is None or rep.relative > worst.relative:
            worst = rep
        if not rep.passed:
            failures.append(label)
    kind = "reduced" if reduced else "phi-full"
    return IdentityReport(
        f"canonical commutators ({kind})", worst.max_abs, worst.scale, tol,
        worst=worst.worst, notes="; ".join(failures) if failures else "",
        data={"pairs": 28, "worst_pair": worst.name})


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def _angular_block(reduced: bool = False) -> DiffOp:
    """d_psi^2 + 2 cot(psi) d_psi + (1/sin^2 psi)(d_theta^2
    + cot(theta) d_theta + X): X = (1/sin^2 theta) d_phi^2 in the full
    chart, X = -m^2/sin^2 theta on the lattice."""
    sp2_inv = Pow(Sin(PSI), Fraction(-2))
    cot_p = Mul(Cos(PSI), Pow(Sin(PSI), Fraction(-1)))
    cot_t = Mul(Cos(THETA), Pow(Sin(THETA), Fraction(-1)))
    terms = [
        OpTerm(ONE, (0, 2, 0, 0)),
        OpTerm(Mul(Const(2), cot_p), _DPS),
        OpTerm(sp2_inv, (2, 0, 0, 0)),
        OpTerm(Mul(sp2_inv, cot_t), _DTH),
    ]
    st2_inv = Pow(Sin(THETA), Fraction(-2))
    if reduced:
        terms.append(OpTerm(Mul(Const(-1), sp2_inv, st2_inv,
                                Pow(Sym("m"), 2)), _NOD))
        return DiffOp(tuple(terms), "m").normalized()
    terms.append(OpTerm(Mul(sp2_inv, st2_inv), (0, 0, 2, 0)))
    return DiffOp(tuple(terms)).normalized()


def angular_matches_invariant() -> bool:
    """The angular block is minus the two-angle quadratic invariant."""
    return _angular_block().same_operator(-1 * su2.casimir_reference())


@lru_cache(maxsize=None)
def build_H4(omega=None) -> DiffOp:
    """Derived full Hamiltonian: -(1/2) sum_i (d/dx_i)^2 + w^2 r^2/2."""
    w = _as_omega(omega)
    ds = cartesian_gradients()
    lap = ds[0] @ ds[0]
    for d in ds[1:]:
        lap = lap + (d @ d)
    pot = _P(Mul(Const(_HALF), Pow(w, 2), Pow(R, 2)))
    return (Fraction(-1, 2) * lap + pot).normalized()


def _radial_block(power: int, param=None) -> DiffOp:
    """(1/r^p) d_r r^p d_r for p = 3 (full chart) or p = 2 (after the
    half-power radial weight)."""
    return (_P(Pow(R, Fraction(-power)), param) @ DiffOp.partial("r", param=param)
            @ _P(Pow(R, power), param) @ DiffOp.partial("r", param=param)).normalized()


def h4_reference(omega=None, printed: bool = False) -> DiffOp:
    """Closed transcription of the full Hamiltonian.

    printed=True keeps the angular block's 1/r prefactor as transcribed;
    the corrected form (matching the cartesian Laplacian) carries 1/r^2."""
    w = _as_omega(omega)
    rpow = Pow(R, Fraction(-1 if printed else -2))
    op = (Fraction(-1, 2) * _radial_block(3)
          + Fraction(-1, 2) * (_P(rpow) @ _angular_block())
          + _P(Mul(Const(_HALF), Pow(w, 2), Pow(R, 2))))
    return op.normalized()


@lru_cache(maxsize=None)
def build_Hm(omega=None) -> DiffOp:
    """Reduced Hamiltonian on the m-lattice (Fourier reduction of the
    derived full Hamiltonian; shift-free, centrifugal term m^2)."""
    return fourier_reduce(build_H4(omega), "m")


def hm_reference(omega=None) -> DiffOp:
    """Closed transcription of the reduced Hamiltonian (correct as
    transcribed: the angular prefactor is 1/r^2 here)."""
    w = _as_omega(omega)
    op = (Fraction(-1, 2) * _radial_block(3, "m")
          + Fraction(-1, 2) * (_P(Pow(R, Fraction(-2)), "m")
                               @ _angular_block(reduced=True))
          + _P(Mul(Const(_HALF), Pow(w, 2), Pow(R, 2)), "m"))
    return op.normalized()


def hm_tilde_reference(omega=None) -> DiffOp:
    """Closed transcription of the half-power-weighted reduced Hamiltonian,
    including the +3/(8 r^2) residue of the radial similarity."""
    w = _as_omega(omega)
    op = (Fraction(-1, 2) * _radial_block(2, "m")
          + Fraction(-1, 2) * (_P(Pow(R, Fraction(-2)), "m")
                               @ _angular_block(reduced=True))
          + _P(Add(Mul(Const(_HALF), Pow(w, 2), Pow(R, 2)),
                   Mul(Const(Fraction(3, 8)), Pow(R, Fraction(-2)))), "m"))
    return op.normalized()


def radial_similarity_matches(omega=None) -> bool:
    """r^(1/2) Hm r^(-1/2) equals the weighted transcription exactly."""
    conj = su2.conjugate(build_Hm(omega), Pow(R, Fraction(1, 2)))
    return conj.same_operator(hm_tilde_reference(omega))


def angular_prefactor_deviation(omega=None) -> IdentityReport:
    """Reduce the as-printed full Hamiltonian and diff it against the
    reduced transcription: the difference must be exactly the angular block
    scaled by -(1/r - 1/r^2)/2, i.e. the deviation is confined to the
    angular prefactor."""
    printed_red = fourier_reduce(h4_reference(omega, printed=True), "m")
    diff = (printed_red - hm_reference(omega)).normalized()
    scale = Mul(Const(Fraction(-1, 2)),
                Add(Pow(R, Fraction(-1)), Mul(Const(-1), Pow(R, Fraction(-2)))))
    expected = (_P(scale, "m") @ _angular_block(reduced=True)).normalized()
    ok = diff.same_operator(expected) and not diff.is_zero()
    return IdentityReport(
        "angular prefactor deviation", 0.0 if ok else 1.0, 1.0, 1e-12,
        notes="the transcribed full Hamiltonian carries 1/r on the angular "
              "block where the cartesian Laplacian requires 1/r^2; the "
              "residual is confined to the angular derivatives and the "
              "centrifugal scalar",
        data={"offending_terms": [
            "(1/sin^2 psi) d_theta^2", "cot(theta)/sin^2 psi d_theta",
            "d_psi^2", "2 cot(psi) d_psi", "m^2/(sin^2 psi sin^2 theta)"]})


def verify_factorization(plan: SamplePlan = None, omega=None,
                         reduced: bool = True, drop_constant: bool = False,
                         testfns=None, tol: float = 1e-10) -> IdentityReport:
    """H equals w (A1d A1 + A2d A2 + a3d a3 + a4d a4 + 2), uniformly in m
    when reduced.  drop_constant removes the +2 (negative control)."""
    plan = plan or SamplePlan(seed=37, count=32)
    w = _as_omega(omega)
    zero_pt = 0 if drop_constant else 2
    if reduced:
        s = build_oscillators(omega)
        ident = DiffOp.identity("m")
        ham = build_Hm(omega)
        which = "reduced"
        number = (s.A1d @ s.A1) + (s.A2d @ s.A2) + (s.a3d @ s.a3) + (s.a4d @ s.a4)
    else:
        c = build_combos(omega)
        cart = cartesian_ladders(omega)
        ident = DiffOp.identity()
        ham = build_H4(omega)
        which = "phi-full"
        number = ((c.A1d @ c.A1) + (c.A2d @ c.A2) + (cart.a3d @ cart.a3)
                  + (cart.a4d @ cart.a4))
    fact = (_P(w, number.param) @ (number + Fraction(zero_pt) * ident)).normalized()
    name = f"ladder factorization ({which})"
    if drop_constant:
        name += " [zero-point dropped]"
    return op_equal(fact, ham, plan, testfns=testfns, tol=tol, name=name)


def factorization_matches(omega=None, reduced: bool = True) -> bool:
    """Structural form of the factorization identity."""
    w = _as_omega(omega)
    if reduced:
        s = build_oscillators(omega)
        number = (s.A1d @ s.A1) + (s.A2d @ s.A2) + (s.a3d @ s.a3) + (s.a4d @ s.a4)
        fact = _P(w, "m") @ (number + 2 * DiffOp.identity("m"))
        return fact.normalized().same_operator(build_Hm(omega))
    c = build_combos(omega)
    cart = cartesian_ladders(omega)
    number = ((c.A1d @ c.A1) + (c.A2d @ c.A2) + (cart.a3d @ cart.a3)
              + (cart.a4d @ cart.a4))
    fact = _P(w) @ (number + 2 * DiffOp.identity())
    return fact.normalized().same_operator(build_H4(omega))


# ---------------------------------------------------------------------------
# Intertwining (shape invariance on the m-lattice)
# ---------------------------------------------------------------------------

_INTERTWINE_SIGNS = (("A1d", +1), ("A2d", +1), ("A1", -1), ("A2", -1))


def intertwining_residuals(omega=None, oscillators: OscillatorSet = None) -> list:
    """[H, X] -+ w X for the four ladder operators, uniformly in m.

    Raising combos intertwine with +w, lowering with -w.  The shift
    bookkeeping realizes the per-argument form: composing H after a shift-k
    operator evaluates H at the shifted label automatically."""
    ham = build_Hm(omega)
    w = _as_omega(omega)
    s = oscillators if oscillators is not None else build_oscillators(omega)
    out = []
    for name, sign in _INTERTWINE_SIGNS:
        x = getattr(s, name)
        res = commutator(ham, x) - (Fraction(sign) * (_P(w, "m") @ x))
        out.append((name, res, (ham, x)))
    return out


def verify_intertwining(plan: SamplePlan = None, omega=None,
                        oscillators: OscillatorSet = None, testfns=None,
                        tol: float = 1e-10) -> IdentityReport:
    """Single report over the four intertwining relations (worst case)."""
    plan = plan or SamplePlan(seed=41, count=32)
    worst, rels = None, {}
    for name, res, refs in intertwining_residuals(omega, oscillators):
        rep = check_op_zero(res, plan, reference_ops=refs, tol=tol,
                            testfns=testfns, name=f"intertwining {name}")
        rels[name] = rep.relative
        if worst is None or rep.relative > worst.relative:
            worst = rep
    return IdentityReport("intertwining relations", worst.max_abs, worst.scale,
                          tol, worst=worst.worst,
                          data={"relations": rels, "worst": worst.name})


def intertwining_fault_pattern(plan: SamplePlan = None, omega=None,
                               testfns=None, tol: float = 1e-10) -> list:
    """Pass pattern of the four relations when the first cartesian lowering
    operator has its gradient sign flipped (its adjoint left intact).

    The fault corrupts both reduced lowering combos but neither raising
    one, so exactly the two lowering relations must break."""
    plan = plan or SamplePlan(seed=41, count=32)
    w = _as_omega(omega)
    pref = _sqrt_w_half(w)
    grad_scale = Mul(pref, Pow(w, Fraction(-1)))
    x1 = cartesian_coords()[0]
    d1 = cartesian_gradients()[0]
    a1_bad = (_P(Mul(pref, x1)) - (_P(grad_scale) @ d1)).normalized()
    cart = cartesian_ladders(omega)
    s = _P(_INV_SQRT2)
    i_ = _P(IMAG)
    A1_bad = fourier_reduce((s @ (a1_bad + (i_ @ cart.a2))).normalized(), "m")
    A2_bad = fourier_reduce((s @ (a1_bad - (i_ @ cart.a2))).normalized(), "m")
    good = build_oscillators(omega)
    faulty = good._replace(A1=A1_bad, A2=A2_bad)
    out = []
    for name, res, refs in intertwining_residuals(omega, faulty):
        rep = check_op_zero(res, plan, reference_ops=refs, tol=tol,
                            testfns=testfns, name=f"faulted intertwining {name}")
        out.append(rep.passed)
    return out


# ---------------------------------------------------------------------------
# Quantum numbers, spectrum, eigenfunctions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QNum3D:
    """Valid labels (n, m, n3, n4, w) of one reduced eigenfunction.

    n = n1 + n2 and m = n2 - n1 for the underlying pair occupation, so
    |m| <= n with n - m even; n3, n4 count the two single-oscillator
    factors; the frequency w is an exact positive rational."""
    n: int
    m: int
    n3: int = 0
    n4: int = 0
    omega: Fraction = Fraction(1)

    def __post_init__(self):
        if not all(isinstance(v, int) for v in (self.n, self.m, self.n3, self.n4)):
            raise ValueError(f"quantum numbers out of range: {self} (not integers)")
        if self.n < 0 or self.n3 < 0 or self.n4 < 0:
            raise ValueError(f"quantum numbers out of range: {self} (negative)")
        if abs(self.m) > self.n:
            raise ValueError(f"quantum numbers out of range: {self} (|m| > n)")
        if (self.n - self.m) % 2:
            raise ValueError(f"quantum numbers out of range: {self} (n - m odd)")
        w = Fraction(self.omega)
        if w <= 0:
            raise ValueError(f"quantum numbers out of range: {self} "
                             "(frequency must be positive)")
        object.__setattr__(self, "omega", w)

    @property
    def n1(self) -> int:
        return (self.n - self.m) // 2

    @property
    def n2(self) -> int:
        return (self.n + self.m) // 2

    def energy(self) -> Fraction:
        return (self.n + self.n3 + self.n4 + 2) * self.omega


def spectrum(qn: QNum3D) -> Fraction:
    """(n + n3 + n4 + 2) w, independent of the lattice label m."""
    return qn.energy()


def _gaussian(w: Fraction) -> Expr:
    return Exp(Mul(Const(Fraction(-1, 2) * w), Pow(R, 2)))


def _closed_sum(n1: int, n2: int, n3: int, n4: int, w: Fraction,
                phase: bool, hermite_scaled: bool = True) -> Expr:
    """The finite closed-form sum for the joint eigenfunction.

    sum_i (-1)^i i! C(n1,i) C(n2,i) u^(n-2i) with u = sqrt(w) r sin sin,
    times Hermite factors in sqrt(w) x3, sqrt(w) x4 and the Gaussian.
    hermite_scaled=False drops the sqrt(w) from the Hermite arguments (the
    frequency-blind variant; detectably wrong unless w = 1)."""
    n = n1 + n2
    sqw = Pow(Const(w), Fraction(1, 2))
    u = Mul(sqw, R, Sin(PSI), Sin(THETA))
    pieces = []
    for i in range(min(n1, n2) + 1):
        c = Fraction((-1) ** i * math.factorial(i)
                     * math.comb(n1, i) * math.comb(n2, i))
        k = n - 2 * i
        pieces.append(Const(c) if k == 0 else Mul(Const(c), Pow(u, Fraction(k))))
    body = pieces[0] if len(pieces) == 1 else Add(*pieces)
    hsc = sqw if hermite_scaled else ONE
    out = Mul(body,
              Hermite(n3, Mul(hsc, R, Sin(PSI), Cos(THETA))),
              Hermite(n4, Mul(hsc, R, Cos(PSI))),
              _gaussian(w))
    if phase:
        out = Mul(Exp(Mul(Const(GaussRat(0, Fraction(n2 - n1))), PHI)), out)
    return canonical(out)


def psi_closed(qn: QNum3D, reduced: bool = True) -> Expr:
    """Closed-form joint eigenfunction; reduced drops the e^{i m phi} phase
    (the reduced family lives on (r, theta, psi))."""
    return _closed_sum(qn.n1, qn.n2, qn.n3, qn.n4, qn.omega, phase=not reduced)


def psi_closed_printed(qn: QNum3D) -> Expr:
    """Verbatim transcription of the reduced closed form, kept as a
    negative control: the first Hermite argument lacks both the radius and
    the frequency, the Gaussian and second Hermite argument lack the
    frequency, and the sum carries u^(n+2i) in place of u^(n-2i).  It
    coincides with the corrected form only where the garbled terms are
    absent (n <= 1, w = 1, n3 = n4 = 0)."""
    n, n1, n2 = qn.n, qn.n1, qn.n2
    u = Mul(R, Sin(PSI), Sin(THETA))
    pieces = []
    for i in range(min(n1, n2) + 1):
        c = Fraction((-1) ** i * math.factorial(i)
                     * math.comb(n1, i) * math.comb(n2, i))
        k = n + 2 * i
        pieces.append(Const(c) if k == 0 else Mul(Const(c), Pow(u, Fraction(k))))
    body = pieces[0] if len(pieces) == 1 else Add(*pieces)
    return canonical(Mul(
        body,
        Hermite(qn.n3, Mul(Sin(PSI), Sin(THETA))),
        Hermite(qn.n4, Mul(R, Cos(PSI))),
        Exp(Mul(Const(Fraction(-1, 2)), Pow(R, 2)))))


@lru_cache(maxsize=None)
def psi_ladder(qn: QNum3D) -> Expr:
    """Eigenfunction by operator chains: raise to the m = n corner with the
    second raising combo, add the two single-oscillator factors, then step
    m down two at a time with the paired descent, dividing by the exact
    per-step normalization product."""
    w = qn.omega
    s = build_oscillators(w)
    f = _gaussian(w)
    for k in range(qn.n):
        f = apply_canonical(s.A2d.at_incoming(k), f)
    for _ in range(qn.n4):
        f = apply_canonical(s.a4d.at_incoming(0), f)
    for _ in range(qn.n3):
        f = apply_canonical(s.a3d.at_incoming(0), f)
    c_sq = Fraction(1)
    k = qn.n
    while k > qn.m:
        f = apply_canonical(s.A1d.at_incoming(k), f)
        f = apply_canonical(s.A2.at_incoming(k - 1), f)
        c_sq *= Fraction((qn.n + k) * (qn.n - k + 2), 4)
        k -= 2
    if c_sq != 1:
        f = canonical(Mul(Pow(Const(c_sq), Fraction(-1, 2)), f))
    return f


@lru_cache(maxsize=None)
def state_normalized(qn: QNum3D) -> Expr:
    """Ladder eigenfunction scaled so the one-step actions carry exactly
    the square-root occupation coefficients."""
    scale = (math.factorial(qn.n) * math.factorial(qn.n3)
             * math.factorial(qn.n4))
    if scale == 1:
        return psi_ladder(qn)
    return canonical(Mul(Pow(Const(Fraction(1, scale)), Fraction(1, 2)),
                         psi_ladder(qn)))


def c_squared(n: int, m: int) -> Fraction:
    """Square of the descent normalization: the product of the measured
    per-step pair coefficients (n+k)(n-k+2)/4 over k = m+2, m+4, ..., n."""
    prod = Fraction(1)
    for k in range(m + 2, n + 1, 2):
        prod *= Fraction((n + k) * (n - k + 2), 4)
    return prod


def c_squared_printed(n: int, m: int) -> Fraction:
    """Square of the transcribed closed form
    2^(-(n-m)/2) sqrt((n-m)!! * 2n(2n-2)...(n+m+2))."""
    dd = 1
    for j in range(2, n - m + 1, 2):
        dd *= j
    tail = 1
    for j in range(n + m + 2, 2 * n + 1, 2):
        tail *= j
    return Fraction(dd * tail, 2 ** (n - m))


# ---------------------------------------------------------------------------
# Ladder actions, pair ladders, eigen checks
# ---------------------------------------------------------------------------

# op name -> (dn, dm, dn3, dn4, squared coefficient); a move is invalid
# exactly when the squared coefficient vanishes.
_ACTIONS = {
    "A1d": (+1, -1, 0, 0, lambda qn: qn.n1 + 1),
    "A2d": (+1, +1, 0, 0, lambda qn: qn.n2 + 1),
    "A1": (-1, +1, 0, 0, lambda qn: qn.n1),
    "A2": (-1, -1, 0, 0, lambda qn: qn.n2),
    "a3d": (0, 0, +1, 0, lambda qn: qn.n3 + 1),
    "a3": (0, 0, -1, 0, lambda qn: qn.n3),
    "a4d": (0, 0, 0, +1, lambda qn: qn.n4 + 1),
    "a4": (0, 0, 0, -1, lambda qn: qn.n4),
}


def ladder_coefficient(kind: str, qn: QNum3D) -> float:
    """Positive square-root coefficient of one ladder step (0 at an edge)."""
    return math.sqrt(_ACTIONS[kind][4](qn))


def verify_ladder_actions(n_max: int = 3, plan: SamplePlan = None,
                          omega=1, tol: float = 1e-8,
                          radial_states=((0, 0), (1, 0), (0, 1))) -> IdentityReport:
    """One aggregated report over every single-step action on the grid.

    Valid moves must land on the target state with the square-root
    occupation coefficient; edge moves must annihilate.  Any nonzero
    coefficient attached to an invalid target is reported as an error."""
    plan = plan or SamplePlan(seed=47, count=24)
    s = build_oscillators(omega)
    w = Fraction(omega)
    worst_rel, worst_name, checked, edges = 0.0, "", 0, 0
    notes = []
    for n in range(n_max + 1):
        for m in range(-n, n + 1, 2):
            for n3, n4 in radial_states:
                qn = QNum3D(n, m, n3, n4, w)
                src = state_normalized(qn)
                for kind, (dn, dm, d3, d4, sq) in _ACTIONS.items():
                    op = getattr(s, kind).at_incoming(m)
                    moved = apply_canonical(op, src)
                    coeff_sq = sq(qn)
                    tn, tm = n + dn, m + dm
                    valid = (tn >= abs(tm) and tn >= 0
                             and n3 + d3 >= 0 and n4 + d4 >= 0)
                    if coeff_sq == 0 or not valid:
                        if coeff_sq != 0:
                            return IdentityReport(
                                "ladder actions", 1.0, 1.0, tol,
                                notes=f"zero target with nonzero coefficient "
                                      f"({kind} at {qn})")
                        rep = check_zero(moved, plan, reference=[src],
                                         tol=tol, name=f"edge {kind} {qn}")
                        edges += 1
                    else:
                        tgt = state_normalized(QNum3D(tn, tm, n3 + d3,
                                                      n4 + d4, w))
                        rep = check_proportional(moved, tgt, plan, tol=tol,
                                                 name=f"{kind} on {qn}")
                        ratio = rep.data.get("ratio")
                        expected = math.sqrt(coeff_sq)
                        dev = abs(ratio - expected) / expected
                        rep = IdentityReport(rep.name, max(rep.relative, dev),
                                             1.0, tol, data=rep.data)
                    checked += 1
                    if rep.relative > worst_rel:
                        worst_rel, worst_name = rep.relative, rep.name
                    if not rep.passed:
                        notes.append(rep.name)
    return IdentityReport("ladder actions", worst_rel, 1.0, tol,
                          notes="; ".join(notes),
                          data={"steps_checked": checked,
                                "edge_annihilations": edges,
                                "worst": worst_name})


def pair_minus(omega=None) -> DiffOp:
    """Paired descent: second lowering after first raising (m -> m - 2)."""
    s = build_oscillators(omega)
    return (s.A2 @ s.A1d).normalized()


def pair_plus(omega=None) -> DiffOp:
    """Paired ascent: second raising after first lowering (m -> m + 2)."""
    s = build_oscillators(omega)
    return (s.A2d @ s.A1).normalized()


def pair_energy(n: int, m: int) -> Fraction:
    """Scalar of the pair ladder products: (n + m)(n - m + 2)/4."""
    return Fraction((n + m) * (n - m + 2), 4)


def verify_pair_eigen(qn: QNum3D, plan: SamplePlan = None,
                      tol: float = 1e-8) -> list:
    """Reports for plus-after-minus on the state and minus-after-plus on
    the state two sites down; both carry the same scalar."""
    plan = plan or SamplePlan(seed=53, count=24)
    w = qn.omega
    lam = pair_energy(qn.n, qn.m)
    state = state_normalized(qn)
    out = []
    up_down = (pair_plus(w) @ pair_minus(w)).at_incoming(qn.m)
    res = canonical(Add(apply_canonical(up_down, state),
                        Mul(Const(-lam), state)))
    ref = Mul(Const(lam), state) if lam else state
    out.append(check_zero(res, plan, reference=[ref], tol=tol,
                          name=f"pair plus-after-minus {qn}"))
    if qn.m - 2 >= -qn.n:
        low = QNum3D(qn.n, qn.m - 2, qn.n3, qn.n4, w)
        state_low = state_normalized(low)
        down_up = (pair_minus(w) @ pair_plus(w)).at_incoming(qn.m - 2)
        res = canonical(Add(apply_canonical(down_up, state_low),
                            Mul(Const(-lam), state_low)))
        ref = Mul(Const(lam), state_low) if lam else state_low
        out.append(check_zero(res, plan, reference=[ref], tol=tol,
                              name=f"pair minus-after-plus {qn}"))
    return out


def raising_pair_reports(qn: QNum3D, plan: SamplePlan = None,
                         tol: float = 1e-8) -> dict:
    """The ascent pair lands on m + 2 (the transcription labels the target
    m - 2; the coefficient (1/2)sqrt((n-m)(n+m+2)) is correct).

    Returns proportionality reports against both candidate targets.  The
    reduced chart identifies the states at +-m (the phase that separates
    them is divided out), so the two candidates only differ for m != 0;
    start the demonstration off-center."""
    plan = plan or SamplePlan(seed=59, count=24)
    w = qn.omega
    moved = apply_canonical(pair_plus(w).at_incoming(qn.m),
                            state_normalized(qn))
    out = {}
    coeff = 0.5 * math.sqrt((qn.n - qn.m) * (qn.n + qn.m + 2))
    up = QNum3D(qn.n, qn.m + 2, qn.n3, qn.n4, w)
    rep = check_proportional(moved, state_normalized(up), plan, tol=tol,
                             name=f"ascent target m+2 {qn}")
    ratio = rep.data.get("ratio")
    dev = abs(ratio - coeff) / coeff
    out["corrected"] = IdentityReport(rep.name, max(rep.relative, dev), 1.0,
                                      tol, data=rep.data)
    if qn.m - 2 >= -qn.n:
        down = QNum3D(qn.n, qn.m - 2, qn.n3, qn.n4, w)
        try:
            out["stated"] = check_proportional(
                moved, state_normalized(down), plan, tol=tol,
                name=f"ascent target m-2 {qn}")
        except PlanDegenerate as exc:  # degenerate ratios: also a mismatch
            out["stated"] = IdentityReport(
                f"ascent target m-2 {qn}", 1.0, 1.0, tol, notes=str(exc))
    return out


def verify_eigen(qn: QNum3D, plan: SamplePlan = None, closed: bool = True,
                 tol: float = 1e-8) -> IdentityReport:
    """H(m) psi = (n + n3 + n4 + 2) w psi as a sampled residual."""
    plan = plan or SamplePlan(seed=61, count=32)
    ham = build_Hm(qn.omega).at_incoming(qn.m)
    psi = psi_closed(qn) if closed else psi_ladder(qn)
    lam = Const(qn.energy())
    res = canonical(Add(ham.apply(psi), Mul(Const(-1), lam, psi)))
    form = "closed" if closed else "ladder"
    return check_zero(res, plan, reference=[Mul(lam, psi)], tol=tol,
                      name=f"eigenvalue ({form}) {qn}")


def ladder_closed_ratio(qn: QNum3D, plan: SamplePlan = None,
                        tol: float = 1e-8) -> IdentityReport:
    """Chain-built and closed-form eigenfunctions agree up to a constant."""
    plan = plan or SamplePlan(seed=67, count=32)
    return check_proportional(psi_ladder(qn), psi_closed(qn), plan, tol=tol,
                              name=f"ladder vs closed {qn}")


def ground_annihilation(omega=1) -> bool:
    """Every lowering operator kills the Gaussian ground state exactly."""
    w = Fraction(omega)
    s = build_oscillators(w)
    g = _gaussian(w)
    return all(is_zero_expr(apply_canonical(getattr(s, k).at_incoming(0), g))
               for k in ("a3", "a4", "A1", "A2"))


def cartesian_crosscheck(plan: SamplePlan = None, omega=1,
                         tol: float = 1e-8) -> list:
    """Separable cartesian eigenfunctions pulled onto the chart match the
    chart-native states.

    Two probes: the single-quantum third-oscillator state against the
    ladder route for (n, m, n3, n4) = (0, 0, 1, 0); and the phi-full
    closed form at (n, m) = (1, -1) against (x1 - i x2) times the
    Gaussian."""
    plan = plan or SamplePlan(seed=71, count=32)
    w = Fraction(omega)
    sqw = Pow(Const(w), Fraction(1, 2))
    x1, x2, x3, _ = cartesian_coords()
    out = []
    cart3 = canonical(Mul(Hermite(1, Mul(sqw, x3)), _gaussian(w)))
    out.append(check_proportional(
        psi_ladder(QNum3D(0, 0, 1, 0, w)), cart3, plan, tol=tol,
        name="cartesian crosscheck (0,0,1,0)"))
    pair = canonical(Mul(Add(x1, Mul(Const(-1), IMAG, x2)), _gaussian(w)))
    out.append(check_proportional(
        psi_closed(QNum3D(1, -1, 0, 0, w), reduced=False), pair, plan,
        tol=tol, name="cartesian crosscheck (1,-1,0,0)"))
    return out


# ---------------------------------------------------------------------------
# Transcription deviation reports
# ---------------------------------------------------------------------------

def _structural(name: str, ok: bool, notes: str = "", data=None) -> IdentityReport:
    return IdentityReport(name, 0.0 if ok else 1.0, 1.0, 1e-12,
                          notes=notes, data=data)


def _only_derivs(diff: DiffOp, allowed: set) -> bool:
    norm = diff.normalized()
    return bool(norm.terms) and all(t.derivs in allowed for t in norm.terms)


def transcription_reports(omega=None) -> dict:
    """Structural comparison of every closed transcription against the
    derived operators: exact matches must match, and each known deviation
    must be nonzero and confined to its offending slot."""
    cart = cartesian_ladders(omega)
    comb = build_combos(omega)
    s = build_oscillators(omega)
    out = {}

    diff = (cart.a1 - cartesian_a1_printed(omega)).normalized()
    out["cartesian a1 psi slot"] = _structural(
        "cartesian a1 psi slot", _only_derivs(diff, {_DPS}),
        notes="the transcribed first cartesian operator carries cos(phi) in "
              "its psi slot where the gradient has sin(phi); all other "
              "slots agree")

    derived = {"A1": comb.A1, "A1d": comb.A1d, "A2": comb.A2, "A2d": comb.A2d}
    for name in ("A2", "A2d"):
        ok = derived[name].same_operator(combo_reference(name, omega,
                                                         printed=True))
        out[f"full {name} transcription"] = _structural(
            f"full {name} transcription", ok,
            notes="printed and derived forms agree exactly")
    diff = (comb.A1 - combo_reference("A1", omega, printed=True)).normalized()
    out["full A1 psi slot"] = _structural(
        "full A1 psi slot", _only_derivs(diff, {_DPS}),
        notes="the transcribed first lowering combo flips only the "
              "psi-derivative sign")
    diff = (comb.A1d - combo_reference("A1d", omega, printed=True)).normalized()
    out["full A1d derivative group"] = _structural(
        "full A1d derivative group",
        _only_derivs(diff, {_DR, _DPS, _DTH, _DPH}),
        notes="the transcribed first raising combo flips the sign of its "
              "whole derivative group; the multiplicative term agrees")
    out["printed A1d collapses onto A2"] = _structural(
        "printed A1d collapses onto A2",
        combo_reference("A1d", omega, printed=True).same_operator(
            combo_reference("A2", omega, printed=True)),
        notes="as transcribed, the first raising combo and the second "
              "lowering combo are the same operator; the corrected "
              "derivative-group sign separates them")

    reduced = {"A1": s.A1, "A1d": s.A1d, "A2": s.A2, "A2d": s.A2d}
    for name in ("A1d", "A2", "A2d"):
        ok = reduced[name].same_operator(reduced_reference(name, omega,
                                                           printed=True))
        out[f"reduced {name} transcription"] = _structural(
            f"reduced {name} transcription", ok,
            notes="printed and derived reduced forms agree exactly "
                  "(incoming-label scalar slot included)")
    diff = (s.A1 - reduced_reference("A1", omega, printed=True)).normalized()
    out["reduced A1 psi slot"] = _structural(
        "reduced A1 psi slot", _only_derivs(diff, {_DPS}),
        notes="the reduced transcription inherits the psi-slot sign flip "
              "of the phi-full form; the incoming-label scalar is correct")
    for name in ("A1", "A1d", "A2", "A2d"):
        ok = reduced[name].same_operator(reduced_reference(name, omega))
        out[f"reduced {name} corrected"] = _structural(
            f"reduced {name} corrected", ok,
            notes="corrected transcription matches the derived reduction")

    out["full Hamiltonian"] = _structural(
        "full Hamiltonian",
        build_H4(omega).same_operator(h4_reference(omega)),
        notes="derived Laplacian route matches the corrected transcription "
              "(angular prefactor 1/r^2)")
    out["angular block is the invariant"] = _structural(
        "angular block is the invariant", angular_matches_invariant(),
        notes="the angular block equals minus the two-angle quadratic "
              "invariant operator")
    out["reduced Hamiltonian"] = _structural(
        "reduced Hamiltonian",
        build_Hm(omega).same_operator(hm_reference(omega)),
        notes="the reduced transcription is correct as printed")
    out["radial similarity"] = _structural(
        "radial similarity", radial_similarity_matches(omega),
        notes="r^(1/2)-conjugation reproduces the weighted form including "
              "the +3/(8 r^2) residue")
    out["angular prefactor deviation"] = angular_prefactor_deviation(omega)

    ok = all(c_squared(n, m) == c_squared_printed(n, m)
             for n in range(0, 9) for m in range(-n, n + 1, 2))
    out["descent normalization closed form"] = _structural(
        "descent normalization closed form", ok,
        notes="the transcribed closed form of the descent constant equals "
              "the per-step product exactly (n <= 8)")
    return out
