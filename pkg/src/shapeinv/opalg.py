"""Linear partial differential operators with discrete parameter shifts.

An operator is a sum of terms  c(coords, p) * D^(a,b,c,d) * S^k  where
D^(a,b,c,d) differentiates with respect to (theta, psi, phi, r), and S^k is
the shift that replaces the operator's parameter p by p - k in the operand
before anything else acts.  Shift terms are what the exponential-of-
parameter-derivative notation produces after a Fourier transform in phi:
multiplication by e^{i k phi} turns into S^k together with the substitution
of the remaining phi-derivatives by i(p - k).

Composition is exact (multi-index Leibniz rule plus shift bookkeeping), so
commutators, similarity transforms and factorizations all stay symbolic.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .symx import (
    COORDINATES,
    Add,
    Const,
    Expr,
    Mul,
    Pow,
    Sym,
    as_expr,
    canonical,
    canonical_key,
    cf_to_expr,
    conjugate_expr,
    diff,
    render,
    simplify_basic,
    substitute,
    trig_to_exp,
    _canon_cf,
    _cf_key,
    _key_to_cf,
    _ordkey,
    IMAG,
    ONE,
    ZERO,
)

_NDIM = len(COORDINATES)
_NO_DERIVS = (0,) * _NDIM


class OpError(Exception):
    pass


class OpTerm:
    __slots__ = ("coeff", "derivs", "shift")

    def __init__(self, coeff, derivs=_NO_DERIVS, shift: int = 0):
        c = as_expr(coeff)
        d = tuple(int(x) for x in derivs)
        if len(d) != _NDIM or any(x < 0 for x in d):
            raise OpError(f"bad derivative multi-index {derivs!r}")
        if not isinstance(shift, int):
            raise OpError("shift must be an integer")
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "derivs", d)
        object.__setattr__(self, "shift", shift)

    def __setattr__(self, *a):  # pragma: no cover - defensive
        raise AttributeError("OpTerm is immutable")

    def __repr__(self):
        return f"OpTerm({render(self.coeff)}, derivs={self.derivs}, shift={self.shift})"


def _deriv_multi(f: Expr, derivs) -> Expr:
    g = f
    for coord, order in zip(COORDINATES, derivs):
        for _ in range(order):
            g = simplify_basic(diff(g, coord))
    return g


class DiffOp:
    """Immutable sum of OpTerms sharing one optional shift parameter."""

    __slots__ = ("terms", "param")

    def __init__(self, terms, param: str | None = None):
        ts = tuple(terms)
        for t in ts:
            if not isinstance(t, OpTerm):
                raise OpError("DiffOp terms must be OpTerm instances")
            if t.shift != 0 and param is None:
                raise OpError("shift terms require a named parameter")
        if param is not None and param in COORDINATES:
            raise OpError("shift parameter cannot be a coordinate")
        object.__setattr__(self, "terms", ts)
        object.__setattr__(self, "param", param)

    def __setattr__(self, *a):  # pragma: no cover - defensive
        raise AttributeError("DiffOp is immutable")

    # -- constructors --------------------------------------------------------
    @staticmethod
    def zero(param=None) -> "DiffOp":
        return DiffOp((), param)

    @staticmethod
    def identity(param=None) -> "DiffOp":
        return DiffOp((OpTerm(ONE),), param)

    @staticmethod
    def from_expr(e, param=None) -> "DiffOp":
        return DiffOp((OpTerm(as_expr(e)),), param)

    @staticmethod
    def partial(coord: str, order: int = 1, param=None) -> "DiffOp":
        if coord not in COORDINATES:
            raise OpError(f"unknown coordinate {coord!r}")
        d = [0] * _NDIM
        d[COORDINATES.index(coord)] = order
        return DiffOp((OpTerm(ONE, tuple(d)),), param)

    @staticmethod
    def shift(param: str, k: int) -> "DiffOp":
        return DiffOp((OpTerm(ONE, _NO_DERIVS, k),), param)

    # -- bookkeeping ----------------------------------------------------------
    def _merge_param(self, other) -> str | None:
        a, b = self.param, other.param
        if a is None:
            return b
        if b is None or a == b:
            return a
        raise OpError(f"parameter clash: {a!r} vs {b!r}")

    def normalized(self) -> "DiffOp":
        buckets: dict = {}
        for t in self.terms:
            key = (t.derivs, t.shift)
            cf = _canon_cf(t.coeff)
            if key in buckets:
                prev = buckets[key]
                merged = dict(prev)
                for m, c in cf.items():
                    s = merged.get(m)
                    s = c if s is None else s + c
                    if s.is_zero():
                        merged.pop(m, None)
                    else:
                        merged[m] = s
                buckets[key] = merged
            else:
                buckets[key] = dict(cf)
        out = []
        for (derivs, shift) in sorted(buckets, key=lambda k: (k[1], k[0])):
            cf = buckets[(derivs, shift)]
            if cf:
                out.append(OpTerm(cf_to_expr(cf), derivs, shift))
        return DiffOp(out, self.param)

    def is_zero(self) -> bool:
        return not self.normalized().terms

    def is_shift_free(self) -> bool:
        return all(t.shift == 0 for t in self.terms)

    def structure_key(self) -> tuple:
        return tuple((t.derivs, t.shift, canonical_key(t.coeff))
                     for t in self.normalized().terms)

    def same_operator(self, other: "DiffOp") -> bool:
        """Exact structural equality after canonical normalization."""
        return self.structure_key() == other.structure_key()

    def max_order(self) -> int:
        return max((sum(t.derivs) for t in self.terms), default=0)

    # -- action on expressions -------------------------------------------------
    def apply(self, f: Expr) -> Expr:
        f = as_expr(f)
        parts = []
        for t in self.terms:
            g = f
            if t.shift != 0:
                g = substitute(g, self.param,
                               Add(Sym(self.param), Const(-t.shift)))
            g = _deriv_multi(g, t.derivs)
            parts.append(Mul(t.coeff, g))
        if not parts:
            return ZERO
        return simplify_basic(Add(*parts))

    # -- algebra ----------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return DiffOp(self.terms + other.terms, self._merge_param(other))

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return DiffOp(tuple(OpTerm(Mul(Const(-1), t.coeff), t.derivs, t.shift)
                            for t in self.terms), self.param)

    def __rmul__(self, other):
        # function or scalar acting by left multiplication
        if isinstance(other, DiffOp):
            return NotImplemented
        c = as_expr(other)
        return DiffOp(tuple(OpTerm(Mul(c, t.coeff), t.derivs, t.shift)
                            for t in self.terms), self.param)

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        c = as_expr(other)
        if isinstance(c, Const):
            return self.__rmul__(c)  # constants commute with everything
        # operator times function = composition with a multiplication operator
        return self @ DiffOp.from_expr(c, self.param)

    def __matmul__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        param = self._merge_param(other)
        out = []
        for ta in self.terms:
            for tb in other.terms:
                cb = tb.coeff
                if ta.shift != 0:
                    cb = substitute(cb, param,
                                    Add(Sym(param), Const(-ta.shift)))
                ranges = [range(d + 1) for d in ta.derivs]
                for j in itertools.product(*ranges):
                    comb = 1
                    for di, ji in zip(ta.derivs, j):
                        comb *= math.comb(di, ji)
                    dcb = _deriv_multi(cb, j)
                    if isinstance(dcb, Const) and dcb.value.is_zero():
                        continue
                    coeff = simplify_basic(Mul(Const(comb), ta.coeff, dcb))
                    derivs = tuple(da - ji + db for da, ji, db
                                   in zip(ta.derivs, j, tb.derivs))
                    out.append(OpTerm(coeff, derivs, ta.shift + tb.shift))
        return DiffOp(out, param)

    # -- parameter instantiation -------------------------------------------------
    def subs_param(self, value) -> "DiffOp":
        """Pin the parameter of a shift-free operator to a concrete value."""
        if self.param is None:
            return self
        if not self.is_shift_free():
            raise OpError("cannot substitute the parameter of a shifting operator; "
                          "use at_incoming")
        v = as_expr(value)
        return DiffOp(tuple(OpTerm(substitute(t.coeff, self.param, v),
                                   t.derivs, 0) for t in self.terms), None)

    def at_incoming(self, value) -> "DiffOp":
        """Concrete operator consuming the family member labelled `value`.

        All terms must carry one common shift k; the term producing the
        member at p from the member at p - k has its coefficient evaluated
        at p = value + k.
        """
        if self.param is None:
            return self
        norm = self.normalized()
        shifts = {t.shift for t in norm.terms}
        if len(shifts) > 1:
            raise OpError(f"mixed shifts {sorted(shifts)}: no single incoming label")
        k = shifts.pop() if shifts else 0
        v = simplify_basic(Add(as_expr(value), Const(k)))
        return DiffOp(tuple(OpTerm(substitute(t.coeff, self.param, v),
                                   t.derivs, 0) for t in norm.terms), None)

    # -- presentation ---------------------------------------------------------
    def render(self) -> str:
        norm = self.normalized()
        if not norm.terms:
            return "0"
        bits = []
        for t in norm.terms:
            piece = f"({render(t.coeff)})"
            for coord, order in zip(COORDINATES, t.derivs):
                if order == 1:
                    piece += f" d/d{coord}"
                elif order > 1:
                    piece += f" d^{order}/d{coord}^{order}"
            if t.shift:
                sign = "-" if t.shift > 0 else "+"
                piece += f" [{self.param} -> {self.param} {sign} {abs(t.shift)}]"
            bits.append(piece)
        return "  +  ".join(bits)

    def to_json(self) -> dict:
        norm = self.normalized()
        return {
            "param": norm.param,
            "terms": [
                {"coeff": render(t.coeff), "derivs": list(t.derivs), "shift": t.shift}
                for t in norm.terms
            ],
        }

    def __repr__(self):
        return f"DiffOp<{self.render()}>"


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    return a @ b


def apply_canonical(op: DiffOp, f: Expr) -> Expr:
    """Apply and recanonicalize: keeps chained applications from ballooning."""
    return canonical(op.apply(f))


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return (a @ b) - (b @ a)


def anticommutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return (a @ b) + (b @ a)


def op_equal(a: DiffOp, b: DiffOp, plan, **kw):
    """Randomized equality of two operators over a sample plan.

    Lives in shapeinv.verify (which stays import-free of this module);
    re-exported here because it is part of the operator-algebra surface.
    """
    from .verify import op_equal as _op_equal
    return _op_equal(a, b, plan, **kw)


def conjugate_op(op: DiffOp) -> DiffOp:
    """Termwise complex conjugation of coefficients (derivatives untouched)."""
    return DiffOp(tuple(OpTerm(conjugate_expr(t.coeff), t.derivs, t.shift)
                        for t in op.terms), op.param)


# ---------------------------------------------------------------------------
# Fourier reduction in phi
# ---------------------------------------------------------------------------

def _cf_mentions(cf: dict, name: str) -> bool:
    for mono in cf:
        for akey, _ in mono:
            kind = akey[0]
            if kind == "sym" and akey[1] == name:
                return True
            if kind in ("sin", "cos", "exp") and _cf_mentions(_key_to_cf(akey[1]), name):
                return True
            if kind == "hermite" and _cf_mentions(_key_to_cf(akey[2]), name):
                return True
    return False


_PHI_MONO = ((("sym", "phi"), (1, 1)),)


def _split_phi_exponent(argcf: dict):
    """Split an exponential argument into (integer k from i*k*phi, remainder)."""
    k = 0
    rest = {}
    for mono, coeff in argcf.items():
        if mono == _PHI_MONO:
            if not coeff.re.numerator == 0:
                raise OpError("exp argument has a non-imaginary phi part")
            if coeff.im.denominator != 1:
                raise OpError("exp argument phi frequency is not an integer")
            k = coeff.im.numerator
        else:
            rest[mono] = coeff
    if _cf_mentions(rest, "phi"):
        raise OpError("exp argument depends on phi beyond a linear term")
    return k, rest


def fourier_reduce(op: DiffOp, param: str) -> DiffOp:
    """Replace the periodic coordinate phi by a discrete parameter.

    Under f(phi) = sum_p g(p) e^{i p phi} / sqrt(2 pi), a term
    c e^{i k phi} d^n/dphi^n maps to c (i(p-k))^n together with the shift
    p -> p - k of the operand.  Coefficients must depend on phi only through
    trigonometric/exponential factors with integer frequencies.
    """
    if not op.is_shift_free() or op.param is not None:
        raise OpError("operator already carries a shift parameter")
    if param in COORDINATES:
        raise OpError("reduction parameter cannot be a coordinate")
    psym = Sym(param)
    out = []
    phi_index = COORDINATES.index("phi")
    for t in op.terms:
        cf = _canon_cf(trig_to_exp(t.coeff, "phi"))
        n = t.derivs[phi_index]
        derivs = tuple(0 if i == phi_index else d for i, d in enumerate(t.derivs))
        for mono, coeff in cf.items():
            atoms = []
            k = 0
            for akey, exp in mono:
                kind = akey[0]
                if kind == "exp":
                    kk, rest = _split_phi_exponent(_key_to_cf(akey[1]))
                    k = kk
                    if rest:
                        atoms.append((("exp", _cf_key(rest)), exp))
                    continue
                if kind == "sym" and akey[1] == "phi":
                    raise OpError("coefficient has a non-periodic phi dependence")
                if kind in ("sin", "cos") and _cf_mentions(_key_to_cf(akey[1]), "phi"):
                    raise OpError("unreduced trigonometric phi factor")
                if kind == "hermite" and _cf_mentions(_key_to_cf(akey[2]), "phi"):
                    raise OpError("phi inside a Hermite argument")
                atoms.append((akey, exp))
            base = cf_to_expr({tuple(sorted(atoms, key=_ordkey)): coeff})
            if n:
                freq = Mul(IMAG, Add(psym, Const(-k)))
                base = Mul(base, Pow(freq, n)) if n > 1 else Mul(base, freq)
            out.append(OpTerm(simplify_basic(base), derivs, k))
    return DiffOp(out, param).normalized()
