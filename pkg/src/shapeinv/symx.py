"""Exact symbolic expression trees for trigonometric/Gaussian operator algebra.

Nodes: constants (Gaussian rationals), symbols, sums, products, rational
powers, sin, cos, exp, and Hermite polynomials.  Trees are immutable; all
arithmetic stays exact until `evaluate` is called with a numeric binding.

Coordinates are the four fixed names in COORDINATES; every other symbol is a
parameter (quantum numbers, frequency).  Differentiation is only defined with
respect to coordinates.

Two simplifiers are provided:

* `simplify_basic` - flattening, constant folding, neutral-element removal and
  merging of powers with identical bases.  Never expands products.
* `canonical` - full normal form: sums of monomials over a fixed atom basis,
  with cos^2 -> 1 - sin^2 elimination so that identically-zero combinations
  of the trig expressions produced by the operator algebra collapse to the
  literal zero expression.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .rationals import GaussRat, I as IUNIT

COORDINATES = ("theta", "psi", "phi", "r")


class SymxError(Exception):
    pass


class EvalError(SymxError):
    """Unbound symbol or singular evaluation."""


class DiffError(SymxError):
    """Differentiation with respect to a non-coordinate symbol."""


def _as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    raise TypeError(f"exponent must be an exact rational, got {type(p).__name__}")


# ---------------------------------------------------------------------------
# Node classes
# ---------------------------------------------------------------------------

class Expr:
    __slots__ = ("_key", "_hashv")

    def _set_key(self, key):
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hashv", hash(key))

    def __setattr__(self, *a):  # pragma: no cover - defensive
        raise AttributeError("Expr nodes are immutable")

    def key(self):
        return self._key

    def __hash__(self):
        return self._hashv

    def __eq__(self, other):
        return isinstance(other, Expr) and self._key == other._key

    # -- operator sugar -----------------------------------------------------
    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __neg__(self):
        return Mul(Const(-1), self)

    def __sub__(self, other):
        return Add(self, -as_expr(other))

    def __rsub__(self, other):
        return Add(as_expr(other), -self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        o = as_expr(other)
        if isinstance(o, Const):
            return Mul(Const(GaussRat.of(1) / o.value), self)
        return Mul(self, Pow(o, -1))

    def __rtruediv__(self, other):
        return as_expr(other) * Pow(self, -1)

    def __pow__(self, p):
        return Pow(self, p)

    def __repr__(self):
        return render(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, float) or isinstance(value, complex):
            raise TypeError("floating-point constants are not allowed in trees")
        object.__setattr__(self, "value", GaussRat.of(value))
        self._set_key(("const", self.value.key()))


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not isinstance(name, str) or not name:
            raise TypeError("symbol name must be a non-empty string")
        object.__setattr__(self, "name", name)
        self._set_key(("sym", name))


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, *terms):
        ts = tuple(as_expr(t) for t in terms)
        object.__setattr__(self, "terms", ts)
        self._set_key(("add",) + tuple(t.key() for t in ts))


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, *factors):
        fs = tuple(as_expr(f) for f in factors)
        object.__setattr__(self, "factors", fs)
        self._set_key(("mul",) + tuple(f.key() for f in fs))


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        b = as_expr(base)
        p = _as_fraction(exponent)
        if isinstance(b, Const) and b.value.is_zero() and p < 0:
            raise EvalError("singular: negative power of the zero constant")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "exponent", p)
        self._set_key(("pow", b.key(), (p.numerator, p.denominator)))


class Sin(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        a = as_expr(arg)
        object.__setattr__(self, "arg", a)
        self._set_key(("sin", a.key()))


class Cos(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        a = as_expr(arg)
        object.__setattr__(self, "arg", a)
        self._set_key(("cos", a.key()))


class Exp(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        a = as_expr(arg)
        object.__setattr__(self, "arg", a)
        self._set_key(("exp", a.key()))


class Hermite(Expr):
    __slots__ = ("degree", "arg")

    def __init__(self, degree: int, arg):
        if not isinstance(degree, int) or degree < 0:
            raise TypeError("Hermite degree must be a non-negative integer")
        a = as_expr(arg)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "arg", a)
        self._set_key(("hermite", degree, a.key()))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction, GaussRat)):
        return Const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Expr")


# convenient singletons
THETA = Sym("theta")
PSI = Sym("psi")
PHI = Sym("phi")
R = Sym("r")
ZERO = Const(0)
ONE = Const(1)
IMAG = Const(IUNIT)


def cot(x) -> Expr:
    return Mul(Cos(x), Pow(Sin(x), -1))


def csc(x) -> Expr:
    return Pow(Sin(x), -1)


# ---------------------------------------------------------------------------
# Structure queries
# ---------------------------------------------------------------------------

def children(e: Expr):
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (Sin, Cos, Exp)):
        return (e.arg,)
    if isinstance(e, Hermite):
        return (e.arg,)
    return ()


def free_symbols(e: Expr) -> frozenset:
    if isinstance(e, Sym):
        return frozenset((e.name,))
    out = frozenset()
    for c in children(e):
        out |= free_symbols(c)
    return out


def substitute(e: Expr, name: str, repl) -> Expr:
    """Replace every occurrence of symbol `name` by `repl` (capture-free)."""
    repl = as_expr(repl)

    def go(x: Expr) -> Expr:
        if isinstance(x, Sym):
            return repl if x.name == name else x
        if isinstance(x, Const):
            return x
        if isinstance(x, Add):
            return Add(*(go(t) for t in x.terms))
        if isinstance(x, Mul):
            return Mul(*(go(f) for f in x.factors))
        if isinstance(x, Pow):
            return Pow(go(x.base), x.exponent)
        if isinstance(x, Sin):
            return Sin(go(x.arg))
        if isinstance(x, Cos):
            return Cos(go(x.arg))
        if isinstance(x, Exp):
            return Exp(go(x.arg))
        if isinstance(x, Hermite):
            return Hermite(x.degree, go(x.arg))
        raise TypeError(f"unknown node {type(x).__name__}")

    return go(e)


def conjugate_expr(e: Expr) -> Expr:
    """Complex conjugate, assuming every symbol takes real values."""
    if isinstance(e, Const):
        return Const(e.value.conjugate())
    if isinstance(e, Sym):
        return e
    if isinstance(e, Add):
        return Add(*(conjugate_expr(t) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(*(conjugate_expr(f) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(conjugate_expr(e.base), e.exponent)
    if isinstance(e, Sin):
        return Sin(conjugate_expr(e.arg))
    if isinstance(e, Cos):
        return Cos(conjugate_expr(e.arg))
    if isinstance(e, Exp):
        return Exp(conjugate_expr(e.arg))
    if isinstance(e, Hermite):
        return Hermite(e.degree, conjugate_expr(e.arg))
    raise TypeError(f"unknown node {type(e).__name__}")


def trig_to_exp(e: Expr, name: str) -> Expr:
    """Rewrite sin/cos whose argument involves symbol `name` into exponentials.

    Uses sin u = -(i/2)(e^{iu} - e^{-iu}), cos u = (1/2)(e^{iu} + e^{-iu}),
    which hold identically; other trig factors are left untouched so their
    canonical forms stay in the sin/cos basis.
    """
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return Add(*(trig_to_exp(t, name) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(*(trig_to_exp(f, name) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(trig_to_exp(e.base, name), e.exponent)
    if isinstance(e, Sin):
        a = trig_to_exp(e.arg, name)
        if name in free_symbols(a):
            half_i = Const(GaussRat(0, Fraction(-1, 2)))
            return Mul(half_i, Add(Exp(Mul(IMAG, a)),
                                   Mul(Const(-1), Exp(Mul(Const(-1), IMAG, a)))))
        return Sin(a)
    if isinstance(e, Cos):
        a = trig_to_exp(e.arg, name)
        if name in free_symbols(a):
            return Mul(Const(Fraction(1, 2)),
                       Add(Exp(Mul(IMAG, a)), Exp(Mul(Const(-1), IMAG, a))))
        return Cos(a)
    if isinstance(e, Exp):
        return Exp(trig_to_exp(e.arg, name))
    if isinstance(e, Hermite):
        return Hermite(e.degree, trig_to_exp(e.arg, name))
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------

def diff(e: Expr, coord) -> Expr:
    if isinstance(coord, Sym):
        coord = coord.name
    if coord not in COORDINATES:
        raise DiffError(f"cannot differentiate with respect to parameter {coord!r}; "
                        f"coordinates are {COORDINATES}")

    def d(x: Expr) -> Expr:
        if isinstance(x, Const):
            return ZERO
        if isinstance(x, Sym):
            return ONE if x.name == coord else ZERO
        if isinstance(x, Add):
            return Add(*(d(t) for t in x.terms))
        if isinstance(x, Mul):
            terms = []
            fs = x.factors
            for i in range(len(fs)):
                terms.append(Mul(*fs[:i], d(fs[i]), *fs[i + 1:]))
            return Add(*terms) if terms else ZERO
        if isinstance(x, Pow):
            p = x.exponent
            if p == 0:
                return ZERO
            return Mul(Const(GaussRat(p)), Pow(x.base, p - 1), d(x.base))
        if isinstance(x, Sin):
            return Mul(Cos(x.arg), d(x.arg))
        if isinstance(x, Cos):
            return Mul(Const(-1), Sin(x.arg), d(x.arg))
        if isinstance(x, Exp):
            return Mul(x, d(x.arg))
        if isinstance(x, Hermite):
            if x.degree == 0:
                return ZERO
            return Mul(Const(2 * x.degree), Hermite(x.degree - 1, x.arg), d(x.arg))
        raise TypeError(f"unknown node {type(x).__name__}")

    return d(e)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _hermite_value(n: int, x: complex) -> complex:
    # three-term recurrence H_{k+1} = 2 x H_k - 2 k H_{k-1}
    if n == 0:
        return 1.0 + 0.0j
    hk_1, hk = 1.0 + 0.0j, 2.0 * x
    for k in range(1, n):
        hk_1, hk = hk, 2.0 * x * hk - 2.0 * k * hk_1
    return hk


def evaluate(e: Expr, binding: dict) -> complex:
    """Numerically evaluate with all free symbols bound.

    Raises EvalError for unbound symbols and for singular points
    (negative/fractional powers of zero).
    """

    def ev(x: Expr) -> complex:
        if isinstance(x, Const):
            return complex(x.value)
        if isinstance(x, Sym):
            try:
                v = binding[x.name]
            except KeyError:
                raise EvalError(f"unbound symbol {x.name!r}") from None
            return complex(v)
        if isinstance(x, Add):
            return sum((ev(t) for t in x.terms), 0j)
        if isinstance(x, Mul):
            out = 1.0 + 0j
            for f in x.factors:
                out *= ev(f)
            return out
        if isinstance(x, Pow):
            b = ev(x.base)
            p = x.exponent
            if b == 0:
                if p < 0:
                    raise EvalError("singular evaluation: zero base with negative power")
                return 0j if p > 0 else 1.0 + 0j
            if p.denominator == 1:
                return b ** p.numerator
            return b ** (p.numerator / p.denominator)
        if isinstance(x, Sin):
            import cmath
            return cmath.sin(ev(x.arg))
        if isinstance(x, Cos):
            import cmath
            return cmath.cos(ev(x.arg))
        if isinstance(x, Exp):
            import cmath
            return cmath.exp(ev(x.arg))
        if isinstance(x, Hermite):
            return _hermite_value(x.degree, ev(x.arg))
        raise TypeError(f"unknown node {type(x).__name__}")

    return ev(e)


def expand_hermite(e: Expr) -> Expr:
    """Rewrite Hermite nodes as explicit polynomials (exact recurrence)."""

    def poly(n: int) -> list:
        # coefficient list, index = power
        if n == 0:
            return [GaussRat(1)]
        prev, cur = [GaussRat(1)], [GaussRat(0), GaussRat(2)]
        for k in range(1, n):
            nxt = [GaussRat(0)] * (k + 2)
            for p, c in enumerate(cur):
                nxt[p + 1] = nxt[p + 1] + GaussRat(2) * c
            for p, c in enumerate(prev):
                nxt[p] = nxt[p] - GaussRat(2 * k) * c
            prev, cur = cur, nxt
        return cur

    def go(x: Expr) -> Expr:
        if isinstance(x, Hermite):
            a = go(x.arg)
            terms = [Mul(Const(c), Pow(a, p)) for p, c in enumerate(poly(x.degree))
                     if not c.is_zero()]
            return Add(*terms) if terms else ZERO
        if isinstance(x, (Const, Sym)):
            return x
        if isinstance(x, Add):
            return Add(*(go(t) for t in x.terms))
        if isinstance(x, Mul):
            return Mul(*(go(f) for f in x.factors))
        if isinstance(x, Pow):
            return Pow(go(x.base), x.exponent)
        if isinstance(x, Sin):
            return Sin(go(x.arg))
        if isinstance(x, Cos):
            return Cos(go(x.arg))
        if isinstance(x, Exp):
            return Exp(go(x.arg))
        raise TypeError(f"unknown node {type(x).__name__}")

    return go(e)


# ---------------------------------------------------------------------------
# simplify_basic: flatten / fold / neutral elements / merge same-base powers
# ---------------------------------------------------------------------------

def simplify_basic(e: Expr) -> Expr:
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        flat = []
        const = GaussRat(0)
        for t in e.terms:
            s = simplify_basic(t)
            if isinstance(s, Add):
                parts = s.terms
            else:
                parts = (s,)
            for p in parts:
                if isinstance(p, Const):
                    const = const + p.value
                else:
                    flat.append(p)
        if not const.is_zero():
            flat.insert(0, Const(const))
        if not flat:
            return ZERO
        if len(flat) == 1:
            return flat[0]
        return Add(*flat)
    if isinstance(e, Mul):
        flat = []
        const = GaussRat(1)
        for f in e.factors:
            s = simplify_basic(f)
            parts = s.factors if isinstance(s, Mul) else (s,)
            for p in parts:
                if isinstance(p, Const):
                    const = const * p.value
                else:
                    flat.append(p)
        if const.is_zero():
            return ZERO
        # merge powers with structurally identical bases
        merged: list = []
        expmap: dict = {}
        order: list = []
        for p in flat:
            base, exp = (p.base, p.exponent) if isinstance(p, Pow) else (p, Fraction(1))
            k = base.key()
            if k in expmap:
                expmap[k] = (expmap[k][0], expmap[k][1] + exp)
            else:
                expmap[k] = (base, exp)
                order.append(k)
        for k in order:
            base, exp = expmap[k]
            if exp == 0:
                continue
            merged.append(base if exp == 1 else Pow(base, exp))
        if not merged:
            return Const(const)
        if not const.is_one():
            merged.insert(0, Const(const))
        if len(merged) == 1:
            return merged[0]
        return Mul(*merged)
    if isinstance(e, Pow):
        b = simplify_basic(e.base)
        p = e.exponent
        if p == 0:
            return ONE
        if p == 1:
            return b
        if isinstance(b, Const) and p.denominator == 1:
            return Const(b.value ** p.numerator)
        if isinstance(b, Pow):
            # (u^a)^n with integer n is branch-safe
            if p.denominator == 1:
                return simplify_basic(Pow(b.base, b.exponent * p))
        return Pow(b, p)
    if isinstance(e, Sin):
        a = simplify_basic(e.arg)
        if isinstance(a, Const) and a.value.is_zero():
            return ZERO
        return Sin(a)
    if isinstance(e, Cos):
        a = simplify_basic(e.arg)
        if isinstance(a, Const) and a.value.is_zero():
            return ONE
        return Cos(a)
    if isinstance(e, Exp):
        a = simplify_basic(e.arg)
        if isinstance(a, Const) and a.value.is_zero():
            return ONE
        return Exp(a)
    if isinstance(e, Hermite):
        return Hermite(e.degree, simplify_basic(e.arg))
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Canonical normal form
#
# CF ("canonical form") = dict mapping monomial keys to GaussRat coefficients.
# A monomial key is a sorted tuple of (atom_key, (exp_num, exp_den)) pairs.
# Atom keys:
#   ('sym', name)
#   ('sin', argkey) / ('cos', argkey)
#   ('exp', argkey)            -- always exponent 1; scalar multiples folded
#                                 into the argument
#   ('hermite', n, argkey)
#   ('cpow', gauss_key)        -- a constant raised to a non-integer power
# argkey = cf_key(argument CF), a nested tuple of primitives.
# ---------------------------------------------------------------------------

_CANON_MEMO: dict = {}


def _cf_key(cf: dict) -> tuple:
    return tuple(sorted(((m, c.key()) for m, c in cf.items()), key=_ordkey))


def _ordkey(x):
    if isinstance(x, tuple):
        return (0, tuple(_ordkey(i) for i in x))
    if isinstance(x, str):
        return (1, x)
    return (2, x)


def _key_to_cf(key: tuple) -> dict:
    return {m: GaussRat(Fraction(a, b), Fraction(c, d)) for m, (a, b, c, d) in key}


def _cf_const(c: GaussRat) -> dict:
    return {} if c.is_zero() else {(): c}


def _cf_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(m, None)
        else:
            out[m] = s
    return out


def _cf_scale(a: dict, c: GaussRat) -> dict:
    if c.is_zero():
        return {}
    return {m: v * c for m, v in a.items()}


def _atoms_to_mono(atoms: dict) -> tuple:
    return tuple(sorted(((k, (p.numerator, p.denominator)) for k, p in atoms.items()),
                        key=_ordkey))


def _mono_to_atoms(mono: tuple) -> dict:
    return {k: Fraction(n, d) for k, (n, d) in mono}


def _insert_atom(atoms: dict, coeff_box: list, key, exp: Fraction):
    """Add base^exp into an atom map, folding where exact arithmetic allows."""
    if exp == 0:
        return
    if key[0] == "exp":
        # exp atoms always carry exponent 1: scale the argument instead
        argcf = _key_to_cf(key[1])
        argcf = _cf_scale(argcf, GaussRat(exp))
        _merge_exp_atom(atoms, argcf)
        return
    cur = atoms.get(key, Fraction(0))
    new = cur + exp
    if new == 0:
        atoms.pop(key, None)
        return
    if key[0] == "cpow" and new.denominator == 1:
        a, b, c, d = key[1]
        base = GaussRat(Fraction(a, b), Fraction(c, d))
        coeff_box[0] = coeff_box[0] * (base ** new.numerator)
        atoms.pop(key, None)
        return
    atoms[key] = new


def _merge_exp_atom(atoms: dict, argcf: dict):
    """Multiply in an exp(argcf) factor, combining with any existing exp atom."""
    existing = None
    for k in atoms:
        if k[0] == "exp":
            existing = k
            break
    if existing is not None:
        combined = _cf_add(_key_to_cf(existing[1]), argcf)
        del atoms[existing]
    else:
        combined = argcf
    if combined:
        atoms[("exp", _cf_key(combined))] = Fraction(1)


def _mono_mul(m1: tuple, c1: GaussRat, m2: tuple, c2: GaussRat) -> dict:
    coeff_box = [c1 * c2]
    atoms: dict = {}
    for mono in (m1, m2):
        for k, (n, d) in mono:
            _insert_atom(atoms, coeff_box, k, Fraction(n, d))
    return _pythagoras(atoms, coeff_box[0])


def _pythagoras(atoms: dict, coeff: GaussRat) -> dict:
    """Rewrite integer cos^k (k >= 2) as (1 - sin^2)^(k//2) * cos^(k%2)."""
    if coeff.is_zero():
        return {}
    todo = [(k, p) for k, p in atoms.items()
            if k[0] == "cos" and p.denominator == 1 and p >= 2]
    if not todo:
        return {_atoms_to_mono(atoms): coeff}
    out: dict = {}
    key, p = todo[0]
    h, rem = divmod(p.numerator, 2)
    base_atoms = dict(atoms)
    del base_atoms[key]
    if rem:
        base_atoms[key] = Fraction(1)
    sin_key = ("sin", key[1])
    for j in range(h + 1):
        cb = [coeff * GaussRat((-1) ** j * math.comb(h, j))]
        at = dict(base_atoms)
        if j:
            _insert_atom(at, cb, sin_key, Fraction(2 * j))
        for m, c in _pythagoras(at, cb[0]).items():
            out = _cf_add(out, {m: c})
    return out


def _cf_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            out = _cf_add(out, _mono_mul(m1, c1, m2, c2))
    return out


def _cf_pow(a: dict, p: Fraction) -> dict:
    if p == 0:
        return _cf_const(GaussRat(1))
    if p == 1:
        return a
    if not a:
        if p < 0:
            raise EvalError("singular: negative power of the zero expression")
        return {}
    if len(a) == 1:
        ((mono, coeff),) = a.items()
        coeff_box = [GaussRat(1)]
        atoms: dict = {}
        for k, (n, d) in mono:
            _insert_atom(atoms, coeff_box, k, Fraction(n, d) * p)
        # constant part
        if p.denominator == 1:
            coeff_box[0] = coeff_box[0] * (coeff ** p.numerator)
        elif coeff.is_one():
            pass
        else:
            _insert_atom(atoms, coeff_box, ("cpow", coeff.key()), p)
        return _pythagoras(atoms, coeff_box[0])
    if p.denominator == 1 and p > 0:
        out = _cf_const(GaussRat(1))
        base = a
        k = p.numerator
        while k:
            if k & 1:
                out = _cf_mul(out, base)
            base = _cf_mul(base, base) if k > 1 else base
            k >>= 1
        return out
    raise SymxError("unsupported: non-positive-integer power of a multi-term sum")


def _canon_cf(e: Expr) -> dict:
    memo = _CANON_MEMO.get(e)
    if memo is not None:
        return memo

    if isinstance(e, Const):
        cf = _cf_const(e.value)
    elif isinstance(e, Sym):
        cf = {((("sym", e.name), (1, 1)),): GaussRat(1)}
    elif isinstance(e, Add):
        cf = {}
        for t in e.terms:
            cf = _cf_add(cf, _canon_cf(t))
    elif isinstance(e, Mul):
        cf = _cf_const(GaussRat(1))
        for f in e.factors:
            cf = _cf_mul(cf, _canon_cf(f))
    elif isinstance(e, Pow):
        cf = _cf_pow(_canon_cf(e.base), e.exponent)
    elif isinstance(e, Sin):
        acf = _canon_cf(e.arg)
        cf = {} if not acf else {((("sin", _cf_key(acf)), (1, 1)),): GaussRat(1)}
    elif isinstance(e, Cos):
        acf = _canon_cf(e.arg)
        if not acf:
            cf = _cf_const(GaussRat(1))
        else:
            cf = {((("cos", _cf_key(acf)), (1, 1)),): GaussRat(1)}
    elif isinstance(e, Exp):
        acf = _canon_cf(e.arg)
        if not acf:
            cf = _cf_const(GaussRat(1))
        else:
            cf = {((("exp", _cf_key(acf)), (1, 1)),): GaussRat(1)}
    elif isinstance(e, Hermite):
        acf = _canon_cf(e.arg)
        if e.degree == 0:
            cf = _cf_const(GaussRat(1))
        elif e.degree == 1:
            cf = _cf_scale(acf, GaussRat(2))
        else:
            cf = {((("hermite", e.degree, _cf_key(acf)), (1, 1)),): GaussRat(1)}
    else:
        raise TypeError(f"unknown node {type(e).__name__}")

    _CANON_MEMO[e] = cf
    return cf


def _atom_to_expr(key) -> Expr:
    kind = key[0]
    if kind == "sym":
        return Sym(key[1])
    if kind == "sin":
        return Sin(cf_to_expr(_key_to_cf(key[1])))
    if kind == "cos":
        return Cos(cf_to_expr(_key_to_cf(key[1])))
    if kind == "exp":
        return Exp(cf_to_expr(_key_to_cf(key[1])))
    if kind == "hermite":
        return Hermite(key[1], cf_to_expr(_key_to_cf(key[2])))
    if kind == "cpow":
        a, b, c, d = key[1]
        return Const(GaussRat(Fraction(a, b), Fraction(c, d)))
    raise TypeError(f"unknown atom {kind}")


def cf_to_expr(cf: dict) -> Expr:
    if not cf:
        return ZERO
    terms = []
    for mono, coeff in sorted(cf.items(), key=lambda kv: _ordkey(kv[0])):
        factors = []
        if not coeff.is_one() or not mono:
            factors.append(Const(coeff))
        for akey, (n, d) in mono:
            base = _atom_to_expr(akey)
            p = Fraction(n, d)
            factors.append(base if p == 1 else Pow(base, p))
        terms.append(factors[0] if len(factors) == 1 else Mul(*factors))
    return terms[0] if len(terms) == 1 else Add(*terms)


def canonical(e: Expr) -> Expr:
    """Full normal form; identically-zero trig combinations become Const(0)."""
    return cf_to_expr(_canon_cf(e))


def canonical_key(e: Expr) -> tuple:
    return _cf_key(_canon_cf(e))


def equivalent(a: Expr, b: Expr) -> bool:
    """Structural equality of canonical forms."""
    return canonical_key(a) == canonical_key(b)


def is_zero_expr(e: Expr) -> bool:
    return not _canon_cf(e)


# -- fast evaluation of canonical forms with atom caching -------------------

def eval_cf(cf: dict, binding: dict, cache: dict) -> complex:
    import cmath

    def atom_val(key) -> complex:
        v = cache.get(key)
        if v is not None:
            return v
        kind = key[0]
        if kind == "sym":
            try:
                v = complex(binding[key[1]])
            except KeyError:
                raise EvalError(f"unbound symbol {key[1]!r}") from None
        elif kind == "sin":
            v = cmath.sin(eval_cf(_key_to_cf(key[1]), binding, cache))
        elif kind == "cos":
            v = cmath.cos(eval_cf(_key_to_cf(key[1]), binding, cache))
        elif kind == "exp":
            v = cmath.exp(eval_cf(_key_to_cf(key[1]), binding, cache))
        elif kind == "hermite":
            v = _hermite_value(key[1], eval_cf(_key_to_cf(key[2]), binding, cache))
        elif kind == "cpow":
            a, b, c, d = key[1]
            v = complex(GaussRat(Fraction(a, b), Fraction(c, d)))
        else:  # pragma: no cover
            raise TypeError(f"unknown atom {kind}")
        cache[key] = v
        return v

    total = 0j
    for mono, coeff in cf.items():
        term = complex(coeff)
        for akey, (n, d) in mono:
            v = atom_val(akey)
            if v == 0:
                if n < 0:
                    raise EvalError("singular evaluation: zero base with negative power")
                term = 0j if n > 0 else term
                if n > 0:
                    break
                continue
            term *= v ** (n / d) if d != 1 else v ** n
        total += term
    return total


def evaluate_fast(e: Expr, binding: dict, cache: dict | None = None) -> complex:
    return eval_cf(_canon_cf(e), binding, cache if cache is not None else {})


# ---------------------------------------------------------------------------
# Rendering (deterministic: constants, symbols, then composite nodes)
# ---------------------------------------------------------------------------

def _rank(e: Expr) -> int:
    if isinstance(e, Const):
        return 0
    if isinstance(e, Sym):
        return 1
    return 2


def render(e: Expr) -> str:
    def paren(s: str, need: bool) -> str:
        return f"({s})" if need else s

    def go(x: Expr, prec: int) -> str:
        if isinstance(x, Const):
            s = x.value.render()
            need = prec >= 2 and (s.startswith("-") or "/" in s) and not s.startswith("(")
            return paren(s, need)
        if isinstance(x, Sym):
            return x.name
        if isinstance(x, Add):
            parts = sorted((go(t, 1) for t in x.terms), key=lambda s: s)
            joined = " + ".join(parts).replace("+ -", "- ")
            return paren(joined, prec >= 2)
        if isinstance(x, Mul):
            fs = sorted(x.factors, key=lambda f: (_rank(f), _ordkey(f.key())))
            return paren("*".join(go(f, 2) for f in fs), prec >= 3)
        if isinstance(x, Pow):
            p = x.exponent
            ps = str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"
            if p < 0 or p.denominator != 1:
                ps = f"({ps})"
            return f"{go(x.base, 3)}^{ps}"
        if isinstance(x, Sin):
            return f"sin({go(x.arg, 0)})"
        if isinstance(x, Cos):
            return f"cos({go(x.arg, 0)})"
        if isinstance(x, Exp):
            return f"exp({go(x.arg, 0)})"
        if isinstance(x, Hermite):
            return f"hermite({x.degree}, {go(x.arg, 0)})"
        raise TypeError(f"unknown node {type(x).__name__}")

    return go(e, 0)
