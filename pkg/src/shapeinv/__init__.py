"""Symbolic-numeric verification toolkit for shape-invariant differential
operators on a 3-sphere and for a four-dimensional isotropic oscillator
reduced to three radial/angular coordinates.

Layers, bottom to top:

* rationals  - exact Gaussian-rational scalars
* symx       - symbolic expression trees with a canonical normal form
* opalg      - partial differential operators with parameter shifts
* su2        - two commuting angular-momentum realizations and the derived
               two-dimensional Hamiltonian family
* ladders2d  - parameter-shift ladder states and coefficient identities
* osc3d      - oscillator creation/annihilation factorization in 3-D form
* verify     - randomized high-precision identity checking primitives
* suite      - the full battery of positive checks and fault injections
* cli        - command-line front end with a small operator-expression DSL
"""
from .rationals import GaussRat
from .symx import (
    COORDINATES,
    Add,
    Const,
    Cos,
    DiffError,
    EvalError,
    Exp,
    Expr,
    Hermite,
    Mul,
    Pow,
    Sin,
    Sym,
    canonical,
    diff,
    evaluate,
    free_symbols,
    render,
    simplify_basic,
    substitute,
)

__all__ = [
    "GaussRat",
    "COORDINATES",
    "Expr", "Const", "Sym", "Add", "Mul", "Pow", "Sin", "Cos", "Exp", "Hermite",
    "DiffError", "EvalError",
    "diff", "evaluate", "substitute", "simplify_basic", "canonical",
    "free_symbols", "render",
]

__version__ = "0.1.0"
