"""Independent oracles for derived values.

Nothing here calls into the package's arithmetic: values are recomputed with
sympy (exact, modulo the cyclotomic polynomial) or numpy (complex floating
point with a tight tolerance) from plain coefficient lists.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np
import sympy as sp

Z = sp.Symbol("z")
X, Y = sp.symbols("x y")


def cyc_to_sympy(num) -> sp.Expr:
    """Power-basis coefficients -> polynomial in z."""
    return sum(sp.Rational(c.numerator, c.denominator) * Z**k for k, c in enumerate(num.coefficients))


def reduce_mod_phi(expr: sp.Expr, n: int) -> sp.Poly:
    return sp.Poly(sp.rem(sp.expand(expr), sp.cyclotomic_poly(n, Z), Z), Z, domain="QQ")


def sympy_equal_in_field(a: sp.Expr, b: sp.Expr, n: int) -> bool:
    return reduce_mod_phi(a - b, n).is_zero


def to_complex(num) -> complex:
    n = num.field.conductor
    w = cmath.exp(2j * cmath.pi / n)
    return sum(float(c) * w**k for k, c in enumerate(num.coefficients))


def mat_to_numpy(g) -> np.ndarray:
    return np.array([[to_complex(g.a), to_complex(g.b)], [to_complex(g.c), to_complex(g.d)]])


def _round_key(h: np.ndarray) -> tuple:
    return (tuple(np.round(h.real * 1e6).astype(np.int64).flatten()),
            tuple(np.round(h.imag * 1e6).astype(np.int64).flatten()))


def numeric_elements(gens: list[np.ndarray]) -> list[np.ndarray]:
    """Breadth-first closure of complex 2x2 matrices, deduplicated after rounding."""
    ident = np.eye(2, dtype=complex)
    keyf = _round_key
    seen = {keyf(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                k = keyf(h)
                if k not in seen:
                    seen[k] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


def numeric_order(gens: list[np.ndarray]) -> int:
    return len(numeric_elements(gens))


def poly_to_sympy(f) -> sp.Expr:
    """Poly in x, y (coefficients as numeric complex) for numeric checks."""
    return sum(complex(to_complex(c)) * X**e[0] * Y**e[1] for e, c in f.terms.items())


def eval_numeric(f, x0: complex, y0: complex, t0: complex = 1.0) -> complex:
    return sum(to_complex(c) * x0**e[0] * y0**e[1] * t0**e[2] for e, c in f.terms.items())


def numeric_span_contains(gens, target, tol: float = 1e-8) -> bool:
    """Least-squares membership over the monomial coefficient vectors."""
    keys = sorted({m for g in list(gens) + [target] for m in g.terms})
    A = np.array([[to_complex(g.terms[m]) if m in g.terms else 0 for g in gens] for m in keys])
    b = np.array([to_complex(target.terms[m]) if m in target.terms else 0 for m in keys])
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.linalg.norm(A @ sol - b)) < tol * max(1.0, float(np.linalg.norm(b)))


def numeric_act(g: np.ndarray, f, x0: complex, y0: complex) -> complex:
    """(g.f)(x0, y0) = f((x0, y0) g) in the row convention."""
    v = np.array([x0, y0]) @ g
    return eval_numeric(f, v[0], v[1])


def dihedral_class_count(n: int) -> int:
    from sympy.combinatorics.named_groups import DihedralGroup

    return len(DihedralGroup(n).conjugacy_classes())


__all__ = [
    "Fraction", "cyc_to_sympy", "reduce_mod_phi", "sympy_equal_in_field", "to_complex", "mat_to_numpy",
    "numeric_order", "numeric_elements", "poly_to_sympy", "eval_numeric", "numeric_span_contains",
    "numeric_act", "dihedral_class_count",
]
