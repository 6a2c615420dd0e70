"""Exact rational linear algebra on top of sympy's DomainMatrix over QQ."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .exact_poly import as_rational


def _qq(x) -> object:
    f = as_rational(x)
    return QQ(f.numerator, f.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[_qq(x) for x in row] for row in rows]
    for row in data:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)} in a system with {ncols} unknowns")
    if not data:
        return DomainMatrix.zeros((0, ncols), QQ)
    return DomainMatrix(data, (len(data), ncols), QQ)


def _dedupe(rows: Sequence[Sequence]) -> list[tuple]:
    seen, out = set(), []
    for row in rows:
        key = tuple(as_rational(x) for x in row)
        if any(key) and key not in seen:
            seen.add(key)
            out.append(key)
    return out


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {v : A v = 0}, in reduced form (pivot-free coordinates are unit)."""
    rows = _dedupe(rows)
    if not rows:
        return [tuple(Fraction(int(i == k)) for i in range(ncols)) for k in range(ncols)]
    ns = _matrix(rows, ncols).nullspace()
    return [tuple(_frac(x) for x in vec) for vec in ns.to_list()]


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    rows = _dedupe(rows)
    return _matrix(rows, ncols).rank() if rows else 0


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[tuple[Fraction, ...]]:
    """One solution of A v = b (free variables set to 0), or None if inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("row count and right-hand side disagree")
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    aug = _dedupe(aug)
    if not aug:
        return tuple(Fraction(0) for _ in range(ncols))
    red, pivots = _matrix(aug, ncols + 1).rref()
    if ncols in pivots:
        return None
    table = red.to_list()
    sol = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        sol[p] = _frac(table[r][ncols])
    return tuple(sol)


def in_span(vec: Sequence, basis: Sequence[Sequence]) -> bool:
    n = len(vec)
    if not basis:
        return not any(as_rational(x) for x in vec)
    cols = [[as_rational(b[i]) for b in basis] for i in range(n)]
    return solve_affine(cols, list(vec), len(basis)) is not None


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((as_rational(a) * as_rational(b) for a, b in zip(row, v)), Fraction(0)) for row in M]


def solve_square(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    sol = solve_affine(M, b, len(M))
    if sol is None or _matrix(M, len(M)).rank() != len(M):
        raise ZeroDivisionError("singular system")
    return list(sol)
