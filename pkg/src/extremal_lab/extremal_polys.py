"""Extremal polynomials P_i^v, stored bilinearly in (x, v).

The table of P_i maps (alpha, k) to (-1)^|alpha| / alpha! * c_{i alpha}^k, so
that P_i^v(x) = sum over (alpha, k) of table[alpha, k] * v_k * x^alpha.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_poly import (
    DimensionError,
    MultiIndex,
    Polynomial,
    as_rational,
    mi_abs,
    mi_factorial,
    weighted_degree,
)
from .gg_realization import GroupContext


@dataclass(frozen=True)
class ExtremalPolynomial:
    i: int
    n: int
    table: dict  # (alpha, k) -> Fraction

    @cached_property
    def slices(self) -> dict[int, Polynomial]:
        """k -> coefficient polynomial of v_k."""
        grouped: dict[int, dict] = {}
        for (alpha, k), c in self.table.items():
            grouped.setdefault(k, {})[alpha] = c
        return {k: Polynomial(self.n, terms) for k, terms in sorted(grouped.items())}

    def slice(self, k: int) -> Polynomial:
        return self.slices.get(k) or Polynomial.zero(self.n)

    def to_json(self) -> list[dict]:
        from .exact_poly import grlex_key

        rows = sorted(self.table.items(), key=lambda kv: (grlex_key(kv[0][0]), kv[0][1]))
        return [
            {"alpha": list(alpha), "k": k, "num": str(c.numerator), "den": str(c.denominator)}
            for (alpha, k), c in rows
        ]

    @classmethod
    def from_json(cls, i: int, data: list[dict]) -> "ExtremalPolynomial":
        n = len(data[0]["alpha"]) if data else 0
        table = {
            (tuple(row["alpha"]), int(row["k"])): Fraction(int(row["num"]), int(row["den"]))
            for row in data
        }
        return cls(i, n, table)


def extremal_polynomial(ctx: GroupContext, i: int) -> ExtremalPolynomial:
    if not 1 <= i <= ctx.n:
        raise IndexError(f"index {i} out of range 1..{ctx.n}")
    table = {}
    for (j, alpha), vec in ctx.gsc.items():
        if j != i:
            continue
        phi = Fraction((-1) ** mi_abs(alpha)) / mi_factorial(alpha)
        for k, c in vec.items():
            table[(alpha, k)] = phi * c
    return ExtremalPolynomial(i, ctx.n, table)


def all_extremal_polynomials(ctx: GroupContext) -> list[ExtremalPolynomial]:
    return [extremal_polynomial(ctx, i) for i in range(1, ctx.n + 1)]


def specialize_v(ep: ExtremalPolynomial, v: Sequence) -> Polynomial:
    if len(v) != ep.n:
        raise DimensionError(f"covector of length {len(v)} for a group of dimension {ep.n}")
    v = [as_rational(x) for x in v]
    terms: dict[MultiIndex, Fraction] = {}
    for (alpha, k), c in ep.table.items():
        vk = v[k - 1]
        if vk:
            terms[alpha] = terms.get(alpha, 0) + c * vk
    return Polynomial(ep.n, terms)


def check_derivative_identity(ctx: GroupContext, i: int, j: int, polys: Sequence[ExtremalPolynomial] | None = None) -> bool:
    """X_i P_j^v == sum_k c_ij^k P_k^v, slot by slot in v."""
    if polys is None:
        polys = all_extremal_polynomials(ctx)
    Pj = polys[j - 1]
    Xi = ctx.field(i)
    cij = ctx.c(i, j)
    slots = set(Pj.slices)
    for k in cij:
        slots |= set(polys[k - 1].slices)
    for m in slots:
        lhs = Xi.apply(Pj.slice(m))
        rhs = Polynomial.zero(ctx.n)
        for k, c in cij.items():
            rhs = rhs + polys[k - 1].slice(m).scale(c)
        if lhs != rhs:
            return False
    return True


def degree_bound_holds(ctx: GroupContext, ep: ExtremalPolynomial) -> bool:
    limit = ctx.s - ctx.degrees[ep.i - 1]
    return all(weighted_degree(alpha, ctx.degrees) <= limit for alpha, _ in ep.table)


@dataclass
class NontrivialityReport:
    v: tuple
    zero_generators: list[int]
    nonzero_generators: list[int]
    second_layer_zero: bool
    v_is_zero: bool
    consistent: bool


def nontriviality_report(ctx: GroupContext, v: Sequence, polys: Sequence[ExtremalPolynomial] | None = None) -> NontrivialityReport:
    """Which generator polynomials vanish for this v, and the implied constraints on v.

    consistent is False only if the vanishing pattern contradicts the
    nondegeneracy properties: all generator polynomials zero with v != 0, or
    all second-layer polynomials zero while some v_k with d(k) >= 2 is nonzero.
    """
    if polys is None:
        polys = all_extremal_polynomials(ctx)
    v = tuple(as_rational(x) for x in v)
    r = ctx.r
    zero_gen = [i for i in range(1, r + 1) if specialize_v(polys[i - 1], v).is_zero()]
    second = list(ctx.basis.layer(2)) if ctx.s >= 2 else []
    second_zero = all(specialize_v(polys[i - 1], v).is_zero() for i in second)
    v_zero = not any(v)
    consistent = True
    if len(zero_gen) == r and not v_zero:
        consistent = False
    if second and second_zero and any(v[r:]):
        consistent = False
    return NontrivialityReport(
        v=v,
        zero_generators=zero_gen,
        nonzero_generators=[i for i in range(1, r + 1) if i not in zero_gen],
        second_layer_zero=second_zero,
        v_is_zero=v_zero,
        consistent=consistent,
    )


def abnormal_variety_generators(ctx: GroupContext, v: Sequence, polys=None) -> list[Polynomial]:
    """[P_1^v, ..., P_r^v]: the equations of the abnormal variety Z_v."""
    if polys is None:
        polys = all_extremal_polynomials(ctx)
    if not any(as_rational(x) for x in v):
        warnings.warn("v = 0 gives the whole space, not an abnormal variety", stacklevel=2)
    return [specialize_v(polys[i - 1], v) for i in range(1, ctx.r + 1)]


def goh_variety_generators(ctx: GroupContext, v: Sequence, polys=None, require_goh_v: bool = True) -> list[Polynomial]:
    """[P_1^v, ..., P_(r1+r2)^v]: the equations of the Goh variety G_v."""
    if polys is None:
        polys = all_extremal_polynomials(ctx)
    v = [as_rational(x) for x in v]
    if not any(v):
        warnings.warn("v = 0 gives the whole space, not a Goh variety", stacklevel=2)
    top = ctx.r + (ctx.basis.layer_dims[1] if ctx.s >= 2 else 0)
    if require_goh_v and any(v[:top]):
        raise ValueError(f"a Goh covector must have v_1 = ... = v_{top} = 0")
    return [specialize_v(polys[i - 1], v) for i in range(1, top + 1)]
