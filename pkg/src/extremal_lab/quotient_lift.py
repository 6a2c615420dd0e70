"""Stratified groups presented as quotients of a free nilpotent group.

A quotient is given by selection indices S = (s_1 < ... < s_m) and an n x m
matrix zeta with pi_* Y_i = sum_j zeta_ij X_j.  Curves in the quotient are
handled through their controls; the lift to the free group uses the same
controls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve_lab import (
    ControlLaw,
    DevelopedCurve,
    homogeneous_rows,
    develop,
    extremal_along,
)
from .exact_poly import DimensionError, as_rational
from .gg_realization import GroupContext, ResidualError, _axpy
from .linalg import nullspace
from .univariate import UPoly

ZERO = Fraction(0)


class QuotientError(ValueError):
    """The (S, zeta) data does not describe a quotient homomorphism."""


@dataclass(frozen=True)
class QuotientGroup:
    free: GroupContext
    S: tuple[int, ...]
    zeta: tuple[tuple[Fraction, ...], ...]  # n rows, m columns
    induced: dict = field(repr=False)        # (a, b) -> {c: Fraction}, 1-based in 1..m

    @property
    def m(self) -> int:
        return len(self.S)

    @property
    def r(self) -> int:
        return self.free.r

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.free.degrees[s - 1] for s in self.S)

    def cbar(self, a: int, b: int) -> dict:
        return self.induced.get((a, b), {})

    def push(self, vec: dict) -> dict:
        """zeta^T applied to a sparse vector of the free algebra."""
        return _push(self.zeta, vec)

    def covector(self, lambda0: Sequence) -> tuple[Fraction, ...]:
        """v_i = sum_j zeta_ij lambda0_j; in particular v_{s_j} = lambda0_j."""
        lam = [as_rational(x) for x in lambda0]
        if len(lam) != self.m:
            raise DimensionError(f"covector of length {len(lam)} for a quotient of dimension {self.m}")
        v = tuple(sum((z * l for z, l in zip(row, lam)), ZERO) for row in self.zeta)
        assert all(v[s - 1] == lam[j] for j, s in enumerate(self.S)), "selection rows are not unit rows"
        return v

    def to_json(self) -> dict:
        return {
            "r": self.free.r,
            "s": self.free.s,
            "S": list(self.S),
            "zeta": [[str(x) for x in row] for row in self.zeta],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def build_quotient(free: GroupContext, S: Sequence[int], zeta: Sequence[Sequence]) -> QuotientGroup:
    n, r = free.n, free.r
    S = tuple(int(s) for s in S)
    m = len(S)
    rows = tuple(tuple(as_rational(x) for x in row) for row in zeta)
    if len(rows) != n or any(len(row) != m for row in rows):
        raise QuotientError(f"zeta must be {n} x {m}")
    if any(a >= b for a, b in zip(S, S[1:])) or not all(1 <= s <= n for s in S):
        raise QuotientError("S must be strictly increasing inside 1..n")
    if S[:r] != tuple(range(1, r + 1)):
        raise QuotientError("the first r selections must be the generators 1..r")
    for a, s in enumerate(S):
        if rows[s - 1] != tuple(Fraction(int(j == a)) for j in range(m)):
            raise QuotientError(f"row {s} of zeta must be the unit row e_{a + 1}")
    deg = free.degrees
    for i, row in enumerate(rows, start=1):
        for j, z in enumerate(row):
            if z and deg[i - 1] != deg[S[j] - 1]:
                raise QuotientError(f"zeta_{i},{j + 1} != 0 maps degree {deg[i - 1]} to degree {deg[S[j] - 1]}")

    induced: dict = {}
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if a != b:
                vec = _push(rows, free.c(S[a - 1], S[b - 1]))
                if vec:
                    induced[(a, b)] = vec

    for i in range(1, n + 1):
        for j in range(1, i):
            lhs = _push(rows, free.c(i, j))
            rhs: dict = {}
            for a, za in enumerate(rows[i - 1], start=1):
                if not za:
                    continue
                for b, zb in enumerate(rows[j - 1], start=1):
                    if zb:
                        _axpy(rhs, za * zb, induced.get((a, b), {}))
            if lhs != rhs:
                raise QuotientError(f"homomorphism check fails on the pair ({i}, {j})")
    return QuotientGroup(free, S, rows, induced)


def _push(rows, vec: dict) -> dict:
    out: dict = {}
    for k, c in vec.items():
        for j, z in enumerate(rows[k - 1], start=1):
            if z:
                s = out.get(j, 0) + c * z
                if s:
                    out[j] = s
                else:
                    out.pop(j)
    return out


def quotient_from_json(free: GroupContext, data: dict) -> QuotientGroup:
    if (int(data["r"]), int(data["s"])) != (free.r, free.s):
        raise QuotientError("quotient file does not match the free group")
    return build_quotient(free, data["S"], data["zeta"])


def identity_quotient(free: GroupContext) -> QuotientGroup:
    n = free.n
    return build_quotient(free, range(1, n + 1), [[int(i == j) for j in range(n)] for i in range(n)])


def kill_quotient(free: GroupContext, killed: Sequence[int]) -> QuotientGroup:
    """Quotient by the span of the given basis vectors (must be an ideal)."""
    killed = set(killed)
    S = [i for i in range(1, free.n + 1) if i not in killed]
    zeta = [[int(i == s) for s in S] for i in range(1, free.n + 1)]
    return build_quotient(free, S, zeta)


def truncation_quotient(free: GroupContext, step: int) -> QuotientGroup:
    """Free nilpotent group of lower step, as a quotient."""
    return kill_quotient(free, [i for i in range(1, free.n + 1) if free.degrees[i - 1] > step])


# -- lifting and duals -------------------------------------------------------

def lift_curve(q: QuotientGroup, h: ControlLaw) -> DevelopedCurve:
    if h.r != q.r:
        raise DimensionError(f"{h.r} controls for a quotient of rank {q.r}")
    return develop(q.free, h)


def _frame_rhs(cbar, r: int, i: int, lam: Sequence[UPoly], h: Sequence[UPoly]) -> UPoly:
    acc = UPoly()
    for j in range(1, r + 1):
        inner = UPoly()
        for k, c in cbar(i, j).items():
            inner = inner + lam[k - 1] * c
        acc = acc - h[j - 1] * inner
    return acc


def quotient_dual(q: QuotientGroup, h: ControlLaw, lambda0: Sequence, polys=None) -> list[list[UPoly]]:
    """lambda_a(t) = P^v_{s_a}(kappa(t)) per piece, with v built from lambda0."""
    v = q.covector(lambda0)
    kappa = lift_curve(q, h)
    return extremal_along(q.free, kappa, v, indices=q.S, polys=polys)


def quotient_dual_check(q: QuotientGroup, h: ControlLaw, lambda0: Sequence, polys=None) -> bool:
    """lambda = P^v_S(kappa) solves the quotient frame equations with lambda(0) = lambda0."""
    lam0 = [as_rational(x) for x in lambda0]
    pieces = quotient_dual(q, h, lam0, polys)
    if [p(ZERO) for p in pieces[0]] != lam0:
        return False
    for lam, hp in zip(pieces, h.pieces):
        for a in range(1, q.m + 1):
            if lam[a - 1].deriv() != _frame_rhs(q.cbar, q.r, a, lam, hp.h):
                return False
    return True


def pullback_check(q: QuotientGroup, h: ControlLaw, lambda0: Sequence, polys=None) -> bool:
    """mu_i = sum_j zeta_ij lambda_j solves the free frame equations along the lift."""
    pieces = quotient_dual(q, h, lambda0, polys)
    free = q.free
    for lam, hp in zip(pieces, h.pieces):
        mu = [sum((lam[j] * z for j, z in enumerate(row) if z), UPoly()) for row in q.zeta]
        for i in range(1, free.n + 1):
            if mu[i - 1].deriv() != _frame_rhs(free.c, free.r, i, mu, hp.h):
                return False
    return True


def quotient_goh_indices(q: QuotientGroup) -> list[int]:
    return [s for s in q.S if q.free.degrees[s - 1] <= 2]


def _quotient_nullspace(q: QuotientGroup, h: ControlLaw, indices, polys) -> list[tuple[Fraction, ...]]:
    kappa = lift_curve(q, h)
    rows = homogeneous_rows(q.free, kappa, indices, polys)
    reduced = [
        [sum((row[i] * q.zeta[i][j] for i in range(q.free.n) if row[i] and q.zeta[i][j]), ZERO) for j in range(q.m)]
        for *_, row in rows
    ]
    return nullspace(reduced, q.m)


def find_quotient_abnormal_covectors(q: QuotientGroup, h: ControlLaw, polys=None) -> list[tuple[Fraction, ...]]:
    """Basis of {lambda0 : P^{v(lambda0)}_{s_i}(kappa) == 0, i <= r}."""
    return _quotient_nullspace(q, h, range(1, q.r + 1), polys)


def find_quotient_goh_covectors(q: QuotientGroup, h: ControlLaw, polys=None) -> list[tuple[Fraction, ...]]:
    return _quotient_nullspace(q, h, quotient_goh_indices(q), polys)


# -- commutation of developments ---------------------------------------------

def _bernoulli_plus(k: int) -> Fraction:
    from sympy import bernoulli

    b = bernoulli(k)
    val = Fraction(int(b.p), int(b.q))
    return -val if k == 1 and val < 0 else val


def _bracket(cfun, dim: int, U: Sequence[UPoly], V: Sequence[UPoly]) -> list[UPoly]:
    out = [UPoly() for _ in range(dim)]
    for i in range(1, dim + 1):
        if not U[i - 1]:
            continue
        for j in range(1, dim + 1):
            if i == j or not V[j - 1]:
                continue
            vec = cfun(i, j)
            if vec:
                prod = U[i - 1] * V[j - 1]
                for k, c in vec.items():
                    out[k - 1] = out[k - 1] + prod * c
    return out


def magnus_log(cfun, dim: int, r: int, step: int, h: ControlLaw) -> list[tuple[Fraction, Fraction, list[UPoly]]]:
    """Omega(t) with gamma(t) = exp(Omega(t)), for gamma' = sum_j h_j X_j(gamma), gamma(0) = e.

    Omega' = sum_k B_k^+ / k! ad_Omega^k (A), A = sum_j h_j e_j.  The series
    and the Picard iteration both terminate by nilpotency.
    """
    coeffs = []
    fact = Fraction(1)
    for k in range(step):
        if k:
            fact *= k
        coeffs.append(_bernoulli_plus(k) / fact)
    start = [ZERO] * dim
    pieces = []
    for piece in h.pieces:
        A = [piece.h[j] if j < r else UPoly() for j in range(dim)]
        omega = [a.integral_from(piece.t0) + s0 for a, s0 in zip(A, start)]
        for _ in range(step + 1):
            rate = [UPoly() for _ in range(dim)]
            term = A
            for k, ck in enumerate(coeffs):
                if k:
                    term = _bracket(cfun, dim, omega, term)
                if ck:
                    rate = [x + y * ck for x, y in zip(rate, term)]
            new = [f.integral_from(piece.t0) + s0 for f, s0 in zip(rate, start)]
            if new == omega:
                break
            omega = new
        else:
            raise ResidualError("Picard iteration for the logarithm did not terminate")
        pieces.append((piece.t0, piece.t1, omega))
        start = [p(piece.t1) for p in omega]
    return pieces


def free_log(ctx: GroupContext, h: ControlLaw):
    return magnus_log(ctx.c, ctx.n, ctx.r, ctx.s, h)


def quotient_log(q: QuotientGroup, h: ControlLaw):
    return magnus_log(q.cbar, q.m, q.r, q.free.s, h)


def commutation_check(q: QuotientGroup, h: ControlLaw) -> bool:
    """pi(kappa(t)) equals the quotient's own development, compared in logarithmic coordinates."""
    lf = free_log(q.free, h)
    lg = quotient_log(q, h)
    for (_, _, wf), (_, _, wg) in zip(lf, lg):
        pushed = [sum((wf[i] * row[j] for i, row in enumerate(q.zeta) if row[j]), UPoly()) for j in range(q.m)]
        if pushed != wg:
            return False
    return True


def exp_first_kind(ctx: GroupContext, y: Sequence) -> list[Fraction]:
    """exp(sum y_i X_i)(0) in the Grayson-Grossman coordinates, exactly."""
    y = [as_rational(v) for v in y]
    n = ctx.n
    comps: list[dict] = [dict() for _ in range(n)]
    for i, yi in enumerate(y, start=1):
        if yi:
            for l, p in ctx.field(i).comps.items():
                comps[l - 1][i] = p
    path: list[UPoly] = []
    for l in range(1, n + 1):
        rate = UPoly()
        for i, p in comps[l - 1].items():
            val = p.compose(path + [UPoly()] * (n - len(path)))
            rate = rate + (val if isinstance(val, UPoly) else UPoly.const(val)) * y[i - 1]
        path.append(rate.antideriv())
    return [p(Fraction(1)) for p in path]


def check_log_against_development(ctx: GroupContext, h: ControlLaw, samples: int = 5) -> bool:
    """exp(Omega(t)) reproduces the developed curve at rational sample times."""
    curve = develop(ctx, h)
    logs = free_log(ctx, h)
    for s in range(samples + 1):
        t = Fraction(s, samples)
        for t0, t1, omega in logs:
            if t0 <= t <= t1:
                if exp_first_kind(ctx, [w(t) for w in omega]) != curve.at(t):
                    return False
                break
    return True
