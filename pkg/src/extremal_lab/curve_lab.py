"""Horizontal curves, dual curves and extremal classification.

Controls are piecewise polynomial on [0, 1].  Developing them through the
triangular Grayson-Grossman frame gives exact piecewise-polynomial curves, so
the dual curve, the extremal polynomials along the curve and the
classification systems are all exact rational objects.  Only normal_shoot
uses floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact_poly import DimensionError, Polynomial, as_rational, mi_abs, mi_factorial, mi_top
from .extremal_polys import ExtremalPolynomial, all_extremal_polynomials, specialize_v
from .gg_realization import GroupContext, ResidualError
from .linalg import nullspace, solve_affine
from .univariate import UPoly, count_roots, isolate_roots, upoly_gcd

ZERO = Fraction(0)


# -- controls ----------------------------------------------------------------

@dataclass(frozen=True)
class ControlPiece:
    t0: Fraction
    t1: Fraction
    h: tuple[UPoly, ...]


@dataclass(frozen=True)
class ControlLaw:
    pieces: tuple[ControlPiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a control law needs at least one piece")
        if self.pieces[0].t0 != 0 or self.pieces[-1].t1 != 1:
            raise ValueError("control pieces must cover [0, 1]")
        r = len(self.pieces[0].h)
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.t1 != b.t0:
                raise ValueError(f"gap or overlap at t = {a.t1} / {b.t0}")
        for p in self.pieces:
            if not p.t1 > p.t0:
                raise ValueError(f"piece [{p.t0}, {p.t1}] has nonpositive length")
            if len(p.h) != r:
                raise ValueError("all pieces must carry the same number of controls")

    @property
    def r(self) -> int:
        return len(self.pieces[0].h)

    @classmethod
    def polynomial(cls, *coeffs: Sequence) -> "ControlLaw":
        """Single piece on [0, 1]; one coefficient list (low degree first) per control."""
        return cls((ControlPiece(ZERO, Fraction(1), tuple(UPoly(c) for c in coeffs)),))

    @classmethod
    def from_pieces(cls, pieces: Sequence[tuple]) -> "ControlLaw":
        return cls(tuple(
            ControlPiece(as_rational(t0), as_rational(t1), tuple(UPoly(c) for c in coeffs))
            for t0, t1, coeffs in pieces
        ))

    def to_json(self) -> list[dict]:
        return [
            {"t0": str(p.t0), "t1": str(p.t1), "coeffs": [[str(c) for c in hj.coeffs] for hj in p.h]}
            for p in self.pieces
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "ControlLaw":
        return cls.from_pieces([(row["t0"], row["t1"], row["coeffs"]) for row in data])

    def at(self, t) -> list[Fraction]:
        p = self.pieces[_piece_index(self.pieces, t)]
        return [hj(as_rational(t)) for hj in p.h]

    def time_change(self, tau: UPoly) -> "ControlLaw":
        """Controls of t -> gamma(tau(t)) for a single-piece law: h(tau(t)) * tau'(t)."""
        if len(self.pieces) != 1:
            raise ValueError("time changes are only supported for single-piece laws")
        if tau(ZERO) != 0:
            raise ValueError("the time change must fix 0")
        dtau = tau.deriv()
        return ControlLaw((ControlPiece(ZERO, Fraction(1), tuple(hj.compose(tau) * dtau for hj in self.pieces[0].h)),))


def _piece_index(pieces, t) -> int:
    t = as_rational(t)
    if not 0 <= t <= 1:
        raise ValueError(f"t = {t} outside [0, 1]")
    for k, p in enumerate(pieces):
        if t < p.t1:
            return k
    return len(pieces) - 1


# -- curves ------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePiece:
    t0: Fraction
    t1: Fraction
    values: tuple[UPoly, ...]


def _pieces_json(pieces) -> list[dict]:
    return [
        {"t0": str(p.t0), "t1": str(p.t1), "components": [[str(c) for c in q.coeffs] for q in p.values]}
        for p in pieces
    ]


@dataclass(frozen=True)
class DevelopedCurve:
    pieces: tuple[CurvePiece, ...]
    controls: ControlLaw

    @property
    def n(self) -> int:
        return len(self.pieces[0].values)

    def at(self, t) -> list[Fraction]:
        p = self.pieces[_piece_index(self.pieces, t)]
        return [q(as_rational(t)) for q in p.values]

    def component(self, l: int) -> list[tuple[Fraction, Fraction, UPoly]]:
        return [(p.t0, p.t1, p.values[l - 1]) for p in self.pieces]

    def to_json(self) -> dict:
        return {"controls": self.controls.to_json(), "pieces": _pieces_json(self.pieces)}


@dataclass(frozen=True)
class DualCurve:
    pieces: tuple[CurvePiece, ...]
    v0: tuple[Fraction, ...]

    def at(self, t) -> list[Fraction]:
        p = self.pieces[_piece_index(self.pieces, t)]
        return [q(as_rational(t)) for q in p.values]

    def component(self, i: int) -> list[tuple[Fraction, Fraction, UPoly]]:
        return [(p.t0, p.t1, p.values[i - 1]) for p in self.pieces]

    def to_json(self) -> dict:
        return {"v0": [str(x) for x in self.v0], "pieces": _pieces_json(self.pieces)}


def develop(ctx: GroupContext, h: ControlLaw) -> DevelopedCurve:
    """gamma_l' = h_{l0} * (-1)^|I| / I! * gamma^I, integrated in increasing l."""
    if h.r != ctx.r:
        raise DimensionError(f"{h.r} controls for a group of rank {ctx.r}")
    n = ctx.n
    elems = ctx.basis.elements
    start = [ZERO] * n
    pieces = []
    for piece in h.pieces:
        gamma: list[Optional[UPoly]] = [None] * n
        chain_products: dict[tuple, UPoly] = {(): UPoly.const(1)}
        for e in elems:
            rate = piece.h[e.ell0 - 1]
            if e.chain:
                prod = chain_products.get(e.chain)
                if prod is None:
                    prod = chain_products[e.chain[:-1]] * gamma[e.chain[-1] - 1]
                    chain_products[e.chain] = prod
                rate = rate * prod * (Fraction((-1) ** mi_abs(e.I)) / mi_factorial(e.I))
            gamma[e.index - 1] = rate.integral_from(piece.t0) + start[e.index - 1]
        pieces.append(CurvePiece(piece.t0, piece.t1, tuple(gamma)))
        start = [q(piece.t1) for q in gamma]
    return DevelopedCurve(tuple(pieces), h)


def check_development(ctx: GroupContext, curve: DevelopedCurve) -> bool:
    """Independent check: gamma(0) = 0, continuity, and gamma' = sum_j h_j X_j(gamma)."""
    if any(q(ZERO) for q in curve.pieces[0].values):
        return False
    for a, b in zip(curve.pieces, curve.pieces[1:]):
        if [q(a.t1) for q in a.values] != [q(b.t0) for q in b.values]:
            return False
    for cp, hp in zip(curve.pieces, curve.controls.pieces):
        velocity = [UPoly() for _ in range(ctx.n)]
        for j in range(1, ctx.r + 1):
            for l, comp in ctx.field(j).comps.items():
                velocity[l - 1] = velocity[l - 1] + hp.h[j - 1] * comp.compose(list(cp.values))
        if [q.deriv() for q in cp.values] != velocity:
            return False
    return True


# -- extremal polynomials along a curve --------------------------------------

class _Monomials:
    """Cache of gamma^alpha on one piece, built by peeling off the top variable."""

    def __init__(self, values: Sequence[UPoly]):
        self.values = values
        self.cache: dict[tuple, UPoly] = {}

    def __call__(self, alpha: tuple) -> UPoly:
        got = self.cache.get(alpha)
        if got is not None:
            return got
        u = mi_top(alpha)
        if u == 0:
            out = UPoly.const(1)
        else:
            rest = list(alpha)
            rest[u - 1] -= 1
            out = self(tuple(rest)) * self.values[u - 1]
        self.cache[alpha] = out
        return out


def _compose(p: Polynomial, mono: _Monomials) -> UPoly:
    out = UPoly()
    for alpha, c in p.terms.items():
        out = out + mono(alpha) * c
    return out


def _compose_slices(ep: ExtremalPolynomial, mono: _Monomials) -> dict[int, UPoly]:
    return {k: _compose(p, mono) for k, p in ep.slices.items()}


def _polys(ctx: GroupContext, polys) -> Sequence[ExtremalPolynomial]:
    return all_extremal_polynomials(ctx) if polys is None else polys


def extremal_along(ctx: GroupContext, curve: DevelopedCurve, v, indices: Optional[Sequence[int]] = None, polys=None) -> list[list[UPoly]]:
    """P_i^v(gamma(t)) per piece, for i in indices (default: all)."""
    polys = _polys(ctx, polys)
    v = [as_rational(x) for x in v]
    if len(v) != ctx.n:
        raise DimensionError(f"covector of length {len(v)} for dimension {ctx.n}")
    indices = list(indices) if indices is not None else list(range(1, ctx.n + 1))
    specialized = {i: specialize_v(polys[i - 1], v) for i in indices}
    out = []
    for cp in curve.pieces:
        mono = _Monomials(cp.values)
        out.append([_compose(specialized[i], mono) for i in indices])
    return out


# -- dual curves -------------------------------------------------------------

def adjoint_integrate(ctx: GroupContext, curve: DevelopedCurve, v0) -> DualCurve:
    """lambda_i' = -sum_{j<=r} h_j sum_k c_ij^k lambda_k, lambda(0) = v0.

    Solved in decreasing i (c_ij^k != 0 with j <= r forces k > i), then
    certified by substituting the result back into the full system.
    """
    n, r = ctx.n, ctx.r
    v0 = tuple(as_rational(x) for x in v0)
    if len(v0) != n:
        raise DimensionError(f"covector of length {len(v0)} for dimension {n}")
    coupling = {
        i: [(j, ctx.c(i, j)) for j in range(1, r + 1) if ctx.c(i, j)]
        for i in range(1, n + 1)
    }

    def rhs(i: int, lam: list, h: Sequence[UPoly]) -> UPoly:
        acc = UPoly()
        for j, cij in coupling[i]:
            inner = UPoly()
            for k, c in cij.items():
                if lam[k - 1] is not None:
                    inner = inner + lam[k - 1] * c
            acc = acc - h[j - 1] * inner
        return acc

    start = list(v0)
    pieces = []
    for piece in curve.controls.pieces:
        lam: list[Optional[UPoly]] = [None] * n
        for i in range(n, 0, -1):
            lam[i - 1] = rhs(i, lam, piece.h).integral_from(piece.t0) + start[i - 1]
        for i in range(1, n + 1):
            if lam[i - 1].deriv() != rhs(i, lam, piece.h):
                raise ResidualError(f"adjoint residual nonzero in component {i} on [{piece.t0}, {piece.t1}]")
        pieces.append(CurvePiece(piece.t0, piece.t1, tuple(lam)))
        start = [q(piece.t1) for q in lam]
    return DualCurve(tuple(pieces), v0)


def verify_master_identity(ctx: GroupContext, curve: DevelopedCurve, v0, polys=None, dual: Optional[DualCurve] = None) -> bool:
    """lambda_i == P_i^{v0}(gamma) as piecewise polynomials, for every i."""
    if dual is None:
        dual = adjoint_integrate(ctx, curve, v0)
    along = extremal_along(ctx, curve, v0, polys=polys)
    return all(list(dp.values) == vals for dp, vals in zip(dual.pieces, along))


# -- classification ----------------------------------------------------------

def homogeneous_rows(ctx: GroupContext, curve: DevelopedCurve, indices: Sequence[int], polys) -> list[tuple[int, int, list]]:
    """Rows (piece, i, coefficient row over v) of P_i^v(gamma) for each power of t."""
    polys = _polys(ctx, polys)
    n = ctx.n
    rows = []
    for pk, cp in enumerate(curve.pieces):
        mono = _Monomials(cp.values)
        for i in indices:
            comp = _compose_slices(polys[i - 1], mono)
            top = max((q.degree for q in comp.values()), default=-1)
            for p in range(top + 1):
                row = [ZERO] * n
                for k, q in comp.items():
                    row[k - 1] = q.coeff(p)
                rows.append((pk, i, p, row))
    return rows


def find_abnormal_covectors(ctx: GroupContext, curve: DevelopedCurve, polys=None) -> list[tuple[Fraction, ...]]:
    """Basis of {v : P_i^v(gamma) == 0 for i <= r}; its dimension is the corank."""
    rows = homogeneous_rows(ctx, curve, range(1, ctx.r + 1), polys)
    return nullspace([row for *_, row in rows], ctx.n)


def goh_indices(ctx: GroupContext) -> range:
    top = ctx.r + (ctx.basis.layer_dims[1] if ctx.s >= 2 else 0)
    return range(1, top + 1)


def find_goh_covectors(ctx: GroupContext, curve: DevelopedCurve, polys=None) -> list[tuple[Fraction, ...]]:
    """Basis of {v : P_i^v(gamma) == 0 for i <= r1 + r2}."""
    rows = homogeneous_rows(ctx, curve, goh_indices(ctx), polys)
    return nullspace([row for *_, row in rows], ctx.n)


NORMAL_CAPABLE = "normal-capable"
STRICT_CANDIDATE = "strictly-abnormal-candidate"


@dataclass
class StrictnessReport:
    verdict: str
    witnesses: dict = field(default_factory=dict)  # sign -> v or None

    @property
    def strict(self) -> bool:
        return self.verdict == STRICT_CANDIDATE


def strictness_check(ctx: GroupContext, curve: DevelopedCurve, polys=None) -> StrictnessReport:
    """Look for v with P_j^v(gamma) == sigma * h_j (j <= r) for sigma = +1 and -1."""
    rows = homogeneous_rows(ctx, curve, range(1, ctx.r + 1), polys)
    # every power of t up to the larger of the two sides must match
    needed = {}
    for pk, i, p, _ in rows:
        needed[(pk, i)] = max(needed.get((pk, i), -1), p)
    for pk, hp in enumerate(curve.controls.pieces):
        for i in range(1, ctx.r + 1):
            needed[(pk, i)] = max(needed.get((pk, i), -1), hp.h[i - 1].degree)
    table = {(pk, i, p): row for pk, i, p, row in rows}
    witnesses = {}
    for sigma in (1, -1):
        A, b = [], []
        for (pk, i), top in needed.items():
            hi = curve.controls.pieces[pk].h[i - 1]
            for p in range(top + 1):
                A.append(table.get((pk, i, p), [ZERO] * ctx.n))
                b.append(sigma * hi.coeff(p))
        witnesses[sigma] = solve_affine(A, b, ctx.n) if A else tuple([ZERO] * ctx.n)
    verdict = NORMAL_CAPABLE if any(w is not None for w in witnesses.values()) else STRICT_CANDIDATE
    return StrictnessReport(verdict, witnesses)


@dataclass
class Classification:
    corank: int
    abnormal_basis: list
    goh_basis: list
    strict: str

    def to_json(self) -> dict:
        return {
            "corank": self.corank,
            "abnormal_basis": [[str(x) for x in v] for v in self.abnormal_basis],
            "goh_basis": [[str(x) for x in v] for v in self.goh_basis],
            "strict": "candidate" if self.strict == STRICT_CANDIDATE else NORMAL_CAPABLE,
        }


def classify(ctx: GroupContext, curve: DevelopedCurve, polys=None) -> Classification:
    polys = _polys(ctx, polys)
    ab = find_abnormal_covectors(ctx, curve, polys)
    goh = find_goh_covectors(ctx, curve, polys)
    return Classification(len(ab), ab, goh, strictness_check(ctx, curve, polys).verdict)


# -- the frame check ---------------------------------------------------------

def _frame_at(ctx: GroupContext, x: Sequence[Fraction]) -> list[list[Fraction]]:
    """Rows X_j(x), j = 1..n."""
    return [ctx.field(j).at(x) for j in range(1, ctx.n + 1)]


def _solve_upper_unit(M: list[list[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    n = len(M)
    out = [ZERO] * n
    for j in range(n - 1, -1, -1):
        if M[j][j] != 1 or any(M[j][k] for k in range(j)):
            raise ArithmeticError("frame matrix is not unit upper triangular")
        out[j] = b[j] - sum((M[j][k] * out[k] for k in range(j + 1, n)), ZERO)
    return out


def theta_frame_check(ctx: GroupContext, curve: DevelopedCurve, v0, samples: int = 10, dual: Optional[DualCurve] = None) -> bool:
    """Check xi' = -sum_j h_j (dX_j/dx)^T xi at rational sample times.

    xi is the covector with <xi, X_j(gamma)> = lambda_j; its derivative comes
    from differentiating X(gamma) xi = lambda exactly.
    """
    if dual is None:
        dual = adjoint_integrate(ctx, curve, v0)
    n, r = ctx.n, ctx.r
    full_partials = {}
    for j in range(1, n + 1):
        for l, comp in ctx.field(j).comps.items():
            for k in comp.variables():
                full_partials[(j, l, k)] = comp.partial(k)
    partials = {key: p for key, p in full_partials.items() if key[0] <= r}
    for s in range(samples):
        t = Fraction(2 * s + 1, 2 * samples)
        pk = _piece_index(curve.pieces, t)
        cp, dp, hp = curve.pieces[pk], dual.pieces[pk], curve.controls.pieces[pk]
        x = [q(t) for q in cp.values]
        xdot = [q.deriv()(t) for q in cp.values]
        lam = [q(t) for q in dp.values]
        lamdot = [q.deriv()(t) for q in dp.values]
        h = [q(t) for q in hp.h]
        M = _frame_at(ctx, x)
        xi = _solve_upper_unit(M, lam)
        Mdot = [[ZERO] * n for _ in range(n)]
        for (j, l, k), p in full_partials.items():
            if xdot[k - 1]:
                Mdot[j - 1][l - 1] += p(x) * xdot[k - 1]
        corrected = [lamdot[j] - sum((Mdot[j][l] * xi[l] for l in range(n)), ZERO) for j in range(n)]
        xidot = _solve_upper_unit(M, corrected)
        expected = [ZERO] * n
        for (j, l, k), p in partials.items():
            if h[j - 1] and xi[l - 1]:
                expected[k - 1] -= h[j - 1] * p(x) * xi[l - 1]
        if xidot != expected:
            return False
    return True


# -- length ------------------------------------------------------------------

def length_squared(h: ControlLaw) -> Fraction:
    total = ZERO
    for p in h.pieces:
        density = UPoly()
        for hj in p.h:
            density = density + hj * hj
        F = density.antideriv()
        total += F(p.t1) - F(p.t0)
    return total


def length(h: ControlLaw) -> float:
    return math.sqrt(length_squared(h))


# -- numeric shooting --------------------------------------------------------

@dataclass
class ShootResult:
    times: np.ndarray
    path: np.ndarray
    hamiltonian: np.ndarray
    drift: float

    def to_json(self) -> dict:
        return {
            "T": float(self.times[-1]),
            "steps": len(self.times) - 1,
            "endpoint": self.path[-1].tolist(),
            "H0": float(self.hamiltonian[0]),
            "drift": self.drift,
        }


class _NumericSystem:
    """Float evaluation of P_j^{v0} and X_j for j <= r through one monomial table."""

    def __init__(self, ctx: GroupContext, v0, polys):
        n, r = ctx.n, ctx.r
        P = [specialize_v(polys[j - 1], v0) for j in range(1, r + 1)]
        alphas: dict[tuple, int] = {}

        def slot(alpha):
            return alphas.setdefault(alpha, len(alphas))

        p_entries = [(j, slot(a), float(c)) for j, p in enumerate(P) for a, c in p.terms.items()]
        x_entries = [
            (j, l - 1, slot(a), float(c))
            for j in range(r)
            for l, comp in ctx.field(j + 1).comps.items()
            for a, c in comp.terms.items()
        ]
        m = max(len(alphas), 1)
        self.E = np.zeros((m, n))
        for a, idx in alphas.items():
            self.E[idx] = a
        self.AP = np.zeros((r, m))
        for j, idx, c in p_entries:
            self.AP[j, idx] += c
        self.AX = np.zeros((r, n, m))
        for j, l, idx, c in x_entries:
            self.AX[j, l, idx] += c

    def monomials(self, x: np.ndarray) -> np.ndarray:
        return np.prod(np.power(x[None, :], self.E), axis=1)

    def p(self, x: np.ndarray) -> np.ndarray:
        return self.AP @ self.monomials(x)

    def rhs(self, x: np.ndarray) -> np.ndarray:
        m = self.monomials(x)
        return -(self.AP @ m) @ (self.AX @ m)


def normal_shoot(ctx: GroupContext, v0, T: float = 1.0, dt: float = 1e-3, polys=None) -> ShootResult:
    """RK4 for gamma' = -sum_{j<=r} P_j^{v0}(gamma) X_j(gamma) from the origin."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    polys = _polys(ctx, polys)
    v0 = [as_rational(x) for x in v0]
    system = _NumericSystem(ctx, v0, polys)
    steps = max(int(round(T / dt)), 1)
    h = T / steps
    x = np.zeros(ctx.n)
    path = np.empty((steps + 1, ctx.n))
    ham = np.empty(steps + 1)
    path[0] = x
    ham[0] = float(np.sum(system.p(x) ** 2))
    f = system.rhs
    for k in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        path[k + 1] = x
        ham[k + 1] = float(np.sum(system.p(x) ** 2))
    times = np.linspace(0.0, T, steps + 1)
    return ShootResult(times, path, ham, float(np.max(np.abs(ham - ham[0]))))


# -- regular abnormal indicator ----------------------------------------------

@dataclass
class CommonZeroReport:
    identically_zero: bool
    common_zero: bool
    exact_zeros: list
    intervals: list

    def to_json(self) -> dict:
        return {
            "identically_zero": self.identically_zero,
            "common_zero": self.common_zero,
            "exact_zeros": [str(x) for x in self.exact_zeros],
            "intervals": [[str(a), str(b)] for a, b in self.intervals],
        }


def common_zeros(pieces: Sequence[tuple[Fraction, Fraction, Sequence[UPoly]]]) -> CommonZeroReport:
    """Common zeros on each [t0, t1] of the given polynomials, via gcd and Sturm counts."""
    exact, intervals = set(), set()
    everywhere = True
    for t0, t1, ps in pieces:
        g = UPoly()
        for p in ps:
            g = upoly_gcd(g, p)
        if g.is_zero():
            exact.update([t0, t1])
            continue
        everywhere = False
        if g.degree == 0 or count_roots(g, t0, t1) == 0:
            continue
        for lo, hi in isolate_roots(g, t0, t1):
            if lo == hi:
                exact.add(lo)
            else:
                intervals.add((lo, hi))
    return CommonZeroReport(everywhere, bool(exact or intervals or everywhere), sorted(exact), sorted(intervals))


def regular_abnormal_indicator(ctx: GroupContext, curve: DevelopedCurve, v0, polys=None) -> CommonZeroReport:
    """Whether the third-layer dual components lambda^(3)(t) vanish somewhere on [0, 1]."""
    if ctx.r != 2 or ctx.s < 3:
        raise ValueError("the indicator is defined for rank 2 and step at least 3")
    layer3 = list(ctx.basis.layer(3))
    along = extremal_along(ctx, curve, v0, indices=layer3, polys=polys)
    return common_zeros([(cp.t0, cp.t1, vals) for cp, vals in zip(curve.pieces, along)])
