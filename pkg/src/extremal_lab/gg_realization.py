"""Polynomial vector-field realization of a Hall basis and its structure constants.

Generators follow the Grayson-Grossman formula; higher basis fields are
brackets of their children.  Every field equals its coordinate direction at
the origin, so structure constants are read off at 0 and then certified by
an exact symbolic residual.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .exact_poly import (
    MultiIndex,
    Polynomial,
    PolyVectorField,
    linear_combination,
    mi_abs,
    mi_factorial,
    mi_leq,
    mi_sub,
    mi_top,
    multi_indices_up_to,
    unit,
    vf_bracket,
    zero_index,
)
from .hall_basis import DEFAULT_CAP, ORDERING_VERSION, HallBasis, build_hall_basis

log = logging.getLogger(__name__)

CACHE_ENV = "EXTREMAL_LAB_CACHE"
CACHE_FORMAT = 1

SparseVec = dict  # dict[int, Fraction], 1-based keys, nonzero values only


class ResidualError(RuntimeError):
    """A bracket failed to expand exactly in the basis fields."""


def _axpy(out: SparseVec, c: Fraction, vec: SparseVec) -> None:
    for k, v in vec.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def generator_field(basis: HallBasis, i: int) -> PolyVectorField:
    """X_i = sum over l with i < l of (-1)^|I(l)| / I(l)! x^I(l) d/dx_l."""
    if not 1 <= i <= basis.r:
        raise ValueError(f"X{i} is not a generator (rank {basis.r})")
    n = basis.n
    comps = {}
    for l in basis.descendants[i]:
        I = basis[l].I
        coeff = Fraction((-1) ** mi_abs(I)) / mi_factorial(I)
        comps[l] = Polynomial.monomial(I, coeff)
    return PolyVectorField(n, comps)


def realize_fields(basis: HallBasis) -> list[PolyVectorField]:
    fields: list[PolyVectorField] = []
    for e in basis.elements:
        if e.children is None:
            fields.append(generator_field(basis, e.index))
        else:
            i, j = e.children
            fields.append(vf_bracket(fields[i - 1], fields[j - 1]))
    return fields


@dataclass(frozen=True)
class GroupContext:
    basis: HallBasis
    fields: tuple[PolyVectorField, ...]
    sc: dict = field(repr=False)   # (i, j) -> SparseVec
    gsc: dict = field(repr=False)  # (i, alpha) -> SparseVec, d(i) + d(alpha) <= s

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def r(self) -> int:
        return self.basis.r

    @property
    def s(self) -> int:
        return self.basis.s

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.basis.degrees

    def field(self, l: int) -> PolyVectorField:
        return self.fields[l - 1]

    def c(self, i: int, j: int) -> SparseVec:
        return self.sc.get((i, j), {})

    def gsc_vec(self, i: int, alpha: MultiIndex) -> SparseVec:
        if len(alpha) != self.n:
            raise ValueError(f"multi-index of length {len(alpha)} in a group of dimension {self.n}")
        return self.gsc.get((i, tuple(alpha)), {})


def basis_field(ctx: GroupContext, l: int) -> PolyVectorField:
    return ctx.field(l)


def _structure_constants(basis: HallBasis, fields: list[PolyVectorField]) -> dict:
    n = basis.n
    sc: dict = {}
    for i in range(1, n + 1):
        for j in range(1, i):
            B = vf_bracket(fields[i - 1], fields[j - 1])
            at0 = B.at_origin()
            coeffs = {k + 1: c for k, c in enumerate(at0) if c}
            residual = B - linear_combination(fields, coeffs)
            if not residual.is_zero():
                raise ResidualError(
                    f"[X{i}, X{j}] - sum c^k X_k is not zero: {residual!r}"
                )
            if coeffs:
                sc[(i, j)] = coeffs
                sc[(j, i)] = {k: -c for k, c in coeffs.items()}
    return sc


def _fold_gsc(basis: HallBasis, sc: dict) -> dict:
    n, s, deg = basis.n, basis.s, basis.degrees
    table: dict = {}
    for i in range(1, n + 1):
        table[(i, zero_index(n))] = {i: Fraction(1)}
        for alpha in multi_indices_up_to(deg, s - deg[i - 1]):
            if not any(alpha):
                continue
            u = mi_top(alpha)
            prev = table.get((i, mi_sub(alpha, unit(n, u))), {})
            out: SparseVec = {}
            for k, ck in prev.items():
                _axpy(out, ck, sc.get((k, u), {}))
            if out:
                table[(i, alpha)] = out
    return table


def cache_dir_default() -> Optional[Path]:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _cache_path(cache_dir: Path, r: int, s: int) -> Path:
    return Path(cache_dir) / f"gsc_r{r}_s{s}_{ORDERING_VERSION}.json"


def _vec_json(vec: SparseVec) -> list[dict]:
    return [{"k": k, "num": str(c.numerator), "den": str(c.denominator)} for k, c in sorted(vec.items())]


def _vec_from_json(data: list[dict]) -> SparseVec:
    return {int(t["k"]): Fraction(int(t["num"]), int(t["den"])) for t in data}


def write_cache(ctx: GroupContext, cache_dir: Path) -> Path:
    path = _cache_path(cache_dir, ctx.r, ctx.s)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": CACHE_FORMAT,
        "ordering": ORDERING_VERSION,
        "r": ctx.r,
        "s": ctx.s,
        "gsc": [
            {"i": i, "alpha": list(alpha), "coeffs": _vec_json(vec)}
            for (i, alpha), vec in sorted(ctx.gsc.items())
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)
    return path


def _read_cache(path: Path, basis: HallBasis) -> Optional[dict]:
    try:
        payload = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if payload.get("format") != CACHE_FORMAT or payload.get("ordering") != ORDERING_VERSION:
        return None
    if (payload.get("r"), payload.get("s")) != (basis.r, basis.s):
        return None
    return {
        (int(e["i"]), tuple(e["alpha"])): _vec_from_json(e["coeffs"])
        for e in payload["gsc"]
    }


def _vec_str(vec: SparseVec) -> str:
    return "{" + ", ".join(f"X{k}: {c}" for k, c in sorted(vec.items())) + "}"


def verify_gsc_table(basis: HallBasis, sc: dict, gsc: dict) -> None:
    """Compare a stored table against a fresh fold over the certified constants."""
    fresh = _fold_gsc(basis, sc)
    for key in sorted(set(fresh) | set(gsc)):
        if fresh.get(key, {}) != gsc.get(key, {}):
            i, alpha = key
            raise ResidualError(
                f"generalized constants for X{i}, alpha={list(alpha)}: "
                f"stored {_vec_str(gsc.get(key, {}))} but brackets give {_vec_str(fresh.get(key, {}))}"
            )


def build_group(r: int, s: int, cap: int = DEFAULT_CAP, cache_dir: Optional[Path] = None) -> GroupContext:
    """Hall basis, realized fields, structure constants and generalized constants."""
    basis = build_hall_basis(r, s, cap=cap)
    fields = realize_fields(basis)
    for l, X in enumerate(fields, start=1):
        if X.at_origin() != [Fraction(int(k == l)) for k in range(1, basis.n + 1)]:
            raise ResidualError(f"X{l}(0) is not the coordinate direction e_{l}")
    sc = _structure_constants(basis, fields)

    gsc = None
    path = _cache_path(cache_dir, r, s) if cache_dir is not None else None
    if path is not None and path.exists():
        gsc = _read_cache(path, basis)
        if gsc is not None:
            verify_gsc_table(basis, sc, gsc)
            log.debug("loaded generalized constants from %s", path)
    if gsc is None:
        gsc = _fold_gsc(basis, sc)
    ctx = GroupContext(basis, tuple(fields), sc, gsc)
    if path is not None and not path.exists():
        write_cache(ctx, cache_dir)
    return ctx


def structure_constants(ctx: GroupContext) -> dict:
    return ctx.sc


def generalized_structure_constants(ctx: GroupContext, i: int, alpha: MultiIndex) -> SparseVec:
    return dict(ctx.gsc_vec(i, alpha))


def iterated_bracket_field(ctx: GroupContext, i: int, alpha: MultiIndex, _memo: Optional[dict] = None) -> PolyVectorField:
    """[X_i, X_alpha] as a concrete field: bracket with X_1 alpha_1 times, then X_2, ..."""
    memo = _memo if _memo is not None else {}
    key = (i, tuple(alpha))
    if key in memo:
        return memo[key]
    if not any(alpha):
        out = ctx.field(i)
    else:
        u = mi_top(alpha)
        prev = iterated_bracket_field(ctx, i, mi_sub(alpha, unit(ctx.n, u)), memo)
        out = vf_bracket(prev, ctx.field(u)) if not prev.is_zero() else prev
    memo[key] = out
    return out


def gsc_by_fields(ctx: GroupContext, i: int, alpha: MultiIndex, memo: Optional[dict] = None) -> SparseVec:
    """Generalized constants computed from concrete field brackets, residual-checked."""
    F = iterated_bracket_field(ctx, i, alpha, memo)
    coeffs = {k + 1: c for k, c in enumerate(F.at_origin()) if c}
    if not (F - linear_combination(ctx.fields, coeffs)).is_zero():
        raise ResidualError(f"[X{i}, X_alpha] for alpha={alpha} does not expand in the basis")
    return coeffs


def check_rr_identity(ctx: GroupContext, i: int, q: int, beta: MultiIndex, memo: Optional[dict] = None) -> bool:
    """[[X_i, X_q], X_beta] == sum over l in A(beta, q) of binom-coefficient [X_i, X_(beta - I(l) + e_l)]."""
    b = ctx.basis
    n = ctx.n
    memo = {} if memo is None else memo
    lhs_key = ("rr-lhs", i, q, tuple(beta))
    if lhs_key in memo:
        lhs = memo[lhs_key]
    else:
        # fold of [X_i, X_q] with X_beta, in the iterated-commutator order
        lhs = vf_bracket(ctx.field(i), ctx.field(q))
        for k in range(1, n + 1):
            for _ in range(beta[k - 1]):
                if lhs.is_zero():
                    break
                lhs = vf_bracket(lhs, ctx.field(k))
        memo[lhs_key] = lhs
    rhs = PolyVectorField.zero(n)
    for l in b.descendants[q]:
        I = b[l].I
        if not mi_leq(I, beta):
            continue
        rest = mi_sub(beta, I)
        coeff = mi_factorial(beta) / (mi_factorial(rest) * mi_factorial(I))
        target = tuple(a + (1 if idx == l - 1 else 0) for idx, a in enumerate(rest))
        term = iterated_bracket_field(ctx, i, target, memo)
        if not term.is_zero():
            rhs = rhs + term.scale(coeff)
    return lhs == rhs


def _extend(p: Polynomial, nvars: int) -> Polynomial:
    pad = (0,) * (nvars - p.nvars)
    return Polynomial._raw(nvars, {a + pad: c for a, c in p.terms.items()})


def symbolic_flow(ctx: GroupContext, l: int) -> list[Polynomial]:
    """Exact flow of X_l: polynomials in (x_1..x_n, t), t being variable n+1.

    Components are solved in increasing index; each right-hand side only
    involves coordinates of strictly lower degree.
    """
    n = ctx.n
    X = ctx.field(l)
    ys: list[Polynomial] = [Polynomial.zero(n + 1) for _ in range(n)]
    for m in range(1, n + 1):
        comp = X.component(m)
        used = comp.variables()
        if any(v >= m for v in used):
            raise ResidualError(f"component {m} of X{l} depends on x_{max(used)}; not triangular")
        start = Polynomial.variable(n + 1, m)
        if comp:
            rhs = comp.compose(ys) if used else _extend(comp, n + 1)
            if not isinstance(rhs, Polynomial):
                rhs = Polynomial.constant(n + 1, rhs)
            ys[m - 1] = start + rhs.integrate(n + 1)
        else:
            ys[m - 1] = start
    return ys


def check_flow(ctx: GroupContext, l: int, flow: list[Polynomial]) -> bool:
    """d/dt y = X_l(y) and y(0) = x, exactly."""
    n = ctx.n
    X = ctx.field(l)
    for m in range(1, n + 1):
        lhs = flow[m - 1].partial(n + 1)
        comp = X.component(m)
        rhs = comp.compose(flow) if comp.variables() else _extend(comp, n + 1)
        if not isinstance(rhs, Polynomial):
            rhs = Polynomial.constant(n + 1, rhs)
        if lhs != rhs:
            return False
        at0 = Polynomial._raw(n, {a[:n]: c for a, c in flow[m - 1].terms.items() if a[n] == 0})
        if at0 != Polynomial.variable(n, m):
            return False
    return True


def exponential_map_second_kind(ctx: GroupContext) -> list[Polynomial]:
    """Psi(x) = exp(x_1 X_1) o ... o exp(x_n X_n)(0) as polynomials in x."""
    n = ctx.n
    point = [Polynomial.zero(n) for _ in range(n)]
    for i in range(n, 0, -1):
        flow = symbolic_flow(ctx, i)
        subs = point + [Polynomial.variable(n, i)]
        point = [p.compose(subs) if p.terms else Polynomial.zero(n) for p in flow]
        point = [p if isinstance(p, Polynomial) else Polynomial.constant(n, p) for p in point]
    return point


def check_exponential_coordinates(ctx: GroupContext) -> bool:
    psi = exponential_map_second_kind(ctx)
    return all(psi[m - 1] == Polynomial.variable(ctx.n, m) for m in range(1, ctx.n + 1))


def jacobi_violations(ctx: GroupContext) -> list[tuple[int, int, int]]:
    """Triples (i, j, p) where the structure constants break the Jacobi identity."""
    n = ctx.n
    bad = []
    for i in range(1, n + 1):
        for j in range(1, i):
            for p in range(1, j):
                total: SparseVec = {}
                for a, b, c in ((i, j, p), (j, p, i), (p, i, j)):
                    for k, ck in ctx.c(a, b).items():
                        _axpy(total, ck, ctx.c(k, c))
                if total:
                    bad.append((i, j, p))
    return bad


def grading_violations(ctx: GroupContext) -> list[tuple[int, int, int]]:
    deg = ctx.degrees
    return [
        (i, j, k)
        for (i, j), vec in ctx.sc.items()
        for k in vec
        if deg[k - 1] != deg[i - 1] + deg[j - 1]
    ]
