"""Golden scenarios: rebuild the reference examples and diff them against fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .curve_lab import (
    STRICT_CANDIDATE,
    ControlLaw,
    develop,
    find_abnormal_covectors,
    find_goh_covectors,
    regular_abnormal_indicator,
    strictness_check,
)
from .exact_poly import Polynomial, format_poly
from .extremal_polys import extremal_polynomial, specialize_v
from .fixtures.golden import ERRATA, GOLDEN, corrected_entries, display_table
from .gg_realization import GroupContext, build_group
from .linalg import in_span


@dataclass
class ScenarioResult:
    name: str
    passed: bool
    lines: list = field(default_factory=list)
    first_mismatch: Optional[str] = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "lines": self.lines, "first_mismatch": self.first_mismatch}


def _term(alpha, k, c) -> str:
    mono = Polynomial.monomial(alpha, 1)
    return f"v{k}: {c} * {format_poly(mono)}"


def diff_tables(computed: dict, expected: dict) -> list[tuple]:
    """Sorted (alpha, k, computed, expected) where the tables disagree."""
    keys = sorted(set(computed) | set(expected), key=lambda key: (key[1], key[0]))
    zero = Fraction(0)
    return [
        (alpha, k, computed.get((alpha, k), zero), expected.get((alpha, k), zero))
        for alpha, k in keys
        if computed.get((alpha, k), zero) != expected.get((alpha, k), zero)
    ]


@dataclass
class GoldenDiff:
    name: str
    corrected: list    # mismatches against the display with errata applied
    verbatim: list     # mismatches against the display as printed
    errata_keys: set   # (alpha, k) positions touched by errata


def golden_diff(name: str, ctx: Optional[GroupContext] = None) -> GoldenDiff:
    (r, s), i, entries, hidden = GOLDEN[name]
    if ctx is None:
        ctx = build_group(r, s)
    n = ctx.n
    computed = {key: c for key, c in extremal_polynomial(ctx, i).table.items() if key[1] not in hidden}
    fix = ERRATA.get(name, {"remove": [], "add": []})
    touched = set(display_table(fix["remove"], n)) | set(display_table(fix["add"], n))
    return GoldenDiff(
        name,
        diff_tables(computed, display_table(corrected_entries(name), n)),
        diff_tables(computed, display_table(entries, n)),
        touched,
    )


def _golden_scenario(label: str, names: list[str]) -> ScenarioResult:
    res = ScenarioResult(label, True)
    ctxs: dict = {}
    for name in names:
        rs = GOLDEN[name][0]
        ctx = ctxs.setdefault(rs, build_group(*rs))
        d = golden_diff(name, ctx)
        ok = not d.corrected and {(a, k) for a, k, *_ in d.verbatim} <= d.errata_keys
        res.passed &= ok
        res.lines.append(f"{name}: {'match' if ok else 'MISMATCH'} ({len(d.verbatim)} known misprint position(s))")
        if d.corrected and res.first_mismatch is None:
            alpha, k, got, want = d.corrected[0]
            res.first_mismatch = f"{name} {_term(alpha, k, 1)}: computed {got}, expected {want}"
    return res


def gk_poly() -> ScenarioResult:
    ctx = build_group(2, 4)
    v = [0] * ctx.n
    v[4] = v[5] = 1
    got = specialize_v(extremal_polynomial(ctx, 3), v)
    want = Polynomial(ctx.n, {(2,) + (0,) * 7: Fraction(1, 2), (0, 1) + (0,) * 6: -1})
    ok = got == want
    return ScenarioResult("gk-poly", ok, [f"P_3^v = {format_poly(got)}"], None if ok else f"expected {format_poly(want)}")


def r2s6_p3() -> ScenarioResult:
    return _golden_scenario("r2s6-p3", ["R2S6_P3"])


def r3s4_quadrics() -> ScenarioResult:
    return _golden_scenario("r3s4-quadrics", ["R3S4_P4", "R3S4_P5", "R3S4_P6"])


def gk_curve_law() -> ControlLaw:
    return ControlLaw.polynomial([1], [0, 1])


def gk_strict(step: int = 4) -> ScenarioResult:
    ctx = build_group(2, step)
    curve = develop(ctx, gk_curve_law())
    v = [0] * ctx.n
    v[4] = v[5] = 1
    goh = find_goh_covectors(ctx, curve)
    report = strictness_check(ctx, curve)
    ind = regular_abnormal_indicator(ctx, curve, v)
    checks = {
        "Goh covector e5 + e6": in_span(v, goh),
        "strictly abnormal candidate under both signs": report.verdict == STRICT_CANDIDATE,
        "lambda^(3) has no zero on [0, 1]": not ind.common_zero,
    }
    lines = [f"{k}: {'yes' if ok else 'NO'}" for k, ok in checks.items()]
    failed = [k for k, ok in checks.items() if not ok]
    return ScenarioResult("gk-strict", not failed, lines, failed[0] if failed else None)


def corner_law(phi_dot: list) -> ControlLaw:
    return ControlLaw.polynomial([0, 2], [1], phi_dot)


CORNER_PHI_DOTS = {
    "phi = 0": [0],
    "phi = t^2 - t": [-1, 2],
    "phi = t^3/3 - 2t^2 + t": [1, -4, 1],
}


def corner_goh() -> ScenarioResult:
    ctx = build_group(3, 4)
    v = [0] * ctx.n
    v[6], v[17] = 1, 2
    p4 = specialize_v(extremal_polynomial(ctx, 4), v)
    lines = [f"P_4^v = {format_poly(p4)}"]
    ok = p4 == Polynomial(ctx.n, {(0, 2) + (0,) * 30: 1, (1,) + (0,) * 31: -1})
    for label, phi_dot in CORNER_PHI_DOTS.items():
        curve = develop(ctx, corner_law(phi_dot))
        good = in_span(v, find_goh_covectors(ctx, curve))
        lines.append(f"{label}: {'Goh' if good else 'NOT Goh'}")
        ok &= good
    return ScenarioResult("corner-goh", ok, lines, None if ok else "corner curve not certified Goh")


def heis_noabnormal() -> ScenarioResult:
    ctx = build_group(2, 2)
    curve = develop(ctx, gk_curve_law())
    basis = find_abnormal_covectors(ctx, curve)
    ok = not basis
    return ScenarioResult("heis-noabnormal", ok, [f"corank = {len(basis)}"], None if ok else "nonzero abnormal covector")


SCENARIOS: dict[str, Callable[[], ScenarioResult]] = {
    "gk-poly": gk_poly,
    "r2s6-p3": r2s6_p3,
    "r3s4-quadrics": r3s4_quadrics,
    "gk-strict": gk_strict,
    "corner-goh": corner_goh,
    "heis-noabnormal": heis_noabnormal,
}
