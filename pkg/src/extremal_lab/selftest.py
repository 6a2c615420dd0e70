"""Invariant sweeps shared by the command line self-test and the test suite."""

from __future__ import annotations

import random
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .curve_lab import ControlLaw, develop, verify_master_identity
from .exact_poly import multi_indices_up_to
from .extremal_polys import all_extremal_polynomials, check_derivative_identity
from .gg_realization import (
    GroupContext,
    ResidualError,
    build_group,
    check_exponential_coordinates,
    check_rr_identity,
    jacobi_violations,
    write_cache,
)
from .hall_basis import build_hall_basis, validate_basis, witt_dimension


@dataclass
class SuiteResult:
    name: str
    checked: int
    failed: int
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def to_json(self) -> dict:
        return {"suite": self.name, "checked": self.checked, "failed": self.failed, "passed": self.passed, "note": self.note}


def random_rational(rng: random.Random, num: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_control_law(rng: random.Random, r: int, max_degree: int = 3, pieces: int = 1) -> ControlLaw:
    """Random rational polynomial controls, optionally split at random rational breakpoints."""
    cuts = sorted({Fraction(rng.randint(1, 7), 8) for _ in range(pieces - 1)})
    bounds = [Fraction(0)] + cuts + [Fraction(1)]
    return ControlLaw.from_pieces([
        (a, b, [[random_rational(rng) for _ in range(rng.randint(1, max_degree + 1))] for _ in range(r)])
        for a, b in zip(bounds, bounds[1:])
    ])


def witt_suite(ranks=(2, 3), max_step: int = 6) -> SuiteResult:
    checked = failed = 0
    for r in ranks:
        for s in range(1, max_step + 1):
            if r ** s > 2000:
                continue
            b = build_hall_basis(r, s)
            checked += 1
            ok = not validate_basis(b) and b.layer_dims == tuple(witt_dimension(r, d) for d in range(1, s + 1))
            failed += not ok
    return SuiteResult("witt", checked, failed)


def jacobi_suite(ctx: GroupContext) -> SuiteResult:
    n = ctx.n
    return SuiteResult("jacobi", n * (n - 1) * (n - 2) // 6, len(jacobi_violations(ctx)))


def rr_suite(ctx: GroupContext, max_beta: int = 3) -> SuiteResult:
    """The commutator expansion identity for all i, generators q and |beta| <= max_beta."""
    memo: dict = {}
    checked = failed = 0
    ones = [1] * ctx.n
    betas = [b for b in multi_indices_up_to(ones, max_beta) if any(b)]
    for i in range(1, ctx.n + 1):
        for q in range(1, ctx.r + 1):
            for beta in betas:
                checked += 1
                failed += not check_rr_identity(ctx, i, q, beta, memo)
    return SuiteResult("rr-identity", checked, failed)


def derivative_suite(ctx: GroupContext, polys=None) -> SuiteResult:
    polys = polys or all_extremal_polynomials(ctx)
    checked = failed = 0
    for i in range(1, ctx.n + 1):
        for j in range(1, ctx.n + 1):
            checked += 1
            failed += not check_derivative_identity(ctx, i, j, polys)
    return SuiteResult("derivative-identity", checked, failed)


def expo_suite(ctx: GroupContext) -> SuiteResult:
    return SuiteResult("exponential-coordinates", 1, int(not check_exponential_coordinates(ctx)))


def master_suite(ctx: GroupContext, trials: int, rng: random.Random, polys=None) -> SuiteResult:
    polys = polys or all_extremal_polynomials(ctx)
    failed = 0
    for _ in range(trials):
        h = random_control_law(rng, ctx.r, pieces=rng.choice((1, 1, 2)))
        v0 = [random_rational(rng) for _ in range(ctx.n)]
        failed += not verify_master_identity(ctx, develop(ctx, h), v0, polys=polys)
    return SuiteResult("master-identity", trials, failed, "" if trials else "skipped (trials = 0)")


def corrupted_cache_suite(r: int = 2, s: int = 3) -> SuiteResult:
    """A cache with one flipped coefficient must be refused with a diagnostic."""
    with tempfile.TemporaryDirectory() as tmp:
        ctx = build_group(r, s, cache_dir=Path(tmp))
        path = write_cache(ctx, Path(tmp))
        corrupt_cache_file(path)
        try:
            build_group(r, s, cache_dir=Path(tmp))
        except ResidualError as exc:
            return SuiteResult("corrupted-cache", 1, 0, str(exc))
    return SuiteResult("corrupted-cache", 1, 1, "corrupted cache was accepted")


def corrupt_cache_file(path: Path) -> None:
    import json

    payload = json.loads(path.read_text())
    for entry in payload["gsc"]:
        if any(entry["alpha"]):
            entry["coeffs"][0]["num"] = str(2 * int(entry["coeffs"][0]["num"]))
            break
    path.write_text(json.dumps(payload))


def run_selftest(r: int = 2, s: int = 4, trials: int = 20, seed: int = 0, ctx: Optional[GroupContext] = None) -> list[SuiteResult]:
    rng = random.Random(seed)
    ctx = ctx or build_group(r, s)
    polys = all_extremal_polynomials(ctx)
    results = [
        witt_suite(),
        jacobi_suite(ctx),
        rr_suite(ctx, max_beta=2),
        derivative_suite(ctx, polys),
        expo_suite(ctx),
        corrupted_cache_suite(),
    ]
    if trials:
        results.append(master_suite(ctx, trials, rng, polys))
    return results
