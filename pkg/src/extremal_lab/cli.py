"""extremal-lab: command line entry point.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import curve_lab as cl
from .exact_poly import DimensionError, format_poly
from .extremal_polys import (
    abnormal_variety_generators,
    extremal_polynomial,
    goh_variety_generators,
    specialize_v,
)
from .gg_realization import CACHE_ENV, ResidualError, build_group, cache_dir_default
from .hall_basis import DEFAULT_CAP, ResourceCapError, build_hall_basis
from .quotient_lift import (
    QuotientError,
    commutation_check,
    find_quotient_abnormal_covectors,
    lift_curve,
    pullback_check,
    quotient_dual_check,
    quotient_from_json,
)
from .reproduce import SCENARIOS
from .selftest import run_selftest

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    json: bool = False
    seed: int = 0
    trials: int = 20
    cap: int = DEFAULT_CAP
    cache_dir: Optional[Path] = None
    args: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cap < 1:
            raise UsageError("--cap must be at least 1")


# -- input parsing -----------------------------------------------------------

_UNIT = re.compile(r"^([+-]?[0-9/]*)\*?e(\d+)$")


def parse_vector(text: str, n: int) -> list[Fraction]:
    """'1,0,-1/2,...' (length n) or a sparse sum like 'e5+e6' or '2e18-e7'."""
    text = text.replace(" ", "")
    if "e" in text:
        out = [Fraction(0)] * n
        for term in re.findall(r"[+-]?[^+-]+", text):
            m = _UNIT.match(term)
            if not m:
                raise UsageError(f"cannot parse vector term {term!r}")
            coeff, idx = m.group(1), int(m.group(2))
            if not 1 <= idx <= n:
                raise UsageError(f"e{idx} outside 1..{n}")
            c = Fraction(1) if coeff in ("", "+") else Fraction(-1) if coeff == "-" else Fraction(coeff)
            out[idx - 1] += c
        return out
    try:
        vals = [Fraction(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(vals) != n:
        raise UsageError(f"vector has {len(vals)} entries, expected {n}")
    return vals


def load_controls(args, r: int) -> cl.ControlLaw:
    try:
        if args.controls:
            law = cl.ControlLaw.from_json(json.loads(Path(args.controls).read_text()))
        elif args.h:
            law = cl.ControlLaw.polynomial(*[[Fraction(c) for c in part.split(",") if c] for part in args.h.split(";")])
        else:
            raise UsageError("give controls with --controls FILE or --h 'c0,c1;...'")
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"bad controls: {exc}") from None
    if law.r != r:
        raise UsageError(f"{law.r} controls given, rank is {r}")
    return law


def _fmt_vec(v) -> list[str]:
    return [str(x) for x in v]


def _emit(cfg: RunConfig, payload, text: str) -> None:
    if cfg.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# -- subcommands -------------------------------------------------------------

def cmd_basis(cfg, a) -> int:
    b = build_hall_basis(a.r, a.s, cap=cfg.cap)
    _emit(cfg, {"r": b.r, "s": b.s, "n": b.n, "layers": list(b.layer_dims), "elements": b.to_json()},
          "\n".join([f"rank {b.r}, step {b.s}: n = {b.n}, layers {b.layer_dims}"] + [b.describe(i) for i in range(1, b.n + 1)]))
    return EXIT_OK


def _group(cfg, a):
    return build_group(a.r, a.s, cap=cfg.cap, cache_dir=cfg.cache_dir)


def cmd_constants(cfg, a) -> int:
    ctx = _group(cfg, a)
    if a.generalized:
        rows = [
            {"i": i, "alpha": list(alpha), "k": k, "c": str(c)}
            for (i, alpha), vec in sorted(ctx.gsc.items()) if any(alpha)
            for k, c in sorted(vec.items())
        ]
        text = "\n".join(
            f"c_({e['i']}, {tuple(e['alpha'])})^{e['k']} = {e['c']}" for e in rows
        )
    else:
        rows = [
            {"i": i, "j": j, "k": k, "c": str(c)}
            for (i, j), vec in sorted(ctx.sc.items()) if i > j
            for k, c in sorted(vec.items())
        ]
        text = "\n".join(f"[X{e['i']}, X{e['j']}] -> {e['c']} X{e['k']}" for e in rows)
    _emit(cfg, {"r": ctx.r, "s": ctx.s, "generalized": a.generalized, "constants": rows}, text)
    return EXIT_OK


def cmd_extremal_poly(cfg, a) -> int:
    ctx = _group(cfg, a)
    if not 1 <= a.i <= ctx.n:
        raise UsageError(f"--i must lie in 1..{ctx.n}")
    ep = extremal_polynomial(ctx, a.i)
    if a.v:
        p = specialize_v(ep, parse_vector(a.v, ctx.n))
        _emit(cfg, {"i": a.i, "poly": p.to_json()}, f"P_{a.i}^v = {format_poly(p)}")
    else:
        lines = [f"v{k}: {format_poly(p)}" for k, p in ep.slices.items()]
        _emit(cfg, {"i": a.i, "table": ep.to_json()}, f"P_{a.i}^v =\n" + "\n".join("  " + s for s in lines))
    return EXIT_OK


def cmd_variety(cfg, a) -> int:
    ctx = _group(cfg, a)
    v = parse_vector(a.v, ctx.n)
    try:
        gens = goh_variety_generators(ctx, v) if a.goh else abnormal_variety_generators(ctx, v)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    name = "G_v" if a.goh else "Z_v"
    _emit(cfg, {"variety": name, "generators": [g.to_json() for g in gens]},
          "\n".join(f"{name}: P_{i}^v = {format_poly(g)}" for i, g in enumerate(gens, start=1)))
    return EXIT_OK


def cmd_develop(cfg, a) -> int:
    ctx = _group(cfg, a)
    curve = cl.develop(ctx, load_controls(a, ctx.r))
    ok = cl.check_development(ctx, curve)
    text = []
    for p in curve.pieces:
        text.append(f"[{p.t0}, {p.t1}]")
        text += [f"  gamma_{l} = {q}" for l, q in enumerate(p.values, start=1)]
    _emit(cfg, {"curve": curve.to_json(), "verified": ok}, "\n".join(text))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg, a) -> int:
    ctx = _group(cfg, a)
    curve = cl.develop(ctx, load_controls(a, ctx.r))
    v0 = parse_vector(a.v0, ctx.n)
    dual = cl.adjoint_integrate(ctx, curve, v0)
    master = cl.verify_master_identity(ctx, curve, v0, dual=dual)
    frame = cl.theta_frame_check(ctx, curve, v0, samples=a.samples, dual=dual)
    _emit(cfg, {"master_identity": master, "theta_frame": frame, "dual": dual.to_json()},
          f"lambda = P^v(gamma): {'pass' if master else 'FAIL'}\ntheta-frame equations: {'pass' if frame else 'FAIL'}")
    return EXIT_OK if master and frame else EXIT_FAIL


def cmd_classify(cfg, a) -> int:
    ctx = _group(cfg, a)
    curve = cl.develop(ctx, load_controls(a, ctx.r))
    c = cl.classify(ctx, curve)
    text = [f"corank {c.corank}", f"Goh space dimension {len(c.goh_basis)}", f"strictness: {c.strict}"]
    text += [f"  abnormal v = ({', '.join(_fmt_vec(v))})" for v in c.abnormal_basis]
    _emit(cfg, c.to_json(), "\n".join(text))
    return EXIT_OK


def cmd_shoot(cfg, a) -> int:
    ctx = _group(cfg, a)
    res = cl.normal_shoot(ctx, parse_vector(a.v0, ctx.n), T=a.T, dt=a.dt)
    _emit(cfg, res.to_json(), f"endpoint {res.path[-1].tolist()}\nH(0) = {res.hamiltonian[0]:.12g}, drift {res.drift:.3e}")
    return EXIT_OK


def cmd_length(cfg, a) -> int:
    law = load_controls(a, a.r)
    sq = cl.length_squared(law)
    _emit(cfg, {"length": cl.length(law), "length_squared": str(sq)}, f"L = {cl.length(law):.15g} (L^2 = {sq})")
    return EXIT_OK


def _quotient(cfg, a):
    try:
        data = json.loads(Path(a.quotient).read_text())
        ctx = build_group(int(data["r"]), int(data["s"]), cap=cfg.cap, cache_dir=cfg.cache_dir)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad quotient file: {exc}") from None
    return quotient_from_json(ctx, data)


def cmd_lift(cfg, a) -> int:
    q = _quotient(cfg, a)
    law = load_controls(a, q.r)
    kappa = lift_curve(q, law)
    ok = commutation_check(q, law)
    _emit(cfg, {"lift": kappa.to_json(), "commutation": ok},
          "\n".join([f"kappa_{l} = {p}" for l, p in enumerate(kappa.pieces[0].values, start=1)] + [f"commutation: {'pass' if ok else 'FAIL'}"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_quotient_check(cfg, a) -> int:
    q = _quotient(cfg, a)
    law = load_controls(a, q.r)
    lam0 = parse_vector(a.lambda0, q.m)
    dual, pull = quotient_dual_check(q, law, lam0), pullback_check(q, law, lam0)
    _emit(cfg, {"dual": dual, "pullback": pull},
          f"quotient dual curve: {'pass' if dual else 'FAIL'}\npullback to the free group: {'pass' if pull else 'FAIL'}")
    return EXIT_OK if dual and pull else EXIT_FAIL


def cmd_quotient_classify(cfg, a) -> int:
    q = _quotient(cfg, a)
    basis = find_quotient_abnormal_covectors(q, load_controls(a, q.r))
    _emit(cfg, {"corank": len(basis), "abnormal_basis": [_fmt_vec(v) for v in basis]},
          f"corank {len(basis)}" + "".join(f"\n  lambda0 = ({', '.join(_fmt_vec(v))})" for v in basis))
    return EXIT_OK


def cmd_reproduce(cfg, a) -> int:
    names = list(SCENARIOS) if a.item == "all" else [a.item]
    results = [SCENARIOS[name]() for name in names]
    if cfg.json:
        print(json.dumps([r.to_json() for r in results], sort_keys=True))
    else:
        for r in results:
            print(f"{r.name}: {'PASS' if r.passed else 'FAIL'}")
            for line in r.lines:
                print(f"  {line}")
            if r.first_mismatch:
                print(f"  first mismatch: {r.first_mismatch}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_selftest(cfg, a) -> int:
    ctx = build_group(a.r, a.s, cap=cfg.cap, cache_dir=cfg.cache_dir)
    results = run_selftest(trials=cfg.trials, seed=cfg.seed, ctx=ctx)
    if cfg.json:
        print(json.dumps([r.to_json() for r in results], sort_keys=True))
    else:
        for r in results:
            print(f"{r.name:26s} {'pass' if r.passed else 'FAIL'}  {r.checked - r.failed}/{r.checked}  {r.note}".rstrip())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum group dimension")
    common.add_argument("--cache-dir", default=None, help=f"generalized-constant cache (default: ${CACHE_ENV})")

    group = argparse.ArgumentParser(add_help=False)
    group.add_argument("--r", type=int, required=True, help="rank")
    group.add_argument("--s", type=int, required=True, help="step")

    controls = argparse.ArgumentParser(add_help=False)
    controls.add_argument("--controls", help="control law JSON file")
    controls.add_argument("--h", help="single-piece polynomial controls, e.g. '1;0,1' for h = (1, t)")

    quotient = argparse.ArgumentParser(add_help=False)
    quotient.add_argument("--quotient", required=True, help="quotient JSON file")

    p = argparse.ArgumentParser(prog="extremal-lab", description="Exact extremal polynomials in free nilpotent groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, parents, help_):
        sp = sub.add_parser(name, parents=[common] + parents, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("basis", cmd_basis, [group], "list the Hall basis")
    sp = add("constants", cmd_constants, [group], "structure constants c_ij^k")
    sp.add_argument("--generalized", action="store_true", help="generalized constants c_(i,alpha)^k")
    sp = add("extremal-poly", cmd_extremal_poly, [group], "extremal polynomial P_i^v")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--v", help="specialize at this covector")
    sp = add("variety", cmd_variety, [group], "generators of Z_v or G_v")
    sp.add_argument("--v", required=True)
    sp.add_argument("--goh", action="store_true")
    add("develop", cmd_develop, [group, controls], "develop a horizontal curve")
    sp = add("verify", cmd_verify, [group, controls], "check lambda = P^v(gamma) and the frame equations")
    sp.add_argument("--v0", required=True)
    sp.add_argument("--samples", type=int, default=10)
    add("classify", cmd_classify, [group, controls], "corank, Goh space and strictness")
    sp = add("shoot", cmd_shoot, [group], "numeric normal extremal from the origin")
    sp.add_argument("--v0", required=True)
    sp.add_argument("--T", type=float, default=1.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp = add("length", cmd_length, [controls], "L2 length of a control law")
    sp.add_argument("--r", type=int, default=2)
    add("lift", cmd_lift, [quotient, controls], "lift a quotient curve to the free group")
    sp = add("quotient-check", cmd_quotient_check, [quotient, controls], "dual curve of a quotient via extremal polynomials")
    sp.add_argument("--lambda0", required=True)
    add("quotient-classify", cmd_quotient_classify, [quotient, controls], "abnormal covectors in a quotient")
    sp = add("reproduce", cmd_reproduce, [], "rerun a reference example")
    sp.add_argument("item", choices=list(SCENARIOS) + ["all"])
    sp = add("selftest", cmd_selftest, [], "run the invariant suites")
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--s", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cache = Path(a.cache_dir) if a.cache_dir else cache_dir_default()
        cfg = RunConfig(a.command, a.json, a.seed, a.trials, a.cap, cache, vars(a))
        return a.fn(cfg, a)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, QuotientError, DimensionError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResidualError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
