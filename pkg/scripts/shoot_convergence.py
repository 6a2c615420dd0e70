"""Order check for the normal-extremal integrator.

Halving dt should cut the drift of sum_j P_j^2 by about 2^4.

    python scripts/shoot_convergence.py --r 2 --s 4 --samples 3
"""

import argparse
import random
from dataclasses import dataclass
from fractions import Fraction

from extremal_lab.curve_lab import normal_shoot
from extremal_lab.extremal_polys import all_extremal_polynomials
from extremal_lab.gg_realization import build_group


@dataclass
class ShootConfig:
    r: int = 2
    s: int = 4
    samples: int = 3
    T: float = 1.0
    dts: tuple = (4e-3, 2e-3, 1e-3, 5e-4)
    seed: int = 11


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name in ("r", "s", "samples", "seed"):
        ap.add_argument(f"--{name}", type=int, default=getattr(ShootConfig, name))
    ap.add_argument("--T", type=float, default=ShootConfig.T)
    a = ap.parse_args()
    cfg = ShootConfig(a.r, a.s, a.samples, a.T, seed=a.seed)
    ctx = build_group(cfg.r, cfg.s)
    polys = all_extremal_polynomials(ctx)
    rng = random.Random(cfg.seed)
    for k in range(cfg.samples):
        # magnitudes near 1 leave the drift at roundoff level, where ratios mean nothing
        v0 = [Fraction(rng.randint(-30, 30), 10) for _ in range(ctx.n)]
        drifts = [normal_shoot(ctx, v0, T=cfg.T, dt=dt, polys=polys).drift for dt in cfg.dts]
        print(f"sample {k}: v0 = [{', '.join(str(x) for x in v0)}]")
        prev = None
        for dt, d in zip(cfg.dts, drifts):
            ratio = f"  ratio {prev / d:6.2f}" if prev and d else ""
            print(f"    dt = {dt:.1e}  drift = {d:.3e}{ratio}")
            prev = d


if __name__ == "__main__":
    main()
