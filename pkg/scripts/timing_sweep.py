"""Wall-clock cost of the exact pipeline across (rank, step).

    python scripts/timing_sweep.py --max-n 40 --trials 20
"""

import argparse
import random
import time
from dataclasses import dataclass

from extremal_lab.curve_lab import develop, find_abnormal_covectors, verify_master_identity
from extremal_lab.extremal_polys import all_extremal_polynomials
from extremal_lab.gg_realization import build_group
from extremal_lab.hall_basis import free_dimension
from extremal_lab.selftest import random_control_law, random_rational


@dataclass
class SweepConfig:
    ranks: tuple = (2, 3)
    max_step: int = 6
    max_n: int = 40
    trials: int = 20
    seed: int = 0


def sweep(cfg: SweepConfig) -> list[dict]:
    rows = []
    for r in cfg.ranks:
        for s in range(2, cfg.max_step + 1):
            if free_dimension(r, s) > cfg.max_n:
                break
            rng = random.Random(cfg.seed)
            t0 = time.perf_counter()
            ctx = build_group(r, s)
            t1 = time.perf_counter()
            polys = all_extremal_polynomials(ctx)
            t2 = time.perf_counter()
            for _ in range(cfg.trials):
                curve = develop(ctx, random_control_law(rng, r))
                assert verify_master_identity(ctx, curve, [random_rational(rng) for _ in range(ctx.n)], polys=polys)
            t3 = time.perf_counter()
            find_abnormal_covectors(ctx, develop(ctx, random_control_law(rng, r)), polys)
            t4 = time.perf_counter()
            rows.append({"r": r, "s": s, "n": ctx.n, "group": t1 - t0, "polys": t2 - t1,
                         "master/trial": (t3 - t2) / max(cfg.trials, 1), "classify": t4 - t3})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--max-step", type=int, default=SweepConfig.max_step)
    ap.add_argument("--trials", type=int, default=SweepConfig.trials)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = ap.parse_args()
    rows = sweep(SweepConfig(max_step=a.max_step, max_n=a.max_n, trials=a.trials, seed=a.seed))
    cols = ["r", "s", "n", "group", "polys", "master/trial", "classify"]
    print("  ".join(f"{c:>12s}" for c in cols))
    for row in rows:
        print("  ".join(f"{row[c]:12d}" if isinstance(row[c], int) else f"{row[c]:12.4f}" for c in cols))


if __name__ == "__main__":
    main()
