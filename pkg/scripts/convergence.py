"""Residual versus quadrature order for the grid-based checks.

Sweeps the C-grid order for the action and reproducing checks, the C^2-grid
order for the inversion round trip, the real-line order for the level-n
transform, and the truncation length for the Mehler series.

    python scripts/convergence.py [--seed 7]
"""
import argparse

from sbhermite import identities as ids
from sbhermite.config import RunConfig


def sweep(cid, field, values, seed, **fixed):
    print(f"{cid}: residual vs {field}")
    for v in values:
        cfg = RunConfig(seed=seed, **{field: v}, **fixed)
        reps = ids.run_check(cid, seed=seed, config=cfg)
        worst = max(r.residual for r in reps)
        print(f"  {field}={v:5d}  worst residual {worst:.3e}")
    print()


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seed", type=int, default=7)
    a = p.parse_args()
    sweep("action_T", "N_c", (20, 30, 40, 60, 80), a.seed)
    sweep("reproducing", "N_c", (20, 30, 40, 60, 80), a.seed)
    sweep("inverse_T", "N_c2", (16, 24, 32, 40), a.seed, combos=1)
    sweep("b1_level_action", "N_r", (10, 20, 40, 80), a.seed)
    sweep("mehler", "series_terms", (16, 24, 32, 48, 64), a.seed)


if __name__ == "__main__":
    main()
