"""Run the identity suite and print a per-check summary table.

    python scripts/run_suite.py [--suite all] [--seed 7] [--workers 1] [--out report.json]
"""
import argparse
import collections

from sbhermite import identities as ids
from sbhermite import report
from sbhermite.config import RunConfig


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config")
    p.add_argument("--out", default="report.json")
    p.add_argument("--csv", default="summary.csv")
    a = p.parse_args()
    base = RunConfig.load(a.config).to_dict() if a.config else {}
    cfg = RunConfig.from_dict({**base, "seed": a.seed, "workers": a.workers, "out": a.out, "csv": a.csv})
    ids_ = "all" if a.suite == "all" else a.suite.split(",")
    summary = ids.run_suite(ids_, cfg, timing=True)
    report.write_json(summary, cfg.out)
    report.write_csv(summary, cfg.csv)

    groups = collections.OrderedDict()
    for r in summary.reports:
        groups.setdefault(r.check_id, []).append(r)
    print(f"{'check':24s} {'reports':>7s} {'failed':>6s} {'worst residual':>15s} {'tol':>7s} {'seconds':>8s}")
    for cid, rows in groups.items():
        worst = max(r.residual for r in rows)
        secs = sum(r.seconds or 0.0 for r in rows)
        failed = sum(not r.passed for r in rows)
        print(f"{cid:24s} {len(rows):7d} {failed:6d} {worst:15.3e} {rows[0].tolerance:7.0e} {secs:8.2f}")
    print(f"\n{len(summary.reports)} reports, {len(summary.failed_ids)} failing check ids: "
          f"{', '.join(summary.failed_ids) or 'none'}")


if __name__ == "__main__":
    main()
