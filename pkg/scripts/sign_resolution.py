"""Print the stated-versus-observed resolution for every check that carries one.

For each such check the script shows the residual of the form as stated and of
the alternative the numerics single out, per field strength nu.

    python scripts/sign_resolution.py [--seed 7]
"""
import argparse

from sbhermite import identities as ids
from sbhermite.config import RunConfig

WITH_RESOLUTION = ("fourier_conjugation", "restriction_fourier", "fourier_eigen", "b2_gamma",
                   "wigner_intertwine", "landau_eigen")


def _fmt(v):
    return f"{v:.3e}" if isinstance(v, float) else str(v)


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seed", type=int, default=7)
    a = p.parse_args()
    cfg = RunConfig(seed=a.seed)
    for cid in WITH_RESOLUTION:
        for r in ids.run_check(cid, seed=a.seed, config=cfg):
            if not r.resolution:
                continue
            nu = r.params.get("nu", "mixed")
            print(f"[{'PASS' if r.passed else 'FAIL'}] {cid}  nu={nu}")
            res = r.resolution
            if "literal" in res or "stated" in res:
                key = "literal" if "literal" in res else "stated"
                print(f"    as stated   : {res[key]}  residual {_fmt(r.residual)}")
                print(f"    alternative : {res['alternative']}  residual {_fmt(res['alternative_residual'])}")
            if "residuals" in res:
                for cand, v in res["residuals"].items():
                    desc = res.get("candidates", {}).get(cand, "")
                    print(f"    candidate {cand:3s}: residual {_fmt(v)}  {desc}")
                print(f"    passing: {res['passing'] or 'none'}; observed: {res.get('observed')}")
            if "lhs_over_sigma_minus" in res:
                mean, spread = res["lhs_over_sigma_minus"]
                print(f"    lhs / (sigma=-1 right side): {complex(*mean):.12f} (spread {spread:.1e})")
            if "eigenvalues" in res:
                shown = list(res["eigenvalues"].items())[:6]
                print("    eigenvalues: " + ", ".join(f"({k}) {complex(*v):.6f}" for k, v in shown) + ", ...")
        print()


if __name__ == "__main__":
    main()
