"""Acceptance suite: one test per criterion, each at its stated tolerance.

Runs ``sbhermite check --suite all --seed 7`` through the CLI, reads the JSON
report and re-judges the residuals against the criterion thresholds (not the
per-check tolerances).  Also runnable directly:

    python tests/test_acceptance.py
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

import pytest

from sbhermite.cli import main as cli_main

SEED = 7


def run_cli_suite(directory: Path, tag: str) -> Path:
    out = directory / f"report_{tag}.json"
    cli_main(["check", "--suite", "all", "--seed", str(SEED), "--out", str(out),
              "--csv", str(directory / f"summary_{tag}.csv")])
    return out


def _of(reports, cid, **match):
    sel = [r for r in reports if r["check_id"] == cid and all(r["params"].get(k) == v for k, v in match.items())]
    assert sel, f"no reports for {cid} {match}"
    return sel


def _within(rows, tol):
    worst = max(r["residual"] if isinstance(r["residual"], float) else float("inf") for r in rows)
    return worst <= tol, f"worst residual {worst:.3e} vs {tol:.0e} over {len(rows)} report(s)"


def criterion_1(reps):
    return _within(_of(reps, "action_T"), 1e-6)


def criterion_2(reps):
    return _within(_of(reps, "vanishing"), 1e-10)


def criterion_3(reps):
    return _within(_of(reps, "reproducing"), 1e-8)


def criterion_4(reps):
    inv_ok, inv = _within(_of(reps, "inverse_T"), 1e-5)
    iso_ok, iso = _within(_of(reps, "isometry_T"), 1e-6)
    return inv_ok and iso_ok, f"round trip: {inv}; norm: {iso}"


def criterion_5(reps):
    eig_ok, eig = _within(_of(reps, "fourier_eigen"), 1e-6)
    conj_ok, conj = _within(_of(reps, "fourier_conjugation", form="inverse(T) Gamma_{-i} T"), 1e-6)
    alt = max(r["resolution"]["alternative_residual"] for r in _of(reps, "fourier_eigen"))
    return eig_ok and conj_ok, (f"eigenvalue i^(m+n): {eig}; conjugation: {conj}; "
                                f"observed (-i)^(m+n) residual {alt:.1e}")


def criterion_6(reps):
    lvl_ok, lvl = _within(_of(reps, "b1_level_action") + _of(reps, "action_Tpair"), 1e-6)
    norm_ok, nrm = _within(_of(reps, "unitary_Tpair", property="norm"), 1e-6)
    inv_ok, inv = _within(_of(reps, "unitary_Tpair", property="inverse"), 1e-5)
    return lvl_ok and norm_ok and inv_ok, f"actions: {lvl}; norm: {nrm}; inverse pairing: {inv}"


SERIES_IDS = ("exp_gen", "one_index_gen", "mixed_gen", "bilinear_gen", "laguerre_diag",
              "diag_probability", "mehler")


def criterion_7(reps):
    rows = [r for cid in SERIES_IDS for r in _of(reps, cid)] + _of(reps, "kernel_level", route="series")
    return _within(rows, 1e-9)


def criterion_8(reps):
    rows = _of(reps, "landau_eigen")
    ok, detail = _within(rows, 1e-12)
    failing = [r["params"]["nu"] for r in rows if r["residual"] > 1e-12]
    alt = max(r["resolution"]["alternative_residual"] for r in rows)
    return ok, f"eigenvalue n: {detail}, failing at nu={failing}; eigenvalue nu*n residual {alt:.1e}"


def criterion_9(reps):
    return _within(_of(reps, "norms"), 1e-8)


def criterion_10(reps):
    msgs, ok = [], True
    for cid, match in (("wigner_intertwine", {}), ("fourier_conjugation", {"form": "ground-state direction"})):
        for r in _of(reps, cid, **match):
            res = r["resolution"]
            passing = [c for c, v in res["residuals"].items() if v <= 1e-6]
            ok &= len(passing) == 1
            msgs.append(f"{cid} nu={r['params']['nu']}: passing={passing or 'none'}")
    return ok, "; ".join(msgs)


def criterion_11(first: Path, second: Path):
    same = first.read_bytes() == second.read_bytes()
    return same, f"{first.stat().st_size} bytes, identical={same}"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
            7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def _line(k, ok, detail):
    return f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.fixture(scope="module")
def suite_runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("acceptance")
    first = run_cli_suite(d, "a")
    return first, d


@pytest.fixture(scope="module")
def reports(suite_runs):
    return json.loads(suite_runs[0].read_text())["reports"]


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, reports, capsys):
    ok, detail = CRITERIA[k](reports)
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


@pytest.mark.slow
def test_criterion_11_determinism(suite_runs, capsys):
    first, d = suite_runs
    second = run_cli_suite(d, "b")
    ok, detail = criterion_11(first, second)
    with capsys.disabled():
        print("\n" + _line(11, ok, detail))
    assert ok, detail


def run_all() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)
        first = run_cli_suite(d, "a")
        reps = json.loads(first.read_text())["reports"]
        results = [(k, *CRITERIA[k](reps)) for k in sorted(CRITERIA)]
        results.append((11, *criterion_11(first, run_cli_suite(d, "b"))))
    print()
    for k, ok, detail in results:
        print(_line(k, ok, detail))
    n_ok = sum(ok for _, ok, _ in results)
    print(f"{n_ok}/{len(results)} criteria pass")
    return 0 if n_ok == len(results) else 1


if __name__ == "__main__":
    sys.exit(run_all())
