import json

import pytest

from sbhermite import identities as ids
from sbhermite import report
from sbhermite.config import RunConfig


def test_config_round_trip(tmp_path):
    cfg = RunConfig(N_c=60, nus=(0.25, 4.0), tolerances={"composed": 2e-6}, seed=11, out="x.json")
    path = tmp_path / "run.toml"
    cfg.save(path)
    assert RunConfig.load(path) == cfg
    assert RunConfig.loads(cfg.dumps()).tolerances["composed"] == 2e-6
    assert RunConfig.loads(cfg.dumps()).tolerances["coefficient"] == 1e-12


@pytest.mark.parametrize("bad", [{"N_c": 0}, {"tolerances": {"series": 0.0}}, {"nus": ()}, {"nus": (-1.0,)},
                                 {"L": 0.0}, {"workers": 0}])
def test_config_rejects_bad_values(bad):
    with pytest.raises(ValueError):
        RunConfig(**bad)


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown"):
        RunConfig.loads("N_c = 10\nfoo = 1\n")


def test_numerics_excludes_output_paths():
    a = RunConfig(out="a.json", csv="a.csv", workers=4)
    b = RunConfig(out="b.json", csv="b.csv")
    assert a.numerics() == b.numerics()


def test_json_round_trip_and_schema():
    summary = ids.run_suite(["gaussian_rep", "landau_eigen"], RunConfig(nus=(1.0, 2.0)))
    text = report.dumps(summary)
    data = json.loads(text)
    assert data["schema"] == 1 and data["passed"] is False
    assert data["failed"] == ["landau_eigen"]
    back = report.loads(text)
    assert back.reports == summary.reports
    assert report.dumps(back) == text
    with pytest.raises(ValueError, match="schema"):
        report.loads(json.dumps({**data, "schema": 2}))


def test_csv_summary(tmp_path):
    summary = ids.run_suite(["gaussian_rep"], RunConfig())
    path = tmp_path / "s.csv"
    report.write_csv(summary, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "check_id,params,residual,tolerance,pass,seconds"
    assert len(lines) == 1 + len(summary.reports)
    assert lines[1].startswith("gaussian_rep,") and lines[1].endswith(",true,")
