import json

import pytest

from bohmsim.config import Settings
from bohmsim.errors import ConfigError
from bohmsim.schemas.base import CheckReport, RunConfig, SuiteReport


def test_defaults():
    run = RunConfig()
    cfg = run.two_photon()
    assert cfg.right.center == 20.0 and cfg.left.width == 1.0
    assert run.boost() is None
    assert run.grid.mesh()[0].shape == (5, 21, 21)
    assert run.verify.checks is None


def test_dump_and_load_round_trip(tmp_path):
    run = RunConfig.model_validate({"theta": 0.3, "ics": [[-2.0, 2.0], [-1.0, 1.5]], "ensemble": {"n": 5, "seed": 9}})
    loaded = RunConfig.load(run.dump(tmp_path / "cfg" / "run.json"))
    assert loaded == run
    assert loaded.boost().theta == 0.3


def test_invalid_json_names_the_line():
    with pytest.raises(ConfigError, match=r"<config>:3:\d+: invalid JSON"):
        RunConfig.parse_text('{\n  "theta": 0.2,\n  "kz": ,\n}')


def test_schema_errors_name_the_line():
    text = '{\n  "dispersion": "optical",\n  "theta": 1.5\n}'
    with pytest.raises(ConfigError, match=r"<config>:3: theta: "):
        RunConfig.parse_text(text)


@pytest.mark.parametrize(
    "data",
    [
        {"dispersion": "paraxial"},
        {"time": {"t0": 1.0, "t1": 0.0}},
        {"ics": [[1.0, 1.0]]},
        {"packets": {"k0R": -1.0}},
        {"route": "weak"},
        {"schema_version": 2},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        RunConfig.parse_text(json.dumps(data))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        RunConfig.load(tmp_path / "nope.json")


def test_suite_report_lists_failures():
    report = SuiteReport(passed=False, checks=[CheckReport(name="a", passed=True), CheckReport(name="b", passed=False)])
    assert report.failed == ["b"]


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("BOHM_SIM_THREADS", "3")
    monkeypatch.setenv("BOHM_SIM_NODE_EPS", "1e-10")
    s = Settings()
    assert s.THREADS == 3
    assert s.NODE_EPS == 1e-10
