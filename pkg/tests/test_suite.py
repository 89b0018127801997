"""Verification suite configuration and report shape."""

import json

import pytest

from wildram.errors import InvalidInput
from wildram.suite import FAMILIES, SuiteConfig, default_config, load_config, run_suite


def test_empty_primes_gives_empty_report():
    rep = run_suite(SuiteConfig.from_dict({"primes": [], "max_m": 5}))
    assert rep.records == []
    assert rep.counts == {"pass": 0, "fail": 0, "flagged": 0}
    assert rep.ok


def test_small_config_contains_worked_example():
    rep = run_suite(SuiteConfig.from_dict({"primes": [5], "max_m": 2}))
    ids = {r["id"]: r for r in rep.records}
    rec = ids["thmbeta/p=05/m=02"]
    assert rec["status"] == "pass" and rec["provenance"] == "paper"
    assert rec["observed"]["dim_h1"] == 1
    assert rep.counts["fail"] == 0
    assert [r["id"] for r in rep.records] == sorted(ids)


def test_family_toggle_and_runtime():
    cfg = {
        "primes": [3],
        "max_m": 2,
        "include_runtime": True,
        "families": {f: {"enabled": f == "thmbeta"} for f in FAMILIES},
    }
    rep = run_suite(SuiteConfig.from_dict(cfg))
    assert {r["family"] for r in rep.records} == {"thmbeta"}
    assert all("runtime" in r for r in rep.records)


def test_report_json_is_deterministic():
    cfg = SuiteConfig.from_dict({"primes": [3], "max_m": 4})
    a, b = run_suite(cfg).to_json(), run_suite(cfg).to_json()
    assert a == b
    assert json.dumps(json.loads(a), indent=2, sort_keys=True) + "\n" == a


@pytest.mark.parametrize(
    "bad",
    [
        {"primes": [4], "max_m": 3},
        {"primes": [3]},
        {"primes": [3], "max_m": 0},
        {"primes": [3], "max_m": 3, "colour": 1},
        {"primes": [3], "max_m": 3, "families": {"nope": {}}},
    ],
)
def test_bad_configs(bad):
    with pytest.raises(InvalidInput):
        SuiteConfig.from_dict(bad)


def test_default_config_ships():
    d = default_config()
    assert d["primes"] == [2, 3, 5, 7] and d["max_m"] == 13
    cfg = load_config(None)
    assert cfg.primes_for("chebyshev") == [3, 5, 7, 11, 13]


def test_load_config_errors(tmp_path):
    with pytest.raises(InvalidInput):
        load_config(tmp_path / "missing.json")
    p = tmp_path / "broken.json"
    p.write_text("{")
    with pytest.raises(InvalidInput):
        load_config(p)
