"""Command-line interface: outputs, JSON stability and exit codes."""

import json

import pytest

from wildram.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv",
    [
        ["cohom", "--p", "5", "--m", "2"],
        ["chebyshev", "--p", "5"],
        ["chebyshev", "--p", "3", "--a", "-3"],
        ["polar", "--p", "3", "--input", "1*T^-9 + 1*T^-3"],
        ["harbater", "--p", "3", "--conductors", "5"],
        ["genus", "--p", "3", "--conductors", "2,2"],
        ["order-check", "--p", "5", "--m", "2", "--ring", "F5[u]/(u^5)", "--a", "1+u"],
        ["obstruction", "--p", "5", "--m", "2", "--ring", "F5[u]/(u^5)", "--a", "1+u"],
        ["krull", "--p", "5", "--m", "4"],
        ["global", "--p", "5", "--conductors", "4"],
        ["asdeform", "--p", "3", "--m", "4", "--direction", "1"],
    ],
)
def test_json_round_trip(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out
    code2, out2, _ = run(capsys, *argv, "--json")
    assert out2 == out


def test_text_mode_shows_the_same_values(capsys):
    _, js, _ = run(capsys, "cohom", "--p", "5", "--m", "2", "--json")
    _, txt, _ = run(capsys, "cohom", "--p", "5", "--m", "2")
    d = json.loads(js)
    assert f"dim_h1: {d['dim_h1']}" in txt
    assert f"beta: {d['beta']}" in txt


def test_worked_values(capsys):
    _, out, _ = run(capsys, "polar", "--p", "3", "--input", "1*T^-9 + 1*T^-3", "--json")
    assert json.loads(out)["polar_part"] == "2*T^-1"
    _, out, _ = run(capsys, "obstruction", "--p", "5", "--m", "2", "--ring", "F5[u]/(u^5)", "--a", "1+u", "--json")
    d = json.loads(out)
    assert d["target"] == "F5[u]/(u^4)" and d["defect"].startswith("2*u^4*T^3")


@pytest.mark.parametrize(
    "argv",
    [
        ["cohom", "--p", "4", "--m", "1"],
        ["cohom", "--p", "3", "--m", "3"],
        ["obstruction", "--p", "5", "--m", "2"],
        ["versal-m1", "--p", "3"],
        ["harbater", "--p", "3", "--conductors", "3"],
        ["verify", "--config", "/nonexistent/config.json"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cohom", "--p", "five", "--m", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_order_check_failure_is_not_an_error(capsys):
    # order check reports agreement; a non-order-p instance still exits 0
    code, out, _ = run(capsys, "order-check", "--p", "5", "--m", "2", "--ring", "F5[u]/(u^5)", "--a", "1+u", "--json")
    assert code == 0 and json.loads(out)["series_order_p"] is False


def test_verify_small_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"primes": [5], "max_m": 2}))
    out = tmp_path / "report.json"
    code, txt, _ = run(capsys, "verify", "--config", str(cfg), "--out", str(out))
    assert code == 0
    assert txt.startswith("pass: ")
    report = json.loads(out.read_text())
    assert report["summary"]["fail"] == 0


@pytest.mark.parametrize(
    "exc,code",
    [
        ("VerificationError", 1),
        ("PrecisionError", 3),
        ("InvalidInput", 2),
    ],
)
def test_exit_codes(monkeypatch, capsys, exc, code):
    import wildram.cli as cli
    import wildram.errors as errors

    def boom(args):
        raise getattr(errors, exc)("synthetic")

    monkeypatch.setattr(cli, "cmd_krull", boom)
    assert run(capsys, "krull", "--p", "5", "--m", "3")[0] == code


def test_failed_check_exits_1(monkeypatch, capsys):
    import wildram.cli as cli

    monkeypatch.setattr(cli, "cmd_krull", lambda args: ({"ok": False}, False))
    assert run(capsys, "krull", "--p", "5", "--m", "3")[0] == 1
