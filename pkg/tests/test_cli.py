import json
import math

import pytest

from peaklab.cli import main, parse_cycle_type
from peaklab.combinatorics import CycleType
from peaklab.errors import CycleTypeParseError


def test_parse_cycle_type_grammar():
    assert parse_cycle_type("2^3 1^2") == CycleType({2: 3, 1: 2})
    assert parse_cycle_type("3^2,2^1") == CycleType({3: 2, 2: 1})
    assert parse_cycle_type("5") == CycleType({5: 1})
    assert parse_cycle_type("2 2") == CycleType({2: 2})
    assert parse_cycle_type("identity:7") == CycleType({1: 7})
    assert parse_cycle_type("cycle:7") == CycleType({7: 1})
    assert parse_cycle_type("2^2 1", expected_n=5).n == 5


def test_parse_cycle_type_errors():
    with pytest.raises(CycleTypeParseError) as e:
        parse_cycle_type("2^0")
    assert e.value.position == 2
    assert "(at position" in str(e.value)
    for bad in ("", "2^", "-3", "foo:3", "1.5", "2^x", "identity:0"):
        with pytest.raises(CycleTypeParseError):
            parse_cycle_type(bad)
    with pytest.raises(CycleTypeParseError):
        parse_cycle_type("derangement:5")
    with pytest.raises(CycleTypeParseError):
        parse_cycle_type("identity:3 2^1")  # shorthand must stand alone
    with pytest.raises(CycleTypeParseError):
        parse_cycle_type("2^3", expected_n=5)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dist_json_round_trip(capsys):
    code, out1, err = _run(capsys, ["dist", "3^1"])
    assert code == 0
    assert err == ""
    code, out2, _ = _run(capsys, ["dist", "3^1"])
    assert out1 == out2
    assert out1.endswith("\n")
    payload = json.loads(out1)
    assert payload == {
        "class_size": "2",
        "counts": {"0": "1", "1": "1"},
        "cycle_type": "3^1",
        "mean": "1/2",
        "n": 3,
        "variance": "1/4",
    }


def test_dist_identity_has_single_cell(capsys):
    code, out, _ = _run(capsys, ["dist", "1^6"])
    assert code == 0
    payload = json.loads(out)
    assert payload["counts"] == {"0": "1"}
    assert payload["class_size"] == "1"
    assert payload["variance"] == "0"


def test_dist_csv_matches_json(capsys):
    code, csv_out, _ = _run(capsys, ["dist", "2^3 1^2", "--format", "csv"])
    assert code == 0
    lines = csv_out.strip().splitlines()
    assert lines[0] == "k,count"
    rows = {int(k): int(v) for k, v in (line.split(",") for line in lines[1:])}
    code, json_out, _ = _run(capsys, ["dist", "2^3 1^2"])
    counts = {int(k): int(v) for k, v in json.loads(json_out)["counts"].items()}
    # csv lists every k through (n-1)//2, including empty cells
    assert set(rows) == set(range((8 - 1) // 2 + 1))
    for k, v in rows.items():
        assert counts.get(k, 0) == v
    assert sum(rows.values()) == 420


def test_sample_deterministic_output(capsys):
    argv = ["sample", "2^2", "--draws", "1000", "--seed", "42"]
    code, out1, _ = _run(capsys, argv)
    assert code == 0
    code, out2, _ = _run(capsys, argv)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["generator"] == "numpy-pcg64"
    assert payload["n"] == 4
    assert payload["draws"] == 1000
    assert payload["seed"] == 42
    assert payload["stream"] == 0
    assert payload["histogram"] == {"0": 334, "1": 666}
    assert payload["ref_mean"] == "2/3"
    assert payload["ref_variance"] == "2/9"
    assert sum(payload["histogram"].values()) == 1000
    code, out3, _ = _run(capsys, argv + ["--stream", "1"])
    assert code == 0
    assert json.loads(out3)["histogram"] != payload["histogram"]


def test_mgf_breakdown_fields(capsys):
    s = math.sqrt(3) * math.log(2)
    code, out, _ = _run(capsys, ["mgf", "3^1", "--scale", str(s)])
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 3
    assert payload["fixed_point_density"] == 0.0
    assert payload["log_mgf_exact"] == pytest.approx(math.log(0.75), abs=1e-12)
    assert payload["residual"] == pytest.approx(
        math.log(1.5) - math.log(2) ** 2 / 15, abs=1e-10
    )


def test_verify_single_check(capsys):
    code, out, _ = _run(capsys, ["verify", "--check", "variance-consistency"])
    assert code == 0
    assert out.startswith("variance-consistency: ok")


def test_verify_unknown_check(capsys):
    # argparse rejects names outside the registered check list
    with pytest.raises(SystemExit) as e:
        main(["verify", "--check", "no-such-check"])
    assert e.value.code == 2
    assert "no-such-check" in capsys.readouterr().err


def test_exit_codes(capsys):
    cases = [
        (["dist", "2^"], 2),
        (["dist", "derangement:6"], 2),
        (["dist", "identity:400"], 3),
        (["dist", "3^1", "--n", "4"], 2),
        (["sample", "2^2", "--draws", "10", "--seed", "-1"], 2),
        (["sample", "2^2", "--draws", "0", "--seed", "1"], 2),
        (["mgf", "3^1", "--scale", "-1"], 2),
    ]
    for argv, expected in cases:
        code, out, err = _run(capsys, argv)
        assert code == expected, argv
        assert err.startswith("error:")
        assert out == ""


def test_parse_error_reports_position(capsys):
    code, _, err = _run(capsys, ["dist", "2^0"])
    assert code == 2
    assert "(at position 2)" in err


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("PEAKLAB_THREADS", "abc")
    code, _, err = _run(capsys, ["dist", "3^1"])
    assert code == 2
    assert "PEAKLAB_THREADS" in err
    monkeypatch.setenv("PEAKLAB_THREADS", "2")
    code, _, _ = _run(capsys, ["dist", "3^1"])
    assert code == 0
    monkeypatch.delenv("PEAKLAB_THREADS")
    monkeypatch.setenv("PEAKLAB_MAX_N", "10")
    code, _, err = _run(capsys, ["dist", "identity:12"])
    assert code == 3
    assert "n <= 10" in err
    code, _, _ = _run(capsys, ["dist", "identity:10"])
    assert code == 0
