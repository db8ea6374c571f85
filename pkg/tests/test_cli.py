import contextlib
import io
import json

import pytest

from fpsubsets.cli import main, parse_poly
from fpsubsets.report import canonical_json, canonicalize, digest


def run(argv):
    buf, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, buf.getvalue(), err.getvalue()


def test_parse_poly():
    assert parse_poly("X", 13) == [0, 1]
    assert parse_poly("X^2+3X+1", 7) == [1, 3, 1]
    assert parse_poly("2X+6", 7) == [6, 2]
    assert parse_poly("-X^2+1", 5) == [1, 0, 4]
    assert parse_poly("coeffs:6,2", 7) == [6, 2]
    with pytest.raises(ValueError):
        parse_poly("X**2", 7)


def test_measure_command_and_digest_determinism():
    argv = ["measure", "--p", "13", "--poly", "X", "--subset", "interval:0:6", "--k", "2"]
    rc, out, _ = run(argv)
    assert rc == 0
    m = json.loads(out)
    assert {"config", "version", "timings", "result", "digest"} <= set(m)
    assert "W" in m["result"] and "C2" in m["result"]
    rc2, out2, _ = run(argv)
    assert json.loads(out2)["digest"] == m["digest"]


def test_measure_empty_R_reports_zero():
    rc, out, _ = run(["measure", "--p", "7", "--poly", "coeffs:0",
                      "--subset", "explicit:1,2"])
    m = json.loads(out)
    assert rc == 0 and m["result"]["W"]["value"] == "0/1"


def test_complexity_command():
    rc, out, _ = run(["complexity", "--p", "3", "--family", "P1", "--d", "1",
                      "--subset", "explicit:1"])
    m = json.loads(out)
    assert rc == 0 and m["result"]["K"] == 2
    rc, out, _ = run(["complexity", "--p", "7", "--family", "P3", "--d", "2",
                      "--subset", "explicit:1,2,4", "--kmax", "4"])
    m = json.loads(out)
    assert rc == 0 and m["result"]["K"] <= m["result"]["k3_clamp"]


def test_verify_commands_quick():
    rc, out, _ = run(["verify", "eq5", "--pmax", "61"])
    assert rc == 0 and json.loads(out)["result"]["pass"]
    rc, out, _ = run(["verify", "prop2", "--p", "31", "--k", "2",
                      "--seed", "7", "--trials", "3"])
    assert rc == 0
    rc, out, _ = run(["verify", "phi", "--p", "5", "--k", "2",
                      "--b", "1,2", "--c", "1,3", "--dvec", "1,2"])
    assert rc == 0 and json.loads(out)["result"]["pass"]
    rc, out, _ = run(["verify", "thm1", "--p", "101", "--beta", "0.5",
                      "--d", "2", "--k", "1"])
    assert rc == 0 and json.loads(out)["result"]["sign"] == -1
    rc, out, _ = run(["verify", "lemma1", "--p", "7", "--d", "2"])
    assert rc == 0 and json.loads(out)["result"]["identity_pass"]


def test_construct_command_and_trace():
    rc, out, _ = run(["construct", "--p", "17", "--d", "2",
                      "--subset", "interval:1:7", "--B", "1,2", "--C", "3,4"])
    m = json.loads(out)
    assert rc == 0 and m["result"]["verified"]
    assert "case" in m["result"]["trace"]
    assert len(m["result"]["polynomial"]) <= 3


def test_construct_hypothesis_violation_exit_2():
    rc, _, err = run(["construct", "--p", "17", "--d", "2",
                      "--subset", "interval:1:6", "--B", "1,2", "--C", "3,4"])
    assert rc == 2 and "error" in err


def test_curve_csv_histogram():
    rc, out, _ = run(["curve", "--op", "hist", "--p", "7", "--k", "1",
                      "--b", "0", "--c", "0", "--dvec", "1", "--format", "csv"])
    lines = out.strip().splitlines()
    assert rc == 0
    assert lines[0] == "lambda,count"
    assert lines[1] == "0,0" and lines[2] == "1,6"
    assert len(lines) == 8


def test_curve_threads_do_not_change_digest():
    base = ["curve", "--op", "hist", "--p", "101", "--k", "2", "--b", "1,5",
            "--c", "2,9", "--dvec", "3,7"]
    rc1, out1, _ = run(base + ["--threads", "1"])
    rc4, out4, _ = run(base + ["--threads", "4"])
    assert rc1 == rc4 == 0
    assert json.loads(out1)["digest"] == json.loads(out4)["digest"]


def test_exit_codes_for_bad_input():
    rc, _, _ = run(["measure", "--p", "8", "--poly", "X", "--subset", "interval:0:3"])
    assert rc == 2
    rc, _, _ = run(["measure", "--p", "13", "--poly", "X", "--subset", "interval:0:99"])
    assert rc == 2
    rc, _, _ = run(["curve", "--op", "hist", "--p", "10007", "--k", "1",
                    "--b", "0", "--c", "0", "--dvec", "1"])
    assert rc == 2


def test_canonicalize_rules():
    assert canonicalize((1, 2)) == [1, 2]
    assert canonicalize(2**60) == str(2**60)
    assert canonicalize(complex(1.5, -2.0)) == [1.5, -2.0]
    from fractions import Fraction

    assert canonicalize(Fraction(3, 4)) == "3/4"
    assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'
    assert digest({"x": 1}) == digest({"x": 1})
    assert digest({"x": 1}) != digest({"x": 2})


def test_output_file(tmp_path):
    path = tmp_path / "out.json"
    rc, out, _ = run(["verify", "eq5", "--pmax", "31", "--out", str(path)])
    assert rc == 0 and out == ""
    m = json.loads(path.read_text())
    assert m["result"]["pass"]
