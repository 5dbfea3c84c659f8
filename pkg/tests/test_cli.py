import argparse
import json

import pytest
from fractions import Fraction
from markoff_lab.cli import main, parse_rational


def run_json(capsys, *argv):
    status = main(list(argv))
    return status, json.loads(capsys.readouterr().out)


def test_parse_rational():
    # Test
    assert parse_rational("1/10^60") == Fraction(1, 10**60)
    assert parse_rational("1/10**6") == Fraction(1, 10**6)
    assert parse_rational("1e-3") == Fraction(1, 1000)
    assert parse_rational("3/7") == Fraction(3, 7)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_rational("0")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_rational("one/ten")


def test_tree_json(capsys):
    # Test
    status, payload = run_json(capsys, "tree", "--depth", "3")
    assert status == 0
    assert payload["count"] == 15
    assert {"path": "LRL", "triple": [433, 5, 29]} in payload["triples"]


def test_tree_csv(capsys):
    # Test
    status = main(["tree", "--depth", "1", "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert status == 0
    assert lines == ["path,m,m1,m2", "L,5,1,2", "LL,13,1,5", "LR,29,5,2"]


def test_csv_rejected_for_other_commands(capsys):
    # Test
    with pytest.raises(SystemExit) as excinfo:
        main(["alpha", "--format", "csv"])
    assert excinfo.value.code == 2


def test_zigzag(capsys):
    # Test
    status, payload = run_json(capsys, "zigzag", "--triple", "5,1,2", "--steps", "3")
    assert status == 0
    assert [step["triple"] for step in payload["zigzag"]] == [[5, 1, 2], [13, 1, 5], [194, 13, 5]]
    assert payload["zigzag"][2]["matrix"] == [[194, 119], [119, 73]]
    assert [step["side"] for step in payload["zigzag"]] == ["L", "L", "R"]


def test_cohn(capsys):
    # Test
    status, payload = run_json(capsys, "cohn", "--triple", "13,1,5")
    assert status == 0
    assert payload["matrix"] == [[13, 8], [8, 5]]
    assert payload["congruence"] == 8
    assert payload["violations"] == []
    assert payload["lift"][2] == [[5, 3], [3, 2]]


def test_form(capsys):
    # Test
    status, payload = run_json(capsys, "form", "--triple", "5,1,2", "--box", "20")
    assert status == 0
    assert payload["form"] == [5, 9, -7]
    assert payload["disc"] == 221
    assert payload["mu"] == 5 and payload["bruteforce"] == 5
    assert payload["markoff_value"] is True


def test_alpha(capsys):
    # Test
    status, payload = run_json(capsys, "alpha")
    assert status == 0
    assert payload["alpha"]["text"] == "(-9+√221)/10"
    assert payload["height"] == 9
    assert payload["period"] == "1122"
    assert payload["reduced"] is True


def test_xi_digits(capsys):
    # Test
    status, payload = run_json(capsys, "xi", "--triple", "5,1,2", "--digits", "8")
    assert status == 0
    assert payload["digits"] == "1,1,1,1,2,2,1,1"
    assert "enclosure" not in payload


def test_xi_enclosure(capsys):
    # Test
    status, payload = run_json(capsys, "xi", "--triple", "2,1,1", "--digits", "4", "--precision", "1/100")
    assert status == 0
    lo, hi = (Fraction(payload["enclosure"][key]) for key in ("lo", "hi"))
    assert lo <= Fraction(17, 29) <= hi


def test_spectrum_L_period(capsys):
    # Test
    status, payload = run_json(capsys, "spectrum-L", "--period", "1")
    assert status == 0
    assert payload["L"]["D"] == 5


def test_mu(capsys):
    # Test
    status, payload = run_json(capsys, "mu", "--form", "2,4,-2", "--box", "10")
    assert status == 0
    assert payload["mu"] == 2
    assert payload["disc"] == 32


def test_mu_definite_form(capsys):
    # Test
    assert main(["mu", "--form", "1,1,1"]) == 2


def test_nu_csv(capsys):
    # Test
    status = main(["nu", "--triple", "5,1,2", "--digits", "10", "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert status == 0
    assert lines[0] == "k,q,lo,hi,running_min"
    assert len(lines) == 10
    assert lines[1].startswith("1,1,")


@pytest.mark.parametrize("triple", ["5,2,1", "1,1,2"])
def test_triple_not_in_tree(capsys, triple):
    # Test
    assert main(["cohn", "--triple", triple]) == 2


def test_malformed_triple(capsys):
    # Test
    with pytest.raises(SystemExit) as excinfo:
        main(["cohn", "--triple", "5,1"])
    assert excinfo.value.code == 2


def test_verify_suite(capsys):
    # Test
    status, payload = run_json(capsys, "verify", "--suite", "tree", "--depth", "2")
    assert status == 0
    assert payload["suite"] == "tree"
    assert payload["totals"]["failed"] == 0
    assert [check["id"] for check in payload["checks"]] == sorted(check["id"] for check in payload["checks"])


def test_verify_corrupted_runspec(capsys, tmp_path):
    # Setup
    runspec = tmp_path / "corrupted.runspec.json"
    runspec.write_text(json.dumps({
        "general": {"depth": 2, "output_folder": "reports"},
        "suites": [
            {"name": "tree"},
            {"name": "cohn", "overrides": {"corrupt": {"triple": [13, 1, 5], "matrix": [13, 8, 4]}}},
        ],
    }))

    # Test
    status, payload = run_json(capsys, "verify", "--runspec", str(runspec))
    assert status == 1
    assert [report["suite"] for report in payload["reports"]] == ["tree"]
    assert (tmp_path / "reports" / "cohn.report.json").exists()


def test_verify_all_depth_six_is_stable(capsys):
    # Test
    first = main(["verify", "--suite", "all", "--depth", "6"])
    first_out = capsys.readouterr().out
    second = main(["verify", "--suite", "all", "--depth", "6"])
    second_out = capsys.readouterr().out
    assert first == second == 0
    assert first_out == second_out
    payload = json.loads(first_out)
    assert payload["totals"]["failed"] == 0
