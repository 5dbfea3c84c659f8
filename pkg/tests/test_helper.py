import pytest
import json
from fractions import Fraction
from markoff_lab.exactnum import Mat2, RatInterval, quadirr_make
from markoff_lab.markoff import CohnMatrix, Side, locate
from markoff_lab.utils.helper import ReportUtils
from markoff_lab.words import EndoWord, W2Word, Word


def test_read_runspec_file_json(tmp_path):
    # Setup
    runspec_file = tmp_path / "runspec.json"
    runspec_content = {"suites": [{"name": "tree"}]}
    runspec_file.write_text(json.dumps(runspec_content))

    # Test
    result = ReportUtils.read_runspec_file(runspec_file)
    assert result == runspec_content


def test_read_runspec_file_yaml(tmp_path):
    # Setup
    runspec_file = tmp_path / "runspec.yaml"
    runspec_file.write_text("general:\n  depth: 4\nsuites:\n  - name: tree\n  - name: cohn\n    depth: 2\n")

    # Test
    result = ReportUtils.read_runspec_file(runspec_file)
    assert result == {"general": {"depth": 4}, "suites": [{"name": "tree"}, {"name": "cohn", "depth": 2}]}


def test_read_runspec_file_invalid(tmp_path):
    # Setup
    broken_json = tmp_path / "broken.json"
    broken_json.write_text("{suites: ")
    broken_yaml = tmp_path / "broken.yml"
    broken_yaml.write_text("suites: [tree\n")

    # Test
    with pytest.raises(ValueError):
        ReportUtils.read_runspec_file(broken_json)
    with pytest.raises(ValueError):
        ReportUtils.read_runspec_file(broken_yaml)


def test_ensure_directory_exists(tmp_path):
    # Setup
    directory = tmp_path / "reports" / "depth6"

    # Test
    ReportUtils.ensure_directory_exists(directory)
    assert directory.is_dir()


def test_to_jsonable():
    # Test
    assert ReportUtils.to_jsonable(Fraction(1, 3)) == "1/3"
    assert ReportUtils.to_jsonable(Fraction(4, 2)) == "2"
    assert ReportUtils.to_jsonable(RatInterval(Fraction(1, 2), Fraction(3, 4))) == {"lo": "1/2", "hi": "3/4"}
    assert ReportUtils.to_jsonable(quadirr_make(-1, 1, 5, 2)) == {"p": -1, "q": 1, "D": 5, "r": 2, "text": "(-1+√5)/2"}
    assert ReportUtils.to_jsonable(Mat2(1, 3, 0, 1)) == [[1, 3], [0, 1]]
    assert ReportUtils.to_jsonable(CohnMatrix(5, 3, 2)) == [[5, 3], [3, 2]]
    assert ReportUtils.to_jsonable(locate((29, 5, 2))) == [29, 5, 2]
    assert ReportUtils.to_jsonable(Word((1, 12))) == "1,12"
    assert ReportUtils.to_jsonable(Word((1, 1, 2, 2))) == "1122"
    assert ReportUtils.to_jsonable(W2Word("ab")) == "ab"
    assert ReportUtils.to_jsonable(EndoWord()) == "I"
    assert ReportUtils.to_jsonable(Side.LEFT) == "L"
    assert ReportUtils.to_jsonable({3: {2, 1}}) == {"3": [1, 2]}
    with pytest.raises(TypeError):
        ReportUtils.to_jsonable(object())


def test_dump_json_is_stable():
    # Setup
    payload = {"b": Fraction(1, 2), "a": [RatInterval(Fraction(0), Fraction(1))]}

    # Test
    text = ReportUtils.dump_json(payload)
    assert text == ReportUtils.dump_json(dict(reversed(list(payload.items()))))
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [{"lo": "0", "hi": "1"}], "b": "1/2"}


def test_write_json(tmp_path):
    # Setup
    output_file = tmp_path / "nested" / "tree.report.json"

    # Test
    written = ReportUtils.write_json({"count": 15}, output_file)
    assert written == output_file
    assert json.loads(output_file.read_text(encoding="utf-8")) == {"count": 15}


def test_write_csv(tmp_path):
    # Setup
    output_file = tmp_path / "nu.csv"
    rows = [[1, 1, Fraction(1, 2), Fraction(2, 3)], [2, 2, Fraction(2, 5), Fraction(3, 7)]]

    # Test
    ReportUtils.write_csv(rows, ["k", "q", "lo", "hi"], output_file)
    assert output_file.read_text().splitlines() == ["k,q,lo,hi", "1,1,1/2,2/3", "2,2,2/5,3/7"]
