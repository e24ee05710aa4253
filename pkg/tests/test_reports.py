import json

from hitchin_monodromy.reports import FORMAT_TAG, SuiteResult, ValidationReport, render


def sample():
    s = SuiteResult("demo")
    s.add("a", True, 1, 1)
    s.add("b", False, [1, 2], [1], "lists")
    return s


def test_overall_is_conjunction():
    s = sample()
    assert s.overall == "fail" and not s.passed
    assert [i.check_id for i in s.failures()] == ["b"]
    assert SuiteResult("empty").overall == "pass"


def test_json_is_tagged_and_stable():
    a = render(sample().to_dict(), "json")
    b = render(sample().to_dict(), "json")
    assert a == b
    assert json.loads(a)["format"] == FORMAT_TAG


def test_csv_rows():
    lines = render(sample().to_dict(), "csv").splitlines()
    assert lines[0] == "check,status,expected,observed"
    assert lines[1] == "a,pass,1,1"
    assert lines[2] == 'b,fail,"[1,2]",[1]'


def test_text_and_flat_payloads():
    txt = render(sample().to_dict(), "text")
    assert txt.splitlines()[0] == "suite demo: FAIL"
    flat = render({"format": "x", "inner": {"k": 2}}, "csv")
    assert "inner.k,2" in flat


def test_extend_prefixes():
    r = ValidationReport("outer")
    r.extend(sample(), "p/")
    assert [i.check_id for i in r.items] == ["p/a", "p/b"]
