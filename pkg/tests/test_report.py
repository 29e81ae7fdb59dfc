import csv
import io
import json
import math

import numpy as np

from taunets.report import SCHEMA_VERSION, CheckRecord, VerificationReport, witness_dict


def sample_report():
    rep = VerificationReport("demo", {"seed": 0})
    rep.add(CheckRecord("a", True, True, 0.5))
    rep.add(CheckRecord("b", False, False, None, detail={"note": "expected failure"}))
    rep.add(CheckRecord("c", np.bool_(True), None, np.float64(-math.inf), witness_dict((0.1, np.array([2.0])))))
    return rep


def test_verdicts():
    assert CheckRecord("x", True).verdict
    assert not CheckRecord("x", False).verdict
    assert CheckRecord("x", False, False).verdict
    assert CheckRecord("x", None, None).verdict


def test_overall_is_conjunction():
    rep = sample_report()
    assert rep.overall
    rep.add(CheckRecord("d", True, False))
    assert not rep.overall


def test_lookup_and_extend():
    rep = sample_report()
    other = VerificationReport("other")
    other.add(CheckRecord("z", True))
    rep.extend(other)
    assert rep["z"].observed is True


def test_json_schema():
    doc = json.loads(sample_report().to_json())
    assert doc["schema_version"] == SCHEMA_VERSION
    assert set(doc) == {"schema_version", "suite", "config", "checks", "overall_verdict"}
    c = doc["checks"][2]
    assert c["observed"] is True and c["worst_margin"] == "-inf"
    assert c["witness"] == {"eps": 0.1, "x": [2.0]}


def test_json_is_deterministic_and_sorted():
    a, b = sample_report().to_json(), sample_report().to_json()
    assert a == b and a.endswith("}\n") and not a.endswith("\n\n")
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_wall_time_only_when_set():
    rep = sample_report()
    rep.wall_time = 1.25
    assert json.loads(rep.to_json())["wall_time"] == 1.25


def test_csv_rows():
    rows = list(csv.reader(io.StringIO(sample_report().to_csv())))
    assert rows[0] == ["suite", "identifier", "verdict", "observed", "expected", "worst_margin",
                       "witness_eps", "witness_x"]
    assert len(rows) == 4
    assert rows[3][6:] == ["0.1", "2.0"]
    assert rows[2][5] == ""
