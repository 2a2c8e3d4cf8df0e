import io
import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from cauchyid.cli import run

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("envelope.schema.json"))
    return doc


def test_ml_eval():
    doc = call_json("ml-eval", "--rho", "1", "--mu", "1", "--gamma", "1", "--z", "-1")
    assert doc["result"]["value"] == pytest.approx(0.3678794, abs=1e-7)
    jsonschema.validate(doc["result"], _schema("eval_result.schema.json"))
    doc = call_json("ml-eval", "--rho", "1.5", "--mu", "2.5", "--z", "0")
    assert doc["result"]["value"] == pytest.approx(1 / math.gamma(2.5), rel=1e-15)
    assert doc["config"] == {"output_format": "json", "seed": 0, "tol": 1e-10, "threads": doc["config"]["threads"]}


def test_bad_parameter_exit_code():
    code, out, err = call("ml-eval", "--rho", "0", "--mu", "1", "--z", "-1")
    assert code == 2 and "rho" in err and out == ""
    code, _, err = call("exists", "--a", "1")
    assert code == 2 and "missing" in err


def test_ml_scan():
    doc = call_json("ml-scan", "--rho", "1.8", "--mu", "2.0", "--tmax", "200")
    assert doc["result"]["negativity_found"] and doc["result"]["certified"]
    jsonschema.validate(doc["result"], _schema("sign_scan.schema.json"))
    doc = call_json("ml-scan", "--rho", "0.5", "--mu", "1.0", "--tmax", "200")
    assert not doc["result"]["negativity_found"]


def test_exists_and_ml_nonneg():
    doc = call_json("exists", "--a", "0.5", "--b", "0.5", "--c", "2", "--d", "2")
    assert (doc["result"]["outcome"], doc["result"]["rule"]) == ("Exists", "Prop-d2-iff")
    jsonschema.validate(doc["result"], _schema("verdict.schema.json"))
    doc = call_json("ml-nonneg", "--rho", "2", "--mu", "5", "--gamma", "2")
    assert doc["result"]["rule"] == "I.3"


def test_certify():
    doc = call_json("certify", "--target", "alpha-cauchy", "--alpha", "1.1")
    assert doc["result"]["status"] == "ID-certified"
    jsonschema.validate(doc["result"], _schema("certificate.schema.json"))
    doc = call_json("certify", "--target", "half-power", "--alpha", "1.5", "--p", "2", "--eps", "1")
    assert doc["result"]["status"] == "HCM"
    doc = call_json("certify", "--target", "half-student", "--nu", "0.5", "1.2", "--threads", "2")
    assert [c["status"] for c in doc["result"]] == ["ID-certified", "unknown"]


def test_certify_batch_order_independent_of_threads():
    a = call_json("certify", "--target", "half-stable", "--alpha", "0.5", "0.75", "1", "--threads", "1")
    b = call_json("certify", "--target", "half-stable", "--alpha", "0.5", "0.75", "1", "--threads", "3")
    assert a["result"] == b["result"]


def test_verify():
    doc = call_json("verify", "--identity", "eq4.13", "--mode", "symbolic", "--a", "0.5", "--b", "0.5", "--c", "2", "--d", "1.5")
    assert doc["result"]["passed"]
    code, _, err = call("verify", "--identity", "eq5.7", "--mode", "symbolic", "--nu", "3")
    assert code == 2


def test_sample_reproducible(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (out1, out2):
        code, _, _ = call("sample", "--dist", "alpha-cauchy", "--alpha", "1.5", "--n", "500", "--seed", "9", "--out", str(path))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "# dist=alpha-cauchy(1.5) seed=9 n=500" and len(lines) == 501


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "n": 4, "c": 2.0, "format": "csv"}))
    code, text, _ = call("sample", "--dist", "gamma", "--config", str(cfg))
    assert code == 0 and text.splitlines()[0] == "# dist=gamma(2.0) seed=5 n=4"
    code, text, _ = call("sample", "--dist", "gamma", "--config", str(cfg), "--seed", "6")
    assert text.splitlines()[0] == "# dist=gamma(2.0) seed=6 n=4"
    code, _, err = call("sample", "--dist", "gamma", "--config", str(tmp_path / "missing.json"))
    assert code == 2


def test_region_map_csv():
    code, text, _ = call("region-map", "--rho-min", "0.8", "--rho-max", "1.8", "--mu-min", "0.9", "--mu-max", "2.0", "--step", "0.5", "--no-scan", "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("# config=")
    assert lines[1] == "rho,mu,gamma,outcome,rule,numeric_min"
    rows = {tuple(l.split(",")[:2]): l for l in lines[2:]}
    assert "Exists" in rows[("0.8", "0.9")]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cauchyid", "ml-eval", "--rho", "2", "--mu", "2", "--z", "-4"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["result"]["value"] == pytest.approx(math.sin(2) / 2, abs=1e-12)
