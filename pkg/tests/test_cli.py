import io
import json
import subprocess
import sys

import pytest

from uwc.channel import Code, wiretap_code_profile
from uwc.catalog import superactivation_channel
from uwc.cli import parse_code, run

from conftest import CHANNELS


def call(*argv):
    out = io.StringIO()
    status = run([str(a) for a in argv], stdout=out)
    return status, out.getvalue()


def report(*argv):
    status, text = call(*argv)
    assert status == 0, text
    return json.loads(text)


def words_to_code(classes):
    return Code.from_classes([[tuple(w.split(",")) for w in c] for c in classes])


def test_wiretap_fig2():
    r = report("wiretap", "--channel", CHANNELS / "fig2.uwc", "--n", 2, "--M", 4)
    assert r["M"] == 4 and r["n"] == 2 and r["valid"]
    assert set(r) >= {"channel", "n", "M", "L", "delta", "code", "exhaustive", "version", "channel_hash", "config"}
    F = words_to_code(r["code"])
    assert wiretap_code_profile(superactivation_channel(), F).valid
    assert r["delta"] == {"num": r["L"] - 1, "den": 3}


def test_eliminate_cascade():
    r = report("eliminate", "--channel", CHANNELS / "cascade.uwc", "--n", 1)
    assert r["S"] == 3
    assert [s["removed"][0]["generators"] for s in r["steps"]] == [[["c1"]], [["c2"]], [["c3"]]]


def test_capacity_fig1():
    r = report("capacity", "--channel", CHANNELS / "fig1.uwc", "--n-max", 1)
    assert r["rows"][0]["N"] == 3


def test_capacity_injective_extras():
    r = report("capacity", "--channel", CHANNELS / "pinned_a1.uwc", "--n-max", 2)
    assert r["secure_words"] == [{"n": 1, "N": 2, "bound": 2}, {"n": 2, "N": 8, "bound": 8}]


def test_delta_and_concat():
    r = report("delta", "--channel", CHANNELS / "fig1.uwc", "--n", 1)
    assert r["delta"] == {"num": 1, "den": 1}
    r = report("concat", "--channel", CHANNELS / "fig1.uwc", "--code", "a1|a2 a3|a4", "--k", 3)
    assert [row["L"] for row in r["rows"]] == [2, 5, 14]
    assert all(row["L"] >= row["L_bound"]["num"] / row["L_bound"]["den"] for row in r["rows"])


def test_parse_command_round_trip():
    r = report("parse", "--channel", CHANNELS / "fig2.uwc")
    assert r["kind"] == "wiretap"
    assert r["confusability"]["edges"] == [[0, 1], [1, 2], [2, 3]]
    assert r["canonical"].startswith("input: a1 a2 a3 a4\n")


def test_simulate_json_and_csv(tmp_path):
    r = report("simulate", "--channel", CHANNELS / "blind3.uwc", "--n-max", 1, "--horizon", 40)
    assert r["security"]["measured_rate"] == {"num": 255, "den": 256}
    assert r["security"]["holds"]
    kappa = r["kappa"]["num"] / r["kappa"]["den"]
    assert r["measured_sup_error"]["num"] / r["measured_sup_error"]["den"] <= kappa
    status, text = call("simulate", "--channel", CHANNELS / "blind3.uwc", "--n-max", 1,
                        "--horizon", 5, "--format", "csv", "--disturbance", "seeded:3")
    assert status == 0
    lines = text.splitlines()
    assert lines[0] == "t,x,xhat,err,lo,hi,diameter" and len(lines) == 7
    script = tmp_path / "w.txt"
    script.write_text("1/2\n-1/2\n0\n1/4\n0.5\n")
    r = report("simulate", "--channel", CHANNELS / "blind3.uwc", "--n-max", 1, "--horizon", 5,
               "--disturbance", f"scripted:{script}")
    assert r["horizon"] == 5


def test_reports_are_byte_identical():
    args = ("simulate", "--channel", CHANNELS / "fig1.uwc", "--n-max", 1, "--disturbance", "seeded:9", "--seed", 4)
    assert call(*args) == call(*args)
    args = ("wiretap", "--channel", CHANNELS / "fig2.uwc", "--n", 2)
    assert call(*args) == call(*args)


@pytest.mark.parametrize("argv, status, error", [
    (("wiretap", "--channel", CHANNELS / "fig2.uwc", "--n", 1, "--M", 2), 1, "NoCodeExists"),
    (("delta", "--channel", CHANNELS / "fig2.uwc", "--n", 1), 1, "NoCodeExists"),
    (("eliminate", "--channel", CHANNELS / "fig2.uwc"), 1, "NotInjective"),
    (("parse", "--channel", CHANNELS / "missing.uwc"), 2, "ParseError"),
    (("wiretap", "--channel", CHANNELS / "fig2_main.uwc"), 2, "ParseError"),
    (("capacity", "--channel", CHANNELS / "fig1.uwc", "--format", "csv"), 2, "ParseError"),
    (("simulate", "--channel", CHANNELS / "blind3.uwc", "--disturbance", "bogus"), 2, "ParseError"),
    (("simulate", "--channel", CHANNELS / "blind3.uwc", "--lambda", "x"), 2, "ParseError"),
    (("simulate", "--channel", CHANNELS / "blind3.uwc", "--lambda", "1"), 2, "ParseError"),
    (("simulate", "--channel", CHANNELS / "blind3.uwc", "--disturbance", "seeded:x"), 2, "ParseError"),
    (("simulate", "--channel", CHANNELS / "transparent.uwc"), 1, "NoWiretapCode"),
    (("simulate", "--channel", CHANNELS / "fig2_main.uwc"), 2, "ParseError"),
    (("concat", "--channel", CHANNELS / "fig1.uwc", "--code", "a1|a4"), 1, "InvalidCode"),
    (("concat", "--channel", CHANNELS / "fig1.uwc", "--code", "a1||a4"), 2, "ParseError"),
    (("wiretap", "--channel", CHANNELS / "fig2.uwc", "--max-class-size", 0), 2, "ParseError"),
])
def test_error_statuses(argv, status, error):
    got, text = call(*argv)
    assert got == status
    body = json.loads(text)
    assert body["error"] == error and body["status"] == status


def test_usage_errors_exit_2():
    assert call("nonsense")[0] == 2
    assert call("wiretap")[0] == 2
    assert call("wiretap", "--channel", CHANNELS / "fig2.uwc", "--n", "two")[0] == 2


def test_budget_environment(monkeypatch):
    monkeypatch.setenv("UWC_BUDGET", "max_class_size=1")
    r = report("wiretap", "--channel", CHANNELS / "fig1.uwc")
    assert r["M"] == 2 and r["config"]["budget"]["max_class_size"] == 1
    r = report("wiretap", "--channel", CHANNELS / "fig1.uwc", "--unbounded-classes")
    assert r["M"] == 3
    monkeypatch.setenv("UWC_BUDGET", "nonsense")
    assert call("wiretap", "--channel", CHANNELS / "fig1.uwc")[0] == 2


def test_parse_code_syntax():
    F = parse_code("a1,a2 a2,a2|a4,a4")
    assert F.blocklength == 2 and F.M == 2
    with pytest.raises(Exception):
        parse_code("a1|a1,a2")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "uwc", "capacity", "--channel", str(CHANNELS / "fig1.uwc"),
                          "--n-max", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["rows"][0]["N"] == 3
