import io
import json
import sys

from jtcalc.cli import main


def run_cli(args, monkeypatch=None, env=None):
    out, err = io.StringIO(), io.StringIO()
    old_out, old_err = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = main(args)
    finally:
        sys.stdout, sys.stderr = old_out, old_err
    return code, out.getvalue(), err.getvalue()


def test_dominance_command():
    code, out, _ = run_cli(["dominance", "[2]+[1]", "[3]", "--p", "3"])
    assert code == 0
    assert out.strip() == "[2]+[1] <= [3]: true"
    code, out, _ = run_cli(["dominance", "[3]", "[2]+[1]", "--p", "3"])
    assert "false" in out
    code, out, _ = run_cli(["dominance", "[2]", "[3]", "--p", "3"])
    assert "incomparable" in out


def test_tensor_perp_power_commands():
    code, out, _ = run_cli(["tensor", "[2]", "[2]", "--p", "3"])
    assert code == 0 and "[3]+[1]" in out
    code, out, _ = run_cli(["perp", "2[2]", "--p", "3"])
    assert "2[1]" in out
    code, out, _ = run_cli(["power", "[5]", "--j", "2", "--p", "5"])
    assert "[3]+[2]" in out


def test_jt_command_with_chart_point():
    args = ["jt", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Sym(1,Std(2))*Tw(1,Sym(1,Std(2)))", "--point", "0,1,0,1,1"]
    code, out, _ = run_cli(args)
    assert code == 0
    assert "jordan_type=[3]+[1]" in out
    # constraint-violating point is a usage error
    bad = args[:-1] + ["1,1,1,1,1"]
    code, _, err = run_cli(bad)
    assert code == 2 and "constraint" in err


def test_jt_homotopy_variant():
    args = ["jt", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Std(2)*Tw(1,Std(2))", "--point", "0,1,0,1,1",
            "--variant", "homotopy", "--hs", "1", "--ht", "1"]
    code, out, _ = run_cli(args)
    assert code == 0 and "jordan_type=" in out


def test_missing_module_is_usage_error():
    code, _, err = run_cli(["jt", "--p", "3", "--chart", "sl2_line", "--point", "0,1,0,1"])
    assert code == 2


def test_strata_jsonl_deterministic(monkeypatch):
    args = ["strata", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Std(2)*Tw(1,Std(2))", "--format", "jsonl", "--seed", "0"]
    monkeypatch.setenv("JTCALC_THREADS", "1")
    _, out1, _ = run_cli(args)
    monkeypatch.setenv("JTCALC_THREADS", "3")
    _, out2, _ = run_cli(args)
    assert out1 == out2
    records = [json.loads(line) for line in out1.splitlines()]
    assert all(r["schema"] == 1 and r["command"] == "strata" for r in records)
    type_rows = [r for r in records if "type" in r]
    assert {r["type"] for r in type_rows} == {"2[2]", "[3]+[1]"}


def test_closed_command_exit_codes():
    args = ["closed", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Std(2)*Tw(1,Std(2))", "--type", "2[2]"]
    code, out, _ = run_cli(args)
    assert code == 0 and "ok=True" in out


def test_semicont_command(tmp_path):
    curve = tmp_path / "curve.txt"
    curve.write_text("a=0\nb=1\nc=0\nl0=0,1\nl1=1\n")
    args = ["semicont", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Std(2)*Tw(1,Std(2))", "--curve-file", str(curve)]
    code, out, _ = run_cli(args)
    assert code == 0
    assert "generic=[3]+[1]" in out and "special=2[2]" in out
    # seeded builtin curves need a seed
    args2 = ["semicont", "--p", "3", "--chart", "sl2_line", "--r", "2",
             "--module", "Std(2)*Tw(1,Std(2))", "--curves", "2"]
    code2, _, err2 = run_cli(args2)
    assert code2 == 2 and "seed" in err2


def test_minors_command():
    args = ["minors", "--p", "3", "--chart", "sl2_line", "--r", "2",
            "--module", "Std(2)*Tw(1,Std(2))", "--j", "1", "--d", "1"]
    code, out, _ = run_cli(args)
    assert code == 0
    assert "count=" in out.splitlines()[0]


def test_config_file_and_unknown_keys(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("p=3\nchart=sl2_line\nmodule=Std(2)*Tw(1,Std(2))\n")
    code, out, _ = run_cli(["jt", "--config", str(cfg), "--r", "2", "--point", "0,1,0,1,1"])
    assert code == 0 and "jordan_type=" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("p=3\nmystery=1\n")
    code, _, err = run_cli(["jt", "--config", str(bad), "--point", "0"])
    assert code == 2 and "unknown config keys" in err


def test_explicit_file_module(tmp_path):
    mod = tmp_path / "m.txt"
    mod.write_text(
        "field GF(3)\nsize 3\nheight 2\nmatrix\n0 1 0\n0 0 1\n0 0 0\nmatrix\n0 0 1\n0 0 0\n0 0 0\n"
    )
    args = ["strata", "--p", "3", "--chart", "ga_r", "--r", "2",
            "--module", f"Explicit(file={mod})", "--format", "csv", "--seed", "0"]
    code, out, _ = run_cli(args)
    assert code == 0
    assert out.splitlines()[0].startswith("chart,")


def test_suite_quick_level():
    code, out, _ = run_cli(["suite", "--level", "quick", "--p", "3", "--seed", "42"])
    assert code == 0
    assert "hard failures" in out
    assert "0 hard failures" in out


def test_usage_without_command():
    code, _, _ = run_cli([])
    assert code == 2
