"""Command line interface: exit codes, output shape, and determinism."""

import json

import pytest

from intlat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_prints_the_formula_back(capsys):
    code, out, err = run(capsys, "parse", "--sig", "w", "min(X)=cz & !(X=bot)")
    assert code == 0
    assert out.strip() == "min(X) = cz & !X = bot"
    assert err == ""


def test_parse_error_goes_to_stderr_with_position(capsys):
    code, out, err = run(capsys, "parse", "--sig", "w", "min(X")
    assert code == 2
    assert out == ""
    assert "position" in err


def test_wrong_signature_symbol_is_a_usage_error(capsys):
    code, _, err = run(capsys, "parse", "--sig", "w", "l(X) = r(X)")
    assert code == 2
    assert "l" in err


def test_eval_interval_formula(capsys):
    code, out, _ = run(
        capsys, "eval", "--sig", "l", "--let", "X=[1,2]+[4,*)", "max(X) = bot"
    )
    assert code == 0
    assert out.strip() == "true"


def test_eval_finite_set_formula_with_quantifier(capsys):
    code, out, _ = run(
        capsys, "eval", "--sig", "w", "--let", "X={0,2}", "E Y. cap(Y, X) = Y & min(Y) = cz & !Y = bot"
    )
    assert code == 0
    assert out.strip() == "true"


def test_eval_false_result(capsys):
    code, out, _ = run(capsys, "eval", "--sig", "l", "--let", "X=[0,1]", "X = bot")
    assert code == 0
    assert out.strip() == "false"


def test_eval_with_explicit_pool(capsys):
    code, out, _ = run(
        capsys,
        "eval", "--sig", "w", "--let", "X={1}", "--pool", "{0, 1, 2}",
        "E Y. cup(X, Y) = Y & !max(Y) = max(X)",
    )
    assert code == 0
    assert out.strip() == "true"


def test_eval_rejects_malformed_binding(capsys):
    code, _, err = run(capsys, "eval", "--sig", "w", "--let", "X", "X = bot")
    assert code == 2
    assert "X=SET" in err or "error" in err


def test_translate_w2l_emits_interval_syntax(capsys):
    code, out, _ = run(capsys, "translate", "--dir", "w2l", "ips(X, Y) = Z")
    assert code == 0
    assert "l(" in out and "ips(" not in out


def test_translate_l2w_emits_coordinate_pairs(capsys):
    code, out, _ = run(capsys, "translate", "--dir", "l2w", "X = bot")
    assert code == 0
    assert "Xl" in out and "Xr" in out


def test_posex_output_reparses_positive(capsys):
    code, out, _ = run(capsys, "posex", "!(min(X) = cz)")
    assert code == 0
    assert "!" not in out


def test_pipeline_rejects_universal_input_with_exit_3(capsys):
    code, _, err = run(capsys, "pipeline", "A Y. (Y sub X -> Y = X)")
    assert code == 3
    assert "fragment error" in err


def test_pipeline_emits_an_interval_formula(capsys):
    code, out, _ = run(capsys, "pipeline", "l(X) = r(X)")
    assert code == 0
    assert out.strip()


def test_check_notbot_summary(capsys):
    code, out, _ = run(capsys, "check", "--suite", "notbot")
    assert code == 0
    assert out.strip() == "checked=32 failures=0"


def test_check_is_deterministic(capsys):
    _, first, _ = run(capsys, "check", "--suite", "endpoints")
    _, second, _ = run(capsys, "check", "--suite", "endpoints")
    assert first == second


def test_check_accepts_pool_size_and_seed(capsys):
    code, out, _ = run(capsys, "check", "--suite", "notbot", "--pool-size", "4")
    assert code == 0
    assert out.strip() == "checked=16 failures=0"


def test_json_envelope(capsys):
    code, out, _ = run(capsys, "--json", "eval", "--sig", "l", "--let", "X=[1,2]", "X = bot")
    assert code == 0
    got = json.loads(out)
    assert got == {"command": "eval", "result": "false", "failures": []}


def test_json_envelope_on_check(capsys):
    code, out, _ = run(capsys, "--json", "check", "--suite", "notbot")
    assert code == 0
    got = json.loads(out)
    assert got["command"] == "check"
    assert got["result"] == "checked=32 failures=0"
    assert got["failures"] == []


def test_unknown_suite_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["check", "--suite", "nonsense"])
    assert ei.value.code == 2
