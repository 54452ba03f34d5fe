import json

import pytest

from src.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main


def test_verify_f3(instances, capsys):
    assert main(["verify", str(instances / "f3.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Instance: f3 (finite)" in out
    assert "space-axioms: ok" in out
    assert "principal-ball-lemma: ok" in out


def test_verify_diamond(instances):
    assert main(["verify", str(instances / "diamond.json")]) == EXIT_OK


def test_verify_padic(instances, capsys):
    assert main(["verify", str(instances / "padic_7_4.json")]) == EXIT_OK
    assert "solid-ball-lemma: ok" in capsys.readouterr().out


def test_verify_padic_disc(instances, capsys):
    assert main(["verify", str(instances / "padic_disc_7_4.json")]) == EXIT_OK
    assert "Instance: padic-disc-3-mod-7 (padic_disc)" in capsys.readouterr().out


@pytest.mark.parametrize("name,rule", [("broken_triangle.json", "strong-triangle"),
                                       ("nonleast_zero.json", "least-element")])
def test_verify_reports_broken_axioms(instances, capsys, name, rule):
    assert main(["verify", str(instances / name)]) == EXIT_FAILED
    assert f"[{rule}]" in capsys.readouterr().out


def test_verify_missing_file(capsys):
    assert main(["verify", "/nonexistent/instance.json"]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


def test_hensel(capsys):
    assert main(["hensel", "--p", "7", "--N", "3", "--poly", "x^2-2", "--seed", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "root 108 (reached, mod 7^3)" in out


def test_hensel_condition_failure(capsys):
    assert main(["hensel", "--p", "2", "--poly", "x^2-3", "--seed", "1"]) == EXIT_FAILED
    assert "Hensel condition failed" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["hensel", "--p", "7", "--poly", "x^2 -", "--seed", "3"],
    ["hensel", "--p", "6", "--poly", "x^2-2", "--seed", "3"],
    ["hensel", "--p", "7", "--poly", "x^2-2", "--seed", "3", "--max-stages", "-1"],
    ["hensel", "--p", "7", "--poly", "x^2-2", "--seed", "3", "--steps-per-stage", "0"],
    ["ode", "--rhs", "y + z"],
    ["ode", "--rhs", "y", "--y0", "one"],
])
def test_parse_errors_exit_with_usage(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_ode(capsys):
    assert main(["ode", "--rhs", "y", "--y0", "1", "--cap", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "coefficients 1/1, 1/1, 1/2, 1/6, 1/24 (reached, mod t^5)" in out


def test_ode_polynomial_solution(capsys):
    assert main(["ode", "--rhs", "2*t", "--y0", "0", "--cap", "5"]) == EXIT_OK
    assert "coefficients 0/1, 0/1, 1/1, 0/1, 0/1 (reached, mod t^5)" in capsys.readouterr().out


def test_hensel_minus_one_mod_25(capsys):
    assert main(["hensel", "--p", "5", "--N", "2", "--poly", "x^2+1", "--seed", "2"]) == EXIT_OK
    assert "root 7 (reached, mod 5^2)" in capsys.readouterr().out


def test_ode_inconclusive(capsys):
    argv = ["ode", "--rhs", "y", "--y0", "1", "--cap", "12", "--steps-per-stage", "2", "--max-stages", "1"]
    assert main(argv) == EXIT_FAILED
    assert "inconclusive" in capsys.readouterr().out


def test_ode_verbose_prints_stages(capsys):
    assert main(["ode", "--rhs", "2*t", "--cap", "4", "--verbose"]) == EXIT_OK
    assert "--- STAGE_RUNNER ---" in capsys.readouterr().out


def test_demo_finite(capsys):
    assert main(["demo-finite", "--max-points", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "chain3: 5 spaces" in out
    assert "finite-suite: ok" in out


def test_output_and_check_trace(tmp_path, capsys):
    out_dir = tmp_path / "runs"
    assert main(["hensel", "--p", "7", "--N", "4", "--poly", "x^2-2", "--seed", "3",
                 "--output", str(out_dir)]) == EXIT_OK
    traces = list(out_dir.glob("trace_*.json"))
    assert len(traces) == 1
    assert len(list(out_dir.glob("summary_*.md"))) == 1
    capsys.readouterr()

    assert main(["check-trace", str(traces[0])]) == EXIT_OK
    assert "trace: ok" in capsys.readouterr().out

    doc = json.loads(traces[0].read_text())
    doc["stages"][0]["iterates"][1] += 1
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(doc))
    assert main(["check-trace", str(tampered)]) == EXIT_FAILED


def test_check_trace_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert main(["check-trace", str(bad)]) == EXIT_USAGE


def test_parser_requires_a_command():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2
