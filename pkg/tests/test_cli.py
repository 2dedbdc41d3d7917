import io
import logging
from fractions import Fraction

import pytest

from mirror_count import cli
from mirror_count.errors import ParseError, SemanticError
from mirror_count.model import DEFAULT_TRUNCATION, parse_model, preset_text, monodromy_table_text
from mirror_count.picard_fuchs import quintic_operator

QUINTIC_N = [2875, 609250, 317206375, 242467530000]


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


# model files


def test_quintic_preset():
    cfg = parse_model(preset_text("quintic"))
    assert cfg.kappa == 5
    assert cfg.operator == quintic_operator()
    assert cfg.max_degree == 10
    assert cfg.truncation == max(DEFAULT_TRUNCATION, 12)


def test_truncation_precedence():
    text = preset_text("quintic")
    assert parse_model(text, default_truncation=30).truncation == 30
    assert parse_model(text, default_truncation=30, truncation=14).truncation == 14
    assert parse_model(text + "truncation = 16\n", default_truncation=30).truncation == 16
    assert parse_model(text, max_degree=40).truncation == 42


def test_model_errors():
    ops = "theta4 : 1, -3125\ntheta3 : 0, -6250\n"
    with pytest.raises(SemanticError):
        parse_model("kappa = 0\n" + ops)
    with pytest.raises(SemanticError):
        parse_model(ops)
    with pytest.raises(SemanticError):
        parse_model("kappa = 5\ntheta3 : 1\n")
    with pytest.raises(SemanticError):
        parse_model("kappa = 5\n" + ops, truncation=5)
    with pytest.raises(ParseError) as err:
        parse_model("kappa = 5\n" + ops + "theta5 : 1\n")
    assert err.value.line == 4
    with pytest.raises(ParseError) as err:
        parse_model("kappa = 5\ncolour = red\n" + ops)
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_model("kappa = 5\nkappa = 6\n" + ops)
    with pytest.raises(ParseError):
        parse_model("kappa = 5.0\n" + ops)
    with pytest.raises(ParseError):
        parse_model("kappa = 5\n" + ops + "this is not a setting\n")


def test_model_comments_and_rationals():
    cfg = parse_model("# a comment\nkappa = -3/2  # trailing\nq_rescale = 2\ntheta4 : 1\n")
    assert cfg.kappa == Fraction(-3, 2) and cfg.q_rescale == 2


# library entry points


def test_run_predict_theta4_empty():
    table = cli.run_predict(parse_model("kappa = 7\ntheta4 : 1\n"))
    assert table.entries == ()
    assert table.kappa == 7


def test_run_predict_quintic_stable():
    a = cli.run_predict(parse_model(preset_text("quintic"), truncation=15))
    b = cli.run_predict(parse_model(preset_text("quintic"), truncation=25))
    assert a == b
    assert [a.n(d) for d in range(1, 5)] == QUINTIC_N
    assert a.integral


def test_run_predict_names_failing_stage():
    cfg = parse_model("kappa = 1\ntheta4 : 1, 1\ntheta0 : 2\n")
    with pytest.raises(cli.StageError) as err:
        cli.run_predict(cfg)
    assert err.value.stage == "frobenius"


def test_run_monodromy_shipped():
    report = cli.run_monodromy()
    assert report.ok
    assert [r.k for r in report.results] == [5, 6, 8, 10]
    assert [(r.lam, r.mu) for r in report.results] == [(5, 5), (3, 4), (2, 4), (1, 3)]


def _tampered(tmp_path):
    text = monodromy_table_text().replace("lambda_mu 3 4", "lambda_mu 3 5")
    assert text != monodromy_table_text()
    path = tmp_path / "bad.txt"
    path.write_text(text)
    return path


def test_run_monodromy_tampered(tmp_path):
    report = cli.run_monodromy(_tampered(tmp_path))
    assert not report.ok
    (bad,) = [r for r in report.results if not r.ok]
    assert bad.k == 6 and bad.stage in {"normal_form", "infinity"}


def test_run_monodromy_empty(tmp_path, caplog):
    path = tmp_path / "empty.txt"
    path.write_text("# no rows\n")
    with caplog.at_level(logging.WARNING, logger="mirror_count"):
        report = cli.run_monodromy(path)
    assert report.results == () and report.ok
    assert "no rows" in caplog.text


# command line


def test_cli_predict_tsv_is_byte_stable():
    code, first = run(["predict", "--model", "quintic", "--degrees", "4", "--truncation", "12"])
    assert code == 0
    lines = first.splitlines()
    assert lines[:2] == ["# kappa = 5", "# truncation = 12"]
    assert lines[2:] == [f"{d}\t{n}" for d, n in enumerate(QUINTIC_N, start=1)]
    _, second = run(["predict", "--model", "quintic", "--degrees", "4", "--truncation", "12"])
    assert first == second


def test_cli_predict_pretty():
    code, text = run(["predict", "--model", "quintic", "--degrees", "3", "--format", "pretty"])
    assert code == 0
    assert "317206375" in text and "kappa = 5" in text


def test_cli_predict_model_file(tmp_path):
    path = tmp_path / "trivial.model"
    path.write_text("name = trivial\nkappa = 3\ntheta4 : 1\n")
    code, text = run(["predict", "--model", str(path), "--format", "pretty"])
    assert code == 0 and "vanish" in text


def test_cli_env_truncation(monkeypatch):
    monkeypatch.setenv(cli.ENV_TRUNCATION, "17")
    code, text = run(["predict", "--model", "quintic", "--degrees", "2"])
    assert code == 0 and "# truncation = 17" in text
    code, text = run(["predict", "--model", "quintic", "--degrees", "2", "--truncation", "13"])
    assert "# truncation = 13" in text
    monkeypatch.setenv(cli.ENV_TRUNCATION, "many")
    assert run(["predict", "--model", "quintic"])[0] == 1


def test_cli_strict(tmp_path, capsys):
    path = tmp_path / "frac.model"
    path.write_text("kappa = 1\ntheta4 : 1\ntheta3 : 0, -1\n")
    code, text = run(["predict", "--model", str(path), "--degrees", "3"])
    assert code == 0
    assert "1\t1/2" in text
    assert "warning" in capsys.readouterr().err
    assert run(["predict", "--model", str(path), "--degrees", "3", "--strict"])[0] == 2
    assert run(["predict", "--model", "quintic", "--degrees", "3", "--strict"])[0] == 0


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("kappa = 0\ntheta4 : 1\n")
    assert run(["predict", "--model", str(bad)])[0] == 1
    bad.write_text("kappa = 1\ntheta5 : 1\n")
    assert run(["predict", "--model", str(bad)])[0] == 1
    assert run(["predict", "--model", str(tmp_path / "missing.model")])[0] == 1
    non_mum = tmp_path / "nonmum.model"
    non_mum.write_text("kappa = 1\ntheta4 : 1, 1\ntheta0 : 2\n")
    assert run(["predict", "--model", str(non_mum)])[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["predict"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["cone", "--quadratic", "1,2", "--count", "3"])
    assert exc.value.code == 1


def test_cli_monodromy(tmp_path):
    code, text = run(["monodromy"])
    assert code == 0 and "4/4 rows passed" in text
    code, text = run(["monodromy", "--table", str(_tampered(tmp_path))])
    assert code == 2 and "row 6: FAILED at stage" in text


def test_cli_cone():
    code, text = run(["cone", "--quadratic", "1,-1,-1", "--count", "3", "--slopes"])
    assert code == 0
    assert [line.split("\t")[1] for line in text.splitlines()] == [
        "-5/8", "-2/3", "-1", "1/0", "2", "5/3", "13/8",
    ]
    assert text.splitlines()[0].split("\t")[0] == "-8 5"
    assert run(["cone", "--quadratic", "1,0,-4", "--count", "3"])[0] == 2


def test_cli_mum(tmp_path):
    t_inf = tmp_path / "tinf.txt"
    from mirror_count.monodromy import infinity_normal_form

    t_inf.write_text(infinity_normal_form(5, 5).to_text())
    code, text = run(["mum", "--matrices", str(t_inf), "--log"])
    assert code == 0 and "maximally unipotent = true" in text and "dim W2 = 2" in text
    zero = tmp_path / "zero.txt"
    zero.write_text("4\n" + "0 0 0 0\n" * 4)
    code, text = run(["mum", "--matrices", str(zero), "--weights", "2"])
    assert code == 0 and "maximally unipotent = false" in text and "m = undefined" in text
    zero.write_text("")
    assert run(["mum", "--matrices", str(zero)])[0] == 1
