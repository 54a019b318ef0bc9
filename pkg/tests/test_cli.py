"""End-to-end command-line behavior: outputs and exit codes."""
from __future__ import annotations

import io

import pytest

from verba.cli import main
from verba.cover import known_shape_certificate
from verba.experiments import run_experiment
from verba.finite import load_group


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("VERBA_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("VERBA_SEEDS", raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "x y y^-1", "[x,y] [x,y]^-1", "x^y")
    assert code == 0
    assert out.splitlines() == ["x", "1", "y x y^-1"]


def test_reduce_parse_error(capsys):
    code, _, err = run(capsys, "reduce", "[x")
    assert code == 2
    assert "error:" in err


def test_rewrite_then_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "rewrite", "culler_identity", "x", "y", "--records")
    assert code == 0
    assert "TARGET" in out
    assert "COUNTS COMMUTATOR=2" in out
    cert_file = tmp_path / "cert.txt"
    cert_file.write_text(out[: out.rindex("COUNTS COMMUTATOR=2")])

    code, out, _ = run(capsys, "verify", str(cert_file))
    assert code == 0
    assert out.startswith("PASS")

    tampered = tmp_path / "bad.txt"
    lines = cert_file.read_text().splitlines()
    lines[0] = "TARGET 1"
    tampered.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", str(tampered))
    assert code == 1
    assert out.startswith("FAIL")


def test_verify_reads_stdin(capsys, monkeypatch):
    text = known_shape_certificate(1).serialize()
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, out, _ = run(capsys, "verify", "-")
    assert code == 0
    assert out.startswith("PASS")


def test_verify_word_equality(capsys):
    code, out, _ = run(
        capsys, "verify", "[x,y]^3", "[y^x, x^(y^-1) x^-2][x^(y^-1), y^2]"
    )
    assert code == 0
    assert out.startswith("PASS: both sides reduce to")

    code, out, _ = run(capsys, "verify", "[x,y]", "x y")
    assert code == 1
    assert out.startswith("FAIL")

    code, _, err = run(capsys, "verify", "a", "b", "c")
    assert code == 2
    assert "two word expressions" in err


def test_rewrite_unknown_rule(capsys):
    code, _, err = run(capsys, "rewrite", "no_such_rule")
    assert code == 2
    assert "culler_identity" in err


def test_rewrite_bad_arity(capsys):
    code, _, err = run(capsys, "rewrite", "telescope_line", "x")
    assert code == 2
    assert "error:" in err


def test_wlength_histogram_a5(capsys):
    code, out, _ = run(
        capsys, "wlength", "--group", "A5", "--template", "gamma2", "--no-cache"
    )
    assert code == 0
    assert out.splitlines() == ["0 1", "1 59"]


def test_wlength_histogram_s3_reports_unreachable(capsys):
    code, out, _ = run(
        capsys, "wlength", "--group", "S3", "--template", "gamma2", "--no-cache"
    )
    assert code == 0
    assert out.splitlines() == ["0 1", "1 2", "unreachable 3"]


def test_wlength_element(capsys):
    group = load_group("S3")
    rotation = next(
        a
        for a in range(group.order)
        if a != group.identity and group.multiply(a, a) != group.identity
    )
    flip = next(
        a
        for a in range(group.order)
        if a != group.identity and group.multiply(a, a) == group.identity
    )
    code, out, _ = run(
        capsys,
        "wlength", "--group", "S3", "--template", "gamma2",
        "--element", "x", "--images", str(rotation), "--no-cache",
    )
    assert code == 0
    assert out.strip().endswith("distance 1")
    code, out, _ = run(
        capsys,
        "wlength", "--group", "S3", "--template", "gamma2",
        "--element", "x", "--images", str(flip), "--no-cache",
    )
    assert code == 0
    assert out.strip().endswith("distance unreachable")


def test_wlength_element_needs_images(capsys):
    code, _, err = run(
        capsys,
        "wlength", "--group", "S3", "--template", "gamma2", "--element", "x",
        "--no-cache",
    )
    assert code == 2
    assert "--images" in err


def test_wlength_bi_invariance(capsys):
    code, out, _ = run(
        capsys,
        "wlength", "--group", "A4", "--template", "gamma2",
        "--check-bi-invariance", "--no-cache",
    )
    assert code == 0
    assert "bi-invariance: PASS" in out


def test_wlength_budget_exit_code(capsys):
    code, _, err = run(capsys, "wlength", "--group", "A5", "--template", "gamma5")
    assert code == 3
    assert "budget" in err


def test_wlength_unknown_group(capsys):
    code, _, err = run(capsys, "wlength", "--group", "Q8", "--template", "gamma2")
    assert code == 2
    assert "error:" in err


def test_wlength_uses_cache(capsys, isolated_cache):
    args = ("wlength", "--group", "D4", "--template", "gamma2")
    code, first, _ = run(capsys, *args)
    assert code == 0
    entries = list((isolated_cache / "cache").glob("*.dist"))
    assert len(entries) == 1
    code, second, _ = run(capsys, *args)
    assert code == 0
    assert second == first

    code, out, _ = run(capsys, "cache", "info")
    assert code == 0
    assert "GROUP D4" in out
    code, out, _ = run(capsys, "cache", "clear")
    assert code == 0
    assert "removed 1" in out
    code, out, _ = run(capsys, "cache", "info")
    assert code == 0
    assert "(empty)" in out


def test_bound_with_default_seeds(capsys):
    code, out, _ = run(capsys, "bound", "--declare", "SL FREE [a,b] | gamma2")
    assert code == 0
    assert "[1/2, 1/2]" in out


def test_bound_without_seeds(capsys):
    code, out, _ = run(
        capsys, "bound", "--no-default-seeds", "--declare", "SCL FREE [a,b]"
    )
    assert code == 0
    assert "[0, inf]" in out


def test_bound_seeds_env_override(capsys, tmp_path, monkeypatch):
    seeds = tmp_path / "custom.facts"
    seeds.write_text("SCL FREE [a,b] => 2\n")
    monkeypatch.setenv("VERBA_SEEDS", str(seeds))
    code, out, _ = run(capsys, "bound", "--declare", "SCL FREE [a,b]")
    assert code == 0
    assert "[2, 2]" in out


def test_bound_facts_file_and_explain(capsys, tmp_path):
    facts = tmp_path / "extra.facts"
    facts.write_text("L FREE [a,b] | gamma2 @ 3 = 0 2 # three-power split\n")
    code, out, _ = run(
        capsys,
        "bound", "--facts", str(facts),
        "--declare", "SL FREE [a,b] | gamma2",
        "--explain", "SL FREE [a,b] | gamma2",
        "--records",
    )
    assert code == 0
    assert "[1/2, 1/2]" in out
    assert "by RULE" in out
    assert "# three-power split" in out
    assert any(line.startswith("FACT ") for line in out.splitlines())


def test_bound_inconsistency_exit_code(capsys, tmp_path):
    facts = tmp_path / "broken.facts"
    facts.write_text("L FREE [x,y] | gamma2 @ 1 => 0\n")
    code, out, err = run(capsys, "bound", "--facts", str(facts))
    assert code == 1
    assert "INCONSISTENT" in out + err


def test_bound_parse_error(capsys, tmp_path):
    facts = tmp_path / "bad.facts"
    facts.write_text("SCL FREE [x,y] = nonsense\n")
    code, _, err = run(capsys, "bound", "--facts", str(facts))
    assert code == 2
    assert "error:" in err


def test_cover_invariants_output(capsys):
    code, out, _ = run(capsys, "cover", "--n", "2")
    assert code == 0
    assert "degree 5" in out
    assert "genus 3" in out
    assert "boundary components 1" in out
    assert "x images 4 3 2 1 0" in out
    assert "y images 1 2 0 3 4" in out
    assert "PASS x is an involution" in out
    assert "PASS commutator is a single full cycle" in out
    assert "FAIL" not in out


def test_cover_known_certificate(capsys, tmp_path):
    code, out, _ = run(capsys, "cover", "--n", "1", "--known-certificate")
    assert code == 0
    assert "TARGET" in out
    cert_file = tmp_path / "shape.txt"
    cert_file.write_text(out[out.index("TARGET") :])
    code, out, _ = run(capsys, "cover", "--n", "1", "--certificate", str(cert_file))
    assert code == 0
    assert "shape certificate: PASS" in out
    code, out, _ = run(capsys, "cover", "--n", "2", "--certificate", str(cert_file))
    assert code == 1
    assert "shape certificate: FAIL" in out


def test_cover_known_certificate_unavailable(capsys):
    code, out, _ = run(capsys, "cover", "--n", "2", "--known-certificate")
    assert code == 1
    assert "no closed-form" in out


def test_experiment_list_and_run(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "list")
    assert code == 0
    assert "xy_power_diagonals" in out

    code, out, _ = run(capsys, "experiment", "run", "magnus_depth_table")
    assert code == 0
    assert out == run_experiment("magnus_depth_table")

    report = tmp_path / "report.txt"
    code, out, _ = run(
        capsys, "experiment", "run", "magnus_depth_table", "--out", str(report)
    )
    assert code == 0
    assert report.read_text() == run_experiment("magnus_depth_table")


def test_experiment_unknown(capsys):
    code, _, err = run(capsys, "experiment", "run", "nope")
    assert code == 2
    assert "error:" in err
