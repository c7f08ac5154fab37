import csv
import io
import json
import math

import pytest

from cotsum.cli import RunConfig, build_parser, main, render
from cotsum.errors import DomainError


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def table(text):
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, v = line[2:].split("=", 1)
            meta[k] = v
        else:
            body.append(line)
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_c0_one_third(capsys):
    rc, out, _ = run(capsys, "c0", "1", "3")
    meta, rows = table(out)
    assert rc == 0
    assert float(rows[0]["value"]) == pytest.approx(0.19245008973, abs=1e-11)
    for key in ("seed", "truncation", "precision", "version"):
        assert key in meta


def test_c0_slash_form_and_both(capsys):
    rc, out, _ = run(capsys, "c0", "2/7", "--method", "both")
    _, rows = table(out)
    assert [r["method"] for r in rows] == ["direct", "cf_telescoped", "discrepancy"]
    assert float(rows[2]["value"]) < 1e-12


def test_c0_half_is_zero(capsys):
    rc, out, _ = run(capsys, "c0", "1", "2")
    assert rc == 0 and float(table(out)[1][0]["value"]) == 0.0


@pytest.mark.parametrize("argv", [("c0", "2", "4"), ("psi", "0", "5"), ("c0", "1", "x"), ("estermann", "pi")])
def test_domain_errors_exit_2(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2 and "error" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["c0", "1", "3", "--method", "nope"])
    assert info.value.code == 2


def test_resource_error_exit_3(capsys):
    assert run(capsys, "hk", "--k", "6", "--trunc", "100", "--method", "brute")[0] == 3
    assert run(capsys, "estermann", "0.3", "--trunc", "1000", "--sieve-cap", "10")[0] == 3


def test_psi_half(capsys):
    rc, out, _ = run(capsys, "psi", "1", "2")
    row = table(out)[1][0]
    assert float(row["psi"]) == pytest.approx(-1 / (2 * math.pi), abs=1e-12)
    assert set(row) == {"a", "q", "psi", "leading_term", "residual"}


def test_estermann_routes(capsys):
    _, out, _ = run(capsys, "estermann", "1/3", "--bridge")
    assert float(table(out)[1][0]["value"]) == pytest.approx(math.sqrt(3) * math.pi**2 / 54, abs=1e-12)
    _, out, _ = run(capsys, "estermann", "1/2", "--trunc", "1000")
    assert float(table(out)[1][0]["value"]) == 0.0
    _, out, _ = run(capsys, "estermann", "0.61803398875", "--depth", "18")
    row = table(out)[1][0]
    assert abs(float(row["value"]) + 0.1849) < float(row["err_estimate"]) + 1e-3
    assert row["method"] == "cf_formula"


def test_hk_dft(capsys):
    _, out, _ = run(capsys, "hk", "--k", "2", "--trunc", "100000", "--method", "dft")
    meta, rows = table(out)
    assert float(rows[0]["value"]) == pytest.approx(0.13889, abs=1e-3)
    assert meta["truncation"] == "100000"


def test_moments_to_file(capsys, tmp_path):
    out = tmp_path / "moments.csv"
    rc, _, _ = run(capsys, "moments", "--q", "1009", "10007", "--k", "2", "--out", str(out))
    assert rc == 0
    meta, rows = table(out.read_text())
    assert list(rows[0]) == ["q", "k", "phi_q", "empirical", "predicted", "rel_dev"]
    assert float(rows[1]["rel_dev"]) <= 0.05


def test_distribution_files(capsys, tmp_path):
    out = tmp_path / "fig1.csv"
    rc, stdout, _ = run(capsys, "distribution", "--samples", "500", "--trunc", "2000", "--bins", "10",
                        "--seed", "1", "--out", str(out))
    assert rc == 0
    meta, hist = table(out.read_text())
    assert list(hist[0]) == ["bin_center", "count"] and len(hist) == 10
    assert meta["seed"] == "1" and meta["truncation"] == "2000"
    _, cdf = table((tmp_path / "fig1_cdf.csv").read_text())
    F = [float(r["F̂(x)"]) for r in cdf]
    assert F == sorted(F) and F[-1] == 1.0
    assert sum(int(r["count"]) for r in hist) + int(meta["underflow"]) + int(meta["overflow"]) == 500


def test_distribution_is_bit_stable(capsys, tmp_path):
    for name, threads in (("a.csv", "1"), ("b.csv", "2")):
        run(capsys, "distribution", "--samples", "300", "--trunc", "1000", "--threads", threads,
            "--out", str(tmp_path / name))
    body = lambda p: [l for l in p.read_text().splitlines() if not l.startswith("# threads")]
    assert body(tmp_path / "a.csv") == body(tmp_path / "b.csv")
    assert body(tmp_path / "a_cdf.csv") == body(tmp_path / "b_cdf.csv")


def test_target_json(capsys):
    rc, out, _ = run(capsys, "target", "--z", "0.3", "--eps", "0.05", "--format", "json")
    doc = json.loads(out)
    row = doc["rows"][0]
    assert rc == 0 and row["in_window"] is True
    assert 0.3 < row["bridge_value"] <= 0.35
    assert doc["meta"]["output_format"] == "json"


def test_target_budget_exit_3(capsys):
    assert run(capsys, "target", "--z", "1.0", "--eps", "0.05", "--budget", "3")[0] == 3


def test_verify_fast(capsys):
    rc, out, err = run(capsys, "verify", "--level", "fast")
    assert rc == 0, err
    _, rows = table(out)
    assert rows and all(r["passed"] == "True" for r in rows)


def test_verify_failure_exit_4(capsys, monkeypatch):
    from cotsum import cli, verify

    def broken(level, seed):
        yield verify.Check("always_fails", False, 1.0, 0.0, 0.0)

    monkeypatch.setattr(cli, "run_suite", broken)
    assert run(capsys, "verify")[0] == 4


def test_run_config_validation():
    with pytest.raises(DomainError):
        RunConfig(precision="quad")
    with pytest.raises(DomainError):
        RunConfig(threads=0)
    assert RunConfig().metadata()["truncation"] == "none"


def test_render_json_mirrors_metadata():
    doc = json.loads(render([(1, 2.5)], ("a", "b"), {"seed": 0}, "json"))
    assert doc == {"meta": {"seed": 0}, "columns": ["a", "b"], "rows": [{"a": 1, "b": 2.5}]}


def test_parser_lists_all_commands():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {"c0", "psi", "estermann", "moments", "hk", "distribution", "target", "verify"}


def test_verify_full(capsys):
    rc, out, err = run(capsys, "verify", "--level", "full")
    assert rc == 0, err
