import csv
import os

import pytest

from toeplab.lab.cli import main
from toeplab.lab.config import (
    SUITES,
    ConfigError,
    ExperimentConfig,
    GridError,
    OutputDirError,
    PreconditionError,
    UnknownSymbolError,
    from_mapping,
    load_config,
    parse_config_text,
)
from toeplab.lab.report import SuiteReport, emit_csv
from toeplab.lab.runner import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, run, run_suites
from toeplab.lab.suites import SUITE_FUNCS

SMALL = dict(ns=(16, 32, 64, 128), K=32, M=1024, trials=100)


def small(**kw):
    return ExperimentConfig(**{**SMALL, **kw}).validate()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def one(cfg, name):
    (rep,) = run_suites(cfg, [name])
    return rep


# --- configuration ---------------------------------------------------------------------

def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        "# experiment\n"
        "symbols.f = sawtooth\n"
        "grid.ns = 16, 32, 64, 128\n"
        "grid.epsilons = 0.2,0.05\n"
        "trunc.K = 40   # coefficients\n"
        "sample.M = 512\n"
        "suites = widom,flip\n"
        "seed = 7\n"
    )
    cfg = load_config(path, {"trunc.inner": "100", "symbols.g": "cos"})
    assert cfg.f == "sawtooth" and cfg.g == "cos"
    assert cfg.ns == (16, 32, 64, 128)
    assert cfg.epsilons == (0.2, 0.05)
    assert (cfg.K, cfg.inner, cfg.M, cfg.seed) == (40, 100, 512, 7)
    assert cfg.suites == ("widom", "flip")
    assert small().inner_len == 128


def test_suites_all_expands():
    assert from_mapping({"suites": "all"}).suites == SUITES


@pytest.mark.parametrize("values,error", [
    ({"symbols.f": "triangle"}, UnknownSymbolError),
    ({"grid.ns": "64,32,128,256"}, GridError),
    ({"grid.epsilons": "0.1,0.2"}, GridError),
    ({"sample.M": "1000"}, GridError),
    ({"trunc.K": "0"}, GridError),
    ({"trunc.inner": "-1"}, GridError),
    ({"suites": "widom,theorem"}, ConfigError),
    ({"colour": "blue"}, ConfigError),
    ({"trunc.K": "many"}, ConfigError),
])
def test_config_errors_are_distinct(values, error):
    with pytest.raises(error) as info:
        from_mapping(values)
    assert str(info.value)


def test_config_syntax_errors(tmp_path):
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("seed = 1\nnonsense\n")
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")


def test_unwritable_output_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputDirError, match="file"):
        run(small(out_dir=str(blocker / "sub")), ["flip"])


# --- suites ----------------------------------------------------------------------------

def test_positivity_for_the_shift():
    rep = one(small(f="monomial:1"), "positivity")
    assert rep.passed
    mins = [c for c in rep.cases if "min-eig" in c.name]
    assert len(mins) == 2 * 4
    assert all(c.measured >= -1e-10 and c.tolerance == -1e-10 for c in mins)


def test_widom_suite_exact_for_two_cos():
    rep = one(small(f="trigpoly:[1@−1,1@1]", g="trigpoly:[1@−1,1@1]"), "widom")
    assert rep.passed
    assert all(c.measured <= 1e-10 for c in rep.cases)
    assert rep.metadata["n=16.exact"] is True


def test_widom_suite_reports_truncation_error_for_sawtooth():
    rep = one(small(f="sawtooth"), "widom")
    assert rep.passed
    assert rep.metadata["n=128.truncation_error_fro"] > 0.01
    assert "biased" in rep.metadata["fg.note"]


def test_cluster_suite_sawtooth_is_not_strong():
    rep = one(small(f="sawtooth", ns=(64, 128, 256, 512)), "cluster")
    assert rep.passed
    assert rep.metadata["semicommutator.overall"] != "strong"
    assert rep.tables["cluster"].header == ("n", "epsilon", "count")


@pytest.mark.parametrize("label", ["smoothexp:1", "cos", "constant:2"])
def test_semicommutator_compactness_smooth(label):
    rep = one(small(f=label), "semicommutator-compactness")
    assert rep.passed
    for key in ("semicommutator", "hankel-gram", "hankel-gram-reflected"):
        assert rep.metadata[f"{key}.overall"] == "strong"
    assert rep.cases[-1].measured == "consistent"


def test_semicommutator_compactness_constant_is_zero():
    rep = one(small(f="constant:2"), "semicommutator-compactness")
    table = rep.tables["semicommutator-compactness.semicommutator"]
    assert all(row[2] == 0 for row in table.rows)


def test_semicommutator_compactness_sawtooth_small_grid():
    rep = one(small(f="sawtooth", ns=(16, 32, 64, 128, 256)), "semicommutator-compactness")
    assert rep.metadata["semicommutator.overall"] != "strong"
    assert rep.metadata["hankel-gram.overall"] != "strong"
    assert rep.metadata["hankel-gram-reflected.overall"] != "strong"
    assert rep.passed


@pytest.mark.parametrize("label,mo", [("cos", "vmo-like"), ("constant:1", "vmo-like"),
                                      ("sawtooth", "not-vmo-like")])
def test_vmo_characterization(label, mo):
    rep = one(small(f=label, ns=(16, 32, 64, 128, 256)), "vmo-characterization")
    assert rep.metadata["mo.verdict"] == mo
    assert rep.cases[0].measured == "holds"
    if label == "sawtooth":
        assert rep.metadata["both_strong"] is False
    else:
        assert rep.metadata["both_strong"] is True


def test_product_clustering_cos_cos():
    rep = one(small(f="cos", g="cos"), "product-clustering")
    assert rep.passed
    assert rep.metadata["semicommutator.overall"] == "strong"
    assert all(rep.metadata[f"uchiyama.n={n}.violations"] == 0 for n in SMALL["ns"])
    assert rep.metadata["hermitian-part.overall"] == "strong"
    assert rep.metadata["skew-part.overall"] == "strong"


def test_product_clustering_analytic_monomials_vanish():
    rep = one(small(f="monomial:1", g="monomial:2"), "product-clustering")
    assert rep.passed
    assert rep.metadata["semicommutator.fro_at_max_n"] == 0


def test_product_clustering_refuses_jump_symbol():
    with pytest.raises(PreconditionError, match="g = sawtooth is jump"):
        run_suites(small(f="cos", g="sawtooth"), ["product-clustering"])


def test_every_case_has_a_tolerance():
    reports = run_suites(small(f="cos", suites=SUITES))
    assert [r.name for r in reports] == list(SUITE_FUNCS)
    for rep in reports:
        assert rep.cases
        for case in rep.cases:
            assert case.tolerance is not None and case.measured is not None


def test_suites_compose():
    cfg = small(f="smoothexp:1")
    together = {r.name: list(r.rows()) for r in run_suites(cfg, SUITES)}
    for name in SUITES:
        assert list(one(cfg, name).rows()) == together[name]


def test_report_text_marks_failures():
    rep = SuiteReport("demo")
    rep.check_le("small", 0.5, 1.0)
    rep.check_le("large", 2.0, 1.0)
    assert not rep.passed
    text = rep.text()
    assert text.startswith("[FAIL] demo")
    assert "BAD large" in text


# --- CSV emission ----------------------------------------------------------------------

def test_empty_suite_set_writes_manifest_only(tmp_path):
    paths = emit_csv([], tmp_path)
    assert os.listdir(tmp_path) == ["manifest.csv"]
    assert read_csv(paths[-1]) == [["file", "sha256"]]


def test_cluster_artifact_schema(tmp_path):
    reports, code, _ = run(small(f="cos", out_dir=str(tmp_path)), ["cluster"])
    assert code == EXIT_OK
    rows = read_csv(tmp_path / "cluster.csv")
    assert rows[0] == ["n", "epsilon", "count"]
    assert rows[1] == ["16", "0.01", "2"]
    assert rows[-1] == ["# verdict=strong"]
    assert read_csv(tmp_path / "cluster.suite.csv")[0] == ["suite", "case", "measured", "tolerance", "pass"]
    assert read_csv(tmp_path / "spectra.csv")[0] == ["n", "index", "sigma"]
    manifest = {row[0] for row in read_csv(tmp_path / "manifest.csv")[1:]}
    assert manifest == {f for f in os.listdir(tmp_path) if f != "manifest.csv"}


def test_runs_are_byte_identical(tmp_path):
    cfg_a = small(f="smoothexp:1", suites=SUITES, out_dir=str(tmp_path / "a"))
    cfg_b = small(f="smoothexp:1", suites=SUITES, out_dir=str(tmp_path / "b"))
    run(cfg_a)
    run(cfg_b)
    a = (tmp_path / "a" / "manifest.csv").read_bytes()
    assert a == (tmp_path / "b" / "manifest.csv").read_bytes()
    assert len(a.splitlines()) > 10


def test_seed_changes_random_checks_only(tmp_path):
    a = one(small(f="cos", seed=1), "uchiyama")
    b = one(small(f="cos", seed=2), "uchiyama")
    assert a.passed and b.passed
    assert [c.measured for c in a.cases] != [c.measured for c in b.cases]


def test_floats_use_seventeen_digits(tmp_path):
    run(small(f="sawtooth", out_dir=str(tmp_path)), ["mo-profile"])
    rows = read_csv(tmp_path / "mo-profile.values.csv")
    assert rows[0] == ["delta", "value"]
    assert rows[1][0] == format(2 * 3.141592653589793 / 512, ".17g")


# --- command line ----------------------------------------------------------------------

def test_cli_coeffs(capsys):
    assert main(["coeffs", "monomial:1", "--K", "1"]) == 0
    assert capsys.readouterr().out.splitlines() == ["k,re,im", "-1,0,0", "0,0,0", "1,1,0"]
    assert main(["coeffs", "cos", "--K", "2", "--sampled", "--M", "64"]) == 0
    assert capsys.readouterr().out.splitlines()[2].startswith("-1,0.5")


def test_cli_matrix_and_spectrum(capsys):
    assert main(["matrix", "monomial:1", "--n", "2", "--kind", "semicommutator"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "i,j,re,im" and out[1] == "0,0,1,0"
    assert main(["spectrum", "monomial:1", "--n", "3,4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,index,sigma"
    assert out[1] == "3,0,1" and len(out) == 1 + 3 + 4


def test_cli_cluster(capsys):
    assert main(["cluster", "smoothexp:1", "--ns", "16,32,64,128", "--kind", "hankel"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,epsilon,count" and out[-1] == "# verdict=strong"


def test_cli_run_exit_codes(tmp_path, capsys):
    base = ["run", "--ns", "16,32,64,128", "--K", "32", "--M", "1024", "--trials", "50"]
    assert main(base + ["--f", "cos", "--suites", "positivity,flip", "--out", str(tmp_path / "ok")]) == EXIT_OK
    assert "[PASS] positivity" in capsys.readouterr().out
    # an inner sum far shorter than the truncation leaves a visible residual
    code = main(base + ["--f", "sawtooth", "--suites", "widom", "--inner", "4", "--out", str(tmp_path / "bad")])
    assert code == EXIT_FAILED
    assert main(base + ["--f", "triangle", "--out", str(tmp_path / "x")]) == EXIT_CONFIG
    assert "unknown symbol" in capsys.readouterr().err
    assert main(base + ["--f", "cos", "--g", "sawtooth", "--suites", "product-clustering",
                        "--out", str(tmp_path / "y")]) == EXIT_CONFIG
    assert "jump" in capsys.readouterr().err
    assert main(base + ["--f", "cos", "--ns", "32,16,64,128"]) == EXIT_CONFIG
    assert "strictly increasing" in capsys.readouterr().err


def test_cli_run_with_config_file(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(f"symbols.f = cos\ngrid.ns = 16,32,64,128\nsuites = flip\nout.dir = {tmp_path / 'o'}\n")
    assert main(["run", "--config", str(cfg)]) == 0
    assert (tmp_path / "o" / "flip.suite.csv").exists()
    assert main(["run", "--config", str(cfg), "--suites", "mo-profile", "--M", "512"]) == 0
    assert (tmp_path / "o" / "mo-profile.suite.csv").exists()


def test_cli_verify(capsys):
    code = main(["verify", "cos", "--ns", "16,32,64,128", "--K", "32", "--M", "1024", "--trials", "50"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    for name in ("semicommutator-compactness", "vmo-characterization", "product-clustering"):
        assert f"[PASS] {name}" in out


def test_cli_unwritable_directory(tmp_path, capsys):
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory")
    code = main(["run", "--f", "cos", "--suites", "flip", "--ns", "16,32,64,128", "--out", str(blocker / "o")])
    assert code == EXIT_CONFIG
    assert "output directory" in capsys.readouterr().err
