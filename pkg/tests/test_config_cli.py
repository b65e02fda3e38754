import json
import math

import numpy as np
import pytest

from qndlab import (
    ParseError,
    ValidationError,
    build_instance,
    emit_csv,
    emit_figure,
    emit_json,
    evaluate_point,
    load_report,
    parse_config,
    run,
)
from qndlab.cli import main
from qndlab.errors import EmptyReport
from qndlab.pipeline import RunReport

PAPER_DOC = """
observable: pauli-z
initial_state: paper-example
hamiltonian: paper-example
sweep: {parameter: omega_tau, start: 0.0, stop: 6.283185307179586, points: 629}
outputs: [qpd, lg]
seed: 0
"""

SMALL_SWEEP = """
observable: pauli-z
initial_state: paper-example
hamiltonian: paper-example
sweep: {parameter: omega_tau, start: 0.5, stop: 2.0, points: 3}
"""

FIXED_POINT = """
observable: pauli-z
initial_state: paper-example
hamiltonian: paper-example
times: {t0: 0.0, t1: 1.0, t2: 2.0}
outputs: [qpd, lg, characteristic, identities]
"""


class TestParseConfig:
    def test_paper_preset_document(self):
        config = parse_config(PAPER_DOC)
        assert config.dimension == 2
        assert config.sweep.points == 629
        assert np.allclose(config.observable, [[1, 0], [0, -1]])
        assert np.allclose(config.initial_state, np.array([1, 1j]) / np.sqrt(2))
        assert config.seed == 0

    def test_sweep_grid_is_half_open(self):
        config = parse_config(PAPER_DOC)
        grid = config.sweep.grid()
        assert len(grid) == 629
        assert grid[0] == 0.0
        assert grid[-1] < 2 * np.pi
        # odd point count keeps the classical point omega*tau = pi off-grid
        assert np.min(np.abs(grid - np.pi)) > 1e-3

    def test_both_times_and_sweep_rejected(self):
        doc = FIXED_POINT + "sweep: {parameter: omega_tau, start: 0, stop: 1, points: 5}\n"
        with pytest.raises(ValidationError):
            parse_config(doc)

    def test_neither_times_nor_sweep_rejected(self):
        doc = "\n".join(
            line for line in FIXED_POINT.splitlines() if not line.startswith("times")
        )
        with pytest.raises(ValidationError):
            parse_config(doc)

    def test_non_hermitian_observable_rejected(self):
        doc = FIXED_POINT.replace(
            "observable: pauli-z", "observable: [[1, 1], [0, 1]]"
        )
        with pytest.raises(ValidationError):
            parse_config(doc)

    def test_complex_literal_forms(self):
        doc = """
observable: [[0, "-1j"], ["1j", 0]]
initial_state: [[0.5, 0.5], [0.5, -0.5]]
hamiltonian: [[0, 0.5], [0.5, 0]]
times: {t0: 0, t1: 1, t2: 2}
"""
        config = parse_config(doc)
        assert np.allclose(config.observable, [[0, -1j], [1j, 0]])
        assert np.allclose(config.initial_state, [0.5 + 0.5j, 0.5 - 0.5j])

    def test_malformed_yaml(self):
        with pytest.raises(ParseError):
            parse_config("observable: [unclosed")

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            parse_config(FIXED_POINT + "bogus: 1\n")

    def test_unknown_output_rejected(self):
        doc = FIXED_POINT.replace(
            "[qpd, lg, characteristic, identities]", "[qpd, everything]"
        )
        with pytest.raises(ValidationError):
            parse_config(doc)

    def test_single_point_sweep_rejected(self):
        doc = SMALL_SWEEP.replace("points: 3", "points: 1")
        with pytest.raises(ValidationError):
            parse_config(doc)

    def test_digest_stable(self):
        assert parse_config(PAPER_DOC).digest() == parse_config(PAPER_DOC).digest()
        assert parse_config(PAPER_DOC).digest() != parse_config(SMALL_SWEEP).digest()


class TestRun:
    def test_sweep_reproduces_analytic_k(self):
        report = run(parse_config(SMALL_SWEEP))
        assert len(report.records) == 3
        for rec in report.records:
            expected = 2 * np.cos(rec.param) - np.cos(2 * rec.param)
            assert abs(rec.k - expected) < 1e-10

    def test_fixed_times_single_record(self):
        report = run(parse_config(FIXED_POINT))
        (rec,) = report.records
        assert rec.param == 1.0
        assert rec.characteristic_residual < 1e-10
        assert rec.identity_residual < 1e-10

    def test_threads_match_serial(self):
        config = parse_config(SMALL_SWEEP)
        serial = run(config, threads=1)
        parallel = run(config, threads=3)
        for a, b in zip(serial.records, parallel.records):
            assert a.param == b.param
            assert a.k == b.k
            assert a.qpd == b.qpd

    def test_zero_hamiltonian(self):
        doc = FIXED_POINT.replace("hamiltonian: paper-example", "hamiltonian: zero")
        (rec,) = run(parse_config(doc)).records
        assert abs(rec.k - 1.0) < 1e-12
        assert rec.negativity <= 1e-12  # no evolution, no path interference

    def test_non_binary_observable_still_produces_qpd(self):
        doc = """
observable: [[0, 0, 0], [0, 1, 0], [0, 0, 2]]
initial_state: [1, 1, 1]
hamiltonian: [[0, "0.5j", 0], ["-0.5j", 0, "0.5j"], [0, "-0.5j", 0]]
times: {t0: 0, t1: 1, t2: 2}
outputs: [qpd]
"""
        (rec,) = run(parse_config(doc)).records
        assert math.isnan(rec.k)
        assert not rec.lgi_violated
        assert sum(w for _, w, kind in rec.qpd if kind == "classical") == pytest.approx(
            1.0, abs=1e-10
        )


class TestEmitters:
    def test_csv_shape_and_qpd_sibling(self, tmp_path):
        report = run(parse_config(SMALL_SWEEP))
        path = emit_csv(report, tmp_path / "out.csv")
        lines = path.read_text().splitlines()
        assert len(lines) == 4
        assert lines[0] == "param,K,K_cl,K_q1,K_q2,negativity,lgi_violated,mrps_violated"
        qpd_lines = (tmp_path / "out_qpd.csv").read_text().splitlines()
        assert qpd_lines[0] == "param,delta,weight,kind"
        deltas = {float(l.split(",")[1]) for l in qpd_lines[1:]}
        assert deltas == {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0}
        kinds = {l.split(",")[3] for l in qpd_lines[1:]}
        assert kinds == {"classical", "quantum"}

    def test_csv_deterministic(self, tmp_path):
        config = parse_config(SMALL_SWEEP)
        emit_csv(run(config), tmp_path / "a.csv")
        emit_csv(run(config), tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a_qpd.csv").read_bytes() == (tmp_path / "b_qpd.csv").read_bytes()

    def test_csv_round_trip(self, tmp_path):
        report = run(parse_config(SMALL_SWEEP))
        path = emit_csv(report, tmp_path / "rt.csv")
        loaded = load_report(path)
        for orig, back in zip(report.records, loaded.records):
            assert back.param == orig.param
            assert back.k == orig.k  # 17 significant digits: lossless
            assert back.qpd == orig.qpd

    def test_json_round_trip(self, tmp_path):
        report = run(parse_config(SMALL_SWEEP))
        path = emit_json(report, tmp_path / "rt.json")
        doc = json.loads(path.read_text())
        assert set(doc["records"][0]) >= {"param", "K", "negativity", "qpd"}
        loaded = load_report(path)
        assert loaded.records[0].k == report.records[0].k

    def test_empty_report_rejected(self, tmp_path):
        empty = RunReport(records=(), config_digest="", version="", wall_time=0.0)
        with pytest.raises(EmptyReport):
            emit_csv(empty, tmp_path / "never.csv")
        with pytest.raises(EmptyReport):
            emit_figure(empty, tmp_path / "never.svg")

    def test_unwritable_path(self, tmp_path):
        report = run(parse_config(SMALL_SWEEP))
        with pytest.raises(OSError):
            emit_csv(report, tmp_path / "missing-dir" / "out.csv")

    def test_figure_sweep(self, tmp_path):
        config = parse_config(PAPER_DOC)
        small = parse_config(
            PAPER_DOC.replace("points: 629", "points: 63")
        )
        report = run(small)
        out = emit_figure(report, tmp_path / "fig.svg")
        body = out.read_text()
        assert body.lstrip().startswith("<?xml")
        assert "<svg" in body

    def test_figure_single_point(self, tmp_path):
        report = run(parse_config(FIXED_POINT))
        out = emit_figure(report, tmp_path / "point.svg")
        assert "<svg" in out.read_text()


class TestCli:
    def write_config(self, tmp_path, doc=SMALL_SWEEP):
        p = tmp_path / "exp.yaml"
        p.write_text(doc)
        return p

    def test_run_csv(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "exp.csv").exists()
        assert (tmp_path / "out" / "exp_qpd.csv").exists()

    def test_run_json(self, tmp_path):
        cfg = self.write_config(tmp_path)
        assert main(
            ["run", str(cfg), "--out-dir", str(tmp_path), "--format", "json"]
        ) == 0
        assert (tmp_path / "exp.json").exists()

    def test_run_byte_identical(self, tmp_path):
        cfg = self.write_config(tmp_path)
        main(["run", str(cfg), "--out-dir", str(tmp_path / "a")])
        main(["run", str(cfg), "--out-dir", str(tmp_path / "b")])
        assert (tmp_path / "a" / "exp.csv").read_bytes() == (
            tmp_path / "b" / "exp.csv"
        ).read_bytes()

    def test_qpd_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["qpd", str(cfg), "--at", "1.0471975511965976"]) == 0
        out = capsys.readouterr().out
        assert "negativity" in out
        assert "classical" in out

    def test_check_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["check", str(cfg)]) == 0
        assert "all checks passed" in capsys.readouterr().out

    def test_fig_subcommand(self, tmp_path):
        cfg = self.write_config(tmp_path)
        main(["run", str(cfg), "--out-dir", str(tmp_path)])
        assert main(
            ["fig", str(tmp_path / "exp.csv"), "-o", str(tmp_path / "k.svg")]
        ) == 0
        assert (tmp_path / "k.svg").exists()

    def test_invalid_config_exit_code(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, doc="observable: pauli-z\n")
        assert main(["run", str(cfg)]) == 2
        assert "error" in capsys.readouterr().err

    def test_threads_env_fallback(self, tmp_path, monkeypatch):
        cfg = self.write_config(tmp_path)
        monkeypatch.setenv("QNDLAB_THREADS", "2")
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "env")]) == 0


def test_build_instance_requires_param_for_sweep():
    config = parse_config(SMALL_SWEEP)
    with pytest.raises(Exception):
        build_instance(config)
    inst = build_instance(config, omega_tau=1.0)
    assert inst.dim == 2


def test_evaluate_point_fixed_config():
    rec = evaluate_point(parse_config(FIXED_POINT), None)
    assert abs(rec.k - (2 * np.cos(1.0) - np.cos(2.0))) < 1e-10
