"""
Command line: exit codes, outputs and written files.
"""

from __future__ import annotations

import json

import pytest

from app import cli
from app.cli import EXIT_IMPOSSIBLE, EXIT_OK, EXIT_SEARCH_FAILURE, EXIT_USAGE, main
from app.core.errors import PipelineInvariantError
from app.models.schemas import OracleReport, RunReport
from app.services.generators import gen_extremal_instance
from app.services.graph_parser import parse_graph_document
from tests.builders import complete_instance, cycle_instance


@pytest.fixture
def k6_file(write_graph, k6):
    return write_graph(k6, "k6.txt")


@pytest.fixture
def extremal_file(write_graph):
    return write_graph(gen_extremal_instance(10, 3), "extremal.txt")


class TestSolve:
    def test_hamilton_cycle(self, k6_file, capsys):
        assert main(["solve", k6_file, "--k", "1"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1: 1 2 3 4 5 6"

    def test_report_file(self, k6_file, tmp_path):
        report_path = tmp_path / "run.json"
        assert main(["solve", k6_file, "--k", "1", "--report", str(report_path)]) == EXIT_OK
        report = RunReport.model_validate_json(report_path.read_text(encoding="utf-8"))
        assert report.status == "success"
        assert report.components == 1

    def test_oracle_confirms_impossible(self, extremal_file, capsys):
        assert main(["solve", extremal_file, "--k", "3"]) == EXIT_IMPOSSIBLE
        assert "oracle: no 2-factor with 3 cycles exists" in capsys.readouterr().err

    def test_no_oracle_is_plain_failure(self, extremal_file, capsys):
        assert main(["solve", extremal_file, "--k", "3", "--no-oracle"]) == EXIT_SEARCH_FAILURE
        assert "search failure:" in capsys.readouterr().err

    def test_failure_while_factor_exists(self, k6_file, tmp_path):
        report_path = tmp_path / "run.json"
        status = main(["solve", k6_file, "--k", "2", "--report", str(report_path)])
        assert status == EXIT_SEARCH_FAILURE
        report = RunReport.model_validate_json(report_path.read_text(encoding="utf-8"))
        assert "oracle: a 2-factor with 2 cycles exists" in report.diagnostics

    def test_hamilton_flag_without_h_line(self, write_graph, k6, capsys):
        path = write_graph(k6, "bare.txt", with_hamilton=False)
        assert main(["solve", path, "--k", "1", "--hamilton", "1,2,3,4,5,6"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1: 1 2 3 4 5 6"

    def test_bad_hamilton_flag(self, write_graph, capsys):
        path = write_graph(cycle_instance(5), "c5.txt", with_hamilton=False)
        assert main(["solve", path, "--k", "1", "--hamilton", "1,3,2,4,5"]) == EXIT_USAGE
        assert "missing Hamilton edge" in capsys.readouterr().err

    def test_invalid_config(self, k6_file, capsys):
        assert main(["solve", k6_file, "--k", "2", "--max-pattern-len", "5"]) == EXIT_USAGE
        assert "error:" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.txt"), "--k", "2"]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


def test_malformed_graph(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("3 2\n1 2\n", encoding="utf-8")
    assert main(["verify", str(path), str(path)]) == EXIT_USAGE
    assert "declares 2 edges, found 1" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == EXIT_USAGE


class TestVerify:
    def test_valid(self, k6_file, tmp_path, capsys):
        factor = tmp_path / "f.txt"
        factor.write_text("1 2 3\n4 5 6\n", encoding="utf-8")
        assert main(["verify", k6_file, str(factor)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "components: 2"

    def test_invalid(self, k6_file, tmp_path, capsys):
        factor = tmp_path / "f.txt"
        factor.write_text("1 2 3\n", encoding="utf-8")
        assert main(["verify", k6_file, str(factor)]) == EXIT_USAGE
        assert capsys.readouterr().err.strip() == "invalid: vertex 4 uncovered"


class TestOracle:
    def test_with_second_enumerator(self, k6_file, tmp_path):
        out = tmp_path / "oracle.json"
        assert main(["oracle", k6_file, "--second", "--out", str(out)]) == EXIT_OK
        report = OracleReport.model_validate_json(out.read_text(encoding="utf-8"))
        assert report.achievable == [1, 2]
        assert report.second_enumerator == [1, 2]
        assert set(report.witnesses) == {"1", "2"}

    def test_cap(self, write_graph, capsys):
        path = write_graph(complete_instance(15), "k15.txt")
        assert main(["oracle", path]) == EXIT_USAGE
        assert "oracle capped at n <= 14" in capsys.readouterr().err

    def test_cap_from_environment(self, k6_file, monkeypatch, capsys):
        monkeypatch.setenv("TWOFACTOR_ORACLE_CAP", "20")
        assert main(["oracle", k6_file]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["achievable"] == [1, 2]

    def test_malformed_cap_is_an_input_error(self, k6_file, monkeypatch, capsys):
        monkeypatch.setenv("TWOFACTOR_ORACLE_CAP", "fourteen")
        assert main(["oracle", k6_file]) == EXIT_USAGE
        assert "TWOFACTOR_ORACLE_CAP must be an integer" in capsys.readouterr().err

    def test_malformed_cap_after_search_failure(self, extremal_file, monkeypatch, capsys):
        monkeypatch.setenv("TWOFACTOR_ORACLE_CAP", "fourteen")
        assert main(["solve", extremal_file, "--k", "3"]) == EXIT_USAGE
        assert "must be an integer" in capsys.readouterr().err


def test_broken_invariant_is_reported_as_internal(k6_file, monkeypatch, capsys):
    def broken(instance, config):
        raise PipelineInvariantError("round 1 (up) gave 1 cycles, expected 3")

    monkeypatch.setattr(cli, "solve", broken)
    assert main(["solve", k6_file, "--k", "2"]) == EXIT_SEARCH_FAILURE
    err = capsys.readouterr().err
    assert err.startswith("internal error")
    assert "expected 3" in err


class TestGen:
    def test_extremal(self, tmp_path):
        out = tmp_path / "ext.txt"
        assert main(["gen", "extremal", "--n", "10", "--k", "3", "--out", str(out)]) == EXIT_OK
        doc = parse_graph_document(out.read_text(encoding="utf-8"))
        assert len(doc.graph.edges) == 24
        assert doc.hamilton == (0, 8, 1, 9, 2, 3, 4, 5, 6, 7)

    def test_random_to_stdout(self, capsys):
        assert main(["gen", "random", "--n", "12", "--delta", "0.4", "--seed", "2"]) == EXIT_OK
        doc = parse_graph_document(capsys.readouterr().out)
        assert doc.graph.n == 12
        assert doc.graph.min_degree >= 5

    def test_planted_certificate(self, tmp_path):
        out, cert = tmp_path / "p.txt", tmp_path / "cert.json"
        args = ["gen", "planted", "--t", "2", "--seed", "1", "--out", str(out), "--certificate", str(cert)]
        assert main(args) == EXIT_OK
        data = json.loads(cert.read_text(encoding="utf-8"))
        assert data["cluster_size"] == 2
        assert data["pattern_length"] == 4

    def test_infeasible_planted(self, capsys):
        assert main(["gen", "planted", "--t", "2", "--n", "10"]) == EXIT_USAGE
        assert "need n >= 18" in capsys.readouterr().err


class TestAuxAndDot:
    def test_aux_summary_and_dot_file(self, write_graph, c6_chorded, tmp_path, capsys):
        path = write_graph(c6_chorded)
        dot = tmp_path / "aux.dot"
        assert main(["aux", path, "--dot", str(dot)]) == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary["red_edges"] == 2
        assert summary["double_edges"] == 1
        assert dot.read_text(encoding="utf-8").startswith("graph A {")

    def test_aux_dot_to_stdout(self, k6_file, capsys):
        assert main(["aux", k6_file]) == EXIT_OK
        assert capsys.readouterr().out.startswith("graph A {")

    def test_export_dot_with_factor(self, k6_file, tmp_path):
        factor = tmp_path / "f.txt"
        factor.write_text("1: 1 2 3\n2: 4 5 6\n", encoding="utf-8")
        out = tmp_path / "g.dot"
        assert main(["export-dot", k6_file, "--factor", str(factor), "--out", str(out)]) == EXIT_OK
        assert out.read_text(encoding="utf-8").count("penwidth=3") == 6


def test_params(capsys):
    assert main(["params", "--epsilon", "0.5", "--k", "2", "--n", "100"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["gamma"] == 0.25
    assert data["desk_scale"] is True
    assert data["search"]["L"] == data["L"]
    assert data["search"]["gamma"] == 0.25


def test_sweep_csv(tmp_path, capsys):
    csv_path = tmp_path / "runs.csv"
    args = ["sweep", "--n", "12", "--delta", "0.5", "--k", "1", "--seeds", "0,1", "--csv", str(csv_path)]
    assert main(args) == EXIT_OK
    assert len(csv_path.read_text(encoding="utf-8").splitlines()) == 3
    assert "success_rate" in capsys.readouterr().out
