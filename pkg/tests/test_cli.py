import json

import pytest
from click.testing import CliRunner

from src.cli import cli
from src.graph_core import Dag
from src.utils import formats


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def dag_files(tmp_path):
    def write(name, dag):
        path = tmp_path / f"{name}.txt"
        path.write_text(formats.serialize_dag(dag))
        return str(path)

    return write


def invoke(runner, *args):
    return runner.invoke(cli, list(args), obj={})


class TestVerifyExample:
    def test_passing_example(self, runner):
        result = invoke(runner, "verify-example", "E1")
        assert result.exit_code == 0, result.output
        assert result.output.startswith("chain_collider_tie: pass")
        assert "ok   param_count: the chain needs 8 parameters" in result.output

    def test_unknown_id_exits_with_input_error(self, runner):
        result = invoke(runner, "verify-example", "E9")
        assert result.exit_code == 2
        assert "unknown example 'E9'" in result.output

    def test_json_report(self, runner):
        result = invoke(runner, "--format", "json", "verify-example", "two_independent")
        payload = json.loads(result.output)
        assert payload[0]["id"] == "two_independent"
        assert payload[0]["passed"] is True


class TestClassify:
    def test_catalog_dag_by_name(self, runner):
        result = invoke(runner, "classify", "G0", "--example", "E1")
        assert result.exit_code == 0, result.output
        assert "dag: [1->2,2->3]" in result.output
        assert "param_count: 8" in result.output

    def test_json_output(self, runner):
        result = invoke(
            runner, "--format", "json", "classify", "Gstar", "--example", "collider_marginal", "--razor", "CFC"
        )
        payload = json.loads(result.output)
        assert payload["memberships"] == {"CFC": {"member": True}}
        assert payload["param_count"] == 6

    def test_model_source_is_required(self, runner):
        result = invoke(runner, "classify", "G0")
        assert result.exit_code == 2
        assert "exactly one of --model or --example" in result.output

    def test_dag_file_against_model_file(self, runner, dag_files, tmp_path):
        model = tmp_path / "marginal.json"
        model.write_text(json.dumps({"m": 3, "cis": [{"i": 1, "j": 3, "s": []}]}))
        path = dag_files("chain", Dag(3, frozenset({(1, 2), (2, 3)})))
        result = invoke(runner, "classify", path, "--model", str(model))
        assert result.exit_code == 0, result.output
        assert "CMC      no" in result.output

    def test_bad_dag_file(self, runner, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("m=2\n1 => 2\n")
        result = invoke(runner, "classify", str(path), "--example", "two_independent")
        assert result.exit_code == 2
        assert "line 2" in result.output


def test_enumerate_class(runner):
    result = invoke(runner, "enumerate-class", "cfc", "--example", "collider_marginal")
    assert result.exit_code == 0, result.output
    assert "CFC over collider_marginal: 1 DAG(s)\n[1->2,3->2]\n" in result.output


def test_imset_with_ranges(runner, dag_files):
    path = dag_files("collider", Dag(3, frozenset({(1, 2), (3, 2)})))
    result = invoke(runner, "imset", path, "--ranges", "2,2,2")
    assert result.exit_code == 0, result.output
    assert "[1, 2, 3]  witness=2" in result.output
    assert "param_count: 6 (via parameterizing sets: 6)" in result.output


class TestChickering:
    def test_search_then_check(self, runner, dag_files, tmp_path):
        h = dag_files("h", Dag.complete([1, 2, 3]))
        g = dag_files("g", Dag(3, frozenset({(1, 2), (2, 3)})))
        result = invoke(runner, "chickering", h, g)
        assert result.exit_code == 0, result.output
        assert "delete 1->3" in result.output
        transcript = tmp_path / "steps.txt"
        transcript.write_text(result.output)
        checked = invoke(runner, "chickering", h, g, "--check", str(transcript))
        assert checked.exit_code == 0
        assert checked.output.startswith("transcript valid")

    def test_no_sequence(self, runner, dag_files):
        h = dag_files("h", Dag.empty(3))
        g = dag_files("g", Dag(3, frozenset({(1, 2), (2, 3)})))
        result = invoke(runner, "chickering", h, g)
        assert result.exit_code == 0
        assert "no sequence" in result.output


class TestSampleAndScore:
    def test_sample_to_stdout(self, runner):
        result = invoke(runner, "sample", "--example", "E1", "--n", "10", "--seed", "1")
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[:2] == ["ranges: [2, 3, 2]", "n: 10"]
        assert len(lines) == 12

    def test_sample_needs_theta_tables(self, runner):
        result = invoke(runner, "sample", "--example", "collider_marginal", "--n", "10")
        assert result.exit_code == 2

    def test_score_both_criteria(self, runner):
        result = invoke(runner, "score", "G0", "G1", "--example", "E1", "--n", "5000", "--seed", "2")
        assert result.exit_code == 0, result.output
        assert "NEC [1->2,2->3]: -2.000000" in result.output
        assert "NEC prefers [1->2,2->3]" in result.output
        assert "BIC prefers [1->2,2->3]" in result.output
        assert "criteria agree" in result.output

    def test_score_from_dataset_file(self, runner, tmp_path):
        data = tmp_path / "data.txt"
        sampled = invoke(runner, "sample", "--example", "E1", "--n", "200", "-o", str(data))
        assert sampled.exit_code == 0
        result = invoke(
            runner, "--format", "json", "score", "G0", "--example", "E1", "--data", str(data), "--criterion", "bic"
        )
        payload = json.loads(result.output)
        (report,) = payload["reports"]
        assert report["criterion"] == "BIC"
        assert report["n"] == 200
        assert len(report["per_vertex"]) == 3

    def test_bic_without_data(self, runner):
        result = invoke(runner, "score", "G0", "--example", "E1", "--criterion", "bic")
        assert result.exit_code == 2


class TestHierarchy:
    @pytest.fixture
    def model_file(self, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text(json.dumps({"m": 2, "cis": [{"i": 1, "j": 2}], "ranges": [2, 2]}))
        return str(path)

    def test_matrix_for_a_model_file(self, runner, model_file):
        result = invoke(runner, "hierarchy", model_file)
        assert result.exit_code == 0, result.output
        assert result.output.split()[:2] == ["CFC", "uPm"]

    def test_single_model_disagrees_with_expected_matrix(self, runner, model_file):
        result = invoke(runner, "hierarchy", model_file, "--against-expected")
        assert result.exit_code == 1
        assert "cell(s) differ from the expected matrix" in result.output
