import json

import pytest

from src import catalog
from src.engine import COUNTEREXAMPLE, SUBSET, ModelCase, hierarchy_matrix
from src.errors import FormatError, UnknownExampleError
from src.harness import catalog_cases, catalog_hierarchy, cited_witnesses, diff_against_expected, verify_example
from src.independence import CiStatement
from src.razors import RazorId
from src.utils.formats import load_expected_matrix

FAST = [
    "hexagon_cancellation",
    "collider_marginal",
    "two_independent",
    "chain_collider_tie",
    "four_cycle_tie",
    "diamond_cancellation",
]
SLOW = ["count_pair", "five_star_equalities"]


class TestLookup:
    @pytest.mark.parametrize(
        "name, expected",
        [
            ("E1", "chain_collider_tie"),
            ("e2", "four_cycle_tie"),
            ("EX_uFrOriF", "diamond_cancellation"),
            ("FIG2", "count_pair"),
            (" five_star_equalities ", "five_star_equalities"),
        ],
    )
    def test_resolve_ids_and_aliases(self, name, expected):
        assert catalog.resolve(name) == expected

    def test_unknown_id_lists_valid_ids(self):
        with pytest.raises(UnknownExampleError) as info:
            catalog.load("E9")
        assert "four_cycle_tie" in str(info.value)
        assert info.value.example_id == "E9"

    def test_order(self):
        assert catalog.ids() == [e.id for e in catalog.all_entries()]
        assert len(catalog.ids()) == 8

    def test_structural_entry_has_no_model(self):
        entry = catalog.load("collider_marginal")
        assert entry.model is None and entry.joint is None
        assert CiStatement.of(1, 3) in entry.p_model
        with pytest.raises(UnknownExampleError, match="declares CIs only"):
            catalog.catalog_model("collider_marginal")

    def test_unknown_dag_name(self):
        with pytest.raises(FormatError, match="no DAG named"):
            catalog.load("E1").dag("G7")

    def test_name_of(self):
        entry = catalog.load("E3")
        assert entry.name_of(entry.dag("Gprime")) == "Gprime"
        assert entry.name_of(entry.dag("Gstar").reverse_edge(1, 2)) is None

    def test_every_fact_kind_is_known(self):
        kinds = {fact["kind"] for entry in catalog.all_entries() for fact in entry.facts}
        assert kinds <= {
            "model_equals",
            "model_size",
            "conditional",
            "param_count",
            "member",
            "class_equals",
            "class_empty",
            "unfaithful",
            "nec",
            "closure_contains",
        }


class TestVerifyExample:
    @pytest.mark.parametrize("example_id", FAST)
    def test_facts_hold(self, example_id):
        report = verify_example(example_id)
        assert report.results
        assert report.passed, [str(f) for f in report.failures()]

    @pytest.mark.slow
    @pytest.mark.parametrize("example_id", SLOW)
    def test_facts_hold_on_five_vertices(self, example_id):
        report = verify_example(example_id)
        assert report.passed, [str(f) for f in report.failures()]

    def test_alias_resolves_to_canonical_report(self):
        assert verify_example("E1").example_id == "chain_collider_tie"

    def test_failed_fact_is_reported(self, monkeypatch):
        payload = json.loads((catalog.CATALOG_DIR / "two_independent.json").read_text())
        payload["expected"] = [{"kind": "member", "dag": "G", "razor": "SGS", "value": True, "claim": "wrong"}]
        entry = catalog._entry_from_dict(payload)
        monkeypatch.setattr(catalog, "load", lambda name: entry)
        report = verify_example("two_independent")
        assert not report.passed
        (failure,) = report.failures()
        assert (failure.expected, failure.actual) == ("True", "False")

    def test_unknown_fact_kind(self, monkeypatch):
        payload = json.loads((catalog.CATALOG_DIR / "two_independent.json").read_text())
        payload["expected"] = [{"kind": "vibes"}]
        entry = catalog._entry_from_dict(payload)
        monkeypatch.setattr(catalog, "load", lambda name: entry)
        with pytest.raises(FormatError, match="unknown kind"):
            verify_example("two_independent")


class TestExpectedMatrix:
    @pytest.fixture(scope="class")
    def small_matrix(self):
        names = ["collider_marginal", "two_independent", "chain_collider_tie", "diamond_cancellation"]
        return catalog_hierarchy(names)

    def test_small_catalog_agrees_on_what_it_can_show(self):
        matrix = catalog_hierarchy(["collider_marginal", "two_independent", "chain_collider_tie"])
        for mismatch in diff_against_expected(matrix):
            # a partial catalog can only miss counterexamples
            assert mismatch.expected == COUNTEREXAMPLE
            assert mismatch.actual.kind != COUNTEREXAMPLE
        assert matrix.cell("SGS", "Pm").kind == COUNTEREXAMPLE
        assert matrix.cell("Pm", "SGS").kind == SUBSET

    @pytest.mark.parametrize(
        "row, col, example, dag",
        [
            ("adjF", "ParamM", "chain_collider_tie", "G1"),
            ("Pm", "ParamM", "diamond_cancellation", "Gprime"),
            ("Pm", "Fr", "diamond_cancellation", "Gprime"),
            ("adjF", "oriF", "diamond_cancellation", "Gstar"),
            ("SGS", "Pm", "collider_marginal", "Gdouble"),
            ("CMC", "SGS", "collider_marginal", "Gprime"),
            ("triF", "SGS", "two_independent", "G"),
        ],
    )
    def test_cited_cells_name_the_catalog_witness(self, small_matrix, row, col, example, dag):
        cell = small_matrix.cell(row, col)
        assert cell.kind == COUNTEREXAMPLE
        assert (cell.model_id, cell.witness) == (example, catalog.load(example).dag(dag))

    def test_small_catalog_has_no_witness_mismatch(self, small_matrix):
        assert all(m.actual.kind != COUNTEREXAMPLE for m in diff_against_expected(small_matrix))

    def test_cell_credited_to_another_model_is_a_mismatch(self):
        entry = catalog.load("collider_marginal")
        stand_in = ModelCase("stand_in", entry.p_model, named_dags=(entry.dag("Gdouble"),))
        matrix = hierarchy_matrix([stand_in] + catalog_cases(["collider_marginal"]))
        mismatches = {(m.row, m.col): m for m in diff_against_expected(matrix)}
        wrong = mismatches[(RazorId.SGS, RazorId.PM)]
        assert wrong.actual.model_id == "stand_in"
        assert wrong.expected == f"counterexample: {entry.dag('Gdouble').label}, collider_marginal"

    def test_every_citation_is_a_counterexample_cell(self):
        subset_of = load_expected_matrix(str(catalog.EXPECTED_MATRIX))
        cited = cited_witnesses()
        assert len(cited) == 19
        for (row, col), citation in cited.items():
            assert col.value not in subset_of[row.value]
            assert citation.dag in catalog.load(citation.model_id).named_dags()

    @pytest.mark.slow
    def test_full_catalog_reproduces_the_expected_matrix(self):
        matrix = catalog_hierarchy()
        assert diff_against_expected(matrix) == []
        for row in RazorId:
            for col in RazorId:
                cell = matrix.cell(row, col)
                if cell.kind == COUNTEREXAMPLE:
                    assert cell.witness is not None and cell.model_id in catalog.ids()
        for (row, col), citation in cited_witnesses().items():
            cell = matrix.cell(row, col)
            assert (cell.model_id, cell.witness) == (citation.model_id, citation.dag)
