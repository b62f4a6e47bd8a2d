from math import inf, log

import numpy as np
import pytest
from conftest import dag_of

from src import catalog
from src.catalog import catalog_model
from src.errors import DimensionMismatchError, InvalidModelError
from src.graph_core import Dag
from src.multinomial import MultinomialModel, RangeSpec, joint_from_model
from src.scoring import BIC, NEC, Dataset, bic, consistency_probe, nec, nec_report, sample


@pytest.fixture(scope="module")
def five_star():
    return catalog.load("five_star_equalities")


@pytest.fixture(scope="module")
def chain_tie():
    return catalog.load("chain_collider_tie")


class TestNec:
    def test_five_star_edge_counts(self, five_star):
        assert nec(five_star.dag("G0"), five_star.p_model) == -5
        assert nec(five_star.dag("G1"), five_star.p_model) == -6

    def test_non_markovian_is_minus_infinity(self, five_star):
        assert nec(Dag.empty(5), five_star.p_model) == -inf

    def test_report(self, chain_tie):
        report = nec_report(chain_tie.dag("G0"), chain_tie.p_model)
        assert report.criterion == NEC
        assert report.value == -2
        assert report.per_vertex == ()

    def test_dimension_mismatch(self, chain_tie):
        with pytest.raises(DimensionMismatchError):
            nec(Dag.empty(4), chain_tie.p_model)


class TestDataset:
    def test_values_outside_ranges(self):
        with pytest.raises(InvalidModelError):
            Dataset.from_rows(RangeSpec.binary(2), [[0, 2]])

    def test_needs_a_row(self):
        with pytest.raises(InvalidModelError):
            Dataset.from_rows(RangeSpec.binary(2), np.zeros((0, 2)))

    def test_state_counts_with_parents(self):
        data = Dataset.from_rows(RangeSpec((2, 3)), [[0, 0], [0, 2], [0, 2], [1, 1]])
        assert data.state_counts(2, [1]).tolist() == [[1, 0, 2], [0, 1, 0]]
        assert data.state_counts(1, []).tolist() == [[3, 1]]


class TestBic:
    def test_single_binary_variable(self):
        data = Dataset.from_rows(RangeSpec.binary(1), [[0], [1]])
        report = bic(Dag.empty(1), data)
        assert report.criterion == BIC
        assert report.value == pytest.approx(-3.4657, abs=1e-4)
        assert report.n == 2

    def test_decomposes_over_vertices(self, chain_tie):
        data = sample(chain_tie.joint, 500, seed=3)
        report = bic(chain_tie.dag("G1"), data)
        assert report.value == pytest.approx(sum(vs.score for vs in report.per_vertex))
        assert [vs.parameters for vs in report.per_vertex] == [1, 8, 1]

    def test_penalty_multiplier(self, chain_tie):
        data = sample(chain_tie.joint, 500, seed=3)
        single = bic(chain_tie.dag("G0"), data, c=1.0)
        double = bic(chain_tie.dag("G0"), data, c=2.0)
        for a, b in zip(single.per_vertex, double.per_vertex):
            assert b.penalty == pytest.approx(2 * a.penalty)
            assert b.log_likelihood == a.log_likelihood
        assert single.per_vertex[0].penalty == pytest.approx(log(500))

    def test_non_positive_multiplier(self):
        data = Dataset.from_rows(RangeSpec.binary(1), [[0]])
        with pytest.raises(ValueError):
            bic(Dag.empty(1), data, c=0)

    def test_unobserved_parent_configurations(self):
        data = Dataset.from_rows(RangeSpec((2, 2)), [[0, 0], [0, 1]])
        report = bic(dag_of(2, (1, 2)), data)
        assert report.per_vertex[1].unobserved_parent_configs == 1

    def test_markov_equivalent_dags_score_alike(self, chain_tie):
        data = sample(chain_tie.joint, 2000, seed=9)
        forward = bic(dag_of(3, (1, 2), (2, 3)), data)
        backward = bic(dag_of(3, (3, 2), (2, 1)), data)
        assert forward.value == pytest.approx(backward.value)

    def test_dimension_mismatch(self):
        data = Dataset.from_rows(RangeSpec.binary(2), [[0, 1]])
        with pytest.raises(DimensionMismatchError):
            bic(Dag.empty(3), data)


class TestSample:
    def test_same_seed_same_rows(self, chain_tie):
        a = sample(chain_tie.joint, 200, seed=42)
        b = sample(chain_tie.joint, 200, seed=42)
        c = sample(chain_tie.joint, 200, seed=43)
        assert a.frame.equals(b.frame)
        assert not a.frame.equals(c.frame)
        assert a.provenance == ("joint", 42)

    def test_point_mass(self):
        model = MultinomialModel.from_rows(
            dag_of(2, (1, 2)), RangeSpec.binary(2), {1: [["1", "0"]], 2: [["0", "1"], ["1/2", "1/2"]]}
        )
        data = sample(joint_from_model(model), 50, seed=1)
        assert (data.frame["X1"] == 0).all()
        assert (data.frame["X2"] == 1).all()

    def test_rejects_empty_sample(self, chain_tie):
        with pytest.raises(ValueError):
            sample(chain_tie.joint, 0, seed=1)

    def test_empirical_conditional(self, chain_tie):
        frame = sample(chain_tie.joint, 100_000, seed=5).frame
        for x1 in (0, 1):
            rows = frame[frame["X1"] == x1]
            assert (rows["X3"] == 0).mean() == pytest.approx(0.3, abs=0.01)


class TestConsistencyProbe:
    def test_clauses_on_the_chain_collider_tie(self, chain_tie):
        g0, g1, empty = chain_tie.dag("G0"), chain_tie.dag("G1"), Dag.empty(3)
        report = consistency_probe([g0, g1, empty], catalog_model("E1"), [5000], seeds=range(5), model_id="E1")
        assert report.nec_scores[empty] == -inf
        clauses = {(c.clause, c.better, c.worse) for c in report.checks}
        assert clauses == {("a", g0, empty), ("a", g1, empty), ("b", g0, g1)}
        for check in report.checks:
            assert check.nec_holds == (check.clause == "a")
        assert report.bic_consistent(threshold=0.8)
        assert report.bic_best(5000) == g0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            consistency_probe([Dag.empty(4)], catalog_model("E1"), [10], seeds=[0])

    @pytest.mark.slow
    def test_five_star_dilemma(self, five_star):
        g0, g1 = five_star.dag("G0"), five_star.dag("G1")
        report = consistency_probe(
            [g0, g1], five_star.model, [100_000], seeds=range(20), p_model=five_star.p_model
        )
        assert report.nec_best() == g0
        assert report.bic_best(100_000) == g1
        assert report.dilemma(100_000)
        (check,) = report.checks
        assert (check.clause, check.better, check.worse) == ("b", g1, g0)
        assert check.bic_rate >= 0.95
        assert not check.nec_holds
