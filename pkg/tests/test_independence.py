import pytest
from conftest import PROPERTY_SETTINGS, dag_of, dags
from hypothesis import given

from src.errors import DimensionMismatchError, NotMarkovianError
from src.graph_core import independence_model_of_dag
from src.independence import (
    AxiomSet,
    CiStatement,
    IndependenceModel,
    all_statements,
    closure,
    closure_triplets,
    model_subset,
    unfaithful_set,
)


class TestCiStatement:
    def test_symmetry_is_canonical(self):
        assert CiStatement.of(3, 1, [2]) == CiStatement.of(1, 3, [2])

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            CiStatement.of(1, 2, [1])
        with pytest.raises(ValueError):
            CiStatement.of(2, 2)

    def test_str(self):
        assert str(CiStatement.of(1, 3, [2])) == "<X1, X3 | {X2}>"
        assert str(CiStatement.of(1, 3)) == "<X1, X3>"

    @pytest.mark.parametrize("m, expected", [(2, 1), (3, 6), (4, 24), (5, 80)])
    def test_statement_count(self, m, expected):
        statements = list(all_statements(m))
        assert len(statements) == expected
        assert len(set(statements)) == expected


class TestIndependenceModel:
    def test_set_operations(self):
        a = IndependenceModel.of(3, [(1, 3)])
        b = IndependenceModel.of(3, [(1, 3), (1, 3, [2])])
        assert model_subset(a, b)
        assert not model_subset(b, a)
        assert b.difference(a).cis == {CiStatement.of(1, 3, [2])}
        assert a.union(b) == b

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            IndependenceModel.empty(3).issubset(IndependenceModel.empty(4))

    def test_out_of_range_statement(self):
        with pytest.raises(ValueError):
            IndependenceModel.of(2, [(1, 3)])

    def test_involving(self):
        model = IndependenceModel.of(3, [(1, 3, [2]), (1, 3), (1, 2)])
        assert [str(ci) for ci in model.involving(3, 1)] == ["<X1, X3>", "<X1, X3 | {X2}>"]


class TestUnfaithfulSet:
    def test_collider_under_marginal_model(self):
        p_model = IndependenceModel.of(3, [(1, 3)])
        assert len(unfaithful_set(dag_of(3, (1, 2), (3, 2)), p_model)) == 0
        complete = dag_of(3, (1, 2), (2, 3), (1, 3))
        assert unfaithful_set(complete, p_model) == p_model

    def test_non_markovian_raises_with_statement(self):
        p_model = IndependenceModel.of(3, [(1, 3)])
        with pytest.raises(NotMarkovianError) as info:
            unfaithful_set(dag_of(3, (1, 2), (2, 3)), p_model)
        assert info.value.violating == CiStatement.of(1, 3, [2])


class TestClosure:
    def test_contraction_then_decomposition(self):
        # <1,2> and <1,3|2> give 1 _||_ {2,3}, hence <1,3> and <1,2|3>
        derived = closure(IndependenceModel.of(3, [(1, 2), (1, 3, [2])]))
        assert CiStatement.of(1, 3) in derived
        assert CiStatement.of(1, 2, [3]) in derived

    def test_intersection_needs_graphoid(self):
        seeds = IndependenceModel.of(3, [(1, 2, [3]), (1, 3, [2])])
        assert CiStatement.of(1, 2) not in closure(seeds, AxiomSet.semigraphoid())
        assert CiStatement.of(1, 2) in closure(seeds, AxiomSet.graphoid())

    def test_composition(self):
        seeds = IndependenceModel.of(3, [(1, 2), (1, 3)])
        assert CiStatement.of(1, 2, [3]) not in closure(seeds, AxiomSet.graphoid())
        assert CiStatement.of(1, 2, [3]) in closure(seeds, AxiomSet.compositional_graphoid())

    def test_raw_triplets(self):
        seeds = IndependenceModel.of(3, [(1, 2), (1, 3, [2])])
        triplets = closure_triplets(seeds)
        assert isinstance(triplets, frozenset)
        assert (frozenset({1}), frozenset({2, 3}), frozenset()) in triplets
        singletons = {(x, y, z) for x, y, z in triplets if len(x) == len(y) == 1}
        assert len(closure(seeds)) * 2 == len(singletons)

    def test_empty_model_stays_empty(self):
        empty = IndependenceModel.of(3, [])
        assert closure_triplets(empty) == frozenset()
        assert len(closure(empty, AxiomSet.compositional_graphoid())) == 0

    def test_five_star_derivation(self):
        g0 = dag_of(5, (1, 5), (2, 5), (3, 5), (4, 5), (1, 4))
        seeds = independence_model_of_dag(g0).union(IndependenceModel.of(5, [(1, 5, [2, 3])]))
        derived = closure(seeds, AxiomSet.graphoid())
        wanted = [(1, 5), (1, 2, [5]), (1, 3, [5]), (1, 5, [2]), (1, 5, [3]), (1, 2, [3, 5]), (1, 3, [2, 5])]
        for stmt in IndependenceModel.of(5, wanted):
            assert stmt in derived

    @PROPERTY_SETTINGS
    @given(g=dags(max_m=4))
    def test_dag_models_are_closed_compositional_graphoids(self, g):
        model = independence_model_of_dag(g)
        assert closure(model, AxiomSet.compositional_graphoid()) == model
