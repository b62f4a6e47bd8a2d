import pytest
from conftest import PROPERTY_SETTINGS, dag_of, dags, range_specs
from hypothesis import given
from hypothesis import strategies as st

from src import imset
from src.errors import WitnessUniquenessError
from src.graph_core import dag_space, markov_equivalent
from src.imset import (
    characteristic_imset,
    characteristic_imset_by_dsep,
    param_count_via_imset,
    parameterizing_sets,
    paramsets_subset,
)
from src.multinomial import RangeSpec, param_count
from src.utils.combinatorics import powerset

G0 = dag_of(5, (1, 5), (2, 5), (3, 5), (4, 5), (1, 4))
G1 = dag_of(5, (1, 4), (2, 4), (3, 4), (5, 4), (2, 5), (3, 5))


class TestParameterizingSets:
    def test_collider(self):
        family = parameterizing_sets(dag_of(3, (1, 2), (3, 2)))
        assert family.as_vertex_sets() == [(1,), (2,), (3,), (1, 2), (2, 3), (1, 2, 3)]
        assert family.witness_of((1, 2, 3)) == 2
        assert (1, 3) not in family

    def test_partition_covers_family(self):
        for g in dag_space(4):
            family = parameterizing_sets(g)
            union = frozenset().union(*(family.cell(v) for v in g.vertices))
            assert union == family.sets
            assert sum(len(family.cell(v)) for v in g.vertices) == len(family.sets)

    def test_witness_of_unknown_set(self):
        with pytest.raises(KeyError):
            parameterizing_sets(dag_of(2)).witness_of((1, 2))

    def test_second_witness_is_an_error(self, monkeypatch):
        monkeypatch.setattr(imset, "_witnesses", lambda g, s: sorted(s))
        with pytest.raises(WitnessUniquenessError, match=r"\[1, 2\] has witnesses \[1, 2\]"):
            parameterizing_sets(dag_of(2, (1, 2)))


class TestCharacteristicImset:
    def test_parent_and_dsep_characterisations_agree(self):
        for g in dag_space(4):
            for s in powerset(g.vertices):
                if s:
                    assert characteristic_imset(g, s) == characteristic_imset_by_dsep(g, s), (g.label, s)

    def test_rejects_empty_set(self):
        with pytest.raises(ValueError):
            characteristic_imset(dag_of(2), ())

    def test_markov_equivalent_dags_share_imsets(self):
        space = dag_space(3)
        for g in space:
            for h in space:
                if markov_equivalent(g, h):
                    assert parameterizing_sets(g).sets == parameterizing_sets(h).sets


class TestParamCountIdentity:
    @pytest.mark.parametrize(
        "g, ranges, expected",
        [
            (G0, RangeSpec.binary(5), 21),
            (G1, RangeSpec.binary(5), 23),
            (G0, RangeSpec((2, 2, 2, 2, 3)), 37),
            (G1, RangeSpec((2, 2, 2, 2, 3)), 35),
            (dag_of(4, (1, 2), (2, 4), (3, 4), (1, 3)), RangeSpec.binary(4), 9),
            (dag_of(4, (1, 2), (1, 3), (4, 2), (4, 3), (2, 3)), RangeSpec.binary(4), 14),
        ],
    )
    def test_known_counts(self, g, ranges, expected):
        assert param_count(g, ranges) == expected
        assert param_count_via_imset(g, ranges) == expected

    @PROPERTY_SETTINGS
    @given(data=st.data(), g=dags(max_m=5))
    def test_identity_on_random_ranges(self, data, g):
        ranges = data.draw(range_specs(g.m, max_range=4))
        assert param_count_via_imset(g, ranges) == param_count(g, ranges)

    def test_identity_exhaustive_four(self):
        ranges = RangeSpec((2, 3, 2, 4))
        for g in dag_space(4):
            assert param_count_via_imset(g, ranges) == param_count(g, ranges)


class TestParamsetSubset:
    def test_subgraph_has_fewer_sets(self):
        dense = dag_of(3, (1, 2), (2, 3), (1, 3))
        sparse = dag_of(3, (1, 2), (2, 3))
        assert paramsets_subset(sparse, dense)
        assert not paramsets_subset(dense, sparse)
