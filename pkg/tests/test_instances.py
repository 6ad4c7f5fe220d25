import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from maxkcover import (
    CoverInstance,
    InputError,
    PdsGraph,
    coverage_value,
    degree_profile,
    pds_to_cover,
    prune_candidates,
    prune_candidates_with_map,
)
from maxkcover.oracles import brute_force

from helpers import cover_oracle, union_size

small_instances = st.integers(1, 8).flatmap(
    lambda u: st.lists(st.sets(st.integers(0, u - 1), max_size=u), min_size=0, max_size=8).map(
        lambda sets: CoverInstance.from_sets([tuple(sorted(s)) for s in sets], u)
    )
)


def inst_from(sets, u):
    return CoverInstance.from_sets([tuple(sorted(s)) for s in sets], u)


def test_from_sets_rejects_bad_ids():
    with pytest.raises(InputError):
        inst_from([{0, 7}], 3)
    with pytest.raises(InputError):
        CoverInstance.from_sets([(1, 0)], 2)  # not sorted


@given(small_instances)
@settings(max_examples=120, deadline=None)
def test_transpose_consistency(inst):
    inst.validate()
    rebuilt = CoverInstance.from_sets(inst.sets, inst.u)
    assert rebuilt.element_owners == inst.element_owners


def test_degree_profile_examples():
    assert degree_profile(inst_from([], 0)) == (0, 0, 0)
    complete = inst_from([{0, 1, 2}] * 3, 3)
    assert degree_profile(complete) == (3, 3, 9)
    star = PdsGraph.from_edges(5, [(0, i) for i in range(1, 5)])
    lifted = pds_to_cover(star)
    ds, df, _ = degree_profile(lifted)
    assert ds == df == 5
    assert (lifted.max_set_size, lifted.max_frequency) == (5, 5)


def test_coverage_value_examples():
    inst = inst_from([{0, 1}, {1, 2}, {2}], 3)
    assert coverage_value(inst, []) == 0
    assert coverage_value(inst, [0, 1]) == 3
    assert coverage_value(inst, [0, 1, 1, 0]) == coverage_value(inst, [0, 1])
    with pytest.raises(InputError):
        coverage_value(inst, [3])


def test_pds_to_cover_examples():
    isolated = PdsGraph.from_edges(1, [])
    lift = pds_to_cover(isolated)
    assert lift.sets == ((0,),)
    assert lift.max_set_size == 1

    triangle = PdsGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    lift = pds_to_cover(triangle)
    assert all(s == (0, 1, 2) for s in lift.sets)
    assert brute_force(lift, 1).value == 3

    path = PdsGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    lift = pds_to_cover(path)
    assert lift.sets[1] == (0, 1, 2)
    assert lift.n == lift.u == 4
    assert lift.max_set_size == lift.max_frequency == path.max_degree + 1
    # expected value derived by exhaustive pair search
    expected = max(union_size(lift.sets, pair) for pair in [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert expected == 4
    assert brute_force(lift, 2).value == 4


@given(st.integers(0, 400), st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_pds_lift_objective_matches_direct(seed, k):
    from maxkcover.randgen import random_pds_graph

    g = random_pds_graph(seed, n_max=10)
    lift = pds_to_cover(g)
    closed = [set(nbrs) | {v} for v, nbrs in enumerate(g.adjacency)]
    from itertools import combinations

    kk = min(k, g.n)
    direct = max(len(set().union(*(closed[v] for v in sub))) for sub in combinations(range(g.n), kk))
    assert brute_force(lift, k).value == direct


def test_prune_identity_when_not_binding():
    inst = inst_from([{0, 1}, {1, 2}], 3)
    assert prune_candidates(inst, 2) == inst


def test_prune_disjoint_singletons():
    inst = inst_from([{i} for i in range(10)], 10)
    pruned, kept = prune_candidates_with_map(inst, 1)
    assert pruned.n == 1 and kept == (0,)
    assert brute_force(pruned, 1).value == brute_force(inst, 1).value == 1


def test_prune_preserves_universe():
    inst = inst_from([{0, 1}, {0, 1}, {0, 1}, {2}], 3)
    pruned = prune_candidates(inst, 1)
    assert pruned.u == inst.u


@given(st.integers(0, 500), st.integers(1, 4))
@settings(max_examples=120, deadline=None)
def test_prune_safety_random(seed, k):
    from maxkcover.randgen import random_cover_instance

    inst = random_cover_instance(seed, n_max=12, u_max=12)
    pruned = prune_candidates(inst, k)
    assert cover_oracle(pruned.sets, k)[0] == cover_oracle(inst.sets, k)[0]


def test_pds_graph_validation():
    with pytest.raises(InputError):
        PdsGraph.from_edges(3, [(0, 0)])
    with pytest.raises(InputError):
        PdsGraph.from_edges(2, [(0, 5)])
    g = PdsGraph.from_edges(3, [(0, 1), (0, 1)])
    assert g.m == 1  # duplicates collapse


def test_solve_result_witness_invariant():
    inst = inst_from([{0, 1}, {1, 2}, {2}], 3)
    res = brute_force(inst, 2)
    assert res.value == coverage_value(inst, res.witness)
    assert len(res.witness) <= 2
