import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from maxkcover import CoverInstance, InputError, ResourceLimitError
from maxkcover.oracles import brute_force, count_matrix, matrix_multiply, mm_baseline
from maxkcover.randgen import random_cover_instance

from helpers import cover_oracle


def inst_from(sets, u):
    return CoverInstance.from_sets([tuple(sorted(s)) for s in sets], u)


def test_brute_force_examples():
    inst = inst_from([{0, 1}, {1, 2}, {2}], 3)
    assert brute_force(inst, 0).value == 0
    assert brute_force(inst, 0).witness == ()
    res = brute_force(inst, 2)
    assert (res.value, res.witness) == (3, (0, 1))
    assert brute_force(inst, 7).value == 3  # k >= n collapses to the whole family


def test_brute_force_lex_smallest_witness():
    inst = inst_from([{0}, {1}, {0, 1}], 2)
    assert brute_force(inst, 2).witness == (0, 1)


def test_mm_baseline_matches_brute_force():
    for seed in range(160):
        inst = random_cover_instance(seed, n_max=12, u_max=12)
        assert mm_baseline(inst, 2).value == cover_oracle(inst.sets, 2)[0], seed


def test_mm_baseline_examples():
    inst = inst_from([{0, 1, 2}, {0}], 3)
    cm = count_matrix(inst, 2)
    assert 0 in cm.entries  # full-coverage row pair
    assert mm_baseline(inst, 2).value == 3

    inst = inst_from([{0, 1}, {1, 2}, {2}], 3)
    cm = count_matrix(inst, 2)
    ri = cm.row_subsets.index((0,))
    ci = cm.col_subsets.index((1,))
    assert cm.entries[ri, ci] == 0
    assert mm_baseline(inst, 2).value == 3


def test_mm_baseline_k_values():
    for seed in range(40):
        inst = random_cover_instance(seed, n_max=9, u_max=9)
        for k in (2, 3, 4):
            assert mm_baseline(inst, k).value == cover_oracle(inst.sets, k)[0], (seed, k)


def test_count_matrix_invariant_sampled():
    rng = np.random.default_rng(7)
    for seed in range(8):
        inst = random_cover_instance(seed, n_max=8, u_max=8)
        cm = count_matrix(inst, 3)
        rows, cols = cm.entries.shape
        for _ in range(100):
            ri = int(rng.integers(rows))
            ci = int(rng.integers(cols))
            assert cm.check_entry(inst, ri, ci)


def test_mm_baseline_budget():
    inst = random_cover_instance(0, n_max=12, u_max=12)
    with pytest.raises(ResourceLimitError):
        mm_baseline(inst, 4, budget_entries=4)
    with pytest.raises(InputError):
        mm_baseline(inst, 1)


def test_matrix_multiply_examples():
    ident = np.eye(3, dtype=np.int64)
    m = np.arange(9).reshape(3, 3)
    assert (matrix_multiply(ident, m) == m).all()
    ones_row = np.ones((1, 5), dtype=np.int64)
    ones_col = np.ones((5, 1), dtype=np.int64)
    assert matrix_multiply(ones_row, ones_col)[0, 0] == 5
    with pytest.raises(InputError):
        matrix_multiply(np.ones((2, 3)), np.ones((2, 3)))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_matrix_multiply_matches_schoolbook(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(4, 5))
    b = rng.integers(0, 2, size=(5, 3))
    got = matrix_multiply(a, b)
    want = [[sum(int(a[i, t]) * int(b[t, j]) for t in range(5)) for j in range(3)] for i in range(4)]
    assert got.tolist() == want
