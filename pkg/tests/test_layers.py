import pytest
from hypothesis import given

from conftest import hull_vertices_oracle, point_sets
from kholes.generators import gen_convex, gen_random
from kholes.geometry import PointSet
from kholes.layers import compute_k_mid, decompose, suffix_set


def k_mid_oracle(sizes, n):
    return max(k for k in range(1, len(sizes) + 1) if 2 * sum(sizes[: k - 1]) < n)


@given(point_sets(1, 12))
def test_layers_partition_and_peel(ps):
    dec = decompose(ps)
    seen = [v for layer in dec.layers for v in layer]
    assert sorted(seen) == list(range(len(ps)))
    remaining = list(range(len(ps)))
    for layer in dec.layers:
        sub = [ps[i] for i in remaining]
        expect = {remaining[i] for i in hull_vertices_oracle(sub)} if len(sub) > 2 else set(remaining)
        assert set(layer) == expect
        remaining = [i for i in remaining if i not in layer]
    assert dec.k_mid == k_mid_oracle(dec.sizes(), len(ps))


def test_convex_set_is_one_layer():
    dec = decompose(gen_convex(10, 3))
    assert dec.L == 1 and dec.k_mid == 1 and dec.sizes() == [10]


def test_nested_squares():
    ps = PointSet([(0, 0), (100, 1), (101, 100), (1, 99), (40, 41), (60, 39), (59, 60), (41, 58), (50, 51)])
    dec = decompose(ps)
    assert dec.sizes() == [4, 4, 1]
    assert dec.k_mid == 2  # 2*0 < 9, 2*4 < 9, 2*8 >= 9
    assert dec.layer_of[8] == 3
    assert suffix_set(dec, 2) == [4, 5, 6, 7, 8]
    assert dec.centers() == list(range(8))


def test_k_mid_formula():
    assert compute_k_mid([10, 10, 10, 10], 40) == 2
    assert compute_k_mid([3], 3) == 1
    assert compute_k_mid([5, 1, 1, 1, 1, 1], 10) == 1
    assert compute_k_mid([4, 1, 1, 1, 1, 1, 1], 10) == 2


def test_suffix_set_bounds():
    dec = decompose(gen_random(20, 1))
    assert suffix_set(dec, 1) == list(range(20))
    with pytest.raises(IndexError):
        suffix_set(dec, dec.L + 1)
    with pytest.raises(IndexError):
        suffix_set(dec, 0)


def test_suffix_sets_hold_at_least_half_up_to_k_mid():
    for seed in range(5):
        ps = gen_random(80, seed)
        dec = decompose(ps)
        for i in range(1, dec.k_mid + 1):
            assert 2 * len(suffix_set(dec, i)) > len(ps)


def test_empty_set_rejected():
    with pytest.raises(ValueError):
        decompose(PointSet([]))
