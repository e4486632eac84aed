import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urtlab import (
    EmptyLevelError,
    degree_counts_in_level,
    degree_histogram,
    exceedance_count,
    grow,
    grow_from_sequence,
    high_degree_fraction,
    level_sizes,
    max_degree,
)


def random_parent_sequences(max_n=40):
    """Strategy: valid attachment sequences (parents[i-1] < i)."""
    return st.integers(min_value=2, max_value=max_n).flatmap(
        lambda n: st.tuples(*(st.integers(0, i - 1) for i in range(1, n)))
    )


def test_level_sizes_path_and_star():
    assert list(level_sizes(grow_from_sequence([0, 1, 2]))) == [1, 1, 1, 1]
    assert list(level_sizes(grow_from_sequence([0, 0, 0]))) == [1, 3]


def test_level_sizes_sum_to_n():
    t = grow("uniform", 4321, 8)
    sizes = level_sizes(t)
    assert sizes.sum() == t.n
    assert sizes[0] == 1


def test_high_degree_fraction_tiny_t_is_one():
    for seq in ([0], [0, 0], [0, 1, 2], [0, 0, 1, 3]):
        t = grow_from_sequence(seq)
        assert high_degree_fraction(t, 1, 1e-9) == 1.0


def test_high_degree_fraction_hand_cases():
    star3 = grow_from_sequence([0, 0])  # threshold 0.5*ln(3) ~ 0.549
    assert high_degree_fraction(star3, 1, 0.5) == 1.0
    path3 = grow_from_sequence([0, 1])  # threshold ~ 0.989, node 2 degree 1
    assert high_degree_fraction(path3, 2, 0.9) == 1.0


def test_high_degree_fraction_empty_level():
    with pytest.raises(EmptyLevelError):
        high_degree_fraction(grow_from_sequence([0, 0]), 2, 0.5)


def test_high_degree_fraction_t_domain():
    t = grow_from_sequence([0, 0])
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            high_degree_fraction(t, 1, bad)


def test_high_degree_fraction_nonincreasing_in_t():
    tree = grow("uniform", 2000, 5150)
    values = [high_degree_fraction(tree, 1, t) for t in np.linspace(0.05, 0.95, 19)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_degree_counts_in_level_hand_cases():
    p = degree_counts_in_level(grow_from_sequence([0, 0]), 1)
    assert p.counts == {1: 2} and p.level_size == 2
    p = degree_counts_in_level(grow_from_sequence([0, 1]), 1)
    assert p.counts == {2: 1} and p.level_size == 1
    star = grow_from_sequence([0] * 6)
    p = degree_counts_in_level(star, 0)
    assert p.counts == {6: 1} and p.level_size == 1


def test_degree_counts_in_level_empty_level():
    p = degree_counts_in_level(grow_from_sequence([0, 0]), 3)
    assert p.counts == {} and p.level_size == 0


def test_profile_json_shape():
    p = degree_counts_in_level(grow_from_sequence([0, 0, 1]), 1)
    d = p.to_dict()
    assert set(d) == {"k", "level_size", "counts"}
    assert all(isinstance(k, str) for k in d["counts"])


def test_degree_histogram_path_and_star():
    assert degree_histogram(grow_from_sequence([0, 1, 2])) == {1: 2, 2: 2}
    assert degree_histogram(grow_from_sequence([0, 0, 0])) == {1: 3, 3: 1}


def test_degree_histogram_large_uniform_tree_matches_geometric_limit():
    t = grow("uniform", 1_000_000, 271828)
    hist = degree_histogram(t)
    for d in range(1, 6):
        assert abs(hist[d] / t.n - 2.0**-d) < 0.01


def test_max_degree():
    assert max_degree(grow_from_sequence([0, 0, 0, 0])) == 4
    assert max_degree(grow_from_sequence([0, 1, 2, 3])) == 2
    with pytest.raises(ValueError):
        max_degree(grow("uniform", 1, 1))


@given(random_parent_sequences())
@settings(max_examples=60, deadline=None)
def test_histogram_identities(seq):
    tree = grow_from_sequence(seq)
    hist = degree_histogram(tree)
    sizes = level_sizes(tree)
    assert sum(hist.values()) == tree.n
    assert sum(d * c for d, c in hist.items()) == 2 * (tree.n - 1)
    assert sizes.sum() == tree.n
    # per-level degree counts refine the global histogram
    merged: dict[int, int] = {}
    for k in range(len(sizes)):
        for d, c in degree_counts_in_level(tree, k).counts.items():
            merged[d] = merged.get(d, 0) + c
    assert merged == hist


@given(random_parent_sequences(), st.floats(0.01, 0.99))
@settings(max_examples=60, deadline=None)
def test_fraction_consistent_with_profile(seq, t):
    tree = grow_from_sequence(seq)
    profile = degree_counts_in_level(tree, 1)
    threshold = t * math.log(tree.n)
    manual = sum(c for d, c in profile.counts.items() if d > threshold)
    assert exceedance_count(tree, 1, t) == manual
    if profile.level_size:
        assert high_degree_fraction(tree, 1, t) == manual / profile.level_size
