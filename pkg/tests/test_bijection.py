import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urtlab import (
    NotInImageError,
    Permutation,
    degree_counts_in_level,
    enumerate_trees,
    fixed_points_after_first,
    grow,
    grow_from_sequence,
    permutation_to_tree,
    tree_to_permutation,
)


def test_two_node_tree_maps_to_identity():
    t = grow_from_sequence([0])
    assert tree_to_permutation(t).values == (1, 2)


def test_hand_examples_n3():
    assert tree_to_permutation(grow_from_sequence([0, 1])).values == (1, 3, 2)
    assert tree_to_permutation(grow_from_sequence([0, 0])).values == (1, 2, 3)


def test_inverse_hand_examples():
    assert list(permutation_to_tree((1, 3, 2)).parent_sequence()) == [0, 1]
    # the identity arises from all-root attachments: the star
    for n in (2, 3, 5, 9):
        star = permutation_to_tree(tuple(range(1, n + 1)))
        assert list(star.parent_sequence()) == [0] * (n - 1)


def test_not_in_image():
    with pytest.raises(NotInImageError):
        permutation_to_tree((2, 1))
    with pytest.raises(NotInImageError):
        permutation_to_tree((3, 2, 1))


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((1, 1, 3))
    with pytest.raises(ValueError):
        Permutation((0, 1, 2))


def test_fixed_points_examples():
    assert fixed_points_after_first((1, 2, 3)) == 2
    assert fixed_points_after_first((1, 3, 2)) == 0
    n = 12
    assert fixed_points_after_first(tuple(range(1, n + 1))) == n - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_exhaustive_image_and_uniformity(n):
    """Distinct images with first entry fixed, hit exactly once each."""
    seen = {}
    for tree in enumerate_trees(n):
        perm = tree_to_permutation(tree)
        assert perm.values[0] == 1
        seen[perm.values] = seen.get(perm.values, 0) + 1
    assert len(seen) == math.factorial(n - 1)
    assert set(seen.values()) == {1}


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_exhaustive_fixed_point_correspondence(n):
    """Fixed points away from position 1 count degree-1 level-1 nodes."""
    for tree in enumerate_trees(n):
        perm = tree_to_permutation(tree)
        x1 = degree_counts_in_level(tree, 1).counts.get(1, 0)
        assert fixed_points_after_first(perm) == x1


@pytest.mark.parametrize("n", [2, 5, 9])
def test_exhaustive_round_trip(n):
    for tree in enumerate_trees(n):
        back = permutation_to_tree(tree_to_permutation(tree))
        assert (back.parent == tree.parent).all()


def test_round_trip_large_random_trees():
    for seed in range(1000):
        tree = grow("uniform", 1000, seed)
        back = permutation_to_tree(tree_to_permutation(tree))
        assert (back.parent == tree.parent).all()


@given(st.integers(2, 30).flatmap(lambda n: st.tuples(*(st.integers(0, i - 1) for i in range(1, n)))))
@settings(max_examples=80, deadline=None)
def test_round_trip_property(seq):
    tree = grow_from_sequence(seq)
    back = permutation_to_tree(tree_to_permutation(tree))
    assert (back.parent == tree.parent).all()


def test_permutation_json():
    assert tree_to_permutation(grow_from_sequence([0, 1])).to_json() == "[1, 3, 2]"
