"""Observables of a grown tree: level sizes, degree histograms, per-level
degree counts and the fraction of high-degree nodes per level.

All functions are pure and operate on the tree's flat arrays; none of them
mutate the tree, so they are safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyLevelError
from .tree import RecursiveTree


@dataclass(frozen=True)
class LevelDegreeProfile:
    """Degree counts restricted to one level.

    ``counts[d]`` is the number of level-``k`` nodes of total degree ``d``;
    the counts sum to ``level_size``.
    """

    k: int
    counts: dict[int, int]
    level_size: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "level_size": self.level_size,
            "counts": {str(d): c for d, c in sorted(self.counts.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def level_sizes(tree: RecursiveTree) -> np.ndarray:
    """Node count per level, indexed by level; entries sum to ``n``."""
    return np.bincount(tree.level)


def high_degree_fraction(tree: RecursiveTree, k: int, t: float) -> float:
    """Fraction of level-``k`` nodes whose degree exceeds ``t * ln(n)``.

    ``t`` must lie in (0, 1).  The threshold is evaluated in double
    precision; degrees are integers, so ties are impossible unless
    ``t * ln(n)`` happens to round to an exact integer.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    mask = tree.level == k
    size = int(mask.sum())
    if size == 0:
        raise EmptyLevelError(f"level {k} is empty (n={tree.n})")
    threshold = t * math.log(tree.n)
    exceed = int((tree.degree[mask] > threshold).sum())
    return exceed / size


def exceedance_count(tree: RecursiveTree, k: int, t: float) -> int:
    """Number of level-``k`` nodes with degree above ``t * ln(n)``.

    The numerator of :func:`high_degree_fraction`; defined (as 0) even for
    empty levels.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    threshold = t * math.log(tree.n)
    return int(((tree.level == k) & (tree.degree > threshold)).sum())


def degree_counts_in_level(tree: RecursiveTree, k: int) -> LevelDegreeProfile:
    """Histogram of degrees among level-``k`` nodes.

    An empty level yields empty counts with ``level_size`` 0.
    """
    degrees = tree.degree[tree.level == k]
    values, counts = np.unique(degrees, return_counts=True)
    return LevelDegreeProfile(
        k=int(k),
        counts={int(d): int(c) for d, c in zip(values, counts)},
        level_size=int(degrees.size),
    )


def degree_histogram(tree: RecursiveTree) -> dict[int, int]:
    """Degree -> node count over the whole tree; values sum to ``n``."""
    binned = np.bincount(tree.degree)
    return {int(d): int(c) for d, c in enumerate(binned) if c > 0}


def max_degree(tree: RecursiveTree) -> int:
    """Largest degree in the tree; needs at least one edge."""
    if tree.n < 2:
        raise ValueError("max_degree needs n >= 2 (a single node has no edges)")
    return int(tree.degree.max())
