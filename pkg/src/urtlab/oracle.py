"""Ground-truth engines independent of the Monte Carlo paths.

Two kinds of oracle live here:

* exhaustive enumeration of all ``(n-1)!`` attachment sequences for small
  ``n``, giving exact rational laws of any registered tree statistic;
* semi-analytic dynamic programs for single-node quantities at medium
  ``n``: the level distribution of node ``i`` and the tail of its child
  count (a Poisson-binomial sum of indicators with means ``1/j``).

Exact rational arithmetic is used up to ``n = 64``; larger instances run
in double precision, and results carry an ``exact`` flag where the
distinction matters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .bijection import fixed_points_after_first, tree_to_permutation
from .errors import ResourceGuardError
from .moments import ExponentVector, VectorLike, falling_factorial
from .stats import degree_counts_in_level, exceedance_count, level_sizes, max_degree
from .tree import RecursiveTree, grow_from_sequence

ENUMERATION_MAX_NODES = 11  # 10! = 3.6M sequences
RATIONAL_DP_MAX_NODES = 64  # exact rational DP guard
DEGREE_TAIL_MAX_SPAN = 10_000  # convolution length guard


def enumerate_trees(n: int) -> Iterator[RecursiveTree]:
    """All recursive trees on ``n`` nodes, one per attachment sequence.

    Sequences are visited in lexicographic (mixed-radix) order: the digit
    for node ``i`` runs over ``0..i-1``.  Each tree occurs exactly once and
    carries probability ``1/(n-1)!`` under uniform growth.
    """
    n = int(n)
    if not 2 <= n <= ENUMERATION_MAX_NODES:
        raise ResourceGuardError(
            f"enumeration is guarded to 2 <= n <= {ENUMERATION_MAX_NODES}, got {n}"
        )
    for seq in itertools.product(*(range(i) for i in range(1, n))):
        yield grow_from_sequence(seq)


def tree_count(n: int) -> int:
    return math.factorial(n - 1)


@dataclass(frozen=True)
class ExactDistribution:
    """Exact law of an integer statistic under uniform growth on ``n`` nodes."""

    n: int
    statistic: str
    support: dict[int, Fraction]

    def probability(self, value: int) -> Fraction:
        return self.support.get(value, Fraction(0))

    def expectation(self) -> Fraction:
        return sum((p * v for v, p in self.support.items()), start=Fraction(0))

    def factorial_moment(self, order: int) -> Fraction:
        return sum(
            (p * falling_factorial(v, order) for v, p in self.support.items()),
            start=Fraction(0),
        )

    def total_mass(self) -> Fraction:
        return sum(self.support.values(), start=Fraction(0))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "statistic": self.statistic,
            "support": {
                str(v): f"{p.numerator}/{p.denominator}"
                for v, p in sorted(self.support.items())
            },
        }


def _stat_level_degree_count(tree: RecursiveTree, d: int, k: int = 1) -> int:
    return degree_counts_in_level(tree, k).counts.get(d, 0)


def _stat_exceedance_count(tree: RecursiveTree, k: int, t: float) -> int:
    return exceedance_count(tree, k, t)


def _stat_level_size(tree: RecursiveTree, k: int) -> int:
    sizes = level_sizes(tree)
    return int(sizes[k]) if k < len(sizes) else 0


def _stat_max_degree(tree: RecursiveTree) -> int:
    return max_degree(tree)


def _stat_fixed_points(tree: RecursiveTree) -> int:
    return fixed_points_after_first(tree_to_permutation(tree))


STATISTICS = {
    "level_degree_count": _stat_level_degree_count,
    "exceedance_count": _stat_exceedance_count,
    "level_size": _stat_level_size,
    "max_degree": _stat_max_degree,
    "fixed_points": _stat_fixed_points,
}


def exact_statistic_distribution(n: int, statistic: str, **params) -> ExactDistribution:
    """Exact law of a registered statistic via full enumeration.

    Registered statistics: ``level_degree_count`` (params ``d``, optional
    ``k``), ``exceedance_count`` (``k``, ``t``), ``level_size`` (``k``),
    ``max_degree``, ``fixed_points``.
    """
    try:
        fn = STATISTICS[statistic]
    except KeyError:
        known = ", ".join(sorted(STATISTICS))
        raise ValueError(f"unknown statistic {statistic!r}; registered: {known}") from None
    counts: dict[int, int] = {}
    total = 0
    for tree in enumerate_trees(n):
        value = int(fn(tree, **params))
        counts[value] = counts.get(value, 0) + 1
        total += 1
    label = statistic if not params else (
        statistic + "(" + ", ".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
    )
    return ExactDistribution(
        n=n,
        statistic=label,
        support={v: Fraction(c, total) for v, c in sorted(counts.items())},
    )


def enumeration_moment(n: int, k: VectorLike) -> Fraction:
    """Brute-force joint factorial moment of the first-level degree counts.

    Averages ``prod_d (X_d)_{k_d}`` over every attachment sequence, where
    ``X_d`` counts level-1 nodes of degree ``d``.  This is the independent
    check for the recursion-based values in :mod:`urtlab.moments`.
    """
    vec = ExponentVector.of(k)
    total = Fraction(0)
    count = 0
    for tree in enumerate_trees(n):
        counts = degree_counts_in_level(tree, 1).counts
        prod = 1
        for d, kd in enumerate(vec.k, start=1):
            if kd:
                prod *= falling_factorial(counts.get(d, 0), kd)
                if prod == 0:
                    break
        total += prod
        count += 1
    return total / count


@dataclass(frozen=True)
class LevelDistribution:
    """Marginal law of one node's level under uniform growth.

    ``probs[k]`` is ``P(level(node) = k)`` for ``k = 0..kmax``; entries are
    :class:`fractions.Fraction` when ``exact`` else floats.  The mass sums
    to 1 whenever ``kmax`` is large enough to cover the support.
    """

    node: int
    probs: tuple
    exact: bool

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, k: int):
        return self.probs[k]

    def __iter__(self):
        return iter(self.probs)


def level_pmf(i: int, kmax: int, exact: Union[bool, None] = None) -> LevelDistribution:
    """Distribution of node ``i``'s level, truncated at ``kmax``.

    Uses the averaging recursion
    ``P(level(i)=k) = (1/i) * sum_{j<i} P(level(j)=k-1)``.
    ``exact=None`` selects rational arithmetic for ``i <= 64`` and double
    precision beyond.
    """
    i = int(i)
    if i < 0:
        raise ValueError(f"node index must be nonnegative, got {i}")
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    if exact is None:
        exact = i <= RATIONAL_DP_MAX_NODES
    if exact:
        cum = [Fraction(0)] * (kmax + 1)
        cum[0] = Fraction(1)  # node 0 sits at level 0
        probs = [Fraction(0)] * (kmax + 1)
        probs[0] = Fraction(1)
        for j in range(1, i + 1):
            probs = [Fraction(0)] + [c / j for c in cum[:-1]]
            cum = [a + b for a, b in zip(cum, probs)]
        return LevelDistribution(i, tuple(probs), True)
    cum = np.zeros(kmax + 1)
    cum[0] = 1.0
    probs = np.zeros(kmax + 1)
    probs[0] = 1.0
    for j in range(1, i + 1):
        probs = np.empty(kmax + 1)
        probs[0] = 0.0
        probs[1:] = cum[:-1] / j
        cum = cum + probs
    return LevelDistribution(i, tuple(float(p) for p in probs), False)


def _level_mass_sweep(n: int, kmax: int):
    """Float DP over all nodes; returns (per-node pmf matrix row sums).

    ``mass[k]`` accumulates ``sum_{i=0}^{n-1} P(level(i)=k)``, i.e. the
    expected size of level ``k`` in an ``n``-node tree, and the matrix of
    per-node laws is not kept.
    """
    cum = np.zeros(kmax + 1)
    cum[0] = 1.0
    for j in range(1, n):
        probs = np.empty(kmax + 1)
        probs[0] = 0.0
        probs[1:] = cum[:-1] / j
        cum = cum + probs
    return cum


def expected_level_size(n: int, k: int, exact: Union[bool, None] = None):
    """Exact ``E|L_n(k)| = sum_i P(level(i) = k)`` over nodes ``0..n-1``."""
    n = int(n)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if k < 0:
        raise ValueError(f"level must be nonnegative, got {k}")
    if exact is None:
        exact = n <= RATIONAL_DP_MAX_NODES
    kmax = max(k + 1, _default_kmax(n))
    if exact:
        cum = [Fraction(0)] * (kmax + 1)
        cum[0] = Fraction(1)
        for j in range(1, n):
            probs = [Fraction(0)] + [c / j for c in cum[:-1]]
            cum = [a + b for a, b in zip(cum, probs)]
        return cum[k] if k <= kmax else Fraction(0)
    mass = _level_mass_sweep(n, kmax)
    return float(mass[k]) if k <= kmax else 0.0


def _default_kmax(n: int) -> int:
    # levels concentrate near ln(n); 4x leaves the truncated mass below 1e-15
    return max(8, int(4 * math.log(max(n, 2))) + 8)


def degree_tail(i: int, n: int, threshold: float):
    """``P(X > threshold)`` for ``X = sum_{j=i+1}^{n} Bernoulli(1/j)``.

    ``X`` is the number of extra edges node ``i`` collects while nodes
    ``i+1..n`` attach; a node's total degree in an ``m``-node tree is
    ``1 + X`` with ``n = m - 1``, so ``P(deg > c)`` is
    ``degree_tail(i, m - 1, c - 1)``.

    Exact convolution; rational arithmetic for ``n <= 64``, float beyond.
    Guarded to ``n - i <= 10^4`` terms.
    """
    i = int(i)
    n = int(n)
    if not 1 <= i < n:
        raise ValueError(f"need 1 <= i < n, got i={i}, n={n}")
    if n - i > DEGREE_TAIL_MAX_SPAN:
        raise ResourceGuardError(
            f"degree_tail is guarded to n - i <= {DEGREE_TAIL_MAX_SPAN}, got {n - i}"
        )
    exact = n <= RATIONAL_DP_MAX_NODES
    if threshold < 0:
        return Fraction(1) if exact else 1.0
    if exact:
        pmf = [Fraction(1)]
        for j in range(i + 1, n + 1):
            p = Fraction(1, j)
            q = 1 - p
            nxt = [pmf[0] * q]
            for m in range(1, len(pmf)):
                nxt.append(pmf[m] * q + pmf[m - 1] * p)
            nxt.append(pmf[-1] * p)
            pmf = nxt
        return sum((pmf[m] for m in range(len(pmf)) if m > threshold), start=Fraction(0))
    pmf = np.array([1.0])
    for j in range(i + 1, n + 1):
        p = 1.0 / j
        nxt = np.empty(pmf.size + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[-1] = 0.0
        nxt[1:] += pmf * p
        pmf = nxt
    values = np.arange(pmf.size)
    return float(pmf[values > threshold].sum())


def child_count_tails(n: int, threshold: float) -> np.ndarray:
    """Tails ``P(X_i > threshold)`` for every node ``i = 1..n-1`` at once.

    ``X_i = sum_{j=i+1}^{n-1} Bernoulli(1/j)`` is the child count of node
    ``i`` in an ``n``-node tree.  One backward convolution pass shares work
    across all nodes; double precision.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n - 2 > DEGREE_TAIL_MAX_SPAN:
        raise ResourceGuardError(
            f"tail sweep is guarded to n <= {DEGREE_TAIL_MAX_SPAN + 2}, got {n}"
        )
    tails = np.zeros(n)
    pmf = np.array([1.0])  # X_{n-1} is an empty sum
    tails[n - 1] = 1.0 if threshold < 0 else 0.0
    for i in range(n - 2, 0, -1):
        p = 1.0 / (i + 1)  # node i+1 attaches to i with probability 1/(i+1)
        nxt = np.empty(pmf.size + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[-1] = 0.0
        nxt[1:] += pmf * p
        pmf = nxt
        values = np.arange(pmf.size)
        tails[i] = float(pmf[values > threshold].sum())
    return tails[1:]


def node_level_probabilities(n: int, k: int) -> np.ndarray:
    """``P(level(i) = k)`` for every node ``i = 1..n-1``; double precision."""
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if k < 1:
        raise ValueError(f"level must be >= 1 for non-root nodes, got {k}")
    kmax = max(k, _default_kmax(n))
    out = np.empty(n - 1)
    cum = np.zeros(kmax + 1)
    cum[0] = 1.0
    for i in range(1, n):
        probs = np.empty(kmax + 1)
        probs[0] = 0.0
        probs[1:] = cum[:-1] / i
        out[i - 1] = probs[k]
        cum = cum + probs
    return out


def expected_exceedance_count(n: int, k: int, t: float) -> float:
    """Exact expectation of the number of level-``k`` nodes with degree
    above ``t * ln(n)`` in an ``n``-node tree.

    A node's level is decided by attachments up to its birth, its later
    child count by attachments after it, so the two factors of each term
    are independent:

        sum_{i>=1} P(level(i) = k) * P(X_i > t*ln(n) - 1).

    Double precision throughout (the per-term DPs are exact convolutions
    and averaging recursions, accurate to ~1e-12).
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if k < 1:
        raise ValueError(f"level must be >= 1, got {k}")
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    threshold = t * math.log(n) - 1.0  # degree > t ln n  <=>  children > t ln n - 1
    tails = child_count_tails(n, threshold)
    levels = node_level_probabilities(n, k)
    return float(np.dot(levels, tails))
