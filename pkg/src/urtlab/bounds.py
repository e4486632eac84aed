"""Closed-form tail bounds for a node's child count, and report rows that
compare them against exact or simulated tails.

The child count of node ``i`` after ``n`` attachment steps is a sum of
independent indicators with means ``1/(i+1), .., 1/n``; write ``s`` for its
expectation.  Chernoff's method gives the two quadratic-form bounds

    P(X >= a) <= exp(-(a - s)^2 / (2a))   for a > s,
    P(X <= a) <= exp(-(s - a)^2 / (2s))   for a < s,

and specializing ``a = t * ln(n)`` under the index cutoffs
``i > n^(1-t+eps)`` (late nodes, small mean) and ``i <= n^(1-t-eps) - 1``
(early nodes, large mean) yields closed forms that depend only on
``(n, t, eps)``.  Those are the contract-bearing bounds; the sharper raw
Chernoff product form is exposed for diagnostics only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields


def expected_children(i: int, n: int) -> float:
    """``s = 1/(i+1) + .. + 1/n``: expected attachments node ``i`` gains.

    Satisfies ``log(n/(i+1)) <= s <= log(n/i)``.
    """
    i = int(i)
    n = int(n)
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    # summed upward: ascending magnitude keeps the float error ~1 ulp
    return float(sum(1.0 / j for j in range(n, i, -1)))


def upper_tail_bound(a: float, s: float) -> float:
    """Quadratic Chernoff bound on ``P(X >= a)`` for ``a > s > 0``."""
    a = float(a)
    s = float(s)
    if not a > s > 0:
        raise ValueError(f"upper tail bound needs a > s > 0, got a={a}, s={s}")
    return math.exp(-((a - s) ** 2) / (2.0 * a))


def lower_tail_bound(a: float, s: float) -> float:
    """Quadratic Chernoff bound on ``P(X <= a)`` for ``0 <= a < s``."""
    a = float(a)
    s = float(s)
    if not 0 <= a < s:
        raise ValueError(f"lower tail bound needs 0 <= a < s, got a={a}, s={s}")
    return math.exp(-((s - a) ** 2) / (2.0 * s))


def chernoff_upper_raw(a: float, s: float) -> float:
    """Raw product-form bound ``(e^(b-1) b^-b)^s`` with ``b = a/s``.

    Tighter than :func:`upper_tail_bound`; diagnostic only.
    """
    a = float(a)
    s = float(s)
    if not a > s > 0:
        raise ValueError(f"raw Chernoff bound needs a > s > 0, got a={a}, s={s}")
    beta = a / s
    return math.exp(s * (beta - 1.0 - beta * math.log(beta)))


def tail_bound_high_index(n: int, t: float, eps: float) -> float:
    """Bound on ``P(X > t ln n)`` valid for every node ``i > n^(1-t+eps)``:
    ``n^(-eps^2 / (2t))``.  Needs ``0 < eps < t < 1``.
    """
    if not 0.0 < eps < t < 1.0:
        raise ValueError(f"high-index bound needs 0 < eps < t < 1, got t={t}, eps={eps}")
    return math.exp(-(eps**2) / (2.0 * t) * math.log(n))


def tail_bound_low_index(n: int, t: float, eps: float) -> float:
    """Bound on ``P(X <= t ln n)`` valid for every node
    ``i <= n^(1-t-eps) - 1``: ``n^(-eps^2 / (2(t+eps)))``.
    Needs ``0 < t < 1`` and ``0 < eps < 1 - t``.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"low-index bound needs 0 < t < 1, got t={t}")
    if not 0.0 < eps < 1.0 - t:
        raise ValueError(f"low-index bound needs 0 < eps < 1 - t, got t={t}, eps={eps}")
    return math.exp(-(eps**2) / (2.0 * (t + eps)) * math.log(n))


def tail_bound_pair(n: int, t: float, eps: float) -> tuple[float, float]:
    """Both closed-form bounds, (high-index, low-index), for one (n, t, eps)."""
    return tail_bound_high_index(n, t, eps), tail_bound_low_index(n, t, eps)


@dataclass(frozen=True)
class TailBoundReport:
    """One bound-versus-tail comparison row.

    ``margin = bound - tail`` must be nonnegative whenever the bound's
    index condition holds and the tail is exact (``mode == "exact"``).
    """

    i: int
    n: int
    t: float
    eps: float
    side: str  # "upper" (late nodes) or "lower" (early nodes)
    s: float
    bound: float
    tail: float
    mode: str  # "exact" or "monte-carlo"
    margin: float

    @classmethod
    def make(cls, i, n, t, eps, side, s, bound, tail, mode) -> "TailBoundReport":
        return cls(
            i=int(i), n=int(n), t=float(t), eps=float(eps), side=side,
            s=float(s), bound=float(bound), tail=float(tail), mode=mode,
            margin=float(bound) - float(tail),
        )

    @staticmethod
    def csv_header() -> list[str]:
        return [f.name for f in fields(TailBoundReport)]

    def csv_row(self) -> list:
        return [getattr(self, f.name) for f in fields(TailBoundReport)]


def write_tail_reports(rows, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(TailBoundReport.csv_header())
    for row in rows:
        writer.writerow(row.csv_row())
