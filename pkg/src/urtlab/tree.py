"""Growth and storage of random recursive trees.

A tree on nodes ``0..n-1`` is held as three flat arrays: ``parent`` (int64,
``parent[0] == -1``), ``degree`` (int32, the parent edge counts toward a
node's degree; the root's degree is its child count) and ``level`` (int32,
distance from the root).  Node ``i`` always attaches to a node with smaller
index, so ``parent[i] < i``.

Two growth models are supported:

* ``UNIFORM`` - each new node picks its parent uniformly among existing
  nodes, independently of the past.
* ``PREFERENTIAL`` - starts from the single edge ``{0, 1}``; each new node
  picks an entry of the endpoint list (every edge contributes both of its
  endpoints), which makes the attachment probability proportional to the
  current degree.

Growth is deterministic given ``(model, n, seed)``.  Trees are immutable
after growth and safe to share across processes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .rng import check_seed, generator

DETERMINISTIC = "deterministic"

_MAGIC = b"URT1"
_DETERMINISTIC_FLAG = 0x80


class GrowthModel(Enum):
    """Attachment rule used while growing a tree."""

    UNIFORM = 0
    PREFERENTIAL = 1

    @classmethod
    def parse(cls, name: Union[str, "GrowthModel"]) -> "GrowthModel":
        if isinstance(name, GrowthModel):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown growth model {name!r}") from None

    @property
    def min_nodes(self) -> int:
        return 2 if self is GrowthModel.PREFERENTIAL else 1


@dataclass(frozen=True)
class RecursiveTree:
    """A grown recursive tree plus the provenance needed to regrow it.

    ``seed`` is the 64-bit integer passed to :func:`grow`, or the string
    ``"deterministic"`` for trees built from an explicit parent sequence.
    """

    n: int
    parent: np.ndarray
    degree: np.ndarray
    level: np.ndarray
    model: GrowthModel
    seed: Union[int, str]

    def __post_init__(self):
        self.parent.setflags(write=False)
        self.degree.setflags(write=False)
        self.level.setflags(write=False)

    def parent_sequence(self) -> np.ndarray:
        """Attachment targets of nodes ``1..n-1`` (length ``n-1``)."""
        return self.parent[1:]

    def __repr__(self) -> str:  # arrays are too noisy for repr
        return (
            f"RecursiveTree(n={self.n}, model={self.model.name}, "
            f"seed={self.seed!r})"
        )


def _levels_from_parents(parent: np.ndarray) -> np.ndarray:
    """Root distances via pointer doubling; O(n log depth), vectorized."""
    n = parent.shape[0]
    jump = parent.astype(np.int64, copy=True)
    jump[0] = 0
    depth = np.zeros(n, dtype=np.int64)
    depth[1:] = 1
    while True:
        advance = depth[jump]
        if not advance.any():
            break
        depth += advance
        jump = jump[jump]
    return depth.astype(np.int32)


def _degrees_from_parents(parent: np.ndarray) -> np.ndarray:
    n = parent.shape[0]
    degree = np.bincount(parent[1:], minlength=n).astype(np.int32)
    degree[1:] += 1  # parent edge
    return degree


def _assemble(parent: np.ndarray, model: GrowthModel, seed: Union[int, str]) -> RecursiveTree:
    return RecursiveTree(
        n=parent.shape[0],
        parent=parent,
        degree=_degrees_from_parents(parent),
        level=_levels_from_parents(parent),
        model=model,
        seed=seed,
    )


def _uniform_parents(n: int, rng: np.random.Generator) -> np.ndarray:
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    if n > 1:
        parent[1:] = rng.integers(0, np.arange(1, n), dtype=np.int64)
    return parent


def _preferential_parents(n: int, rng: np.random.Generator):
    """Endpoint-list growth; returns (parents, endpoints).

    ``endpoints`` lists both endpoints of every edge in insertion order, so
    its length is always twice the edge count.  Attachment indices are drawn
    in one vectorized batch: the index for step ``i`` is uniform on
    ``[0, 2(i-1))`` independent of earlier outcomes, only the *lookup* is
    sequential.
    """
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    parent[1] = 0
    endpoints = [0] * (2 * (n - 1))
    endpoints[0] = 0
    endpoints[1] = 1
    if n > 2:
        draws = rng.integers(0, 2 * np.arange(1, n - 1), dtype=np.int64).tolist()
        buf = [0] * n  # python list: scalar writes are cheaper than ndarray ones
        pos = 2
        for i in range(2, n):
            p = endpoints[draws[i - 2]]
            buf[i] = p
            endpoints[pos] = p
            endpoints[pos + 1] = i
            pos += 2
        parent[1:] = buf[1:]
    return parent, endpoints


def grow(model: Union[str, GrowthModel], n: int, seed: int) -> RecursiveTree:
    """Grow an ``n``-node tree under ``model`` from a 64-bit ``seed``.

    UNIFORM requires ``n >= 1``; PREFERENTIAL starts from the edge
    ``{0, 1}`` and requires ``n >= 2``.
    """
    model = GrowthModel.parse(model)
    n = int(n)
    if n < model.min_nodes:
        raise ValueError(f"{model.name} growth needs n >= {model.min_nodes}, got {n}")
    seed = check_seed(seed)
    rng = generator(seed)
    if model is GrowthModel.UNIFORM:
        parent = _uniform_parents(n, rng)
    else:
        parent, _ = _preferential_parents(n, rng)
    return _assemble(parent, model, seed)


def grow_from_sequence(
    parents: Sequence[int],
    model: Union[str, GrowthModel] = GrowthModel.UNIFORM,
) -> RecursiveTree:
    """Build the tree in which node ``i`` attached to ``parents[i-1]``.

    The sequence lists attachment targets of nodes ``1..n-1``; entry ``i-1``
    must be a node index smaller than ``i``.  The result carries the
    ``"deterministic"`` seed marker.
    """
    seq = np.asarray(list(parents), dtype=np.int64)
    n = seq.shape[0] + 1
    bad = np.nonzero((seq < 0) | (seq >= np.arange(1, n)))[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise ValueError(
            f"parents[{i - 1}]={int(seq[i - 1])} is not a valid target for node {i}"
        )
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    parent[1:] = seq
    return _assemble(parent, GrowthModel.parse(model), DETERMINISTIC)


def validate(tree: RecursiveTree) -> list[str]:
    """Check all structural invariants; returns one diagnostic per violation.

    An empty list means the tree is internally consistent.
    """
    problems: list[str] = []
    n = tree.n
    if n < 1:
        return [f"node count must be >= 1, got {n}"]
    for name, arr in (("parent", tree.parent), ("degree", tree.degree), ("level", tree.level)):
        if arr.shape != (n,):
            return [f"{name} array has shape {arr.shape}, expected ({n},)"]

    if n > 1:
        seq = tree.parent[1:]
        if ((seq < 0) | (seq >= np.arange(1, n))).any():
            problems.append("parent[i] must lie in {0..i-1} for every i >= 1")

    if tree.level[0] != 0:
        problems.append(f"root level must be 0, got {int(tree.level[0])}")
    if n > 1:
        expected = tree.level[tree.parent[1:]] + 1
        if (tree.level[1:] != expected).any():
            bad = int(np.nonzero(tree.level[1:] != expected)[0][0]) + 1
            problems.append(
                f"level[{bad}]={int(tree.level[bad])} != level[parent]+1={int(expected[bad - 1])}"
            )

    recomputed = _degrees_from_parents(tree.parent)
    if (tree.degree != recomputed).any():
        bad = int(np.nonzero(tree.degree != recomputed)[0][0])
        problems.append(
            f"degree[{bad}]={int(tree.degree[bad])} != recomputed {int(recomputed[bad])}"
        )
    total = int(tree.degree.sum())
    if total != 2 * (n - 1):
        problems.append(f"degree sum {total} != 2(n-1) = {2 * (n - 1)}")
    if n >= 2 and (tree.degree < 1).any():
        problems.append("every node must have degree >= 1 when n >= 2")
    return problems


def save_tree(tree: RecursiveTree, path) -> None:
    """Write the binary dump: ``URT1`` magic, u64 n, u8 model tag, u64 seed,
    then ``n-1`` little-endian u32 parent entries.

    Trees with the ``"deterministic"`` seed marker set bit 7 of the model
    tag and store a zero seed.  Degrees and levels are recomputed on load.
    """
    tag = tree.model.value
    if tree.seed == DETERMINISTIC:
        tag |= _DETERMINISTIC_FLAG
        seed = 0
    else:
        seed = int(tree.seed)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QBQ", tree.n, tag, seed))
        fh.write(tree.parent[1:].astype("<u4").tobytes())


def load_tree(path) -> RecursiveTree:
    """Read a tree written by :func:`save_tree`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        n, tag, seed = struct.unpack("<QBQ", fh.read(17))
        raw = fh.read(4 * (n - 1))
    if len(raw) != 4 * (n - 1):
        raise ValueError("truncated parent section")
    model = GrowthModel(tag & ~_DETERMINISTIC_FLAG)
    stored: Union[int, str] = DETERMINISTIC if tag & _DETERMINISTIC_FLAG else int(seed)
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    parent[1:] = np.frombuffer(raw, dtype="<u4").astype(np.int64)
    if n > 1 and (parent[1:] >= np.arange(1, n)).any():
        raise ValueError("parent entries violate parent[i] < i")
    return _assemble(parent, model, stored)
