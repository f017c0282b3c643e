"""Constant matching between an old and a new formula.

Each uninterpreted constant gets an *environment*: the multiset of stripped
path strings leading to its occurrences.  Old/new pairs are scored by
environment overlap (dominant) plus the LCS length of their names, and the
maximum-weight bipartite matching over those scores yields the renaming.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .terms import (
    DEFAULT_REGISTRY, CommutativityRegistry, Substitution, Term, normalize,
)

__all__ = [
    "SimilarityWeights", "DEFAULT_WEIGHTS", "path_strings", "format_path",
    "environments", "env_similarity", "lcs_length", "similarity",
    "similarity_matrix", "max_weight_matching", "matching_weight",
    "build_substitution",
]


@dataclass(frozen=True)
class SimilarityWeights:
    env: int = 10
    lcs: int = 1

    def __post_init__(self):
        if self.env <= self.lcs:
            raise ValueError("environment weight must exceed the LCS weight")


DEFAULT_WEIGHTS = SimilarityWeights()


def path_strings(t: Term, reg: CommutativityRegistry | None = DEFAULT_REGISTRY):
    """Yield ``(constant name, path)`` for every constant occurrence in ``t``.

    A path alternates symbol texts and 1-based child positions.  Positions
    under symbols in ``reg`` are skipped (stripped paths); pass ``reg=None``
    to keep every position.
    """
    comm = reg.commutative if reg is not None else frozenset()
    stack = [(t, ())]
    while stack:
        node, path = stack.pop()
        if not node.children:
            if node.is_constant():
                yield node.head.text, path
            continue
        name = node.head.text
        if name in comm:
            sub = path + (name,)
            for c in node.children:
                stack.append((c, sub))
        else:
            for i, c in enumerate(node.children, 1):
                stack.append((c, path + (name, i)))


def format_path(path: tuple) -> str:
    return ".".join(str(p) for p in path)


def environments(t: Term, reg: CommutativityRegistry = DEFAULT_REGISTRY) -> dict[str, Counter]:
    envs: dict[str, Counter] = {}
    for name, path in path_strings(t, reg):
        envs.setdefault(name, Counter())[path] += 1
    return envs


def env_similarity(e1: Counter, e2: Counter) -> int:
    common = sum((e1 & e2).values())
    return 2 * common - abs(sum(e1.values()) - sum(e2.values()))


def lcs_length(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b):
            cur.append(prev[j] + 1 if ca == cb else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def similarity(c1: str, c2: str, envs1: Mapping[str, Counter], envs2: Mapping[str, Counter],
               weights: SimilarityWeights = DEFAULT_WEIGHTS) -> int:
    return (weights.env * env_similarity(envs1.get(c1, Counter()), envs2.get(c2, Counter()))
            + weights.lcs * lcs_length(c1, c2))


def similarity_matrix(envs1: Mapping[str, Counter], envs2: Mapping[str, Counter],
                      weights: SimilarityWeights = DEFAULT_WEIGHTS):
    """Return ``(old names, new names, weights)``; names are sorted."""
    rows, cols = sorted(envs1), sorted(envs2)
    w = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            w[i, j] = similarity(a, b, envs1, envs2, weights)
    return rows, cols, w


def _min_cost_assignment(cost: np.ndarray) -> np.ndarray:
    """Hungarian method with potentials for an ``n x m`` matrix, ``n <= m``.

    Every row gets a distinct column; returns ``col_of_row``.  Shortest
    augmenting paths, O(n^2 m).
    """
    n, m = cost.shape
    inf = np.iinfo(np.int64).max // 4
    u = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(m + 1, dtype=np.int64)
    row_of_col = np.zeros(m + 1, dtype=np.int64)  # 0 = free; rows are 1-based
    way = np.zeros(m + 1, dtype=np.int64)
    a = np.zeros((n + 1, m + 1), dtype=np.int64)
    a[1:, 1:] = cost
    for i in range(1, n + 1):
        row_of_col[0] = i
        j0 = 0
        minv = np.full(m + 1, inf, dtype=np.int64)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = ~used
            cur = a[i0] - u[i0] - v
            better = free & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            cand = np.where(free, minv, inf)
            j1 = int(np.argmin(cand))
            delta = cand[j1]
            u[row_of_col[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if row_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.zeros(n, dtype=np.int64)
    for j in range(1, m + 1):
        if row_of_col[j]:
            col_of_row[row_of_col[j] - 1] = j - 1
    return col_of_row


def max_weight_matching(weights) -> list[tuple[int, int]]:
    """Maximum-weight (not necessarily perfect) bipartite matching.

    ``weights`` is an ``(n_old, n_new)`` integer matrix.  Returns sorted
    ``(row, col)`` pairs; pairs of weight <= 0 never appear.
    """
    w = np.asarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.size == 0:
        return []
    # negative edges are never worth taking; with them clipped to zero an
    # optimal matching extends to one that covers the smaller side
    clipped = np.maximum(w, 0)
    if w.shape[0] <= w.shape[1]:
        pairs = list(enumerate(_min_cost_assignment(-clipped).tolist()))
    else:
        cols = _min_cost_assignment(-clipped.T).tolist()
        pairs = sorted((i, j) for j, i in enumerate(cols))
    return [(i, j) for i, j in pairs if w[i, j] > 0]


def matching_weight(weights, matching) -> int:
    w = np.asarray(weights)
    return int(sum(w[i, j] for i, j in matching))


def build_substitution(old: Term, new: Term, reg: CommutativityRegistry = DEFAULT_REGISTRY,
                       weights: SimilarityWeights = DEFAULT_WEIGHTS) -> Substitution:
    """Rename old constants onto the most similar new constants."""
    old, new = normalize(old, reg), normalize(new, reg)
    envs1, envs2 = environments(old, reg), environments(new, reg)
    rows, cols, w = similarity_matrix(envs1, envs2, weights)
    if not rows or not cols:
        return Substitution()
    # ties between optimal matchings go to pairs that keep their name
    scale = min(len(rows), len(cols)) + 1
    same = np.array([[a == b for b in cols] for a in rows], dtype=np.int64)
    pairs = max_weight_matching(w * scale + same)
    mapping = {rows[i]: cols[j] for i, j in pairs if rows[i] != cols[j]}

    # an unmatched old constant must not be captured by another's new name
    images = set(mapping.values())
    taken = set(rows) | set(cols)
    for name in rows:
        if name in images and name not in mapping:
            k = 1
            while f"{name}${k}" in taken:
                k += 1
            fresh = f"{name}${k}"
            taken.add(fresh)
            mapping[name] = fresh
    return Substitution(mapping)
