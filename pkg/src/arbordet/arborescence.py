"""Spanning arborescences of a matrix digraph and the tree-sum determinant."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator

from .digraph import Arc, MatrixDigraph
from .errors import InputError, SizeGuardError
from .weights import ONE, ZERO, Polynomial

DEFAULT_MAX_COMBINATIONS = 10**7


@dataclass(frozen=True)
class Branching:
    """A set of arcs of a host digraph.

    ``roots`` are the vertices entered by a root arc (0, v), which is what
    "rooted at v" means for a matrix digraph.
    """

    arc_ids: tuple[int, ...]
    roots: frozenset[int]

    @classmethod
    def of(cls, g: MatrixDigraph, ids: Iterable[int]) -> "Branching":
        ids = tuple(sorted(ids))
        roots = frozenset(g.arc(i).target for i in ids if g.arc(i).source == 0)
        return cls(ids, roots)

    def arcs(self, g: MatrixDigraph) -> list[Arc]:
        return [g.arc(i) for i in self.arc_ids]

    def parent_map(self, g: MatrixDigraph) -> dict[int, int]:
        return {a.target: a.source for a in self.arcs(g)}

    def __len__(self) -> int:
        return len(self.arc_ids)

    def __contains__(self, arc_id: int) -> bool:
        return arc_id in self.arc_ids


def is_branching(g: MatrixDigraph, ids: Iterable[int]) -> bool:
    """Indegree at most one everywhere and no directed cycle."""
    parent: dict[int, int] = {}
    for i in ids:
        a = g.arc(i)
        if a.target in parent:
            return False
        parent[a.target] = a.source
    for start in parent:
        seen = {start}
        v = start
        while v in parent:
            v = parent[v]
            if v in seen:
                return False
            seen.add(v)
    return True


def is_arborescence(g: MatrixDigraph, ids: Iterable[int]) -> bool:
    """Spanning check: each of 1..n entered exactly once, all reached from 0."""
    ids = list(ids)
    if len(ids) != g.n or len(set(ids)) != len(ids):
        return False
    children: dict[int, list[int]] = {}
    indeg = [0] * (g.n + 1)
    for i in ids:
        a = g.arc(i)
        indeg[a.target] += 1
        children.setdefault(a.source, []).append(a.target)
    if indeg[0] != 0 or any(d != 1 for d in indeg[1:]):
        return False
    seen = {0}
    stack = [0]
    while stack:
        for w in children.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n + 1


def _candidate_count(in_lists) -> int:
    return prod(len(lst) for lst in in_lists)


def _search(g: MatrixDigraph, max_combinations: int, with_weight: bool
            ) -> Iterator[tuple[tuple[int, ...], Polynomial]]:
    # one in-arc per vertex 1..n, pruning any choice that closes a cycle
    n = g.n
    in_lists = [sorted(g.in_arcs(v), key=lambda a: a.id) for v in range(1, n + 1)]
    if any(not lst for lst in in_lists):
        return
    count = _candidate_count(in_lists)
    if count > max_combinations:
        raise SizeGuardError(
            f"{count} in-arc combinations exceed the cap of {max_combinations}; "
            "raise max_combinations to proceed")
    parent = [-1] * (n + 1)
    chosen: list[int] = []

    def closes_cycle(v: int, s: int) -> bool:
        while s > 0:
            if s == v:
                return True
            s = parent[s]
        return False

    def rec(v: int, weight: Polynomial):
        if v > n:
            yield tuple(chosen), weight
            return
        for a in in_lists[v - 1]:
            if closes_cycle(v, a.source):
                continue
            parent[v] = a.source
            chosen.append(a.id)
            yield from rec(v + 1, weight * a.weight if with_weight else weight)
            chosen.pop()
            parent[v] = -1

    yield from rec(1, ONE)


def iter_arborescences(g: MatrixDigraph, max_combinations: int = DEFAULT_MAX_COMBINATIONS
                       ) -> Iterator[Branching]:
    """Stream spanning arborescences rooted at vertex 0."""
    for ids, _ in _search(g, max_combinations, with_weight=False):
        yield Branching.of(g, ids)


def enumerate_arborescences(g: MatrixDigraph, max_combinations: int = DEFAULT_MAX_COMBINATIONS
                            ) -> list[Branching]:
    """All spanning arborescences, ordered lexicographically by sorted arc ids."""
    found = list(iter_arborescences(g, max_combinations))
    found.sort(key=lambda b: b.arc_ids)
    return found


def count_arborescences(g: MatrixDigraph, max_combinations: int = DEFAULT_MAX_COMBINATIONS) -> int:
    return sum(1 for _ in _search(g, max_combinations, with_weight=False))


def branching_weight(g: MatrixDigraph, B: Branching | Iterable[int]) -> Polynomial:
    ids = B.arc_ids if isinstance(B, Branching) else tuple(B)
    w = ONE
    for i in ids:
        if not g.has_arc(i):
            raise InputError(f"arc {i} is not in the digraph")
        w = w * g.arc(i).weight
    return w


def det_tree_sum(g: MatrixDigraph, max_combinations: int = DEFAULT_MAX_COMBINATIONS) -> Polynomial:
    """det(A) as the total weight of the spanning arborescences of its digraph."""
    total = ZERO
    for _, w in _search(g, max_combinations, with_weight=True):
        total = total + w
    return total
