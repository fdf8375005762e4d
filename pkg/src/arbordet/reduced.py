"""Reduced matrices and their determinants as signed sums over rooted forests.

A reduced matrix A^{P,Q} is A with column q_k replaced by the unit column
that has its 1 in row p_k.  Its determinant is computed graphically: the
columns listed in Q are first permuted so that every q_k that also appears in
P sits at the position it has in P, then the qualifying arborescences of the
resulting digraph are summed with a cycle sign.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .arborescence import DEFAULT_MAX_COMBINATIONS, Branching, det_tree_sum, iter_arborescences
from .digraph import MatrixDigraph, SymbolicMatrix, digraph_from_matrix
from .errors import InputError, PreconditionError, SizeGuardError
from .weights import ONE, ZERO, Polynomial

MAX_EXCHANGE_SEARCH = 8


@dataclass(frozen=True)
class ReductionSpec:
    """Row list P and column list Q, both 1-based and of equal length."""

    P: tuple[int, ...]
    Q: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(int(p) for p in self.P))
        object.__setattr__(self, "Q", tuple(int(q) for q in self.Q))
        if not self.P or len(self.P) != len(self.Q):
            raise InputError(f"P and Q must be non-empty and of equal length, got {len(self.P)} and {len(self.Q)}")
        for name, idx in (("P", self.P), ("Q", self.Q)):
            if len(set(idx)) != len(idx):
                raise InputError(f"{name} contains duplicate indices: {list(idx)}")

    @property
    def m(self) -> int:
        return len(self.P)

    def validate(self, n: int) -> None:
        if self.m > n:
            raise InputError(f"|P| = {self.m} exceeds matrix dimension {n}")
        for name, idx in (("P", self.P), ("Q", self.Q)):
            for v in idx:
                if not 1 <= v <= n:
                    raise InputError(f"{name} index {v} out of range 1..{n}")

    def to_json_dict(self) -> dict:
        return {"P": list(self.P), "Q": list(self.Q)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReductionSpec":
        try:
            return cls(tuple(data["P"]), tuple(data["Q"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"reduction spec needs lists 'P' and 'Q': {exc}") from None


@dataclass(frozen=True)
class NormalizedReduction:
    """Q rearranged so each element shared with P sits at its P position.

    ``R`` and ``S_mismatch`` hold 0-based positions k with tilde_Q[k] == P[k]
    and tilde_Q[k] != P[k] respectively.
    """

    P: tuple[int, ...]
    tilde_Q: tuple[int, ...]
    N_Q: int
    R: tuple[int, ...]
    S_mismatch: tuple[int, ...]

    @property
    def sign(self) -> int:
        return -1 if self.N_Q % 2 else 1

    @property
    def spec(self) -> ReductionSpec:
        return ReductionSpec(self.P, self.tilde_Q)


def reduce_matrix(A: SymbolicMatrix, spec: ReductionSpec) -> SymbolicMatrix:
    if A.extended:
        raise InputError("reduce_matrix expects a non-extended matrix")
    spec.validate(A.n)
    rows = A.rows()
    for p, q in zip(spec.P, spec.Q):
        for i in range(A.n):
            rows[i][q - 1] = ONE if i == p - 1 else ZERO
    return SymbolicMatrix.from_rows(rows)


def _aligned(P: Sequence[int], Q: Sequence[int]) -> bool:
    pset = set(P)
    return all(q == p for p, q in zip(P, Q) if q in pset)


def normalize_targets(spec: ReductionSpec, max_size: int = MAX_EXCHANGE_SEARCH) -> NormalizedReduction:
    """Breadth-first search for a shortest sequence of exchanges aligning Q with P.

    Exchanges are tried in lexicographic order of position pairs, so the
    first aligned arrangement found is deterministic.
    """
    m = spec.m
    if m > max_size:
        raise SizeGuardError(f"exchange search over {m} positions exceeds the cap of {max_size}")
    start = spec.Q
    depth = {start: 0}
    queue = deque([start])
    found = None
    while queue:
        state = queue.popleft()
        if _aligned(spec.P, state):
            found = state
            break
        for i in range(m):
            for j in range(i + 1, m):
                nxt = list(state)
                nxt[i], nxt[j] = nxt[j], nxt[i]
                nxt = tuple(nxt)
                if nxt not in depth:
                    depth[nxt] = depth[state] + 1
                    queue.append(nxt)
    assert found is not None
    R = tuple(k for k in range(m) if found[k] == spec.P[k])
    S = tuple(k for k in range(m) if found[k] != spec.P[k])
    return NormalizedReduction(spec.P, found, depth[found], R, S)


def qualifying_digraph(A: SymbolicMatrix, norm: NormalizedReduction) -> MatrixDigraph:
    """Digraph of A^{P, tilde Q} in which each tilde_q keeps only its unit root arc."""
    reduced = reduce_matrix(A, norm.spec)
    g = digraph_from_matrix(reduced)
    qset = set(norm.tilde_Q)
    drop = [a.id for a in g.arcs if a.target in qset and a.source != 0]
    return g.without_arcs(drop)


def _top_map(B: Branching, g: MatrixDigraph) -> dict[int, int]:
    # vertex -> the child of the root 0 on its path
    parent = B.parent_map(g)
    top = {}
    for v in parent:
        u = v
        while parent[u] != 0:
            u = parent[u]
        top[v] = u
    return top


def forest_assignment(B: Branching, norm: NormalizedReduction, g: MatrixDigraph) -> dict[int, int] | None:
    """Map k -> j where the tree hanging from tilde_q_k contains p_j.

    Returns None when B is not rooted at every tilde_q_k or when some tree
    does not contain exactly one vertex of P.
    """
    if not set(norm.tilde_Q) <= B.roots:
        return None
    top = _top_map(B, g)
    pos_of_root = {q: k for k, q in enumerate(norm.tilde_Q)}
    sigma: dict[int, int] = {}
    for j, p in enumerate(norm.P):
        k = pos_of_root.get(top.get(p))
        if k is None or k in sigma:
            return None
        sigma[k] = j
    return sigma


def epsilon_of(B: Branching, norm: NormalizedReduction, g: MatrixDigraph) -> int:
    """Cycle sign: product of (-1)^(N_C - 1) over the cycles of k -> j."""
    sigma = forest_assignment(B, norm, g)
    if sigma is None:
        raise PreconditionError("branching is not rooted at every tilde_q with one P vertex per tree")
    eps = 1
    seen = set()
    for start in norm.S_mismatch:
        if start in seen:
            continue
        length = 0
        k = start
        while k not in seen:
            seen.add(k)
            length += 1
            k = sigma[k]
        if length % 2 == 0:
            eps = -eps
    return eps


def det_reduced_graphical(A: SymbolicMatrix, spec: ReductionSpec,
                          max_combinations: int = DEFAULT_MAX_COMBINATIONS) -> Polynomial:
    """det(A^{P,Q}) as (-1)^N_Q times the signed weight of qualifying branchings."""
    spec.validate(A.n)
    norm = normalize_targets(spec)
    g = qualifying_digraph(A, norm)
    total = ZERO
    for B in iter_arborescences(g, max_combinations):
        if forest_assignment(B, norm, g) is None:
            continue
        w = ONE
        for a in B.arcs(g):
            w = w * a.weight
        total = total + w if epsilon_of(B, norm, g) > 0 else total - w
    return total if norm.sign > 0 else -total


def det_reduced_tree_sum(A: SymbolicMatrix, spec: ReductionSpec,
                         max_combinations: int = DEFAULT_MAX_COMBINATIONS) -> Polynomial:
    """Unfiltered route: (-1)^N_Q times the tree sum over every arborescence of A^{P, tilde Q}."""
    norm = normalize_targets(spec)
    total = det_tree_sum(digraph_from_matrix(reduce_matrix(A, norm.spec)), max_combinations)
    return total if norm.sign > 0 else -total


def _special_column(A: SymbolicMatrix, j: int) -> list[int] | None:
    ones = []
    for i, x in enumerate(A.column(j)):
        if x.is_zero():
            continue
        if x == ONE:
            ones.append(i + 1)
        else:
            return None
    return ones or None


def split_modified_reduced(A_mod: SymbolicMatrix, columns: Sequence[int] | None = None
                           ) -> list[tuple[ReductionSpec, int]]:
    """Write a matrix with 0/1 columns as a sum of reduced matrices.

    Each listed column (1-based; auto-detected when ``columns`` is None)
    keeps a single one of its 1s in every summand.  Choices that put two
    unit columns on the same row give a zero determinant and are dropped.
    Each summand is exactly ``reduce_matrix(A_mod, spec)``, so its sign is
    always +1.
    """
    n = A_mod.n
    if columns is None:
        columns = [j + 1 for j in range(n) if _special_column(A_mod, j) is not None]
        if not columns:
            raise InputError("matrix has no column made of 0s and 1s")
    choices = []
    for q in columns:
        if not 1 <= q <= n:
            raise InputError(f"column {q} out of range 1..{n}")
        ones = _special_column(A_mod, q - 1)
        if ones is None:
            raise InputError(f"column {q} is not made of 0s and at least one 1")
        choices.append(ones)
    out = []
    for rows in product(*choices):
        if len(set(rows)) != len(rows):
            continue
        out.append((ReductionSpec(tuple(rows), tuple(columns)), 1))
    return out
