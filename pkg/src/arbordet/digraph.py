"""Matrix digraphs and their correspondence with square matrices.

Vertex 0 is the root.  An off-diagonal matrix term ``-u`` at (i, j) becomes
an arc i -> j of weight ``u``; the column sum of column j becomes the weight
of the root arc 0 -> j.  Arcs with identically zero weight are never created.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError
from .weights import ZERO, Polynomial, parse_polynomial, weight_symbol


@dataclass(frozen=True)
class SymbolicMatrix:
    """Square matrix of polynomials.

    When ``extended`` is true the matrix carries the extra row and column
    indexed 0 and has dimension n + 1.
    """

    entries: tuple[tuple[Polynomial, ...], ...]
    extended: bool = False

    def __post_init__(self):
        rows = tuple(tuple(Polynomial.coerce(x) for x in row) for row in self.entries)
        for r, row in enumerate(rows):
            if len(row) != len(rows):
                raise InputError(f"matrix is not square: row {r} has {len(row)} entries, expected {len(rows)}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], extended: bool = False) -> "SymbolicMatrix":
        return cls(tuple(tuple(row) for row in rows), extended)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return self.size - 1 if self.extended else self.size

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(row[j] for row in self.entries)

    def column_sum(self, j: int) -> Polynomial:
        total = ZERO
        for row in self.entries:
            total = total + row[j]
        return total

    def rows(self) -> list[list[Polynomial]]:
        return [list(row) for row in self.entries]

    def strike_root(self) -> "SymbolicMatrix":
        """Drop row 0 and column 0 of an extended matrix."""
        if not self.extended:
            raise InputError("matrix is not extended")
        return SymbolicMatrix(tuple(row[1:] for row in self.entries[1:]))

    def substitute(self, assignment) -> "SymbolicMatrix":
        return SymbolicMatrix(
            tuple(tuple(Polynomial.const(x.evaluate(assignment)) for x in row) for row in self.entries),
            self.extended,
        )

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)

    def __str__(self) -> str:
        return self.to_text()


def generic_matrix(n: int) -> SymbolicMatrix:
    """The fully symbolic n x n matrix with a_ij = -v_ij and a_jj = sum_k v_kj."""
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                total = ZERO
                for k in range(1, n + 1):
                    total = total + weight_symbol(k, j)
                row.append(total)
            else:
                row.append(-weight_symbol(i, j))
        rows.append(row)
    return SymbolicMatrix.from_rows(rows)


@dataclass(frozen=True)
class Arc:
    id: int
    source: int
    target: int
    weight: Polynomial

    def __post_init__(self):
        if self.source == self.target:
            raise InputError(f"arc {self.id} is a loop at vertex {self.source}")
        if self.target == 0:
            raise InputError(f"arc {self.id} enters the root vertex")

    def with_source(self, source: int) -> "Arc":
        return Arc(self.id, source, self.target, self.weight)


def _canonical_key(arc: Arc):
    return (arc.target, arc.source, arc.id)


@dataclass(frozen=True)
class MatrixDigraph:
    """Rooted weighted multidigraph on vertices 0..n.

    Arcs are held in canonical order: sorted by (target, source, id).
    Operations that add or drop arcs renumber ids 1..m in canonical order;
    moving an arc keeps its id.
    """

    n: int
    arcs: tuple[Arc, ...] = ()
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        arcs = tuple(sorted(self.arcs, key=_canonical_key))
        seen = {}
        for arc in arcs:
            if arc.id in seen:
                raise InputError(f"duplicate arc id {arc.id}")
            for v in (arc.source, arc.target):
                if not 0 <= v <= self.n:
                    raise InputError(f"arc {arc.id} references vertex {v} outside 0..{self.n}")
            seen[arc.id] = arc
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_by_id", seen)

    @classmethod
    def build(cls, n: int, arcs: Iterable[tuple[int, int, Polynomial]]) -> "MatrixDigraph":
        """Digraph from (source, target, weight) triples; zero weights are dropped."""
        triples = []
        for s, t, w in arcs:
            w = Polynomial.coerce(w)
            if not w.is_zero():
                triples.append((s, t, w))
        order = sorted(range(len(triples)), key=lambda k: (triples[k][1], triples[k][0], k))
        return cls(n, tuple(Arc(idx + 1, *triples[k]) for idx, k in enumerate(order)))

    def relabeled(self) -> "MatrixDigraph":
        """Same arcs with ids renumbered 1..m in canonical order."""
        return MatrixDigraph(self.n, tuple(Arc(k + 1, a.source, a.target, a.weight) for k, a in enumerate(self.arcs)))

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def vertices(self) -> range:
        return range(self.n + 1)

    def arc(self, arc_id: int) -> Arc:
        try:
            return self._by_id[arc_id]
        except KeyError:
            raise InputError(f"no arc with id {arc_id}") from None

    def has_arc(self, arc_id: int) -> bool:
        return arc_id in self._by_id

    def in_arcs(self, v: int) -> list[Arc]:
        return [a for a in self.arcs if a.target == v]

    def out_arcs(self, v: int) -> list[Arc]:
        return [a for a in self.arcs if a.source == v]

    def root_arcs(self, v: int) -> list[Arc]:
        return [a for a in self.arcs if a.source == 0 and a.target == v]

    def indegree(self, v: int) -> int:
        return sum(1 for a in self.arcs if a.target == v)

    def outdegree(self, v: int) -> int:
        return sum(1 for a in self.arcs if a.source == v)

    def without_arcs(self, ids: Iterable[int]) -> "MatrixDigraph":
        drop = set(ids)
        return MatrixDigraph(self.n, tuple(a for a in self.arcs if a.id not in drop)).relabeled()

    def replace_arc(self, arc: Arc) -> "MatrixDigraph":
        self.arc(arc.id)
        return MatrixDigraph(self.n, tuple(arc if a.id == arc.id else a for a in self.arcs))

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v <= self.n:
            raise InputError(f"unknown vertex {v!r}; vertices are 0..{self.n}")

    def successors(self) -> dict[int, set[int]]:
        succ = defaultdict(set)
        for a in self.arcs:
            succ[a.source].add(a.target)
        return succ

    def reachable_from(self, v: int) -> set[int]:
        self.check_vertex(v)
        succ = self.successors()
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in succ.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def has_path(self, a: int, b: int) -> bool:
        self.check_vertex(b)
        return b in self.reachable_from(a)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "arcs": [
                {"id": a.id, "source": a.source, "target": a.target, "weight": str(a.weight)}
                for a in self.arcs
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "MatrixDigraph":
        try:
            n = int(data["n"])
            raw = data["arcs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"digraph JSON needs integer 'n' and list 'arcs': {exc}") from None
        if any("id" in item for item in raw):
            arcs = []
            for k, item in enumerate(raw):
                if "id" not in item:
                    raise InputError(f"arc {k}: either every arc or no arc carries an id")
                arcs.append(Arc(int(item["id"]), int(item["source"]), int(item["target"]),
                                _weight_of(item, k)))
            return cls(n, tuple(a for a in arcs if not a.weight.is_zero()))
        return cls.build(n, ((int(item["source"]), int(item["target"]), _weight_of(item, k))
                             for k, item in enumerate(raw)))

    @classmethod
    def from_json(cls, text: str) -> "MatrixDigraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json_dict(data)


def _weight_of(item: dict, k: int) -> Polynomial:
    w = item.get("weight", 1)
    try:
        return parse_polynomial(w) if isinstance(w, str) else Polynomial.coerce(w)
    except (InputError, TypeError) as exc:
        raise InputError(f"arc {k}: bad weight {w!r}: {exc}") from None


def digraph_from_matrix(A: SymbolicMatrix, terms: Sequence[Sequence[Sequence] | None] | None = None) -> MatrixDigraph:
    """Build the matrix digraph of a square matrix.

    ``terms[i][j]`` (0-based, optional) splits entry (i, j) into the terms
    ``u^(l)``: for i != j they must satisfy ``a_ij == -sum(u)``, on the
    diagonal they must sum to the column sum of column j.  A missing entry
    means a single term.
    """
    if A.extended:
        raise InputError("digraph_from_matrix expects a non-extended matrix")
    n = A.n
    triples = []
    for j in range(n):
        for i in range(n):
            explicit = _entry_terms(terms, i, j)
            if i == j:
                target_sum = A.column_sum(j)
                parts = [target_sum] if explicit is None else explicit
                if explicit is not None and _sum(parts) != target_sum:
                    raise InputError(
                        f"diagonal terms at ({i + 1}, {j + 1}) sum to {_sum(parts)}, "
                        f"but column {j + 1} sums to {target_sum}")
                triples.extend((0, j + 1, p) for p in parts)
            else:
                parts = [-A[i, j]] if explicit is None else explicit
                if explicit is not None and -_sum(parts) != A[i, j]:
                    raise InputError(
                        f"terms at ({i + 1}, {j + 1}) give {-_sum(parts)}, entry is {A[i, j]}")
                triples.extend((i + 1, j + 1, p) for p in parts)
    return MatrixDigraph.build(n, triples)


def _entry_terms(terms, i, j):
    if terms is None:
        return None
    try:
        cell = terms[i][j]
    except (IndexError, KeyError, TypeError):
        raise InputError(f"term lists do not cover entry ({i + 1}, {j + 1})") from None
    if cell is None:
        return None
    return [Polynomial.coerce(x) for x in cell]


def _sum(parts) -> Polynomial:
    total = ZERO
    for p in parts:
        total = total + p
    return total


def matrix_from_digraph(g: MatrixDigraph, extended: bool = False) -> SymbolicMatrix:
    """Matrix whose digraph is ``g``.

    a_ii is the total weight entering i and a_ij (i != j) is minus the total
    weight of arcs i -> j.  The extended form also has row and column 0.
    """
    size = g.n + 1
    grid = [[ZERO] * size for _ in range(size)]
    for a in g.arcs:
        grid[a.target][a.target] = grid[a.target][a.target] + a.weight
        grid[a.source][a.target] = grid[a.source][a.target] - a.weight
    if extended:
        return SymbolicMatrix.from_rows(grid, extended=True)
    return SymbolicMatrix.from_rows(row[1:] for row in grid[1:])


def strongly_connected(g: MatrixDigraph, a: int, b: int) -> bool:
    """True iff a reaches b and b reaches a (every vertex is strongly connected to itself)."""
    g.check_vertex(a)
    g.check_vertex(b)
    if a == b:
        return True
    return b in g.reachable_from(a) and a in g.reachable_from(b)


def merge_parallel_arcs(g: MatrixDigraph) -> MatrixDigraph:
    """Replace each bundle of parallel arcs by one arc carrying the summed weight."""
    groups: dict[tuple[int, int], Polynomial] = {}
    for a in g.arcs:
        key = (a.source, a.target)
        groups[key] = groups.get(key, ZERO) + a.weight
    if len(groups) == g.m:
        return g
    return MatrixDigraph.build(g.n, ((s, t, w) for (s, t), w in groups.items()))


