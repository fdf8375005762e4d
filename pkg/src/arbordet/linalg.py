"""Incidence and weight matrices, the Cauchy-Binet route, and exact determinants.

:func:`det_exact` is the oracle everything else is checked against.  It has
two independent implementations, Laplace expansion with memoised minors and
Bareiss fraction-free elimination, so the oracle can be checked against
itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .digraph import MatrixDigraph, SymbolicMatrix, matrix_from_digraph
from .errors import InputError, SizeGuardError
from .weights import ONE, ZERO, Polynomial

log = logging.getLogger(__name__)

CAUCHY_BINET_MAX_ARCS = 20


@dataclass(frozen=True)
class IncidenceMatrix:
    """(n+1) x m matrix with +1 at the arc's target row and -1 at its source row."""

    arc_ids: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(row[k] for row in self.rows)

    def submatrix(self, ids: Sequence[int], strike_root: bool = True) -> list[list[int]]:
        cols = [self.arc_ids.index(i) for i in ids]
        start = 1 if strike_root else 0
        return [[row[c] for c in cols] for row in self.rows[start:]]


@dataclass(frozen=True)
class ArcWeightMatrix:
    """m x (n+1) matrix; row k holds w(e_k) in the column of the arc's target."""

    arc_ids: tuple[int, ...]
    rows: tuple[tuple[Polynomial, ...], ...]

    def submatrix(self, ids: Sequence[int], strike_root: bool = True) -> list[list[Polynomial]]:
        start = 1 if strike_root else 0
        return [list(self.rows[self.arc_ids.index(i)][start:]) for i in ids]


def build_incidence(g: MatrixDigraph) -> IncidenceMatrix:
    rows = [[0] * g.m for _ in range(g.n + 1)]
    for k, a in enumerate(g.arcs):
        rows[a.target][k] += 1
        rows[a.source][k] -= 1
    return IncidenceMatrix(tuple(a.id for a in g.arcs), tuple(tuple(r) for r in rows))


def build_arc_weights(g: MatrixDigraph) -> ArcWeightMatrix:
    rows = []
    for a in g.arcs:
        row = [ZERO] * (g.n + 1)
        row[a.target] = a.weight
        rows.append(tuple(row))
    return ArcWeightMatrix(tuple(a.id for a in g.arcs), tuple(rows))


def incidence_times_weights(M: IncidenceMatrix, W: ArcWeightMatrix) -> SymbolicMatrix:
    size = len(M.rows)
    out = [[ZERO] * size for _ in range(size)]
    for i, mrow in enumerate(M.rows):
        for k, mik in enumerate(mrow):
            if not mik:
                continue
            wrow = W.rows[k]
            for j in range(size):
                if wrow[j]:
                    out[i][j] = out[i][j] + wrow[j] * mik
    return SymbolicMatrix.from_rows(out, extended=True)


def verify_factorization(g: MatrixDigraph, target: SymbolicMatrix | None = None) -> bool:
    """Check A' = M W entry by entry.

    ``target`` defaults to the extended matrix of ``g``; pass a previously
    captured matrix to check a digraph against it.
    """
    if target is None:
        target = matrix_from_digraph(g, extended=True)
    product = incidence_times_weights(build_incidence(g), build_arc_weights(g))
    return product.entries == target.entries


# -- exact determinants -------------------------------------------------------


def _as_rows(A) -> list[list[Polynomial]]:
    if isinstance(A, SymbolicMatrix):
        return A.rows()
    rows = [[Polynomial.coerce(x) for x in row] for row in A]
    for r, row in enumerate(rows):
        if len(row) != len(rows):
            raise InputError(f"matrix is not square: row {r} has {len(row)} entries")
    return rows


def det_cofactor(A) -> Polynomial:
    """Laplace expansion along successive rows, memoised on the remaining columns."""
    rows = _as_rows(A)
    n = len(rows)
    if n == 0:
        return ONE
    memo: dict[int, Polynomial] = {0: ONE}

    def minor(mask: int) -> Polynomial:
        # determinant of the last popcount(mask) rows restricted to columns in mask
        hit = memo.get(mask)
        if hit is not None:
            return hit
        r = n - bin(mask).count("1")
        total = ZERO
        sign = 1
        for c in range(n):
            if mask >> c & 1:
                entry = rows[r][c]
                if entry:
                    sub = minor(mask & ~(1 << c))
                    if sub:
                        term = entry * sub
                        total = total + term if sign > 0 else total - term
                sign = -sign
        memo[mask] = total
        return total

    return minor((1 << n) - 1)


def det_bareiss(A) -> Polynomial:
    """Fraction-free Gaussian elimination with row pivoting."""
    rows = _as_rows(A)
    n = len(rows)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not rows[k][k]:
            for r in range(k + 1, n):
                if rows[r][k]:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = pivot * rows[i][j] - rows[i][k] * rows[k][j]
                rows[i][j] = val.exact_div(prev) if prev != ONE else val
            rows[i][k] = ZERO
        prev = pivot
    det = rows[n - 1][n - 1]
    return det if sign > 0 else -det


def det_exact(A, method: str = "auto") -> Polynomial:
    """Exact determinant of a square polynomial matrix.

    ``method`` is ``"cofactor"``, ``"bareiss"`` or ``"auto"`` (cofactor up to
    6 x 6, Bareiss beyond).
    """
    rows = _as_rows(A)
    if method == "auto":
        method = "cofactor" if len(rows) <= 6 else "bareiss"
    if method == "cofactor":
        return det_cofactor(rows)
    if method == "bareiss":
        return det_bareiss(rows)
    raise ValueError(f"unknown determinant method {method!r}")


def _int_det(rows: list[list[int]]) -> int:
    # Bareiss over the integers
    rows = [list(r) for r in rows]
    n = len(rows)
    sign, prev = 1, 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k]:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        p = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (p * rows[i][j] - rows[i][k] * rows[k][j]) // prev
        prev = p
    return sign * rows[n - 1][n - 1] if n else 1


# -- Cauchy-Binet route -------------------------------------------------------


def _check_subset(g: MatrixDigraph, S) -> list[int]:
    ids = sorted(S)
    if len(set(ids)) != len(ids):
        raise InputError("arc subset contains duplicates")
    if len(ids) != g.n:
        raise InputError(f"arc subset must have exactly n = {g.n} arcs, got {len(ids)}")
    for i in ids:
        g.arc(i)
    return _canonical(g, ids)


def _canonical(g: MatrixDigraph, ids) -> list[int]:
    wanted = set(ids)
    return [a.id for a in g.arcs if a.id in wanted]


def det_WS(g: MatrixDigraph, S, _W: ArcWeightMatrix | None = None) -> Polynomial:
    """Determinant of the arc-weight submatrix for subset S, column 0 struck."""
    ids = _check_subset(g, S)
    W = _W or build_arc_weights(g)
    return det_exact(W.submatrix(ids))


def det_MS(g: MatrixDigraph, S, _M: IncidenceMatrix | None = None) -> int:
    """Determinant of the incidence submatrix for subset S, row 0 struck."""
    ids = _check_subset(g, S)
    M = _M or build_incidence(g)
    return _int_det(M.submatrix(ids))


def cauchy_binet_terms(g: MatrixDigraph, max_arcs: int = CAUCHY_BINET_MAX_ARCS
                       ) -> Iterator[tuple[tuple[int, ...], int, Polynomial]]:
    """Yield ``(S, det(M_S), det(W_S))`` for every n-subset S of arc ids.

    Subsets come in lexicographic order of their sorted ids.  ``det(W_S)`` is
    only formed when ``det(M_S)`` is non-zero; otherwise it is reported as 0.
    """
    if g.m > max_arcs:
        raise SizeGuardError(f"Cauchy-Binet expansion over {g.m} arcs exceeds the cap of {max_arcs}")
    M = build_incidence(g)
    W = build_arc_weights(g)
    for S in combinations(sorted(a.id for a in g.arcs), g.n):
        ids = _canonical(g, S)
        dm = _int_det(M.submatrix(ids))
        dw = det_exact(W.submatrix(ids)) if dm else ZERO
        if dm and dw:
            log.debug("subset %s: det(M_S)=%d det(W_S)=%s", S, dm, dw)
        yield S, dm, dw


def cauchy_binet_det(g: MatrixDigraph, max_arcs: int = CAUCHY_BINET_MAX_ARCS) -> Polynomial:
    """det(A) as the sum of det(M_S) det(W_S) over all n-arc subsets."""
    total = ZERO
    for _, dm, dw in cauchy_binet_terms(g, max_arcs):
        if dm and dw:
            total = total + dw * dm
    return total
