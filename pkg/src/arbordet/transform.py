"""Arc moves that leave the arborescence weight sum unchanged, and vertex isolation."""

from __future__ import annotations

from .digraph import MatrixDigraph, merge_parallel_arcs, strongly_connected
from .errors import PreconditionError


def move_arc(g: MatrixDigraph, arc_id: int, new_source: int) -> MatrixDigraph:
    """Move the source of an arc, keeping its target, weight and id.

    The move is refused unless the old source and the target are not
    strongly connected in ``g`` and the new source and the target are not
    strongly connected in the result.
    """
    arc = g.arc(arc_id)
    g.check_vertex(new_source)
    if new_source == arc.target:
        raise PreconditionError(f"moving arc {arc_id} to source {new_source} would create a loop")
    if strongly_connected(g, arc.source, arc.target):
        raise PreconditionError(
            f"arc {arc_id}: source {arc.source} and target {arc.target} are strongly connected before the move")
    moved = g.replace_arc(arc.with_source(new_source))
    if strongly_connected(moved, new_source, arc.target):
        raise PreconditionError(
            f"arc {arc_id}: new source {new_source} and target {arc.target} are strongly connected after the move")
    return moved


def is_explicitly_rooted(g: MatrixDigraph, j: int) -> bool:
    ins = g.in_arcs(j)
    return bool(ins) and all(a.source == 0 for a in ins)


def isolate_vertex(g: MatrixDigraph, j: int) -> MatrixDigraph:
    """Move every out arc (j, k) of an explicitly rooted vertex to (0, k).

    Parallel arcs created by the moves are merged, which renumbers arc ids.
    """
    g.check_vertex(j)
    if j == 0 or not is_explicitly_rooted(g, j):
        raise PreconditionError(f"vertex {j} is not explicitly rooted (its only in arcs must come from 0)")
    outs = g.out_arcs(j)
    if not outs and len(g.in_arcs(j)) == 1:
        return g
    h = g
    for a in outs:
        h = move_arc(h, a.id, 0)
    return merge_parallel_arcs(h)
