import random

import pytest

from arbordet import (
    MatrixDigraph,
    SymbolicMatrix,
    det_exact,
    det_tree_sum,
    digraph_from_matrix,
    generic_matrix,
    matrix_from_digraph,
    merge_parallel_arcs,
    parse_polynomial,
    strongly_connected,
    weight_symbol,
)
from arbordet.digraph import Arc
from arbordet.errors import InputError

from conftest import random_digraph, random_int_matrix

v = weight_symbol


def triples(g):
    return [(a.source, a.target, str(a.weight)) for a in g.arcs]


def test_generic3_digraph(g3):
    assert g3.n == 3
    assert g3.m == 9
    expected = {
        (0, 1, "v_1_1"), (0, 2, "v_2_2"), (0, 3, "v_3_3"),
        (1, 2, "v_1_2"), (2, 1, "v_2_1"), (1, 3, "v_1_3"),
        (3, 1, "v_3_1"), (3, 2, "v_3_2"), (2, 3, "v_2_3"),
    }
    assert set(triples(g3)) == expected
    # canonical order: by target, then source
    assert [(a.target, a.source) for a in g3.arcs] == sorted((a.target, a.source) for a in g3.arcs)
    assert [a.id for a in g3.arcs] == list(range(1, 10))


def test_one_by_one():
    g = digraph_from_matrix(SymbolicMatrix.from_rows([[v(1, 1)]]))
    assert triples(g) == [(0, 1, "v_1_1")]


def test_zero_column_sum_matrix_has_no_root_arcs():
    A = SymbolicMatrix.from_rows([[v(2, 1), -v(1, 2)], [-v(2, 1), v(1, 2)]])
    g = digraph_from_matrix(A)
    assert set(triples(g)) == {(1, 2, "v_1_2"), (2, 1, "v_2_1")}
    assert det_exact(A).is_zero()
    assert det_tree_sum(g).is_zero()


def test_explicit_terms_give_parallel_arcs():
    u = lambda i, j, l: weight_symbol(i, j, l)  # noqa: E731
    A = SymbolicMatrix.from_rows([
        [u(0, 1, 1) + u(0, 1, 2) + u(2, 1, 1), -u(1, 2, 1) - u(1, 2, 2)],
        [-u(2, 1, 1), v(2, 2) + u(1, 2, 1) + u(1, 2, 2)],
    ])
    terms = [[[u(0, 1, 1), u(0, 1, 2)], [u(1, 2, 1), u(1, 2, 2)]],
             [None, None]]
    g = digraph_from_matrix(A, terms)
    assert g.m == 6
    assert len([a for a in g.arcs if (a.source, a.target) == (1, 2)]) == 2
    assert len(g.root_arcs(1)) == 2
    assert matrix_from_digraph(g) == A
    assert det_tree_sum(g) == det_exact(A)


def test_inconsistent_terms_rejected():
    A = SymbolicMatrix.from_rows([[v(1, 1), -v(1, 2)], [0, v(2, 2) + v(1, 2)]])
    with pytest.raises(InputError):
        digraph_from_matrix(A, [[None, [v(1, 2), v(1, 3)]], [None, None]])
    with pytest.raises(InputError):
        digraph_from_matrix(A, [[[v(1, 2)], None], [None, None]])


def test_non_square_rejected():
    with pytest.raises(InputError):
        SymbolicMatrix.from_rows([[1, 2], [3]])


def test_matrix_round_trip_generic3(g3, generic3):
    assert matrix_from_digraph(g3) == generic3


def test_extended_matrix(g3, generic3):
    ext = matrix_from_digraph(g3, extended=True)
    assert ext.extended and ext.size == 4
    assert ext[0, 0].is_zero()
    for i in range(1, 4):
        assert ext[0, i] == -v(i, i)
        assert ext[i, 0].is_zero()
    assert ext.strike_root() == generic3


def test_round_trip_random_matrices():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 5)
        A = random_int_matrix(rng, n)
        assert matrix_from_digraph(digraph_from_matrix(A)) == A
    for n in range(1, 5):
        A = generic_matrix(n)
        assert matrix_from_digraph(digraph_from_matrix(A)) == A


def test_digraph_round_trip_on_merged_digraphs():
    rng = random.Random(4)
    for _ in range(30):
        g = merge_parallel_arcs(random_digraph(rng, rng.randint(1, 5)))
        back = digraph_from_matrix(matrix_from_digraph(g))
        assert triples(back) == triples(g)


def test_structural_invariants():
    rng = random.Random(5)
    for _ in range(30):
        g = random_digraph(rng, rng.randint(1, 6))
        assert g.indegree(0) == 0
        assert all(a.source != a.target for a in g.arcs)
        assert len({a.id for a in g.arcs}) == g.m
    with pytest.raises(InputError):
        Arc(1, 2, 2, v(2, 2))
    with pytest.raises(InputError):
        Arc(1, 2, 0, v(2, 2))


def test_strongly_connected_examples(g3):
    assert strongly_connected(g3, 1, 2)
    for i in range(1, 4):
        assert not strongly_connected(g3, 0, i)
        assert strongly_connected(g3, i, i)
    with pytest.raises(InputError):
        strongly_connected(g3, 1, 7)


def test_rooted_vertices_not_strongly_connected(g3):
    from arbordet import split_rooting

    rooted_at_1, _ = split_rooting(g3, 1)
    assert not strongly_connected(rooted_at_1, 1, 2)
    assert not strongly_connected(rooted_at_1, 1, 3)
    assert strongly_connected(rooted_at_1, 2, 3)


def _closure(g):
    n = g.n + 1
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a in g.arcs:
        reach[a.source][a.target] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def test_strongly_connected_matches_transitive_closure():
    rng = random.Random(6)
    for _ in range(60):
        g = random_digraph(rng, rng.randint(1, 6), density=rng.choice([0.15, 0.3, 0.5]))
        reach = _closure(g)
        for a in g.vertices:
            for b in g.vertices:
                assert strongly_connected(g, a, b) == (reach[a][b] and reach[b][a])


def test_merge_parallel_arcs():
    g = MatrixDigraph.build(3, [(0, 2, v(2, 2)), (0, 2, v(1, 2)), (0, 1, v(1, 1)), (0, 3, v(3, 3))])
    merged = merge_parallel_arcs(g)
    assert merged.m == 3
    assert merged.root_arcs(2)[0].weight == v(1, 2) + v(2, 2)
    assert det_tree_sum(merged) == det_tree_sum(g)


def test_merge_without_parallels_is_identity(g3):
    assert merge_parallel_arcs(g3) == g3


def test_merge_three_parallel_arcs():
    a, b, c = (parse_polynomial(x) for x in "abc")
    g = MatrixDigraph.build(1, [(0, 1, a), (0, 1, b), (0, 1, c)])
    merged = merge_parallel_arcs(g)
    assert merged.m == 1
    assert merged.arcs[0].weight == a + b + c


def test_merge_preserves_tree_sum_random():
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(1, 4)
        base = random_digraph(rng, n, density=0.6)
        doubled = MatrixDigraph.build(n, [(a.source, a.target, a.weight) for a in base.arcs] +
                                      [(a.source, a.target, parse_polynomial(f"x_{a.id}")) for a in base.arcs])
        assert det_tree_sum(merge_parallel_arcs(doubled)) == det_tree_sum(doubled)


def test_json_round_trip(g3):
    again = MatrixDigraph.from_json(g3.to_json())
    assert again == g3
    data = {"n": 2, "arcs": [{"source": 0, "target": 1, "weight": "a"},
                             {"source": 1, "target": 2, "weight": "2*b"}]}
    g = MatrixDigraph.from_json_dict(data)
    assert triples(g) == [(0, 1, "a"), (1, 2, "2*b")]
    with pytest.raises(InputError):
        MatrixDigraph.from_json('{"n": 2, "arcs": [{"source": 3, "target": 1, "weight": "a"}]}')
    with pytest.raises(InputError):
        MatrixDigraph.from_json("{not json")
