"""Acceptance criteria, one test each; every test reports a PASS/FAIL line."""

import random
import time

from arbordet import (
    ReductionSpec,
    SymbolicMatrix,
    cauchy_binet_det,
    det_exact,
    det_reduced_graphical,
    det_tree_sum,
    digraph_from_matrix,
    enumerate_arborescences,
    epsilon_of,
    explicit_rooting_factor,
    factor_expand,
    generic_matrix,
    iter_arborescences,
    leaf_count,
    move_arc,
    normalize_targets,
    parse_polynomial,
    reduce_matrix,
    sequential_factor,
    split_modified_reduced,
    verify_factorization,
)
from arbordet.errors import PreconditionError
from arbordet.factoring import canonical_structure, parse_factor_expr
from arbordet.reduced import forest_assignment, qualifying_digraph
from arbordet.weights import ZERO

from conftest import random_digraph, random_int_matrix
from test_factoring import ROOTING_SUMS, SEQUENTIAL_GROUPING, weak_orderings

SEED = 20261016
ORACLE_MATRICES = 500
REDUCED_CASES = 200
MOVE_CASES = 200
FACTOR_CASES = 100


def record(report, number, title, ok, detail):
    report.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def oracle_matrices():
    rng = random.Random(SEED)
    return [random_int_matrix(rng, 2 + k % 5) for k in range(ORACLE_MATRICES)]


def test_1_generic_3x3(acceptance_report, generic3, example_det):
    start = time.perf_counter()
    g = digraph_from_matrix(generic3)
    count = len(enumerate_arborescences(g))
    det = det_tree_sum(g)
    elapsed = time.perf_counter() - start
    ok = count == 16 and det == example_det and elapsed < 1.0
    record(acceptance_report, 1, "generic 3x3 tree sum", ok,
           f"{count} arborescences, 16-term determinant {'matches' if det == example_det else 'differs'}, "
           f"{elapsed:.3f}s (limit 1s)")


def test_2_oracle_equivalence(acceptance_report):
    start = time.perf_counter()
    bad, cb_checked = [], 0
    for A in oracle_matrices():
        g = digraph_from_matrix(A)
        exact = det_exact(A)
        tree = det_tree_sum(g)
        if tree != exact or det_exact(A, "bareiss") != exact:
            bad.append(A)
        if A.n <= 4:
            cb_checked += 1
            if cauchy_binet_det(g) != exact:
                bad.append(A)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record(acceptance_report, 2, "oracle equivalence", ok,
           f"{ORACLE_MATRICES} matrices n=2..6, {cb_checked} also via Cauchy-Binet, "
           f"{len(bad)} mismatches, {elapsed:.1f}s (limit 300s)")


def test_3_incidence_factorization(acceptance_report, generic3):
    graphs = [digraph_from_matrix(generic3)] + [digraph_from_matrix(A) for A in oracle_matrices()]
    failures = sum(1 for g in graphs if not verify_factorization(g))
    record(acceptance_report, 3, "A' = M W identity", failures == 0,
           f"{len(graphs) - failures}/{len(graphs)} digraphs factor exactly")


def test_4_unit_column_split(acceptance_report, generic3):
    rows = generic3.rows()
    for i in range(3):
        rows[i][2] = 1 if i < 2 else 0
    A_mod = SymbolicMatrix.from_rows(rows)
    parts = split_modified_reduced(A_mod)
    specs = [(spec.P, spec.Q) for spec, _ in parts]
    total = ZERO
    for spec, sign in parts:
        total = total + sign * det_reduced_graphical(A_mod, spec)
    ok = specs == [((1,), (3,)), ((2,), (3,))] and total == det_exact(A_mod)
    record(acceptance_report, 4, "unit-column split", ok,
           f"specs {specs}, summed graphical determinant {'equals' if total == det_exact(A_mod) else 'differs from'} "
           "the exact determinant")


def _negative_epsilon_count(A, spec):
    norm = normalize_targets(spec)
    g = qualifying_digraph(A, norm)
    return sum(1 for B in iter_arborescences(g)
               if forest_assignment(B, norm, g) is not None and epsilon_of(B, norm, g) < 0)


def test_5_reduced_equivalence(acceptance_report):
    rng = random.Random(SEED + 5)
    mismatches = with_exchanges = with_negative = 0
    for k in range(REDUCED_CASES):
        n = rng.randint(2, 5)
        m = rng.randint(1, min(n, 3))
        A = generic_matrix(n) if k % 2 == 0 and n <= 3 else random_int_matrix(rng, n)
        spec = ReductionSpec(tuple(rng.sample(range(1, n + 1), m)), tuple(rng.sample(range(1, n + 1), m)))
        if det_reduced_graphical(A, spec) != det_exact(reduce_matrix(A, spec)):
            mismatches += 1
        if normalize_targets(spec).N_Q >= 1:
            with_exchanges += 1
        if _negative_epsilon_count(A, spec):
            with_negative += 1
    ok = mismatches == 0 and with_exchanges > 0 and with_negative > 0
    record(acceptance_report, 5, "reduced determinant equivalence", ok,
           f"{REDUCED_CASES} cases, {mismatches} mismatches, {with_exchanges} with N_Q >= 1, "
           f"{with_negative} with a branching of sign -1")


def test_6_moving_arcs(acceptance_report, g3):
    rng = random.Random(SEED + 6)
    accepted = changed = attempts = 0
    while accepted < MOVE_CASES:
        attempts += 1
        g = random_digraph(rng, rng.randint(2, 5), density=rng.choice([0.2, 0.3, 0.4]))
        if not g.arcs:
            continue
        a = rng.choice(g.arcs)
        c = rng.choice([x for x in g.vertices if x != a.target])
        try:
            h = move_arc(g, a.id, c)
        except PreconditionError:
            continue
        accepted += 1
        if det_tree_sum(h) != det_tree_sum(g):
            changed += 1
    arc12 = next(a for a in g3.arcs if (a.source, a.target) == (1, 2))
    unchecked = g3.replace_arc(arc12.with_source(0))
    negative = det_tree_sum(unchecked) != det_tree_sum(g3)
    ok = changed == 0 and negative
    record(acceptance_report, 6, "moving-arcs invariance", ok,
           f"{accepted} accepted moves out of {attempts} attempts, {changed} changed the tree sum; "
           f"unchecked move of (1,2) to 0 {'changes' if negative else 'keeps'} the determinant")


def test_7_factorings_3x3(acceptance_report, g3, example_det):
    seq = sequential_factor(g3)
    seq_ok = canonical_structure(seq) == canonical_structure(parse_factor_expr(SEQUENTIAL_GROUPING))
    root = explicit_rooting_factor(g3)
    sums = {c.tag[0]: factor_expand(c) for c in root.children}
    sums_ok = list(sums) == list(ROOTING_SUMS) and all(
        sums[T] == parse_polynomial(text) for T, text in ROOTING_SUMS.items())
    counts = (leaf_count(seq), leaf_count(root))
    expand_ok = factor_expand(seq) == example_det and factor_expand(root) == example_det
    ok = seq_ok and sums_ok and counts == (6, weak_orderings(3)) and expand_ok
    record(acceptance_report, 7, "generic 3x3 factorings", ok,
           f"sequential grouping {'matches' if seq_ok else 'differs'}, {len(sums)} rooting sums "
           f"{'match' if sums_ok else 'differ'}, leaves {counts[0]} and {counts[1]}, "
           f"expansions {'equal' if expand_ok else 'differ from'} the determinant")


def test_8_factoring_at_scale(acceptance_report):
    rng = random.Random(SEED + 8)
    start = time.perf_counter()
    bad = 0
    for k in range(FACTOR_CASES):
        A = random_int_matrix(rng, 3 + k % 3)
        if factor_expand(sequential_factor(digraph_from_matrix(A))) != det_exact(A):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 120
    record(acceptance_report, 8, "factoring soundness at scale", ok,
           f"{FACTOR_CASES} matrices n=3..5, {bad} mismatches, {elapsed:.1f}s (limit 120s)")
