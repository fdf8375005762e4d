import random

import pytest

from arbordet import SymbolicMatrix, digraph_from_matrix, generic_matrix, parse_polynomial
from arbordet.digraph import MatrixDigraph

# determinant of the generic 3x3 matrix, one string per term
EXAMPLE_DET_TERMS = [
    "v_1_1*v_2_2*v_3_3", "v_1_1*v_2_2*v_1_3", "v_1_1*v_2_2*v_2_3", "v_1_1*v_1_2*v_1_3",
    "v_1_1*v_1_2*v_2_3", "v_1_1*v_1_2*v_3_3", "v_1_1*v_3_2*v_1_3", "v_1_1*v_3_2*v_3_3",
    "v_2_1*v_2_2*v_1_3", "v_2_1*v_2_2*v_2_3", "v_2_1*v_2_2*v_3_3", "v_3_1*v_2_2*v_2_3",
    "v_3_1*v_2_2*v_3_3", "v_3_1*v_1_2*v_3_3", "v_3_1*v_3_2*v_3_3", "v_2_1*v_3_2*v_3_3",
]

_report: list[str] = []


@pytest.fixture
def example_det():
    return parse_polynomial(" + ".join(EXAMPLE_DET_TERMS))


@pytest.fixture
def generic3():
    return generic_matrix(3)


@pytest.fixture
def g3(generic3):
    return digraph_from_matrix(generic3)


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def acceptance_report():
    return _report


def random_int_matrix(rng, n, lo=-5, hi=5):
    return SymbolicMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def random_digraph(rng, n, density=0.5, symbolic=True, root_density=None):
    """Random matrix digraph; symbolic weights are fresh symbols w_s_t."""
    root_density = density if root_density is None else root_density
    arcs = []
    for t in range(1, n + 1):
        for s in range(0, n + 1):
            if s == t:
                continue
            if rng.random() < (root_density if s == 0 else density):
                w = f"w_{s}_{t}" if symbolic else str(rng.choice([-3, -2, -1, 1, 2, 3]))
                arcs.append((s, t, parse_polynomial(w)))
    return MatrixDigraph.build(n, arcs)


def pytest_terminal_summary(terminalreporter):
    if _report:
        terminalreporter.section("acceptance criteria")
        for line in _report:
            terminalreporter.write_line(line)
