"""Command-line front end.

Exit status is 0 on success, 1 when a cross-check disagrees and 2 for usage
or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .arborescence import DEFAULT_MAX_COMBINATIONS, det_tree_sum
from .digraph import MatrixDigraph, SymbolicMatrix, digraph_from_matrix, matrix_from_digraph
from .errors import ArbordetError, InputError
from .factoring import explicit_rooting_factor, factor_to_json, sequential_factor
from .linalg import CAUCHY_BINET_MAX_ARCS, cauchy_binet_det, det_exact, verify_factorization
from .reduced import ReductionSpec, det_reduced_graphical, reduce_matrix, split_modified_reduced
from .transform import isolate_vertex, move_arc
from .weights import Polynomial, parse_polynomial


# -- input ---------------------------------------------------------------


def _parse_entry(value, r: int, c: int) -> Polynomial:
    try:
        if isinstance(value, str):
            return parse_polynomial(value)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InputError(f"unsupported entry type {type(value).__name__}")
        if isinstance(value, float):
            return Polynomial.const(Fraction(str(value)))
        return Polynomial.const(value)
    except InputError as exc:
        raise InputError(f"entry at row {r}, column {c}: {exc}") from None


def _check_square(rows: list, n: int | None = None) -> None:
    size = len(rows) if n is None else n
    if n is not None and len(rows) != n:
        raise InputError(f"'n' is {n} but there are {len(rows)} rows")
    for r, row in enumerate(rows, start=1):
        if len(row) != size:
            raise InputError(f"row {r} has {len(row)} entries, expected {size} (matrix must be square)")


def matrix_from_json_dict(data: dict) -> tuple[SymbolicMatrix, list | None]:
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError("matrix JSON needs an 'entries' field")
    rows = data["entries"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("'entries' must be a list of rows")
    n = data.get("n")
    _check_square(rows, int(n) if n is not None else None)
    matrix = SymbolicMatrix.from_rows(
        [_parse_entry(x, r, c) for c, x in enumerate(row, start=1)] for r, row in enumerate(rows, start=1))
    terms = data.get("terms")
    if terms is not None:
        terms = [[None if cell is None else [_parse_entry(x, r, c) for x in cell]
                  for c, cell in enumerate(row, start=1)] for r, row in enumerate(terms, start=1)]
    return matrix, terms


def matrix_from_csv(text: str) -> SymbolicMatrix:
    rows = []
    for r, line in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not line or all(not cell.strip() for cell in line):
            continue
        row = []
        for c, cell in enumerate(line, start=1):
            try:
                row.append(Polynomial.const(Fraction(cell.strip())))
            except (ValueError, ZeroDivisionError):
                raise InputError(f"row {r}, column {c}: {cell.strip()!r} is not a number") from None
        rows.append(row)
    if not rows:
        raise InputError("empty CSV matrix")
    _check_square(rows)
    return SymbolicMatrix.from_rows(rows)


def _read_text(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _detect_format(path, text: str) -> str:
    suffix = Path(str(path)).suffix.lower()
    if suffix in (".json", ".csv"):
        return suffix[1:]
    return "json" if text.lstrip().startswith("{") else "csv"


def load_document(path, fmt: str = "auto"):
    """Read a matrix (JSON or CSV) or a digraph (JSON with 'arcs').

    Returns ``(matrix, terms, digraph)``; for a matrix input ``digraph`` is
    built from it, for a digraph input ``matrix`` is derived from it.
    """
    text = _read_text(path)
    if fmt == "auto":
        fmt = _detect_format(path, text)
    if fmt == "csv":
        m = matrix_from_csv(text)
        return m, None, digraph_from_matrix(m)
    if fmt != "json":
        raise InputError(f"unknown input format {fmt!r}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "arcs" in data:
        g = MatrixDigraph.from_json_dict(data)
        return matrix_from_digraph(g), None, g
    m, terms = matrix_from_json_dict(data)
    return m, terms, digraph_from_matrix(m, terms)


def parse_matrix_input(path, format: str = "auto") -> SymbolicMatrix:
    """Matrix from a JSON ``{"n", "entries", "terms"?}`` or numeric CSV file."""
    text = _read_text(path)
    fmt = _detect_format(path, text) if format == "auto" else format
    if fmt == "csv":
        return matrix_from_csv(text)
    if fmt != "json":
        raise InputError(f"unknown input format {format!r}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return matrix_from_json_dict(data)[0]


# -- output --------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def digraph_to_dot(g: MatrixDigraph) -> str:
    lines = ["digraph matrix_digraph {"]
    lines.append('  0 [label="0 (root)"];')
    for v in range(1, g.n + 1):
        lines.append(f'  {v} [label="{v}"];')
    for a in g.arcs:
        lines.append(f'  {a.source} -> {a.target} [label="{_dot_escape(str(a.weight))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: MatrixDigraph, path) -> None:
    try:
        Path(path).write_text(digraph_to_dot(g))
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


# -- commands ------------------------------------------------------------


def _cmd_det(args) -> int:
    matrix, _, g = load_document(args.input, args.format)
    if args.method == "tree":
        result = det_tree_sum(g, args.max_combinations)
    elif args.method == "cauchy-binet":
        result = cauchy_binet_det(g, args.max_arcs)
    else:
        result = det_exact(matrix)
    print(result)
    return 0


def _cmd_verify(args) -> int:
    matrix, _, g = load_document(args.input, args.format)
    tree = det_tree_sum(g, args.max_combinations)
    cb = cauchy_binet_det(g, args.max_arcs)
    exact = det_exact(matrix)
    ok = True
    if tree == cb == exact:
        print("tree == cauchy-binet == exact: OK")
    else:
        ok = False
        print("tree == cauchy-binet == exact: MISMATCH")
        for name, value in (("tree", tree), ("cauchy-binet", cb), ("exact", exact)):
            print(f"  {name}: {value}")
    if verify_factorization(g):
        print("A' == M W: OK")
    else:
        ok = False
        print("A' == M W: MISMATCH")
    return 0 if ok else 1


def _cmd_reduce(args) -> int:
    matrix, _, _ = load_document(args.input, args.format)
    spec = ReductionSpec(tuple(args.p), tuple(args.q))
    spec.validate(matrix.n)
    graphical = det_reduced_graphical(matrix, spec, args.max_combinations)
    print(graphical)
    if args.check:
        exact = det_exact(reduce_matrix(matrix, spec))
        if exact != graphical:
            print(f"graphical != exact: MISMATCH (exact: {exact})")
            return 1
        print("graphical == exact: OK")
    return 0


def _cmd_split(args) -> int:
    matrix, _, _ = load_document(args.input, args.format)
    parts = split_modified_reduced(matrix, args.columns)
    print(json.dumps([{**spec.to_json_dict(), "sign": sign} for spec, sign in parts]))
    return 0


def _cmd_factor(args) -> int:
    _, _, g = load_document(args.input, args.format)
    if args.strategy == "sequential":
        if args.apportion:
            raise InputError("--apportion applies to the rooting strategy only")
        f = sequential_factor(g, order=args.order)
    else:
        f = explicit_rooting_factor(g, apportion=args.apportion)
    print(factor_to_json(f) if args.json else str(f))
    return 0


def _cmd_expand(args) -> int:
    text = _read_text(args.input)
    print(parse_polynomial(" ".join(text.split())))
    return 0


def _cmd_digraph(args) -> int:
    _, _, g = load_document(args.input, args.format)
    _emit(g.to_json(), args.output)
    return 0


def _cmd_move(args) -> int:
    _, _, g = load_document(args.input, args.format)
    _emit(move_arc(g, args.arc, args.to).to_json(), args.output)
    return 0


def _cmd_isolate(args) -> int:
    _, _, g = load_document(args.input, args.format)
    _emit(isolate_vertex(g, args.vertex).to_json(), args.output)
    return 0


def _cmd_export_dot(args) -> int:
    _, _, g = load_document(args.input, args.format)
    if args.output in (None, "-"):
        sys.stdout.write(digraph_to_dot(g))
    else:
        export_dot(g, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arbordet", description="Graphical determinants of matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, guards=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="matrix (.json/.csv) or digraph JSON file; '-' for stdin")
        p.add_argument("--format", choices=["auto", "json", "csv"], default="auto")
        if guards:
            p.add_argument("--max-combinations", type=int, default=DEFAULT_MAX_COMBINATIONS,
                           help="cap on in-arc combinations for arborescence enumeration")
            p.add_argument("--max-arcs", type=int, default=CAUCHY_BINET_MAX_ARCS,
                           help="cap on arcs for the Cauchy-Binet expansion")
        p.set_defaults(func=func)
        return p

    p = add("det", _cmd_det, "print the determinant")
    p.add_argument("--method", choices=["tree", "cauchy-binet", "exact"], default="tree")

    add("verify", _cmd_verify, "cross-check tree sum, Cauchy-Binet and elimination")

    p = add("reduce", _cmd_reduce, "determinant of the reduced matrix A^{P,Q}")
    p.add_argument("--p", type=int, nargs="+", required=True, help="rows p_1 .. p_m (1-based)")
    p.add_argument("--q", type=int, nargs="+", required=True, help="columns q_1 .. q_m (1-based)")
    p.add_argument("--check", action="store_true", help="compare with elimination on the reduced matrix")

    p = add("split", _cmd_split, "split a matrix with 0/1 columns into reduced matrices", guards=False)
    p.add_argument("--columns", type=int, nargs="+", help="0/1 columns to split (default: detect)")

    p = add("factor", _cmd_factor, "print a factored determinant", guards=False)
    p.add_argument("--strategy", choices=["sequential", "rooting"], default="sequential")
    p.add_argument("--apportion", choices=["symmetric"], default=None)
    p.add_argument("--order", choices=["cyclic", "ascending"], default="cyclic",
                   help="vertex order below each isolated vertex (sequential strategy)")
    p.add_argument("--json", action="store_true", help="emit the expression tree as JSON")

    p = sub.add_parser("expand", help="expand polynomial or factored text to canonical form")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=_cmd_expand)

    p = add("digraph", _cmd_digraph, "write the matrix digraph as JSON", guards=False)
    p.add_argument("-o", "--output")

    p = add("move", _cmd_move, "move the source of an arc", guards=False)
    p.add_argument("--arc", type=int, required=True)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("-o", "--output")

    p = add("isolate", _cmd_isolate, "isolate an explicitly rooted vertex", guards=False)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("-o", "--output")

    p = add("export-dot", _cmd_export_dot, "write the digraph in Graphviz DOT format", guards=False)
    p.add_argument("-o", "--output")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ArbordetError as exc:
        print(f"arbordet {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
