"""Factored determinant expressions built by explicit rooting and isolation.

Two strategies are provided.  :func:`sequential_factor` splits on one vertex
at a time (rooted at j, not rooted at any earlier vertex) and yields n!
fully isolated digraphs for a complete digraph.  :func:`explicit_rooting_factor`
splits on every non-empty set of rooted vertices at once and yields one fully
isolated digraph per weak ordering of the vertices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .digraph import MatrixDigraph, merge_parallel_arcs
from .errors import InputError
from .transform import isolate_vertex
from .weights import ONE, ZERO, Polynomial

LEAF, SUM, PRODUCT = "leaf", "sum", "product"


@dataclass(frozen=True)
class FactorExpr:
    """Node of a factored expression tree.

    ``tag`` records which explicitly rooted digraph produced the node, as
    the sequence of vertices rooted on the way down (a tuple of tuples for
    the rooting-set strategy).  ``notes`` lists pruned zero branches.
    """

    kind: str
    poly: Polynomial | None = None
    children: tuple["FactorExpr", ...] = ()
    tag: tuple | None = None
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind == LEAF:
            if self.poly is None or self.children:
                raise InputError("a leaf holds a polynomial and no children")
        elif self.kind in (SUM, PRODUCT):
            if self.poly is not None:
                raise InputError(f"a {self.kind} node holds children only")
        else:
            raise InputError(f"unknown node kind {self.kind!r}")

    def __str__(self) -> str:
        return factor_to_text(self)


def leaf(p, tag=None) -> FactorExpr:
    return FactorExpr(LEAF, Polynomial.coerce(p), tag=tag)


def fsum(children: Iterable[FactorExpr], tag=None, notes=()) -> FactorExpr:
    return FactorExpr(SUM, children=tuple(children), tag=tag, notes=tuple(notes))


def fproduct(children: Iterable[FactorExpr], tag=None) -> FactorExpr:
    return FactorExpr(PRODUCT, children=tuple(children), tag=tag)


def factor_expand(f: FactorExpr) -> Polynomial:
    if f.kind == LEAF:
        return f.poly
    if f.kind == SUM:
        total = ZERO
        for c in f.children:
            total = total + factor_expand(c)
        return total
    total = ONE
    for c in f.children:
        total = total * factor_expand(c)
    return total


def leaf_count(f: FactorExpr) -> int:
    """Number of product terms after distributing sums over products.

    Polynomial leaves count as one term each, so this is the number of
    fully isolated digraphs behind a factoring.
    """
    if f.kind == LEAF:
        return 1
    if f.kind == SUM:
        return sum(leaf_count(c) for c in f.children)
    n = 1
    for c in f.children:
        n *= leaf_count(c)
    return n


# -- text and JSON ----------------------------------------------------------


def factor_to_text(f: FactorExpr, _inside_product: bool = False) -> str:
    if f.kind == LEAF:
        text = str(f.poly)
        if _inside_product and (len(f.poly) > 1 or text.startswith("-")):
            return f"({text})"
        return text
    if f.kind == SUM:
        if not f.children:
            return "0"
        if len(f.children) == 1:
            return factor_to_text(f.children[0], _inside_product)
        text = " + ".join(factor_to_text(c) for c in f.children)
        return f"({text})" if _inside_product and len(f.children) > 1 else text
    if not f.children:
        return "1"
    return "*".join(factor_to_text(c, True) for c in f.children)


def factor_to_json_dict(f: FactorExpr) -> dict:
    out: dict = {"kind": f.kind}
    if f.kind == LEAF:
        out["poly"] = str(f.poly)
    else:
        out["children"] = [factor_to_json_dict(c) for c in f.children]
    if f.tag is not None:
        out["tag"] = _tag_to_json(f.tag)
    if f.notes:
        out["notes"] = list(f.notes)
    return out


def _tag_to_json(tag):
    return [_tag_to_json(t) if isinstance(t, tuple) else t for t in tag]


def _tag_from_json(tag):
    return tuple(_tag_from_json(t) if isinstance(t, list) else t for t in tag)


def factor_from_json_dict(data: dict) -> FactorExpr:
    from .weights import parse_polynomial

    kind = data.get("kind")
    tag = _tag_from_json(data["tag"]) if data.get("tag") is not None else None
    if kind == LEAF:
        return leaf(parse_polynomial(str(data["poly"])), tag)
    children = tuple(factor_from_json_dict(c) for c in data.get("children", ()))
    return FactorExpr(kind, children=children, tag=tag, notes=tuple(data.get("notes", ())))


def factor_to_json(f: FactorExpr) -> str:
    return json.dumps(factor_to_json_dict(f), indent=2)


_TOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()\[\]]))")


def parse_factor_expr(text: str) -> FactorExpr:
    """Parse nested text into a tree without expanding it.

    Square brackets act as parentheses.  Products must be written with
    ``*``.  Each symbol and number becomes its own leaf.
    """
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            raise InputError(f"unexpected character at offset {pos} in {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take():
        nonlocal i
        if i >= len(tokens):
            raise InputError(f"unexpected end of {text!r}")
        i += 1
        return tokens[i - 1]

    def expr():
        parts = [term()]
        while peek() in ("+", "-"):
            op = take()
            t = term()
            parts.append(t if op == "+" else fproduct([leaf(-1), t]))
        return parts[0] if len(parts) == 1 else fsum(parts)

    def term():
        parts = [unary()]
        while peek() in ("*", "/"):
            op = take()
            u = unary()
            if op == "/":
                if u.kind != LEAF or not u.poly.is_constant() or u.poly.is_zero():
                    raise InputError("division is only allowed by a non-zero constant")
                u = leaf(Polynomial.const(1 / Fraction(u.poly.constant_value())))
            parts.append(u)
        return parts[0] if len(parts) == 1 else fproduct(parts)

    def unary():
        if peek() == "-":
            take()
            return fproduct([leaf(-1), unary()])
        if peek() == "+":
            take()
        a = atom()
        if peek() == "^":
            take()
            k = take()
            if not k.isdigit():
                raise InputError("exponent must be a non-negative integer")
            return fproduct([a] * int(k)) if int(k) != 1 else a
        return a

    def atom():
        tok = take()
        if tok.isdigit():
            return leaf(int(tok))
        if tok in ("(", "["):
            inner = expr()
            close = take()
            if close != {"(": ")", "[": "]"}[tok]:
                raise InputError(f"mismatched bracket in {text!r}")
            return inner
        if re.match(r"[A-Za-z_]", tok):
            return leaf(Polynomial.symbol(tok))
        raise InputError(f"unexpected token {tok!r} in {text!r}")

    out = expr()
    if i != len(tokens):
        raise InputError(f"trailing input {tokens[i]!r} in {text!r}")
    return out


def canonical_structure(f: FactorExpr):
    """Shape of a factoring up to commutativity and associativity.

    Nested sums and products are flattened, children are sorted, sums whose
    children are all plain polynomials become a single polynomial, and
    constant factors of a product are multiplied together.  Two factorings
    written differently but grouped the same way compare equal.
    """
    if f.kind == LEAF:
        return ("L", str(f.poly))
    kids = [canonical_structure(c) for c in f.children]
    if f.kind == SUM:
        flat = []
        for k in kids:
            flat.extend(k[1] if k[0] == "S" else [k])
        leaves = [k for k in flat if k[0] == "L"]
        rest = [k for k in flat if k[0] != "L"]
        if leaves:
            from .weights import parse_polynomial

            total = ZERO
            for k in leaves:
                total = total + parse_polynomial(k[1])
            if not total.is_zero() or not rest:
                rest.append(("L", str(total)))
        if len(rest) == 1:
            return rest[0]
        return ("S", tuple(sorted(rest, key=repr)))
    flat = []
    for k in kids:
        flat.extend(k[1] if k[0] == "P" else [k])
    coeff = Polynomial.const(1)
    rest = []
    for k in flat:
        if k[0] == "L" and re.fullmatch(r"-?\d+(/\d+)?", k[1]):
            coeff = coeff * Polynomial.const(Fraction(k[1]))
        else:
            rest.append(k)
    if coeff.is_zero():
        return ("L", "0")
    if coeff != ONE or not rest:
        rest.append(("L", str(coeff)))
    if len(rest) == 1:
        return rest[0]
    return ("P", tuple(sorted(rest, key=repr)))


# -- explicit rooting helpers ----------------------------------------------


def split_rooting(g: MatrixDigraph, j: int) -> tuple[MatrixDigraph, MatrixDigraph]:
    """(rooted, not rooted) halves: j keeps only its root arcs, or loses them."""
    g.check_vertex(j)
    if j == 0:
        raise InputError("cannot split on the root vertex")
    rooted = g.without_arcs(a.id for a in g.in_arcs(j) if a.source != 0)
    unrooted = g.without_arcs(a.id for a in g.root_arcs(j))
    return rooted, unrooted


def _root_weight(g: MatrixDigraph, j: int) -> Polynomial:
    total = ZERO
    for a in g.root_arcs(j):
        total = total + a.weight
    return total


def _restrict(g: MatrixDigraph, rooted: Iterable[int], not_rooted: Iterable[int]) -> MatrixDigraph:
    rooted, not_rooted = set(rooted), set(not_rooted)
    drop = [a.id for a in g.arcs
            if (a.target in rooted and a.source != 0) or (a.target in not_rooted and a.source == 0)]
    return g.without_arcs(drop) if drop else g


OrderRule = Callable[[list[int], int], list[int]]


def cyclic_order(remaining: list[int], last: int) -> list[int]:
    """Remaining vertices in label order, starting after the last isolated vertex."""
    rest = sorted(remaining)
    return [v for v in rest if v > last] + [v for v in rest if v < last]


def ascending_order(remaining: list[int], last: int) -> list[int]:
    return sorted(remaining)


ORDER_RULES: dict[str, OrderRule] = {"cyclic": cyclic_order, "ascending": ascending_order}


def _order_rule(order) -> OrderRule:
    if callable(order):
        return order
    try:
        return ORDER_RULES[order]
    except KeyError:
        raise InputError(f"unknown vertex order {order!r}; use one of {sorted(ORDER_RULES)}") from None


def sequential_factor(g: MatrixDigraph, order: str | OrderRule = "cyclic",
                      first: Sequence[int] | None = None) -> FactorExpr:
    """Factor det by rooting at one vertex at a time and isolating it.

    At each level the active vertices are tried in turn: digraph j is rooted
    at j and not rooted at the vertices tried before it.  After isolating j
    the remaining vertices are ordered by ``order`` (default: label order
    starting after j).  ``first`` overrides the top-level order.
    """
    rule = _order_rule(order)
    g = merge_parallel_arcs(g)
    top = list(first) if first is not None else list(range(1, g.n + 1))
    if sorted(top) != list(range(1, g.n + 1)):
        raise InputError(f"top-level order must be a permutation of 1..{g.n}")
    if g.n == 0:
        return leaf(ONE)
    out = _sequential(g, top, (), rule)
    return out if out is not None else fsum((), notes=("every rooting has zero weight",))


def _sequential(g: MatrixDigraph, active: list[int], path: tuple, rule: OrderRule) -> FactorExpr | None:
    children = []
    notes = []
    for idx, j in enumerate(active):
        tag = path + (j,)
        h = _restrict(g, [j], active[:idx])
        w = _root_weight(h, j)
        if w.is_zero():
            notes.append(f"G{list(tag)}: no root arc into {j}, zero term pruned")
            continue
        h = isolate_vertex(merge_parallel_arcs(h), j)
        rest = [v for v in active if v != j]
        if not rest:
            children.append(leaf(w, tag))
            continue
        sub = _sequential(h, rule(rest, j), tag, rule)
        if sub is None:
            notes.append(f"G{list(tag)}: every sub-rooting has zero weight, pruned")
            continue
        children.append(fproduct([leaf(w), sub], tag))
    if not children:
        return None
    return fsum(children, path or None, notes)


def _rooting_sets(active: list[int]) -> list[tuple[int, ...]]:
    sets = [c for r in range(1, len(active) + 1) for c in combinations(sorted(active), r)]
    return sorted(sets, key=lambda s: (s[0], len(s), s))


def _rooting_terms(g: MatrixDigraph, active: list[int], path: tuple):
    # one (rooted set, weights, sub-expression) per surviving pattern
    terms = []
    notes = []
    for T in _rooting_sets(active):
        tag = path + (T,)
        rest = [v for v in active if v not in T]
        h = _restrict(g, T, rest)
        weights = {j: _root_weight(h, j) for j in T}
        if any(w.is_zero() for w in weights.values()):
            notes.append(f"G{_tag_to_json(tag)}: a rooted vertex has no root arc, zero term pruned")
            continue
        h = merge_parallel_arcs(h)
        for j in T:
            h = isolate_vertex(h, j)
        sub = None
        if rest:
            sub = _rooting(h, rest, tag)
            if sub is None:
                notes.append(f"G{_tag_to_json(tag)}: every sub-rooting has zero weight, pruned")
                continue
        terms.append((T, weights, sub, tag))
    return terms, notes


def _rooting(g: MatrixDigraph, active: list[int], path: tuple) -> FactorExpr | None:
    terms, notes = _rooting_terms(g, active, path)
    if not terms:
        return None
    children = []
    for T, weights, sub, tag in terms:
        factors = [leaf(weights[j]) for j in T]
        if sub is not None:
            factors.append(sub)
        if len(factors) == 1:
            children.append(leaf(weights[T[0]], tag))
        else:
            children.append(fproduct(factors, tag))
    return fsum(children, path or None, notes)


def explicit_rooting_factor(g: MatrixDigraph, apportion: str | None = None) -> FactorExpr:
    """Factor det over all non-empty sets of explicitly rooted vertices.

    With ``apportion="symmetric"`` each top-level term rooted at r vertices
    is shared equally among the groups of those r vertices, each share
    scaled by 1/r.
    """
    if apportion not in (None, "none", "symmetric"):
        raise InputError(f"unknown apportion mode {apportion!r}")
    g = merge_parallel_arcs(g)
    if g.n == 0:
        return leaf(ONE)
    active = list(range(1, g.n + 1))
    if apportion != "symmetric":
        out = _rooting(g, active, ())
        return out if out is not None else fsum((), notes=("every rooting has zero weight",))
    terms, notes = _rooting_terms(g, active, ())
    groups = []
    for j in active:
        shares = []
        w_j = None
        for T, weights, sub, tag in terms:
            if j not in T:
                continue
            w_j = weights[j]
            factors = []
            if len(T) > 1:
                factors.append(leaf(Polynomial.const(Fraction(1, len(T)))))
            factors.extend(leaf(weights[i]) for i in T if i != j)
            if sub is not None:
                factors.append(sub)
            if not factors:
                shares.append(leaf(ONE, tag))
            elif len(factors) == 1 and factors[0].kind == LEAF and len(T) == 1:
                shares.append(FactorExpr(LEAF, factors[0].poly, tag=tag))
            else:
                shares.append(fproduct(factors, tag) if len(factors) > 1 else factors[0])
        if w_j is None:
            continue
        groups.append(fproduct([leaf(w_j), fsum(shares)], (j,)))
    return fsum(groups, None, notes)
