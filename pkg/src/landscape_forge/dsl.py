"""Expression language for candidate objective functions.

Candidate problems are genomes in a small arithmetic DSL rather than
executable code, so the system needs no sandbox and an offline mutator can
drive fully reproducible runs. The grammar is fixed and versioned:

    unary ops:   neg sin cos tanh exp abs sqrt log floor
    binary ops:  + - * / ^ min max
    terminals:   decimal constants, variables x1..xd

Evaluation is totalized by guards so any tree yields a finite value at any
point (see ``docs/dsl-grammar.md`` for the guard constants). Trees are
immutable after parsing; mutation takes an explicit seed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .functions import Domain, ObjectiveFunction

GRAMMAR_VERSION = "1"

UNARY_OPS = ("neg", "sin", "cos", "tanh", "exp", "abs", "sqrt", "log", "floor")
BINARY_OPS = ("+", "-", "*", "/", "^", "min", "max")

MAX_DEPTH = 20
MAX_NODES = 500

# Guard constants: smallest values keeping double arithmetic finite.
EPS_GUARD = 1e-12
EXP_CLAMP = 700.0
VALUE_CLAMP = 1e300


class DslError(ValueError):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class VariableIndexError(DslError):
    pass


class LimitError(DslError):
    pass


@dataclass(frozen=True)
class Node:
    """One DSL syntax-tree node.

    kind is one of "const", "var", "unary", "binary". Constants carry a
    finite float in ``value``; variables a 1-based ``index``; operator nodes
    carry ``op`` and ``children``.
    """

    kind: str
    op: str | None = None
    value: float | None = None
    index: int | None = None
    children: tuple["Node", ...] = ()


def const(value: float) -> Node:
    value = float(value)
    if not np.isfinite(value):
        raise DslError(f"constants must be finite, got {value}")
    return Node("const", value=value)


def var(index: int) -> Node:
    if index < 1:
        raise VariableIndexError(f"variable index must be >= 1, got {index}")
    return Node("var", index=index)


def unary(op: str, child: Node) -> Node:
    if op not in UNARY_OPS:
        raise DslError(f"unknown unary op: {op}")
    # neg of a constant folds so canonical text round-trips through the
    # leading-minus literal syntax.
    if op == "neg" and child.kind == "const":
        return const(-child.value)
    return Node("unary", op=op, children=(child,))


def binary(op: str, left: Node, right: Node) -> Node:
    if op not in BINARY_OPS:
        raise DslError(f"unknown binary op: {op}")
    return Node("binary", op=op, children=(left, right))


def iter_nodes(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def node_count(node: Node) -> int:
    return sum(1 for _ in iter_nodes(node))


def depth(node: Node) -> int:
    if not node.children:
        return 1
    return 1 + max(depth(c) for c in node.children)


def max_var_index(node: Node) -> int:
    return max((n.index for n in iter_nodes(node) if n.kind == "var"), default=0)


@dataclass(frozen=True)
class ExprTree:
    """Parsed DSL expression with its declared dimensionality."""

    root: Node
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DslError(f"dim must be >= 1, got {self.dim}")
        idx = max_var_index(self.root)
        if idx > self.dim:
            raise VariableIndexError(
                f"variable x{idx} exceeds declared dimension {self.dim}"
            )
        d = depth(self.root)
        if d > MAX_DEPTH:
            raise LimitError(f"tree depth {d} exceeds limit {MAX_DEPTH}")
        n = node_count(self.root)
        if n > MAX_NODES:
            raise LimitError(f"tree size {n} exceeds limit {MAX_NODES}")

    @property
    def size(self) -> int:
        return node_count(self.root)

    @property
    def depth(self) -> int:
        return depth(self.root)


# --- parsing -----------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<sym>\^|\+|-|\*|/|\(|\)|,))"
)

_VAR_RE = re.compile(r"^x([1-9][0-9]*)$")


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.pos = 0

    def error(self, message: str) -> DslSyntaxError:
        return DslSyntaxError(message, self.pos)

    def peek(self) -> tuple[str, str] | None:
        m = _TOKEN_RE.match(self.text, self.pos)
        if m is None:
            rest = self.text[self.pos :].strip()
            if rest:
                raise self.error(f"unexpected character {rest[0]!r}")
            return None
        return (m.lastgroup, m.group(m.lastgroup))

    def take(self) -> tuple[str, str] | None:
        m = _TOKEN_RE.match(self.text, self.pos)
        if m is None:
            return self.peek()  # raises on garbage, None at end
        self.pos = m.end()
        return (m.lastgroup, m.group(m.lastgroup))

    def expect_sym(self, sym: str) -> None:
        tok = self.take()
        if tok is None or tok != ("sym", sym):
            raise self.error(f"expected {sym!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.peek() is not None:
            raise self.error("trailing input after expression")
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self.peek()
            if tok in (("sym", "+"), ("sym", "-")):
                self.take()
                node = binary(tok[1], node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            tok = self.peek()
            if tok in (("sym", "*"), ("sym", "/")):
                self.take()
                node = binary(tok[1], node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok == ("sym", "-"):
            self.take()
            return unary("neg", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            # right-associative; exponent may carry a unary minus
            return binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.take()
        if tok is None:
            raise self.error("unexpected end of input")
        kind, text = tok
        if kind == "number":
            return const(float(text))
        if kind == "name":
            m = _VAR_RE.match(text)
            if m:
                index = int(m.group(1))
                if index > self.dim:
                    raise VariableIndexError(
                        f"variable x{index} exceeds declared dimension {self.dim}"
                    )
                return var(index)
            if text in UNARY_OPS:
                self.expect_sym("(")
                child = self.expr()
                self.expect_sym(")")
                return unary(text, child)
            if text in ("min", "max"):
                self.expect_sym("(")
                left = self.expr()
                self.expect_sym(",")
                right = self.expr()
                self.expect_sym(")")
                return binary(text, left, right)
            raise self.error(f"unknown identifier {text!r}")
        if text == "(":
            node = self.expr()
            self.expect_sym(")")
            return node
        raise self.error(f"unexpected token {text!r}")


def parse(text: str, dim: int) -> ExprTree:
    """Parse DSL text into an :class:`ExprTree` with declared dimension."""
    root = _Parser(text, dim).parse()
    return ExprTree(root, dim)


# --- canonical rendering ------------------------------------------------


def _render(node: Node) -> str:
    if node.kind == "const":
        return format(node.value, ".17g")
    if node.kind == "var":
        return f"x{node.index}"
    if node.kind == "unary":
        return f"{node.op}({_render(node.children[0])})"
    a, b = node.children
    if node.op in ("min", "max"):
        return f"{node.op}({_render(a)}, {_render(b)})"
    return f"({_render(a)} {node.op} {_render(b)})"


def to_canonical_text(tree: ExprTree) -> str:
    """Fully parenthesized deterministic rendering; round-trips via parse."""
    return _render(tree.root)


# --- guarded evaluation -------------------------------------------------


def _guarded_pow(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Negative base with non-integer exponent evaluates as |base| ^ exponent.
    base = np.where((a < 0) & (b != np.floor(b)), -a, a)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        r = np.power(base, b)
    return np.where(np.isnan(r), 0.0, r)


def _eval_node(node: Node, X: np.ndarray) -> np.ndarray:
    if node.kind == "const":
        return np.full(X.shape[0], node.value)
    if node.kind == "var":
        return X[:, node.index - 1]
    if node.kind == "unary":
        a = _eval_node(node.children[0], X)
        op = node.op
        if op == "neg":
            r = -a
        elif op == "sin":
            r = np.sin(a)
        elif op == "cos":
            r = np.cos(a)
        elif op == "tanh":
            r = np.tanh(a)
        elif op == "exp":
            r = np.exp(np.clip(a, -EXP_CLAMP, EXP_CLAMP))
        elif op == "abs":
            r = np.abs(a)
        elif op == "sqrt":
            r = np.sqrt(np.maximum(a, EPS_GUARD))
        elif op == "log":
            r = np.log(np.maximum(a, EPS_GUARD))
        else:  # floor
            r = np.floor(a)
        return np.clip(r, -VALUE_CLAMP, VALUE_CLAMP)
    a = _eval_node(node.children[0], X)
    b = _eval_node(node.children[1], X)
    op = node.op
    if op == "+":
        r = a + b
    elif op == "-":
        r = a - b
    elif op == "*":
        r = a * b
    elif op == "/":
        safe = np.where(np.abs(b) < EPS_GUARD, np.copysign(EPS_GUARD, b), b)
        r = a / safe
    elif op == "^":
        r = _guarded_pow(a, b)
    elif op == "min":
        r = np.minimum(a, b)
    else:  # max
        r = np.maximum(a, b)
    return np.clip(r, -VALUE_CLAMP, VALUE_CLAMP)


def eval_expr_batch(tree: ExprTree, X: np.ndarray) -> np.ndarray:
    """Evaluate a tree on an (n, d) batch; d may exceed the declared dim."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] < tree.dim:
        raise DslError(
            f"points have dimension {X.shape[1]}, tree declares {tree.dim}"
        )
    return _eval_node(tree.root, X)


def eval_expr(tree: ExprTree, x) -> float:
    """Evaluate a tree at one point under guarded (total) semantics."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != tree.dim:
        raise DslError(f"point has dimension {x.shape[0]}, expected {tree.dim}")
    return float(eval_expr_batch(tree, x.reshape(1, -1))[0])


def make_objective(
    tree: ExprTree,
    eval_dim: int | None = None,
    half_width: float = 5.0,
    id: str | None = None,
) -> ObjectiveFunction:
    """Wrap a tree as an objective on [-half_width, half_width]^d.

    ``eval_dim`` may exceed the declared dim; coordinates beyond it are then
    simply unused by the expression.
    """
    d = tree.dim if eval_dim is None else int(eval_dim)
    if d < tree.dim:
        raise DslError(f"eval_dim {d} below declared dimension {tree.dim}")
    domain = Domain.symmetric(d, half_width)
    name = id if id is not None else to_canonical_text(tree)
    return ObjectiveFunction(name, domain, lambda X: eval_expr_batch(tree, X))


# --- random generation and mutation --------------------------------------


def random_tree(
    rng: np.random.Generator, dim: int, max_depth: int = 4
) -> ExprTree:
    """Fresh random tree of depth <= max_depth over x1..xdim."""

    def gen(remaining: int) -> Node:
        if remaining <= 1 or rng.uniform() < 0.3:
            if rng.uniform() < 0.5:
                return var(int(rng.integers(1, dim + 1)))
            return const(round(float(rng.uniform(-5.0, 5.0)), 3))
        if rng.uniform() < 0.4:
            op = UNARY_OPS[int(rng.integers(len(UNARY_OPS)))]
            return unary(op, gen(remaining - 1))
        op = BINARY_OPS[int(rng.integers(len(BINARY_OPS)))]
        return binary(op, gen(remaining - 1), gen(remaining - 1))

    root = gen(max_depth)
    if max_var_index(root) == 0:
        # keep genomes landscape-bearing: force at least one variable
        root = binary("+", root, var(int(rng.integers(1, dim + 1))))
    return ExprTree(root, dim)


def _collect_paths(node: Node, path=()) -> list[tuple]:
    paths = [path]
    for k, child in enumerate(node.children):
        paths.extend(_collect_paths(child, path + (k,)))
    return paths


def _get_at(node: Node, path: tuple) -> Node:
    for k in path:
        node = node.children[k]
    return node


def _replace_at(node: Node, path: tuple, new: Node) -> Node:
    if not path:
        return new
    k = path[0]
    children = list(node.children)
    children[k] = _replace_at(children[k], path[1:], new)
    # rebuild through the smart constructors so neg-over-const stays folded
    if node.kind == "unary":
        return unary(node.op, children[0])
    return binary(node.op, children[0], children[1])


def _point_mutation(node: Node, rng: np.random.Generator, dim: int) -> Node:
    if node.kind == "const":
        return const(node.value * (1.0 + rng.normal(0.0, 0.3)))
    if node.kind == "var":
        if dim > 1:
            choices = [i for i in range(1, dim + 1) if i != node.index]
            return var(int(choices[int(rng.integers(len(choices)))]))
        return const(round(float(rng.uniform(-5.0, 5.0)), 3))
    if node.kind == "unary":
        choices = [op for op in UNARY_OPS if op != node.op]
        op = choices[int(rng.integers(len(choices)))]
        return unary(op, node.children[0])
    choices = [op for op in BINARY_OPS if op != node.op]
    op = choices[int(rng.integers(len(choices)))]
    return binary(op, node.children[0], node.children[1])


def mutate_expr(tree: ExprTree, seed: int, strength: str = "point") -> ExprTree:
    """Seeded mutation; returns a valid tree within depth/size limits.

    Point mutation replaces one node kind or perturbs one constant by
    x(1 + N(0, 0.3)); subtree mutation replaces a uniformly chosen subtree
    with a fresh random tree of depth <= 4. On repeated limit violations
    (100 retries) the input tree is returned unchanged.
    """
    if strength not in ("point", "subtree"):
        raise ValueError(f"unknown mutation strength: {strength}")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        paths = _collect_paths(tree.root)
        path = paths[int(rng.integers(len(paths)))]
        target = _get_at(tree.root, path)
        if strength == "point":
            replacement = _point_mutation(target, rng, tree.dim)
        else:
            replacement = random_tree(rng, tree.dim, max_depth=4).root
        try:
            candidate = ExprTree(_replace_at(tree.root, path, replacement), tree.dim)
        except (LimitError, DslError):
            continue
        if depth(candidate.root) <= MAX_DEPTH and candidate.size <= MAX_NODES:
            return candidate
    return tree


def tree_to_record(tree: ExprTree) -> dict:
    """Wire format for exchanging candidates between generator and engine."""
    return {"dim": tree.dim, "expr": to_canonical_text(tree)}


def record_to_tree(record: dict) -> ExprTree:
    return parse(record["expr"], int(record["dim"]))
