"""Parser and evaluator for a small univariate expression language.

Grammar (whitespace is insignificant, there is no implicit multiplication)::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := atom ("^" factor)?            # right associative
    atom    := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

"^" binds tightest and unary minus sits between "*" and "^", so "-x^2"
means -(x^2) while "x^-2" parses the way you expect.  NAME is one of the
constants ``pi`` / ``e``, a function ``abs exp ln sqrt sin cos``, or the
free variable.  The variable must be named ``x`` or ``t`` and a single
expression may use only one of them; "2x" and other juxtapositions are
parse errors.

Evaluation follows real-valued semantics: ``ln``/``sqrt`` of a negative
number, division by zero, ``0^negative`` and a negative base with a
non-integer exponent raise EvalError("domain"); a non-finite result
raises EvalError("overflow").
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import DomcertError

_FUNCTIONS = ("abs", "exp", "ln", "sqrt", "sin", "cos")
_CONSTANTS = {"pi": math.pi, "e": math.e}
_VARIABLES = ("x", "t")


class ParseError(DomcertError):
    """Syntax error with the byte offset, the expected token and an excerpt."""

    def __init__(self, offset: int, expected: str, source: str):
        self.offset = offset
        self.expected = expected
        self.excerpt = _excerpt(source, offset)
        super().__init__(
            f"expected {expected} at offset {offset} in {self.excerpt!r}"
        )


class EvalError(DomcertError):
    """Runtime evaluation fault; kind is 'domain' or 'overflow'."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


def _excerpt(source: str, offset: int, width: int = 40) -> str:
    if len(source) <= 2 * width:
        return source
    lo = max(0, offset - width)
    return source[lo : offset + width]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or a function name
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


Node = Union[Const, Var, Unary, Binary]


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


class Token(NamedTuple):
    kind: str  # num | name | op | lparen | rparen | end
    text: str
    offset: int


_NUM_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _tokenize(source: str) -> list[Token]:
    toks = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^":
            toks.append(Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            toks.append(Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            toks.append(Token("rparen", ch, i))
            i += 1
            continue
        m = _NUM_RE.match(source, i)
        if m:
            toks.append(Token("num", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(source, i)
        if m:
            toks.append(Token("name", m.group(), i))
            i = m.end()
            continue
        raise ParseError(i, "a number, name, operator, or parenthesis", source)
    toks.append(Token("end", "", n))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.i = 0
        self.var: str | None = None

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(tok.offset, "an operator or end of input", self.source)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.i += 1
                node = Binary(tok.text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.i += 1
                node = Binary(tok.text, node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.i += 1
            operand = self.factor()
            # fold a negated literal so "-2" is a constant, not Unary(neg)
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Unary("neg", operand)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.i += 1
            return Binary("^", base, self.factor())
        return base

    def atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError(tok.offset, "a finite constant", self.source)
            return Const(value)
        if tok.kind == "lparen":
            node = self.expr()
            self.expect_rparen()
            return node
        if tok.kind == "name":
            if self.peek().kind == "lparen":
                if tok.text not in _FUNCTIONS:
                    raise ParseError(
                        tok.offset,
                        "a known function name (abs, exp, ln, sqrt, sin, cos)",
                        self.source,
                    )
                self.i += 1
                arg = self.expr()
                self.expect_rparen()
                return Unary(tok.text, arg)
            if tok.text in _CONSTANTS:
                return Const(_CONSTANTS[tok.text])
            if tok.text in _VARIABLES:
                if self.var is None:
                    self.var = tok.text
                elif self.var != tok.text:
                    raise ParseError(
                        tok.offset,
                        f"the variable '{self.var}' (one variable per expression)",
                        self.source,
                    )
                return Var(tok.text)
            raise ParseError(
                tok.offset, "a known name: 'x', 't', 'pi', 'e', or a function", self.source
            )
        raise ParseError(tok.offset, "a number, name, '-', or '('", self.source)

    def expect_rparen(self) -> None:
        tok = self.peek()
        if tok.kind != "rparen":
            raise ParseError(tok.offset, "')'", self.source)
        self.i += 1


# ---------------------------------------------------------------------------
# Evaluation: the tree is compiled once into a python lambda that calls
# guard helpers for any op with a domain restriction.
# ---------------------------------------------------------------------------


def _g_div(a, b):
    if b == 0.0:
        raise EvalError("domain", "division by zero")
    return a / b


def _g_pow(a, b):
    if a == 0.0:
        if b < 0.0:
            raise EvalError("domain", "zero raised to a negative power")
        return 1.0 if b == 0.0 else 0.0
    if a < 0.0 and not float(b).is_integer():
        raise EvalError("domain", "negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvalError("overflow", "overflow in '^'") from None
    except ValueError:
        raise EvalError("domain", "domain fault in '^'") from None


def _g_ln(a):
    if a <= 0.0:
        raise EvalError("domain", "ln of a non-positive value")
    return math.log(a)


def _g_sqrt(a):
    if a < 0.0:
        raise EvalError("domain", "sqrt of a negative value")
    return math.sqrt(a)


def _g_exp(a):
    try:
        return math.exp(a)
    except OverflowError:
        raise EvalError("overflow", "overflow in exp") from None


_EVAL_ENV = {
    "__builtins__": {},
    "_div": _g_div,
    "_pow": _g_pow,
    "_ln": _g_ln,
    "_sqrt": _g_sqrt,
    "_exp": _g_exp,
    "_abs": abs,
    "_sin": math.sin,
    "_cos": math.cos,
}

_UNARY_HELPER = {
    "abs": "_abs",
    "exp": "_exp",
    "ln": "_ln",
    "sqrt": "_sqrt",
    "sin": "_sin",
    "cos": "_cos",
}


def _emit(node: Node) -> str:
    if isinstance(node, Const):
        literal = repr(node.value)
        return f"({literal})" if literal.startswith("-") else literal
    if isinstance(node, Var):
        return "v"
    if isinstance(node, Unary):
        inner = _emit(node.arg)
        if node.op == "neg":
            return f"(-{inner})"
        return f"{_UNARY_HELPER[node.op]}({inner})"
    if node.op in "+-*":
        return f"({_emit(node.left)}{node.op}{_emit(node.right)})"
    if node.op == "/":
        return f"_div({_emit(node.left)},{_emit(node.right)})"
    return f"_pow({_emit(node.left)},{_emit(node.right)})"


def _compile(root: Node):
    body = _emit(root)
    return eval(compile(f"lambda v: {body}", "<expr>", "eval"), _EVAL_ENV)


# ---------------------------------------------------------------------------
# Pretty printer; must round-trip (parse(to_source(e)) == e structurally).
# ---------------------------------------------------------------------------

_BIN_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _BIN_PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return 3
    return 5  # atoms and function calls


def _fmt(node: Node) -> str:
    if isinstance(node, Const):
        text = repr(node.value)
        # parenthesize so a negative constant survives any surrounding context
        return f"({text})" if text.startswith("-") else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = _fmt(node.arg)
            if _prec(node.arg) < 3:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({_fmt(node.arg)})"

    op = node.op
    left, right = _fmt(node.left), _fmt(node.right)
    if op in "+-":
        if _prec(node.right) <= 1:
            right = f"({right})"
    elif op in "*/":
        if _prec(node.left) < 2:
            left = f"({left})"
        if _prec(node.right) <= 2:
            right = f"({right})"
    else:  # ^
        if _prec(node.left) < 5:
            left = f"({left})"
        if _prec(node.right) < 3:
            right = f"({right})"
    if right.startswith("-"):
        right = f"({right})"
    return f"{left}{op}{right}"


def to_source(node: Node) -> str:
    """Render a tree back to parseable source with minimal parentheses."""
    return _fmt(node)


# ---------------------------------------------------------------------------
# Public wrapper
# ---------------------------------------------------------------------------


class Expr:
    """An immutable parsed expression in at most one free variable."""

    __slots__ = ("root", "var_name", "source", "_fn")

    def __init__(self, root: Node, var_name: str | None = None, source: str | None = None):
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "var_name", var_name)
        object.__setattr__(self, "source", source if source is not None else to_source(root))
        object.__setattr__(self, "_fn", _compile(root))

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    def evaluate(self, value: float) -> float:
        result = self._fn(value)
        if not math.isfinite(result):
            raise EvalError("overflow", f"non-finite result for input {value!r}")
        return result

    __call__ = evaluate

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Expr)
            and self.root == other.root
            and self.var_name == other.var_name
        )

    def __hash__(self) -> int:
        return hash((self.root, self.var_name))

    def __repr__(self) -> str:
        return f"Expr({self.source!r})"


def parse(source: str) -> Expr:
    """Parse source text; raises ParseError with offset/expected/excerpt."""
    tokens = _tokenize(source)
    parser = _Parser(tokens, source)
    root = parser.parse()
    return Expr(root, parser.var, source)


def evaluate(e: Expr, value: float) -> float:
    return e.evaluate(value)


def combine(op: str, left: Expr, right: Expr) -> Expr:
    """Join two expressions with a binary operator, merging variable names."""
    if op not in _BIN_PREC:
        raise ValueError(f"unknown operator {op!r}")
    if left.var_name and right.var_name and left.var_name != right.var_name:
        raise ValueError(
            f"cannot combine expressions in '{left.var_name}' and '{right.var_name}'"
        )
    return Expr(Binary(op, left.root, right.root), left.var_name or right.var_name)


def constant(value: float) -> Expr:
    if not math.isfinite(value):
        raise ValueError("constants must be finite")
    return Expr(Const(float(value)), None)
