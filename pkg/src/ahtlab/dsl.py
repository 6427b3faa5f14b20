"""A small expression language for writing colorings.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/"|"%") factor)*
    factor := NUM | VAR | "lam" "(" expr ")" | "mu" "(" expr ")" | "pop" "(" expr ")"
            | "(" expr ")" | "if" "(" cond "," expr "," expr ")"
    cond   := expr ("=="|"!="|"<"|"<="|">"|">=") expr

Values are Python integers. Subtraction may go negative; ``/`` and ``%``
are Euclidean (the remainder is always in ``[0, |b|)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from . import bits
from .errors import DomainError, ExprRuntimeError, ExprSyntaxError

FUNCTIONS = ("lam", "mu", "pop")
KEYWORDS = FUNCTIONS + ("if",)
ARITH_OPS = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2}
CMP_OPS = ("==", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cond:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class If:
    cond: Cond
    then: "Expr"
    orelse: "Expr"


Expr = Union[Num, Var, Call, BinOp, If]

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>==|!=|<=|>=|[-+*/%<>(),])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | eof
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, text, line, pos - line_start + 1))
        else:
            for k, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, src: str, variables: frozenset[str]):
        self.tokens = _tokenize(src)
        self.i = 0
        self.variables = variables

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(message, tok.line, tok.col)

    def advance(self) -> _Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.text in ("*", "/", "%"):
            op = self.advance().text
            left = BinOp(op, left, self.factor())
        return left

    def args(self, name_tok: _Token) -> list:
        self.expect("(")
        args = [self.cond_or_expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append(self.cond_or_expr())
        self.expect(")")
        return args

    def cond_or_expr(self):
        e = self.expr()
        if self.tok.kind == "op" and self.tok.text in CMP_OPS:
            op = self.advance().text
            return Cond(op, e, self.expr())
        return e

    def factor(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                args = self.args(tok)
                if len(args) != 1:
                    self.fail(f"{tok.text} takes 1 argument, got {len(args)}", tok)
                if isinstance(args[0], Cond):
                    self.fail(f"comparison not allowed as argument of {tok.text}", tok)
                return Call(tok.text, args[0])
            if tok.text == "if":
                args = self.args(tok)
                if len(args) != 3:
                    self.fail(f"if takes 3 arguments, got {len(args)}", tok)
                cond, then, orelse = args
                if not isinstance(cond, Cond):
                    self.fail("first argument of if must be a comparison", tok)
                if isinstance(then, Cond) or isinstance(orelse, Cond):
                    self.fail("branches of if must be expressions", tok)
                return If(cond, then, orelse)
            if tok.text not in self.variables:
                allowed = ", ".join(sorted(self.variables)) or "none"
                self.fail(f"undeclared variable {tok.text!r} (declared: {allowed})", tok)
            if self.tok.kind == "op" and self.tok.text == "(":
                self.fail(f"{tok.text!r} is not a function")
            return Var(tok.text)
        self.fail(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input")


def parse_expr(src: str, variables: Iterable[str] = ("n",)) -> Expr:
    """Parse ``src`` into an expression tree over the declared variables."""
    variables = frozenset(variables)
    bad = variables & set(KEYWORDS)
    if bad:
        raise ValueError(f"reserved names cannot be variables: {sorted(bad)}")
    return _Parser(src, variables).parse()


def to_source(e: Expr) -> str:
    """Canonical text of an expression; parsing it back yields an equal tree."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    if isinstance(e, If):
        c = e.cond
        return (
            f"if({to_source(c.left)} {c.op} {to_source(c.right)}, "
            f"{to_source(e.then)}, {to_source(e.orelse)})"
        )
    prec = ARITH_OPS[e.op]
    left = to_source(e.left)
    if isinstance(e.left, BinOp) and ARITH_OPS[e.left.op] < prec:
        left = f"({left})"
    right = to_source(e.right)
    # left-associative: an equal-precedence right operand needs parentheses
    if isinstance(e.right, BinOp) and ARITH_OPS[e.right.op] <= prec:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def _euclid_div(a: int, b: int) -> int:
    if b == 0:
        raise ExprRuntimeError("division by zero")
    return (a - _euclid_mod(a, b)) // b


def _euclid_mod(a: int, b: int) -> int:
    if b == 0:
        raise ExprRuntimeError("modulo by zero")
    return a % abs(b)


def _checked(fn: Callable[[int], int]) -> Callable[[int], int]:
    def call(x: int) -> int:
        try:
            return fn(x)
        except DomainError as exc:
            raise ExprRuntimeError(str(exc)) from None

    return call


_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _euclid_div,
    "%": _euclid_mod,
}
_COMPARE = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}
_CALLS = {"lam": _checked(bits.lam), "mu": _checked(bits.mu), "pop": _checked(bits.pop)}


def compile_expr(e: Expr) -> Callable[[dict], int]:
    """Turn a tree into a closure taking a variable environment."""
    if isinstance(e, Num):
        v = e.value
        return lambda env: v
    if isinstance(e, Var):
        name = e.name
        return lambda env: env[name]
    if isinstance(e, Call):
        fn, arg = _CALLS[e.fn], compile_expr(e.arg)
        return lambda env: fn(arg(env))
    if isinstance(e, If):
        cmp = _COMPARE[e.cond.op]
        cl, cr = compile_expr(e.cond.left), compile_expr(e.cond.right)
        then, orelse = compile_expr(e.then), compile_expr(e.orelse)
        return lambda env: then(env) if cmp(cl(env), cr(env)) else orelse(env)
    op = _BINARY[e.op]
    left, right = compile_expr(e.left), compile_expr(e.right)
    return lambda env: op(left(env), right(env))


def evaluate(e: Expr, **env: int) -> int:
    return compile_expr(e)(env)
