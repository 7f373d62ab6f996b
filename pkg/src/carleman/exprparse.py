"""Coefficient expressions in the contour variable.

Grammar (LL(1), recursive descent)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := base ("^" intexp)?
    base   := number | "i" | "t" | "tau" | ident "(" expr ")" | "(" expr ")" | "-" base
    intexp := ["("] ["-"] digits [")"] ("^" intexp)?

Note that unary minus sits inside ``base``, so ``-t^2`` means ``(-t)^2``.
A number immediately followed by ``i`` is an imaginary literal (``2i``).
``pi`` is accepted as a constant.  Evaluation is vectorized over numpy arrays.
"""
import re
from dataclasses import dataclass

import numpy as np

from .errors import (ExprDivisionByZeroError, ExprSyntaxError, NonIntegerExponentError,
                     UnboundVariableError)

FUNCTIONS = {
    "conj": np.conj,
    "re": lambda z: np.real(z) + 0j,
    "im": lambda z: np.imag(z) + 0j,
    "exp": np.exp,
}
DEFAULT_VARIABLES = ("t", "tau")
ZERO_DIVISOR = 1e-30


@dataclass(frozen=True)
class Num:
    value: complex
    text: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?(?![A-Za-z_0-9]))
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            tokens.append((kind if kind != "op" else text, text, pos))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src, variables):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.variables = variables

    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, expected):
        kind, text, offset = self.tok
        what = "end of input" if kind == "eof" else f"token {text!r}"
        raise ExprSyntaxError(f"unexpected {what}", offset, expected)

    def expect(self, kind):
        if self.tok[0] != kind:
            self.error([kind])
        self.pos += 1

    def parse(self):
        node = self.expr()
        if self.tok[0] != "eof":
            self.error(["+", "-", "*", "/", "^", "end of input"])
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.tok[0]
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] in ("*", "/"):
            op = self.tok[0]
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.tok[0] == "^":
            self.pos += 1
            node = Pow(node, self.int_exponent())
        return node

    def int_exponent(self):
        start = self.tok[2]
        paren = self.tok[0] == "("
        if paren:
            self.pos += 1
        sign = 1
        if self.tok[0] == "-":
            sign = -1
            self.pos += 1
        kind, text, offset = self.tok
        if kind != "num":
            self.error(["integer"])
        if not re.fullmatch(r"\d+", text):
            raise NonIntegerExponentError(f"exponent {text!r} is not an integer", offset)
        self.pos += 1
        if paren:
            self.expect(")")
        value = sign * int(text)
        if self.tok[0] == "^":
            self.pos += 1
            inner = self.int_exponent()
            if inner < 0 and abs(value) != 1:
                raise NonIntegerExponentError("exponent tower is not an integer", start)
            value = value ** inner if inner >= 0 else int(round(value ** inner))
        return value

    def base(self):
        kind, text, offset = self.tok
        if kind == "num":
            self.pos += 1
            if text.endswith("i"):
                return Num(complex(0, float(text[:-1])), text)
            return Num(complex(float(text)), text)
        if kind == "-":
            self.pos += 1
            return Neg(self.base())
        if kind == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            self.pos += 1
            if self.tok[0] == "(":
                if text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", offset, FUNCTIONS)
                self.pos += 1
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text == "i":
                return Num(1j, "i")
            if text == "pi":
                return Num(complex(np.pi), "pi")
            if text in self.variables:
                return Var(text)
            raise ExprSyntaxError(f"unknown name {text!r}", offset,
                                  ("i", "pi") + tuple(self.variables))
        self.error(["number", "i", *self.variables, "(", "-", "function"])


def parse(src, variables=DEFAULT_VARIABLES):
    """Parse ``src`` into an expression tree."""
    return _Parser(src, tuple(variables)).parse()


def variables_of(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables_of(node.operand if isinstance(node, Neg) else node.arg)
    if isinstance(node, Pow):
        return variables_of(node.base)
    return variables_of(node.left) | variables_of(node.right)


def evaluate(node, t=None, tau=None, **env):
    """Evaluate with complex scalars or numpy arrays bound to the variables."""
    env = dict(env)
    if t is not None:
        env["t"] = t
    if tau is not None:
        env["tau"] = tau
    return _eval(node, env)


def _check_divisor(d):
    if np.any(np.abs(d) < ZERO_DIVISOR):
        raise ExprDivisionByZeroError("division by zero in expression")


def _eval(node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name not in env:
            raise UnboundVariableError(f"variable {node.name!r} is not bound")
        return np.asarray(env[node.name], dtype=complex) if np.ndim(env[node.name]) \
            else complex(env[node.name])
    if isinstance(node, Neg):
        return -_eval(node.operand, env)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, env))
    if isinstance(node, Pow):
        base = _eval(node.base, env)
        if node.exponent < 0:
            _check_divisor(base)
            return (1.0 / base) ** (-node.exponent)
        return base ** node.exponent
    left = _eval(node.left, env)
    right = _eval(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    _check_divisor(right)
    return left / right


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def unparse(node, _ctx=0):
    """Render with the minimal parentheses needed to parse back to ``node``.

    Context levels: 0 expression, 1 right operand of +/-, 2 term operand,
    3 right operand of * or /, 4 base (operand of ^ or unary minus).
    """
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({unparse(node.arg)})"
    if isinstance(node, Neg):
        return "-" + unparse(node.operand, 4)
    if isinstance(node, Pow):
        exp = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        s = f"{unparse(node.base, 4)}^{exp}"
        return f"({s})" if _ctx >= 4 else s
    prec = _PREC[node.op]
    left = unparse(node.left, 0 if prec == 1 else 2)
    right = unparse(node.right, 1 if prec == 1 else 3)
    s = f"{left} {node.op} {right}" if prec == 1 else f"{left}*{right}" if node.op == "*" \
        else f"{left}/{right}"
    needs = (prec == 1 and _ctx >= 1) or (prec == 2 and _ctx >= 3)
    return f"({s})" if needs else s
