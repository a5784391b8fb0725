"""Expression language for chart-coordinate functions.

Expressions are written in a small infix language and parsed by a
recursive-descent parser into sympy trees. Sympy carries the exact
arithmetic, differentiation and substitution; numeric evaluation goes
through cached numpy lambdas.

Grammar (see docs/expression_grammar.md)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("-" | "+") unary | power
    power    := atom ("^" exponent)?
    exponent := ["-"] INTEGER | "(" ["-"] INTEGER ")"
    atom     := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

NAME is a coordinate ``x1..xd``, the loop parameter ``t``, a family
parameter ``s`` (or ``s1``, ``s2``...), or one of the constants ``pi``
and ``i``. FUNC is one of ``exp``, ``log``, ``sin``, ``cos``.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy

from .exceptions import ExprSyntaxError, PossibleZero, UnknownSymbol

logger = logging.getLogger(__name__)

Expr = sympy.Expr
Box = Sequence[Tuple[float, float]]

T = sympy.Symbol("t", real=True)
S = sympy.Symbol("s", real=True)

FUNCTIONS: Dict[str, Callable[[Expr], Expr]] = {
    "exp": sympy.exp,
    "log": sympy.log,
    "sin": sympy.sin,
    "cos": sympy.cos,
}
CONSTANTS: Dict[str, Expr] = {"pi": sympy.pi, "i": sympy.I}

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)
_VARIABLE = re.compile(r"^(x\d+|t|s\d*)$")


def coordinate(index: int) -> sympy.Symbol:
    """The 1-based coordinate symbol x<index>."""
    return sympy.Symbol(f"x{index}", real=True)


def coordinates(dim: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(coordinate(i) for i in range(1, dim + 1))


def family_parameter(index: Optional[int] = None) -> sympy.Symbol:
    return S if index is None else sympy.Symbol(f"s{index}", real=True)


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


class ExprParser:
    """Recursive-descent parser producing sympy expressions.

    Offsets in error messages are byte offsets into the UTF-8 encoding
    of the input text.
    """

    def __init__(self, text: str, dim: Optional[int] = None, extra: Sequence[str] = ()):
        self.text = text
        self.dim = dim
        self.extra = set(extra)
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _byte_offset(self, char_offset: int) -> int:
        return len(self.text[:char_offset].encode("utf-8"))

    def _tokenize(self, text: str) -> List[_Token]:
        tokens: List[_Token] = []
        index = 0
        while index < len(text):
            if text[index].isspace():
                index += 1
                continue
            match = _TOKEN.match(text, index)
            if match is None or match.end() == index:
                raise ExprSyntaxError(
                    f"unexpected character {text[index]!r}", self._byte_offset(index), text
                )
            kind = match.lastgroup or "op"
            start = match.start(kind)
            tokens.append(_Token(kind, match.group(kind), start))
            index = match.end()
        tokens.append(_Token("end", "", len(text)))
        return tokens

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _fail(self, token: _Token) -> ExprSyntaxError:
        if token.kind == "end":
            return ExprSyntaxError("unexpected end of input", self._byte_offset(token.offset), self.text)
        return ExprSyntaxError(f"unexpected '{token.text}'", self._byte_offset(token.offset), self.text)

    def _expect(self, op: str) -> None:
        token = self._advance()
        if token.kind != "op" or token.text != op:
            raise self._fail(token)

    def parse(self) -> Expr:
        result = self._expr()
        if self.current.kind != "end":
            raise self._fail(self.current)
        return result

    def _expr(self) -> Expr:
        result = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            right = self._term()
            result = result + right if op == "+" else result - right
        return result

    def _term(self) -> Expr:
        result = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            right = self._unary()
            result = result * right if op == "*" else result / right
        return result

    def _unary(self) -> Expr:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            operand = self._unary()
            return -operand if op == "-" else operand
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            return base ** self._exponent()
        return base

    def _exponent(self) -> int:
        parenthesised = self.current.kind == "op" and self.current.text == "("
        if parenthesised:
            self._advance()
        sign = 1
        if self.current.kind == "op" and self.current.text == "-":
            self._advance()
            sign = -1
        token = self._advance()
        if token.kind != "number" or not token.text.isdigit():
            raise ExprSyntaxError(
                "exponent must be an integer literal", self._byte_offset(token.offset), self.text
            )
        if parenthesised:
            self._expect(")")
        return sign * int(token.text)

    def _atom(self) -> Expr:
        token = self._advance()
        if token.kind == "number":
            value = Fraction(token.text)
            return sympy.Rational(value.numerator, value.denominator)
        if token.kind == "op" and token.text == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        if token.kind == "name":
            name = token.text
            if name in FUNCTIONS:
                self._expect("(")
                argument = self._expr()
                self._expect(")")
                return FUNCTIONS[name](argument)
            if name in CONSTANTS:
                return CONSTANTS[name]
            if self._is_variable(name):
                return sympy.Symbol(name, real=True)
            raise UnknownSymbol(name, self._byte_offset(token.offset))
        raise self._fail(token)

    def _is_variable(self, name: str) -> bool:
        if name in self.extra:
            return True
        if not _VARIABLE.match(name):
            return False
        if name.startswith("x") and self.dim is not None:
            return 1 <= int(name[1:]) <= self.dim
        return not name.startswith("x") or int(name[1:]) >= 1


def parse_expr(text: str, dim: Optional[int] = None, box: Optional[Box] = None) -> Expr:
    """Parse expression text.

    Args:
        text: expression source
        dim: ambient dimension; coordinates above it are unknown symbols
        box: chart box on which every ``log`` argument must be certified
            nonvanishing

    Returns:
        The sympy expression.
    """
    expr = ExprParser(str(text), dim).parse()
    if box is not None:
        validate_logs(expr, box)
    return expr


def diff_expr(expr: Expr, coord) -> Expr:
    """Exact partial derivative with respect to x<coord> (or a named symbol)."""
    symbol = coordinate(coord) if isinstance(coord, int) else sympy.Symbol(str(coord), real=True)
    return sympy.diff(expr, symbol)


@lru_cache(maxsize=4096)
def _lambdify(expr: Expr, names: Tuple[str, ...]) -> Callable:
    symbols = [sympy.Symbol(n, real=True) for n in names]
    return sympy.lambdify(symbols, expr, modules="numpy")


def compile_expr(expr: Expr, dim: int, extra: Sequence[str] = ("t", "s")) -> Callable[..., np.ndarray]:
    """Vectorised complex evaluator ``f(points, **params)``.

    ``points`` has shape (N, dim) (or (dim,)); keyword parameters are
    scalars or arrays broadcastable to N.
    """
    names = tuple(f"x{i}" for i in range(1, dim + 1)) + tuple(extra)
    function = _lambdify(sympy.sympify(expr), names)

    def evaluate(points, **params) -> np.ndarray:
        array = np.asarray(points, dtype=float)
        single = array.ndim == 1
        array = np.atleast_2d(array)
        columns = [array[:, j] for j in range(dim)]
        values = [np.asarray(params.get(name, 0.0), dtype=float) for name in extra]
        with np.errstate(all="ignore"):
            result = function(*columns, *values)
        result = np.broadcast_to(np.asarray(result, dtype=complex), (array.shape[0],))
        return result[0] if single else result

    return evaluate


def evaluate(expr: Expr, point: Sequence[float] = (), **params) -> complex:
    """Evaluate at one point; exact substitution followed by a complex cast."""
    substitution = {coordinate(i + 1): sympy.sympify(v) for i, v in enumerate(point)}
    substitution.update({sympy.Symbol(k, real=True): v for k, v in params.items()})
    value = sympy.sympify(expr).subs(substitution)
    return complex(sympy.N(value, 17))


def is_constant(expr: Expr) -> bool:
    return not sympy.sympify(expr).free_symbols


def _interval(expr: Expr, box: Dict[sympy.Symbol, Tuple[float, float]]):
    iv = mpmath.iv
    if expr.is_Integer:
        return iv.mpf(int(expr))
    if expr.is_Rational:
        return iv.mpf(int(expr.p)) / iv.mpf(int(expr.q))
    if expr is sympy.pi:
        return iv.pi
    if expr is sympy.E:
        return iv.e
    if expr.is_Float:
        return iv.mpf(float(expr))
    if expr.is_Symbol:
        if expr not in box:
            raise ValueError(expr)
        lo, hi = box[expr]
        return iv.mpf([lo, hi])
    args = [_interval(a, box) for a in expr.args]
    if expr.is_Add:
        result = args[0]
        for a in args[1:]:
            result = result + a
        return result
    if expr.is_Mul:
        result = args[0]
        for a in args[1:]:
            result = result * a
        return result
    if expr.is_Pow and expr.exp.is_Integer:
        return args[0] ** int(expr.exp)
    unary = {sympy.sin: iv.sin, sympy.cos: iv.cos, sympy.exp: iv.exp, sympy.log: iv.log}
    if expr.func in unary:
        return unary[expr.func](args[0])
    raise ValueError(expr)


def _excludes_zero(expr: Expr, box: Dict[sympy.Symbol, Tuple[float, float]], depth: int) -> bool:
    try:
        enclosure = _interval(expr, box)
    except (ValueError, ZeroDivisionError, TypeError):
        return False
    if enclosure.a > 0 or enclosure.b < 0:
        return True
    if depth == 0 or not box:
        return False
    # bisect the widest side
    widest = max(box, key=lambda s: box[s][1] - box[s][0])
    lo, hi = box[widest]
    middle = (lo + hi) / 2
    return all(
        _excludes_zero(expr, {**box, widest: half}, depth - 1)
        for half in ((lo, middle), (middle, hi))
    )


def certify_nonvanishing(expr: Expr, box: Box, depth: int = 6) -> bool:
    """True when ``expr`` is provably nonzero on the coordinate box.

    Certified: nonzero constants, exponentials, products, quotients and
    integer powers of certified factors, and real expressions whose
    interval enclosure on the box (with bisection) excludes zero.
    """
    expr = sympy.sympify(expr)
    if expr.is_number:
        return complex(sympy.N(expr)) != 0
    if expr.func is sympy.exp:
        return True
    if expr.is_Mul:
        return all(certify_nonvanishing(f, box, depth) for f in expr.args)
    if expr.is_Pow and expr.exp.is_Integer:
        return certify_nonvanishing(expr.base, box, depth)
    if expr.is_real:
        ranges = {coordinate(i + 1): (float(lo), float(hi)) for i, (lo, hi) in enumerate(box)}
        ranges.update({s: (0.0, 1.0) for s in expr.free_symbols if s.name == "t"})
        return _excludes_zero(expr, ranges, depth)
    return False


def validate_logs(expr: Expr, box: Box) -> None:
    """Reject ``log`` applications whose argument may vanish on the box."""
    for node in sympy.preorder_traversal(sympy.sympify(expr)):
        if getattr(node, "func", None) is sympy.log:
            if not certify_nonvanishing(node.args[0], box):
                raise PossibleZero(str(node.args[0]))


def is_periodic(expr: Expr, dim: int, samples: int = 16, seed: int = 0, tol: float = 1e-9) -> bool:
    """Sampled check that the expression is invariant under integer shifts."""
    function = compile_expr(expr, dim)
    rng = np.random.default_rng(seed)
    points = rng.random((samples, dim))
    base = function(points)
    for j in range(dim):
        shifted = points.copy()
        shifted[:, j] += 1.0
        moved = function(shifted)
        if not np.all(np.abs(moved - base) <= tol * np.maximum(1.0, np.abs(base))):
            return False
    return True
