"""Exact scalar arithmetic for the geometry pipeline.

A value is a finite sum of terms

    c * x1^a1 ... xN^aN * y1^b1 ... yN^bN * exp(l(x))

with rational c, nonnegative integer exponents, and l a rational linear form
in the base variables x1..xN only.  Distinct (monomial, linear form) keys are
linearly independent as functions, so the term map itself is a normal form:
two values are equal as functions iff their term maps are equal, and the zero
test is just "no terms".  That is what keeps every zero test downstream exact.

Division is only defined by units, i.e. single terms c * exp(l(x)) with no
monomial part.  exp() only accepts arguments that canonicalize to a pure
linear form in x with no constant part (exp of a nonzero rational constant
would leave the ring).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Rational = Fraction

__all__ = [
    "Rational",
    "LinForm",
    "Monomial",
    "CanonicalExpr",
    "SymExprError",
    "ParseError",
    "UnitDivisionError",
    "ExpArgumentError",
    "EvaluationError",
    "const",
    "xvar",
    "yvar",
    "exponential",
    "parse",
    "canonicalize",
    "parse_expr",
    "diff",
    "eval_at",
    "ZERO",
    "ONE",
]


class SymExprError(Exception):
    """Base class for expression-layer failures."""


class ParseError(SymExprError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnitDivisionError(SymExprError):
    """Raised when dividing by anything but c * exp(l(x)) with c a nonzero rational."""


class ExpArgumentError(SymExprError):
    """Raised when exp() is applied to a non-affine, constant-shifted, or fiber-dependent argument."""


class EvaluationError(SymExprError):
    """Raised when numeric evaluation is missing a variable assignment."""


def _var_key(name: str) -> tuple[str, int]:
    kind, tail = name[:1], name[1:]
    if kind not in ("x", "y") or not tail.isdigit() or int(tail) < 1:
        raise SymExprError(f"unknown variable {name!r}: expected x<k> or y<k> with k >= 1")
    return kind, int(tail)


# ---------------------------------------------------------------------------
# term keys
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinForm:
    """Rational linear form sum_i q_i * x_i.  No constant part, no zero entries."""

    coeffs: tuple[tuple[int, Fraction], ...]  # sorted by variable index

    @staticmethod
    def make(coeffs: Mapping[int, Fraction | int]) -> "LinForm":
        items = sorted((i, Fraction(q)) for i, q in coeffs.items() if q)
        for i, _ in items:
            if i < 1:
                raise SymExprError("linear-form variable indices start at 1")
        return LinForm(tuple(items))

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, index: int) -> Fraction:
        for i, q in self.coeffs:
            if i == index:
                return q
        return Fraction(0)

    def __add__(self, other: "LinForm") -> "LinForm":
        acc = dict(self.coeffs)
        for i, q in other.coeffs:
            acc[i] = acc.get(i, Fraction(0)) + q
        return LinForm.make(acc)

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((i, -q) for i, q in self.coeffs))

    def scaled(self, factor: Fraction) -> "LinForm":
        if not factor:
            return LinForm(())
        return LinForm(tuple((i, q * factor) for i, q in self.coeffs))

    def max_index(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    def dense(self, n: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * n
        for i, q in self.coeffs:
            out[i - 1] = q
        return tuple(out)

    def eval(self, xvals: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, q in self.coeffs:
            if i not in xvals:
                raise EvaluationError(f"no value assigned to x{i}")
            total += q * xvals[i]
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, q in self.coeffs:
            if q == 1:
                parts.append(f"x{i}")
            elif q == -1:
                parts.append(f"-x{i}")
            else:
                parts.append(f"{q}*x{i}")
        return _join_signed(parts)


def _exp_tuple_mul(a: tuple[tuple[int, int], ...], b: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for i, e in b:
        acc[i] = acc.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in acc.items() if e))


@dataclass(frozen=True)
class Monomial:
    """Exponent data x^a * y^b; entries sorted by index, exponents >= 1."""

    x: tuple[tuple[int, int], ...]
    y: tuple[tuple[int, int], ...]

    @staticmethod
    def make(x: Mapping[int, int] | None = None, y: Mapping[int, int] | None = None) -> "Monomial":
        def norm(m):
            items = sorted((i, int(e)) for i, e in (m or {}).items() if e)
            for i, e in items:
                if i < 1 or e < 0:
                    raise SymExprError("monomial indices start at 1 and exponents are nonnegative")
            return tuple(items)

        return Monomial(norm(x), norm(y))

    def is_empty(self) -> bool:
        return not self.x and not self.y

    def mul(self, other: "Monomial") -> "Monomial":
        return Monomial(_exp_tuple_mul(self.x, other.x), _exp_tuple_mul(self.y, other.y))

    def exponent(self, kind: str, index: int) -> int:
        for i, e in self.x if kind == "x" else self.y:
            if i == index:
                return e
        return 0

    def with_exponent(self, kind: str, index: int, exponent: int) -> "Monomial":
        src = dict(self.x if kind == "x" else self.y)
        if exponent:
            src[index] = exponent
        else:
            src.pop(index, None)
        packed = tuple(sorted(src.items()))
        if kind == "x":
            return Monomial(packed, self.y)
        return Monomial(self.x, packed)

    @property
    def total_degree(self) -> int:
        return sum(e for _, e in self.x) + sum(e for _, e in self.y)

    def y_degree(self) -> int:
        return sum(e for _, e in self.y)

    def max_x_index(self) -> int:
        return self.x[-1][0] if self.x else 0

    def max_y_index(self) -> int:
        return self.y[-1][0] if self.y else 0

    def dense_x(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i, e in self.x:
            out[i - 1] = e
        return tuple(out)

    def dense_y(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i, e in self.y:
            out[i - 1] = e
        return tuple(out)

    def eval(self, xvals: Mapping[int, Fraction], yvals: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(1)
        for i, e in self.x:
            if i not in xvals:
                raise EvaluationError(f"no value assigned to x{i}")
            total *= xvals[i] ** e
        for i, e in self.y:
            if i not in yvals:
                raise EvaluationError(f"no value assigned to y{i}")
            total *= yvals[i] ** e
        return total


_EMPTY_MONO = Monomial((), ())
_ZERO_LIN = LinForm(())

TermKey = tuple[Monomial, LinForm]


def _accumulate(acc: dict, key: TermKey, value: Fraction) -> None:
    cur = acc.get(key)
    if cur is None:
        if value:
            acc[key] = value
        return
    cur = cur + value
    if cur:
        acc[key] = cur
    else:
        del acc[key]


# ---------------------------------------------------------------------------
# canonical expressions
# ---------------------------------------------------------------------------


class CanonicalExpr:
    """Immutable normal form; the zero value is the empty term map."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TermKey, Fraction] | None = None):
        data: dict[TermKey, Fraction] = {}
        if terms:
            for key, q in terms.items():
                q = Fraction(q)
                if q:
                    data[key] = q
        self._terms = data

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value: Fraction | int) -> "CanonicalExpr":
        return CanonicalExpr({(_EMPTY_MONO, _ZERO_LIN): Fraction(value)})

    @staticmethod
    def variable(name: str) -> "CanonicalExpr":
        kind, idx = _var_key(name)
        mono = Monomial.make({idx: 1}, None) if kind == "x" else Monomial.make(None, {idx: 1})
        return CanonicalExpr({(mono, _ZERO_LIN): Fraction(1)})

    @staticmethod
    def exponential(lin: LinForm) -> "CanonicalExpr":
        return CanonicalExpr({(_EMPTY_MONO, lin): Fraction(1)})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[tuple[TermKey, Fraction]]:
        return iter(self._terms.items())

    def term_count(self) -> int:
        return len(self._terms)

    def uses_y(self) -> bool:
        return any(mono.y for (mono, _lin) in self._terms)

    def max_x_index(self) -> int:
        best = 0
        for mono, lin in self._terms:
            best = max(best, mono.max_x_index(), lin.max_index())
        return best

    def max_y_index(self) -> int:
        best = 0
        for mono, _lin in self._terms:
            best = max(best, mono.max_y_index())
        return best

    def is_y_homogeneous(self, degree: int) -> bool:
        return all(mono.y_degree() == degree for (mono, _lin) in self._terms)

    def y_linear_parts(self) -> dict[int, "CanonicalExpr"]:
        """Decompose sum_l y_l * f_l(x); every term must have y-degree exactly 1."""
        parts: dict[int, dict] = {}
        for (mono, lin), c in self._terms.items():
            if mono.y_degree() != 1:
                raise SymExprError("expression is not linear in the fiber variables")
            (l, _e), = mono.y
            stripped = (Monomial(mono.x, ()), lin)
            _accumulate(parts.setdefault(l, {}), stripped, c)
        return {l: CanonicalExpr(d) for l, d in parts.items()}

    def as_unit(self) -> tuple[Fraction, LinForm] | None:
        if len(self._terms) != 1:
            return None
        (mono, lin), c = next(iter(self._terms.items()))
        if not mono.is_empty():
            return None
        return c, lin

    def constant_value(self) -> Fraction | None:
        """The rational value if the expression is a constant, else None."""
        if not self._terms:
            return Fraction(0)
        unit = self.as_unit()
        if unit is not None and unit[1].is_zero():
            return unit[0]
        return None

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(value) -> "CanonicalExpr":
        if isinstance(value, CanonicalExpr):
            return value
        if isinstance(value, (int, Fraction)):
            return CanonicalExpr.const(value)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "CanonicalExpr":
        other = CanonicalExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for key, q in other._terms.items():
            _accumulate(acc, key, q)
        return CanonicalExpr(acc)

    __radd__ = __add__

    def __neg__(self) -> "CanonicalExpr":
        return CanonicalExpr({k: -q for k, q in self._terms.items()})

    def __sub__(self, other) -> "CanonicalExpr":
        other = CanonicalExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CanonicalExpr":
        return (-self) + other

    def __mul__(self, other) -> "CanonicalExpr":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return CanonicalExpr()
            return CanonicalExpr({k: c * q for k, c in self._terms.items()})
        if not isinstance(other, CanonicalExpr):
            return NotImplemented
        acc: dict[TermKey, Fraction] = {}
        for (m1, l1), c1 in self._terms.items():
            for (m2, l2), c2 in other._terms.items():
                _accumulate(acc, (m1.mul(m2), l1 + l2), c1 * c2)
        return CanonicalExpr(acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CanonicalExpr":
        if not isinstance(exponent, int):
            raise SymExprError("power exponents must be integers")
        if exponent < 0:
            return (CanonicalExpr.const(1) / self) ** (-exponent)
        result = CanonicalExpr.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other) -> "CanonicalExpr":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                raise UnitDivisionError("division by zero")
            return self * (1 / q)
        if not isinstance(other, CanonicalExpr):
            return NotImplemented
        unit = other.as_unit()
        if unit is None or not unit[0]:
            raise UnitDivisionError(
                "divisor must be a single term c*exp(l(x)) with nonzero rational c"
            )
        c, lin = unit
        inverse = CanonicalExpr({(_EMPTY_MONO, -lin): 1 / c})
        return self * inverse

    # -- calculus ----------------------------------------------------------

    def diff(self, var: str) -> "CanonicalExpr":
        """Exact partial derivative with respect to a named variable."""
        kind, idx = _var_key(var)
        acc: dict[TermKey, Fraction] = {}
        for (mono, lin), c in self._terms.items():
            e = mono.exponent(kind, idx)
            if e:
                _accumulate(acc, (mono.with_exponent(kind, idx, e - 1), lin), c * e)
            if kind == "x":
                q = lin.coeff(idx)
                if q:
                    _accumulate(acc, (mono, lin), c * q)
        return CanonicalExpr(acc)

    def eval(self, point: Mapping[str, Fraction | int]) -> float:
        """IEEE-double value at a rational point; exp is applied last per term."""
        xvals: dict[int, Fraction] = {}
        yvals: dict[int, Fraction] = {}
        for name, val in point.items():
            kind, idx = _var_key(name)
            (xvals if kind == "x" else yvals)[idx] = Fraction(val)
        total = 0.0
        for (mono, lin), c in self._sorted_terms():
            exact = c * mono.eval(xvals, yvals)
            if lin.is_zero():
                total += float(exact)
            else:
                total += float(exact) * math.exp(float(lin.eval(xvals)))
        return total

    # -- ordering, equality, printing --------------------------------------

    def _sorted_terms(self) -> list[tuple[TermKey, Fraction]]:
        nx = max(self.max_x_index(), 1)
        ny = max(self.max_y_index(), 1)

        def sort_key(item):
            (mono, lin), _c = item
            return (lin.dense(nx), mono.total_degree, mono.dense_x(nx), mono.dense_y(ny))

        return sorted(self._terms.items(), key=sort_key)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CanonicalExpr.const(other)
        if not isinstance(other, CanonicalExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        rendered = []
        for (mono, lin), c in self._sorted_terms():
            factors = []
            for i, e in mono.x:
                factors.append(f"x{i}^{e}" if e > 1 else f"x{i}")
            for i, e in mono.y:
                factors.append(f"y{i}^{e}" if e > 1 else f"y{i}")
            if not lin.is_zero():
                factors.append(f"exp({lin})")
            if not factors:
                rendered.append(str(c))
            elif c == 1:
                rendered.append("*".join(factors))
            elif c == -1:
                rendered.append("-" + "*".join(factors))
            else:
                rendered.append(f"{c}*" + "*".join(factors))
        return _join_signed(rendered)

    def __repr__(self) -> str:
        return f"CanonicalExpr({self})"


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


ZERO = CanonicalExpr()
ONE = CanonicalExpr.const(1)


def const(value: Fraction | int) -> CanonicalExpr:
    return CanonicalExpr.const(value)


def xvar(index: int) -> CanonicalExpr:
    return CanonicalExpr.variable(f"x{index}")


def yvar(index: int) -> CanonicalExpr:
    return CanonicalExpr.variable(f"y{index}")


def exponential(coeffs: Mapping[int, Fraction | int]) -> CanonicalExpr:
    """exp of the linear form sum(coeffs[i] * x_i)."""
    return CanonicalExpr.exponential(LinForm.make(coeffs))


def diff(expr: CanonicalExpr, var: str) -> CanonicalExpr:
    return expr.diff(var)


def eval_at(expr: CanonicalExpr, point: Mapping[str, Fraction | int]) -> float:
    return expr.eval(point)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------
#
# Grammar (loosest to tightest): '+'/'-', '*'/'/', unary '-', '^'.
#
#   expr   := term (('+'|'-') term)*
#   term   := unary (('*'|'/') unary)*
#   unary  := '-' unary | power
#   power  := atom ('^' ['-'] INT)*
#   atom   := INT | NAME | '(' expr ')' | 'exp' '(' expr ')'


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    kind: str
    index: int


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Neg:
    child: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Quot:
    num: object
    den: object


@dataclass(frozen=True)
class Exp:
    arg: object


@dataclass(frozen=True)
class _Token:
    kind: str  # INT NAME OP LPAREN RPAREN END
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(source) and source[j].isdigit():
                j += 1
            tokens.append(_Token("INT", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(source) and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^":
            tokens.append(_Token("OP", ch, line, start_col))
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, line, start_col))
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, line, start_col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, start_col)
        col += 1
        i += 1
    tokens.append(_Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "END":
            self.fail(f"unexpected trailing input {self.peek().text!r}")
        return node

    def expr(self):
        parts = [self.term()]
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            parts.append(Neg(rhs) if op == "-" else rhs)
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def term(self):
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.unary()
            node = Prod((node, rhs)) if op == "*" else Quot(node, rhs)
        return node

    def unary(self):
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            sign = 1
            if self.peek().kind == "OP" and self.peek().text == "-":
                self.advance()
                sign = -1
            tok = self.peek()
            if tok.kind != "INT":
                self.fail("power exponents must be integer literals", tok)
            self.advance()
            node = Pow(node, sign * int(tok.text))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return Const(Fraction(int(tok.text)))
        if tok.kind == "LPAREN":
            self.advance()
            node = self.expr()
            if self.peek().kind != "RPAREN":
                self.fail("expected ')'")
            self.advance()
            return node
        if tok.kind == "NAME":
            self.advance()
            if tok.text == "exp":
                if self.peek().kind != "LPAREN":
                    self.fail("exp must be followed by '('")
                self.advance()
                arg = self.expr()
                if self.peek().kind != "RPAREN":
                    self.fail("expected ')'")
                self.advance()
                return Exp(arg)
            kind, tail = tok.text[:1], tok.text[1:]
            if kind in ("x", "y") and tail.isdigit() and int(tail) >= 1:
                return Var(kind, int(tail))
            self.fail(f"unknown identifier {tok.text!r}", tok)
        self.fail(f"unexpected token {tok.text!r}" if tok.text else "unexpected end of input", tok)


def parse(source: str):
    """Parse to a syntax tree; raises ParseError with line/column on failure."""
    return _Parser(source).parse()


def _linform_of(expr: CanonicalExpr) -> LinForm:
    coeffs: dict[int, Fraction] = {}
    for (mono, lin), c in expr.items():
        if not lin.is_zero():
            raise ExpArgumentError("exp argument must not contain exponential factors")
        if mono.y:
            raise ExpArgumentError("exp argument must not depend on fiber variables")
        if mono.is_empty():
            raise ExpArgumentError("exp argument must have no constant part")
        if mono.total_degree != 1:
            raise ExpArgumentError("exp argument must be linear in the base variables")
        (i, _e), = mono.x
        coeffs[i] = coeffs.get(i, Fraction(0)) + c
    return LinForm.make(coeffs)


def canonicalize(node) -> CanonicalExpr:
    """Reduce a syntax tree to the canonical term map."""
    if isinstance(node, Const):
        return CanonicalExpr.const(node.value)
    if isinstance(node, Var):
        return CanonicalExpr.variable(f"{node.kind}{node.index}")
    if isinstance(node, Sum):
        total = CanonicalExpr()
        for part in node.terms:
            total = total + canonicalize(part)
        return total
    if isinstance(node, Prod):
        total = CanonicalExpr.const(1)
        for part in node.factors:
            total = total * canonicalize(part)
        return total
    if isinstance(node, Neg):
        return -canonicalize(node.child)
    if isinstance(node, Pow):
        return canonicalize(node.base) ** node.exponent
    if isinstance(node, Quot):
        return canonicalize(node.num) / canonicalize(node.den)
    if isinstance(node, Exp):
        return CanonicalExpr.exponential(_linform_of(canonicalize(node.arg)))
    raise SymExprError(f"unknown syntax node {node!r}")


def parse_expr(source: str) -> CanonicalExpr:
    """Parse and canonicalize in one step."""
    return canonicalize(parse(source))
