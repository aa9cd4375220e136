"""
Sparse bivariate polynomials over Q, approximate roots of a delta-sequence
core and the evaluation of values at infinity.

The resultant oracle is an independent check of the evaluator: for a curve
q_{g+1} = 0 with one place at infinity, the degree in x of Res_y(f, q_{g+1})
is the pole order of f at that place.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union
import logging
import operator
import re
import sys
import os

import sympy

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import (
    CommonFactorError,
    ExponentOverflowError,
    PolynomialError,
    PolynomialSyntaxError,
    ZeroPolynomialError
)
from valuations.delta import DeltaCore, DeltaSequence, TypeASequence, TypeBSequence
from valuations.semigroup import expansion_digits
from valuations.values import OrderedValue

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]
RationalLike = Union[int, Fraction, str]

X, Y = sympy.symbols("x y")


class BivariatePolynomial:
    """
    Immutable sparse polynomial {(i, j): c} for sum c*x^i*y^j, zero coefficients never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, RationalLike]] = None):
        cleaned: Dict[Exponent, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            i, j = operator.index(i), operator.index(j)
            if i < 0 or j < 0:
                raise PolynomialError(f"negative exponent in x^{i}*y^{j}")
            c = Fraction(c)
            if c:
                cleaned[(i, j)] = cleaned.get((i, j), Fraction(0)) + c
        self._terms = {k: v for k, v in cleaned.items() if v}

    @classmethod
    def constant(cls, c: RationalLike) -> "BivariatePolynomial":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, i: int, j: int, c: RationalLike = 1) -> "BivariatePolynomial":
        return cls({(i, j): c})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_x(self) -> int:
        return max((i for i, _ in self._terms), default=-1)

    def degree_y(self) -> int:
        return max((j for _, j in self._terms), default=-1)

    def coefficient_y(self, j: int) -> "BivariatePolynomial":
        """Coefficient of y^j as a polynomial in x."""
        return BivariatePolynomial({(a, 0): c for (a, b), c in self._terms.items() if b == j})

    def is_monic_in_y(self) -> bool:
        top = self.degree_y()
        return top >= 0 and self.coefficient_y(top) == BivariatePolynomial.constant(1)

    # Arithmetic
    @staticmethod
    def _lift(other) -> Optional["BivariatePolynomial"]:
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return BivariatePolynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        merged = dict(self._terms)
        for k, c in other._terms.items():
            merged[k] = merged.get(k, Fraction(0)) + c
        return BivariatePolynomial(merged)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        product: Dict[Exponent, Fraction] = {}
        for (a, b), c in self._terms.items():
            for (p, q), d in other._terms.items():
                key = (a + p, b + q)
                product[key] = product.get(key, Fraction(0)) + c * d
        return BivariatePolynomial(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        exponent = operator.index(exponent)
        if exponent < 0:
            raise PolynomialError(f"negative power {exponent}")
        result = BivariatePolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, scalar):
        if isinstance(scalar, BivariatePolynomial):
            if not scalar.is_constant() or scalar.is_zero():
                raise PolynomialError("division is only by a nonzero constant")
            scalar = scalar._terms[(0, 0)]
        scalar = Fraction(scalar)
        if scalar == 0:
            raise PolynomialError("division by zero")
        return BivariatePolynomial({k: c / scalar for k, c in self._terms.items()})

    def divmod_y(self, q: "BivariatePolynomial") -> Tuple["BivariatePolynomial", "BivariatePolynomial"]:
        """
        Division in y over Q[x] by a polynomial monic in y.

        Returns:
            (quotient, remainder) with deg_y(remainder) < deg_y(q)
        """
        if not q.is_monic_in_y():
            raise PolynomialError(f"divisor {q} is not monic in y")
        n = q.degree_y()
        lower = q - BivariatePolynomial.monomial(0, n)
        quotient: Dict[Exponent, Fraction] = {}
        remainder = self
        while remainder.degree_y() >= n:
            top = remainder.degree_y()
            lead = remainder.coefficient_y(top) * BivariatePolynomial.monomial(0, top - n)
            for k, c in lead._terms.items():
                quotient[k] = quotient.get(k, Fraction(0)) + c
            # remainder - lead*q, with the y^top part cancelling exactly
            remainder = BivariatePolynomial(
                {k: c for k, c in remainder._terms.items() if k[1] != top}
            ) - lead * lower
        return BivariatePolynomial(quotient), remainder

    def evaluate(self, x: RationalLike, y: RationalLike) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((c * x ** i * y ** j for (i, j), c in self._terms.items()), Fraction(0))

    def substitute(self, x: Optional["BivariatePolynomial"] = None,
                   y: Optional["BivariatePolynomial"] = None) -> "BivariatePolynomial":
        """Replace the variables by polynomials."""
        x = x if x is not None else BivariatePolynomial.x()
        y = y if y is not None else BivariatePolynomial.y()
        result = BivariatePolynomial()
        for (i, j), c in self._terms.items():
            result = result + (x ** i) * (y ** j) * c
        return result

    # Conversions
    def to_sympy(self):
        return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * X ** i * Y ** j
                           for (i, j), c in self._terms.items()])

    @classmethod
    def from_sympy(cls, expr) -> "BivariatePolynomial":
        poly = sympy.Poly(expr, X, Y, domain="QQ")
        return cls({monom: Fraction(int(c.p), int(c.q)) for monom, c in poly.terms()})

    def to_json(self) -> dict:
        return {f"{i},{j}": str(c) for (i, j), c in sorted(self._terms.items())}

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        ordered = sorted(self._terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0]))
        parts = []
        for index, ((i, j), c) in enumerate(ordered):
            negative = c < 0
            magnitude = -c if negative else c
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            if index == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"BivariatePolynomial({self})"


# Parsing

class Token(NamedTuple):
    kind: str
    value: Union[str, int]
    position: int


_TOKENS = {
    "number": r"\d+",
    "var": r"[xy]",
    "lpar": r"\(",
    "rpar": r"\)",
    "pow": r"\^",
    "mul": r"\*",
    "div": r"/",
    "plus": r"\+",
    "minus": r"-",
    "skip": r"[ \t]+",
    "error": r".",
}
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{text})" for name, text in _TOKENS.items()))


def tokenize(text: str) -> Iterator[Token]:
    for mo in _TOKEN_RE.finditer(text):
        kind = mo.lastgroup
        value = mo.group()
        if kind == "skip":
            continue
        if kind == "error":
            raise PolynomialSyntaxError(text, mo.start(), f"unexpected character '{value}'")
        if kind == "number":
            value = int(value)
        yield Token(kind, value, mo.start())


class _Parser:
    """
    Recursive descent over

        expr  := term (('+' | '-') term)*
        term  := unary (('*' | '/') unary)*
        unary := ('+' | '-') unary | power
        power := atom ('^' number)?
        atom  := number | 'x' | 'y' | '(' expr ')'
    """

    def __init__(self, text: str, max_exponent: int):
        self.text = text
        self.max_exponent = max_exponent
        self.tokens = list(tokenize(text))
        self.pos = 0

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _error(self, message: str) -> PolynomialSyntaxError:
        token = self._peek()
        position = token.position if token else len(self.text)
        return PolynomialSyntaxError(self.text, position, message)

    def _take(self, kind: str) -> Token:
        token = self._peek()
        if token is None or token.kind != kind:
            found = "end of input" if token is None else f"'{token.value}'"
            raise self._error(f"expected {kind}, found {found}")
        self.pos += 1
        return token

    def parse(self) -> BivariatePolynomial:
        if not self.tokens:
            raise PolynomialSyntaxError(self.text, 0, "empty expression")
        result = self._expr()
        if self._peek() is not None:
            raise self._error(f"unexpected '{self._peek().value}'")
        return result

    def _expr(self) -> BivariatePolynomial:
        result = self._term()
        while self._peek() is not None and self._peek().kind in ("plus", "minus"):
            op = self._take(self._peek().kind)
            rhs = self._term()
            result = result + rhs if op.kind == "plus" else result - rhs
        return result

    def _term(self) -> BivariatePolynomial:
        result = self._unary()
        while self._peek() is not None and self._peek().kind in ("mul", "div"):
            op = self._take(self._peek().kind)
            start = self._peek()
            rhs = self._unary()
            if op.kind == "mul":
                result = result * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    position = start.position if start else len(self.text)
                    raise PolynomialSyntaxError(self.text, position, "'/' needs a nonzero constant divisor")
                result = result / rhs
        return result

    def _unary(self) -> BivariatePolynomial:
        token = self._peek()
        if token is not None and token.kind in ("plus", "minus"):
            self.pos += 1
            operand = self._unary()
            return -operand if token.kind == "minus" else operand
        return self._power()

    def _power(self) -> BivariatePolynomial:
        base = self._atom()
        if self._peek() is not None and self._peek().kind == "pow":
            self.pos += 1
            exponent = self._take("number").value
            if exponent > self.max_exponent:
                raise ExponentOverflowError(exponent, self.max_exponent)
            if base.degree() * exponent > self.max_exponent:
                raise ExponentOverflowError(base.degree() * exponent, self.max_exponent)
            return base ** exponent
        return base

    def _atom(self) -> BivariatePolynomial:
        token = self._peek()
        if token is None:
            raise self._error("unexpected end of input")
        if token.kind == "number":
            self.pos += 1
            return BivariatePolynomial.constant(token.value)
        if token.kind == "var":
            self.pos += 1
            return BivariatePolynomial.x() if token.value == "x" else BivariatePolynomial.y()
        if token.kind == "lpar":
            self.pos += 1
            inner = self._expr()
            self._take("rpar")
            return inner
        raise self._error(f"unexpected '{token.value}'")


def parse_poly(text: str, max_exponent: Optional[int] = None) -> BivariatePolynomial:
    """
    Parse polynomial text such as "(y^3-x^2)^2 - x^3*y" or "3/2*x".

    Raises:
        PolynomialSyntaxError: With the offending position
        ExponentOverflowError: If a literal exponent, or the degree of a power, exceeds max_exponent
    """
    limit = max_exponent if max_exponent is not None else get_config().curves.max_exponent
    return _Parser(text, limit).parse()


# Approximate roots

@dataclass(frozen=True)
class QAdicTerm:
    """coefficient * q_0^{s_0} * ... * q_{g+1}^{s_{g+1}}"""
    coefficient: Fraction
    exponents: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"coefficient": str(self.coefficient), "exponents": list(self.exponents)}


def _wrap(expression: str) -> str:
    return expression if expression in ("x", "y") else f"({expression})"


@dataclass(frozen=True)
class ApproximateRoots:
    """q_0 = x, q_1 = y and q_{i+1} = q_i^{n_i} - t_i * prod_j q_j^{a_ij} for 1 <= i <= g."""
    polynomials: Tuple[BivariatePolynomial, ...]
    expressions: Tuple[str, ...]
    core: DeltaCore
    t: Tuple[Fraction, ...]
    digits: Tuple[Tuple[int, ...], ...]

    @property
    def g(self) -> int:
        return self.core.g

    def degrees(self) -> List[int]:
        """Degrees of q_2, ..., q_{g+1}."""
        return [q.degree() for q in self.polynomials[2:]]

    def __getitem__(self, index: int) -> BivariatePolynomial:
        return self.polynomials[index]

    def __len__(self) -> int:
        return len(self.polynomials)

    def monomial(self, exponents: Sequence[int]) -> BivariatePolynomial:
        result = BivariatePolynomial.constant(1)
        for q, s in zip(self.polynomials, exponents):
            if s:
                result = result * q ** s
        return result

    def to_dict(self) -> dict:
        result = {f"q{i}": e for i, e in enumerate(self.expressions)}
        result["degrees"] = self.degrees()
        result["t"] = [str(t) for t in self.t]
        return result


def _parse_t(t: Optional[Sequence[RationalLike]], g: int) -> Tuple[Fraction, ...]:
    if t is None:
        return tuple(Fraction(get_config().curves.default_t) for _ in range(g))
    values = tuple(Fraction(v) for v in t)
    if len(values) != g:
        raise PolynomialError(f"expected {g} values of t, got {len(values)}")
    if any(v == 0 for v in values):
        raise PolynomialError("every t_i must be nonzero")
    return values


def approximate_roots(core: Union[DeltaCore, Sequence[int]],
                      t: Optional[Sequence[RationalLike]] = None) -> ApproximateRoots:
    """
    Build the approximate roots q_0..q_{g+1} of a valid core.

    Args:
        core: Valid delta-sequence core
        t: g nonzero rationals, defaulting to the configured default_t

    Raises:
        InvalidCoreError: If the core is not valid
        PolynomialError: If t is malformed or a degree check fails
    """
    core = DeltaCore.of(core).require_valid()
    g = core.g
    ts = _parse_t(t, g)
    polys = [BivariatePolynomial.x(), BivariatePolynomial.y()]
    expressions = ["x", "y"]
    all_digits = []
    for i in range(1, g + 1):
        digits = expansion_digits(core, i)
        all_digits.append(digits)
        product = BivariatePolynomial.constant(1)
        factors = []
        for j, a in enumerate(digits):
            if a:
                product = product * polys[j] ** a
                factors.append(_wrap(expressions[j]) + (f"^{a}" if a > 1 else ""))
        n_i = core.n[i - 1]
        polys.append(polys[i] ** n_i - product * ts[i - 1])

        head = f"{_wrap(expressions[i])}^{n_i}"
        coefficient = abs(ts[i - 1])
        sign = "-" if ts[i - 1] > 0 else "+"
        if not factors:
            tail = str(coefficient)
        elif coefficient == 1:
            tail = "*".join(factors)
        else:
            tail = "*".join([str(coefficient)] + factors)
        expressions.append(f"{head} {sign} {tail}")

    d = core.d
    for i in range(1, g + 2):
        q = polys[i]
        expected = core.entries[0] // d[i - 1]
        if q.degree() != expected or q.degree_y() != expected or not q.is_monic_in_y():
            raise PolynomialError(f"q{i} = {q} fails the degree check (expected {expected})")
    logger.debug("approximate roots of %s: %s", core, expressions[2:])
    return ApproximateRoots(tuple(polys), tuple(expressions), core, ts, tuple(all_digits))


def _expand_level(f: BivariatePolynomial, roots: ApproximateRoots, level: int,
                  width: int) -> List[Tuple[Fraction, List[int]]]:
    """Digits of f in q_0..q_level; level 1 is the monomial base."""
    if level == 1:
        result = []
        for (i, j), c in f.terms.items():
            exponents = [0] * width
            exponents[0], exponents[1] = i, j
            result.append((c, exponents))
        return result
    result = []
    power = 0
    remaining = f
    while not remaining.is_zero():
        remaining, digit = remaining.divmod_y(roots[level])
        for c, exponents in _expand_level(digit, roots, level - 1, width):
            exponents[level] = power
            result.append((c, exponents))
        power += 1
    return result


def qadic_expand(f: BivariatePolynomial, roots: ApproximateRoots) -> List[QAdicTerm]:
    """
    Expand f as sum c * prod q_i^{s_i} with 0 <= s_i < n_i for 1 <= i <= g.

    Raises:
        ZeroPolynomialError: If f is zero
    """
    if f.is_zero():
        raise ZeroPolynomialError("qadic_expand")
    width = roots.g + 2
    terms = [QAdicTerm(c, tuple(e)) for c, e in _expand_level(f, roots, roots.g + 1, width)]
    return sorted(terms, key=lambda term: term.exponents)


def reconstruct(terms: Sequence[QAdicTerm], roots: ApproximateRoots) -> BivariatePolynomial:
    """Substitute the roots back into an expansion."""
    result = BivariatePolynomial()
    for term in terms:
        result = result + roots.monomial(term.exponents) * term.coefficient
    return result


@dataclass(frozen=True)
class ValueAtInfinity:
    """
    -nu(f) as the maximum over the expansion terms.

    generic is set when the extremal term involves q_{g+1} or ties with one
    that does; the value then holds for generic choices of t.
    """
    value: OrderedValue
    generic: bool
    term: QAdicTerm

    def to_dict(self) -> dict:
        return {"value": self.value.to_json(), "generic": self.generic, "term": self.term.to_dict()}


def _weights(seq: DeltaSequence) -> List[OrderedValue]:
    if isinstance(seq, (TypeASequence, TypeBSequence)):
        return seq.generators()
    raise PolynomialError(f"values at infinity are evaluated for types A and B, got {seq.type_tag}")


def _term_value(term: QAdicTerm, weights: Sequence[OrderedValue]) -> OrderedValue:
    total = weights[0].zero()
    for s, w in zip(term.exponents, weights):
        if s:
            total = total + w.scale(s)
    return total


def value_at_infinity(f: BivariatePolynomial, seq: DeltaSequence,
                      roots: Optional[ApproximateRoots] = None) -> ValueAtInfinity:
    """
    Evaluate -nu(f) for a type A or B sequence.

    Raises:
        ZeroPolynomialError: If f is zero
        PolynomialError: For other sequence types
    """
    weights = _weights(seq)
    roots = roots or approximate_roots(seq.base_core)
    terms = qadic_expand(f, roots)
    top = len(weights) - 1
    valued = [(_term_value(term, weights), term) for term in terms]
    best_value = max(v for v, _ in valued)
    extremal = [term for v, term in valued if v == best_value]
    generic = any(term.exponents[top] > 0 for term in extremal)
    chosen = next((term for term in extremal if term.exponents[top] == 0), extremal[0])
    return ValueAtInfinity(best_value, generic, chosen)


def core_value(f: BivariatePolynomial, roots: ApproximateRoots) -> int:
    """
    Value of f on the curve q_{g+1} = 0 with the core weights delta_0..delta_g.

    Raises:
        ZeroPolynomialError: If f is zero or a multiple of q_{g+1}
    """
    if f.is_zero():
        raise ZeroPolynomialError("core_value")
    _, remainder = f.divmod_y(roots[roots.g + 1])
    if remainder.is_zero():
        raise ZeroPolynomialError("core_value of a multiple of the curve equation")
    width = roots.g + 2
    weights = roots.core.entries
    best = None
    for _, exponents in _expand_level(remainder, roots, roots.g, width):
        value = sum(s * w for s, w in zip(exponents, weights))
        best = value if best is None else max(best, value)
    return best


def resultant_oracle(f: BivariatePolynomial, q: BivariatePolynomial) -> int:
    """
    Degree in x of Res_y(f, q), with Res = f^{deg_y q} when f is free of y.

    Raises:
        ZeroPolynomialError: If either input is zero
        PolynomialError: If q is not monic in y
        CommonFactorError: If f and q share a non-constant factor
    """
    if f.is_zero() or q.is_zero():
        raise ZeroPolynomialError("resultant_oracle")
    if not q.is_monic_in_y():
        raise PolynomialError(f"{q} is not monic in y")
    f_expr, q_expr = f.to_sympy(), q.to_sympy()
    common = sympy.gcd(f_expr, q_expr)
    if sympy.Poly(common, X, Y).total_degree() > 0:
        raise CommonFactorError(str(common))
    if f.degree_y() == 0:
        return f.degree_x() * q.degree_y()
    pf = sympy.Poly(f_expr, Y, X, domain="QQ")
    pq = sympy.Poly(q_expr, Y, X, domain="QQ")
    res = pf.resultant(pq)
    res_poly = sympy.Poly(res.as_expr(), X, domain="QQ")
    if res_poly.is_zero:
        raise CommonFactorError("(resultant vanishes)")
    return res_poly.degree()
