"""
Exact arithmetic over the value groups of plane valuations at infinity.

Four groups are supported: the integers, pairs of integers ordered
lexicographically, the rationals and a real quadratic field Q(sqrt d).
On top of them sits the generalized Euclidean algorithm and the continued
fraction machinery that the delta, proximity and semigroup modules consume.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from math import isqrt, lcm
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging
import operator
import sys
import os

from sympy import factorint

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import (
    DigitBudgetExhaustedError,
    InfiniteTailError,
    NonPositiveDenominatorError,
    ValueArithmeticError,
    ValueKindMismatchError
)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
RationalLike = Union[int, Fraction]


def _squarefree_split(d: int) -> Tuple[int, int]:
    """Return (k, m) with d = k^2 * m and m square-free."""
    k, m = 1, 1
    for prime, exponent in factorint(d).items():
        k *= prime ** (exponent // 2)
        if exponent % 2:
            m *= prime
    return k, m


@total_ordering
class QuadraticNumber:
    """
    Exact real number r + s*sqrt(d) with r, s rational and d square-free.

    Rational numbers are represented with s = 0 and no radicand, which lets
    them mix freely with any quadratic field. Signs are decided by squared
    comparisons, never by floating point.
    """

    __slots__ = ("_r", "_s", "_d")

    def __init__(self, rational: RationalLike = 0, surd: RationalLike = 0, d: Optional[int] = None):
        r = Fraction(rational)
        s = Fraction(surd)
        if s != 0:
            if d is None or d < 2:
                raise ValueArithmeticError(f"Radicand must be an integer > 1, got {d}")
            k, d = _squarefree_split(int(d))
            if d == 1:
                r, s, d = r + s * k, Fraction(0), None
            else:
                s *= k
        self._r = r
        self._s = s
        self._d = d if s != 0 else None

    @classmethod
    def from_parts(cls, a: int, b: int, c: int, d: int) -> "QuadraticNumber":
        """Build (a + b*sqrt(d))/c."""
        if c == 0:
            raise ValueArithmeticError("Quadratic denominator c must be nonzero")
        return cls(Fraction(a, c), Fraction(b, c), d if b != 0 else None)

    @property
    def rational_part(self) -> Fraction:
        return self._r

    @property
    def surd_coefficient(self) -> Fraction:
        return self._s

    @property
    def radicand(self) -> Optional[int]:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._s == 0

    @property
    def parts(self) -> Tuple[int, int, int, Optional[int]]:
        """Normalized (a, b, c, d) with c > 0 and gcd(a, b, c) = 1."""
        c = lcm(self._r.denominator, self._s.denominator)
        return int(self._r * c), int(self._s * c), c, self._d

    def sign(self) -> int:
        r, s = self._r, self._s
        if s == 0:
            return (r > 0) - (r < 0)
        if r == 0 or (r > 0) == (s > 0):
            return 1 if s > 0 else -1
        # Opposite signs: the larger square wins.
        if r * r > s * s * self._d:
            return 1 if r > 0 else -1
        return 1 if s > 0 else -1

    def floor(self) -> int:
        """Exact floor, using floor((a + b*sqrt d)/c) = floor((a + floor(b*sqrt d))/c)."""
        if self.is_rational:
            return self._r.numerator // self._r.denominator
        a, b, c, d = self.parts
        root = isqrt(b * b * d)
        floored = root if b > 0 else -root - 1
        return (a + floored) // c

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self._r, -self._s, self._d)

    def _coerce(self, other) -> Optional["QuadraticNumber"]:
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other)
        return None

    def _field(self, other: "QuadraticNumber", operation: str) -> Optional[int]:
        if self._d is None:
            return other._d
        if other._d is None or other._d == self._d:
            return self._d
        raise ValueKindMismatchError(f"Q(sqrt {self._d})", f"Q(sqrt {other._d})", operation)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._field(other, "+")
        return QuadraticNumber(self._r + other._r, self._s + other._s, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self._r, -self._s, self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._field(other, "*")
        dd = d if d is not None else 0
        return QuadraticNumber(
            self._r * other._r + self._s * other._s * dd,
            self._r * other._s + self._s * other._r,
            d
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticNumber":
        if self.is_rational:
            if self._r == 0:
                raise ZeroDivisionError("reciprocal of zero")
            return QuadraticNumber(1 / self._r)
        norm = self._r * self._r - self._s * self._s * self._d
        return QuadraticNumber(self._r / norm, -self._s / norm, self._d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._r == other._r and self._s == other._s and (self._s == 0 or self._d == other._d)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.is_rational:
            return hash(self._r)
        return hash((self._r, self._s, self._d))

    def to_dict(self) -> dict:
        a, b, c, d = self.parts
        return {"a": a, "b": b, "c": c, "d": d}

    def __str__(self) -> str:
        if self.is_rational:
            return str(self._r)
        a, b, c, d = self.parts
        surd = f"sqrt({d})" if abs(b) == 1 else f"{abs(b)}*sqrt({d})"
        if a == 0:
            numerator = f"-{surd}" if b < 0 else surd
        else:
            numerator = f"{a} {'+' if b > 0 else '-'} {surd}"
        if c == 1:
            return numerator
        if a == 0:
            return f"{numerator}/{c}"
        return f"({numerator})/{c}"

    def __repr__(self) -> str:
        return f"QuadraticNumber({self})"


class ValueKind(Enum):
    """The four value groups."""
    INTEGER = "Integer"
    LEX_PAIR = "LexPair"
    RATIONAL = "Rational"
    QUADRATIC = "Quadratic"


_REAL_KINDS = (ValueKind.RATIONAL, ValueKind.QUADRATIC)


def kinds_compatible(left: ValueKind, right: ValueKind) -> bool:
    """Rationals embed in every quadratic field, otherwise kinds must match."""
    return left == right or (left in _REAL_KINDS and right in _REAL_KINDS)


@total_ordering
class OrderedValue:
    """
    Immutable element of one of the ordered value groups.

    Use the factory class methods rather than the constructor; they enforce
    the payload normalization (reduced fractions, collapsing quadratic
    numbers without an irrational part to rationals).
    """

    __slots__ = ("kind", "payload")

    def __init__(self, kind: ValueKind, payload):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, name, value):
        raise AttributeError("OrderedValue is immutable")

    @classmethod
    def integer(cls, n: int) -> "OrderedValue":
        return cls(ValueKind.INTEGER, operator.index(n))

    @classmethod
    def pair(cls, a: int, b: int) -> "OrderedValue":
        return cls(ValueKind.LEX_PAIR, (operator.index(a), operator.index(b)))

    @classmethod
    def rational(cls, numerator: RationalLike, denominator: RationalLike = 1) -> "OrderedValue":
        return cls(ValueKind.RATIONAL, Fraction(numerator) / Fraction(denominator))

    @classmethod
    def quadratic(cls, a: int, b: int, c: int, d: int) -> "OrderedValue":
        return cls.real(QuadraticNumber.from_parts(a, b, c, d))

    @classmethod
    def real(cls, number: Union[QuadraticNumber, RationalLike]) -> "OrderedValue":
        """Wrap a real number, collapsing to Rational when it has no surd part."""
        if isinstance(number, QuadraticNumber):
            if number.is_rational:
                return cls(ValueKind.RATIONAL, number.rational_part)
            return cls(ValueKind.QUADRATIC, number)
        return cls.rational(number)

    @classmethod
    def of(cls, value) -> "OrderedValue":
        """Infer the kind from a plain python value."""
        if isinstance(value, OrderedValue):
            return value
        if isinstance(value, bool):
            raise ValueArithmeticError("Booleans are not values")
        if isinstance(value, tuple) and len(value) == 2:
            return cls.pair(*value)
        if isinstance(value, Fraction):
            return cls.rational(value)
        if isinstance(value, QuadraticNumber):
            return cls.real(value)
        return cls.integer(value)

    # Arithmetic
    def _check(self, other: "OrderedValue", operation: str) -> None:
        if not kinds_compatible(self.kind, other.kind):
            raise ValueKindMismatchError(self.kind.value, other.kind.value, operation)

    def as_real(self) -> QuadraticNumber:
        if self.kind == ValueKind.QUADRATIC:
            return self.payload
        if self.kind in (ValueKind.RATIONAL, ValueKind.INTEGER):
            return QuadraticNumber(self.payload)
        raise ValueKindMismatchError(self.kind.value, "Quadratic", "as_real")

    def __add__(self, other):
        if not isinstance(other, OrderedValue):
            return NotImplemented
        self._check(other, "+")
        if self.kind == ValueKind.INTEGER:
            return OrderedValue.integer(self.payload + other.payload)
        if self.kind == ValueKind.LEX_PAIR:
            (a, b), (c, d) = self.payload, other.payload
            return OrderedValue.pair(a + c, b + d)
        if self.kind == ValueKind.RATIONAL and other.kind == ValueKind.RATIONAL:
            return OrderedValue.rational(self.payload + other.payload)
        return OrderedValue.real(self.as_real() + other.as_real())

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, OrderedValue):
            return NotImplemented
        return self + (-other)

    def scale(self, k: int) -> "OrderedValue":
        """Multiplication by an integer."""
        k = operator.index(k)
        if self.kind == ValueKind.LEX_PAIR:
            a, b = self.payload
            return OrderedValue.pair(k * a, k * b)
        if self.kind == ValueKind.QUADRATIC:
            return OrderedValue.real(self.payload * k)
        return OrderedValue(self.kind, self.payload * k)

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def sign(self) -> int:
        if self.kind == ValueKind.LEX_PAIR:
            a, b = self.payload
            if a != 0:
                return 1 if a > 0 else -1
            return (b > 0) - (b < 0)
        if self.kind == ValueKind.QUADRATIC:
            return self.payload.sign()
        return (self.payload > 0) - (self.payload < 0)

    def is_zero(self) -> bool:
        return self.sign() == 0

    def zero(self) -> "OrderedValue":
        return self.scale(0)

    # Order
    def __eq__(self, other):
        if not isinstance(other, OrderedValue):
            return NotImplemented
        return self.kind == other.kind and self.payload == other.payload

    def __lt__(self, other):
        if not isinstance(other, OrderedValue):
            return NotImplemented
        self._check(other, "<")
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.kind, self.payload))

    # Conversions
    def to_python(self):
        """Plain python view: int, (a, b), Fraction or QuadraticNumber."""
        return self.payload

    def to_json(self):
        if self.kind == ValueKind.INTEGER:
            return self.payload
        if self.kind == ValueKind.LEX_PAIR:
            return list(self.payload)
        if self.kind == ValueKind.RATIONAL:
            return str(self.payload)
        return self.payload.to_dict()

    def __str__(self) -> str:
        if self.kind == ValueKind.LEX_PAIR:
            return f"({self.payload[0]},{self.payload[1]})"
        return str(self.payload)

    def __repr__(self) -> str:
        return f"OrderedValue({self.kind.value}, {self})"


def lex_floor_divide(m: Pair, e: Pair) -> Optional[int]:
    """
    Largest integer q with q*e <= m in the lexicographic order on Z^2.

    Returns None when no such largest q exists, i.e. m has positive first
    coordinate and e lies on the second axis: every multiple of e stays below m.
    """
    a, b = m
    c, d = e
    if c < 0 or (c == 0 and d <= 0):
        raise NonPositiveDenominatorError(e)
    if c > 0:
        q = a // c
        if q * c == a and q * d > b:
            q -= 1
        return q
    if a > 0:
        return None
    if a < 0:
        raise ValueArithmeticError(f"Negative dividend {m} has no floor quotient by {e}")
    return b // d


def floor_quotient(m: OrderedValue, e: OrderedValue) -> Optional[int]:
    """Floor of m/e in the group order; None stands for an infinite quotient."""
    m._check(e, "floor division")
    if e.sign() <= 0:
        raise NonPositiveDenominatorError(e)
    if m.kind == ValueKind.INTEGER:
        return m.payload // e.payload
    if m.kind == ValueKind.LEX_PAIR:
        return lex_floor_divide(m.payload, e.payload)
    if m.kind == ValueKind.RATIONAL and e.kind == ValueKind.RATIONAL:
        ratio = m.payload / e.payload
        return ratio.numerator // ratio.denominator
    return (m.as_real() / e.as_real()).floor()


@dataclass(frozen=True)
class EuclidStep:
    """One division dividend = quotient*divisor + remainder; quotient None is infinite."""
    quotient: Optional[int]
    dividend: OrderedValue
    divisor: OrderedValue
    remainder: Optional[OrderedValue]


def euclid_steps(m: OrderedValue, e: OrderedValue) -> Iterator[EuclidStep]:
    """
    Generalized Euclidean algorithm over an ordered group.

    Stops after a zero remainder or an infinite quotient. For an irrational
    quadratic ratio the walk never stops and callers must bound it.
    """
    m._check(e, "euclid")
    if e.sign() <= 0:
        raise NonPositiveDenominatorError(e)
    if m.sign() < 0:
        raise ValueArithmeticError(f"Euclidean walk needs a non-negative dividend, got {m}")
    while True:
        q = floor_quotient(m, e)
        if q is None:
            yield EuclidStep(None, m, e, None)
            return
        r = m - e.scale(q)
        yield EuclidStep(q, m, e, r)
        if r.is_zero():
            return
        m, e = e, r


def euclid_endpoint(m: OrderedValue, e: OrderedValue, max_steps: Optional[int] = None) -> OrderedValue:
    """The last nonzero divisor of a terminating walk (the gcd of m and e)."""
    budget = max_steps or get_config().values.cf_digit_budget * 64
    quotients: List[int] = []
    for step in euclid_steps(m, e):
        if step.quotient is None:
            raise InfiniteTailError()
        quotients.append(step.quotient)
        if step.remainder.is_zero():
            return step.divisor
        if len(quotients) >= budget:
            break
    raise DigitBudgetExhaustedError(budget, quotients)


class CFTail(Enum):
    TERMINATED = "terminated"
    INFINITY = "infinity"
    SURD = "surd"


@dataclass(frozen=True)
class ContinuedFraction:
    """
    Digits a_1..a_t plus a tail marker.

    A terminated expansion is kept canonical: a trailing digit 1 is folded
    into its predecessor. An infinity tail may follow an empty digit list,
    written <inf>.
    """
    digits: Tuple[int, ...]
    tail: CFTail = CFTail.TERMINATED
    surd: Optional[QuadraticNumber] = None

    def __post_init__(self):
        digits = tuple(operator.index(a) for a in self.digits)
        if not digits and self.tail != CFTail.INFINITY:
            raise ValueArithmeticError("A continued fraction needs at least one digit")
        if digits and digits[0] < 0:
            raise ValueArithmeticError(f"First digit must be non-negative, got {digits[0]}")
        if any(a < 1 for a in digits[1:]):
            raise ValueArithmeticError(f"Digits after the first must be positive: {digits}")
        if self.tail == CFTail.SURD:
            if self.surd is None or self.surd.rational_part != 0 or self.surd.sign() <= 0:
                raise ValueArithmeticError("Surd tail must be a positive pure surd q*sqrt(d)")
        elif self.surd is not None:
            raise ValueArithmeticError("Only a surd tail carries a surd")
        if self.tail == CFTail.TERMINATED and len(digits) >= 2 and digits[-1] == 1:
            digits = digits[:-2] + (digits[-2] + 1,)
        object.__setattr__(self, "digits", digits)

    @property
    def length(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        items = [str(a) for a in self.digits]
        if self.tail == CFTail.INFINITY:
            items.append("inf")
        elif self.tail == CFTail.SURD:
            items.append(str(self.surd))
        if len(items) == 1:
            return f"<{items[0]}>"
        return f"<{items[0]};{','.join(items[1:])}>"


def _rational_digits(x: Fraction) -> List[int]:
    digits = []
    p, q = x.numerator, x.denominator
    while q:
        a, r = divmod(p, q)
        digits.append(a)
        p, q = q, r
    return digits


def cf_expand(numerator: OrderedValue, denominator: OrderedValue,
              max_digits: Optional[int] = None) -> ContinuedFraction:
    """
    Expand numerator/denominator by repeated Euclidean division.

    Args:
        numerator: Non-negative dividend
        denominator: Positive divisor of a compatible kind
        max_digits: Digit budget for quadratic irrational ratios, defaults
            to the configured cf_digit_budget

    Returns:
        ContinuedFraction with a terminated, infinity or surd tail

    Raises:
        ValueKindMismatchError: If the kinds are incompatible
        NonPositiveDenominatorError: If the denominator is not positive
        DigitBudgetExhaustedError: If a quadratic expansion reaches no surd tail
    """
    numerator._check(denominator, "cf_expand")
    if denominator.sign() <= 0:
        raise NonPositiveDenominatorError(denominator)
    if numerator.sign() < 0:
        raise ValueArithmeticError(f"cf_expand needs a non-negative numerator, got {numerator}")

    if ValueKind.QUADRATIC not in (numerator.kind, denominator.kind):
        digits: List[int] = []
        for step in euclid_steps(numerator, denominator):
            if step.quotient is None:
                return ContinuedFraction(tuple(digits), CFTail.INFINITY)
            digits.append(step.quotient)
        return ContinuedFraction(tuple(digits))

    budget = max_digits or get_config().values.cf_digit_budget
    x = numerator.as_real() / denominator.as_real()
    digits = []
    while True:
        if x.is_rational:
            digits.extend(_rational_digits(x.rational_part))
            return ContinuedFraction(tuple(digits))
        a, s = x.rational_part, x.surd_coefficient
        if a.denominator == 1 and a >= 0 and s > 0:
            digits.append(int(a))
            surd = QuadraticNumber(0, s, x.radicand)
            logger.debug("cf_expand stopped at surd tail %s after %d digits", surd, len(digits))
            return ContinuedFraction(tuple(digits), CFTail.SURD, surd)
        if len(digits) >= budget:
            raise DigitBudgetExhaustedError(budget, digits)
        q = x.floor()
        digits.append(q)
        x = (x - q).reciprocal()


def cf_fold(cf: ContinuedFraction) -> Tuple[OrderedValue, OrderedValue]:
    """
    Evaluate a continued fraction exactly.

    Terminated expansions fold to a reduced integer pair (p, q); surd tails
    fold to (value, 1) with the value in Q(sqrt d).
    """
    if cf.tail == CFTail.INFINITY:
        raise InfiniteTailError()
    if cf.tail == CFTail.TERMINATED:
        x = Fraction(cf.digits[-1])
        for a in reversed(cf.digits[:-1]):
            x = a + 1 / x
        return OrderedValue.integer(x.numerator), OrderedValue.integer(x.denominator)
    x = cf.surd + cf.digits[-1]
    for a in reversed(cf.digits[:-1]):
        x = x.reciprocal() + a
    return OrderedValue.real(x), OrderedValue.rational(1)


def recurrence_chain(digits: Sequence[int]) -> List[Pair]:
    """
    The pairs y_{-1}, y_0, ..., y_{t-1} of y_i = a_{t-i}*y_{i-1} + y_{i-2}.

    Seeds are y_{-1} = (0, 1) and y_0 = (1, 0); list index i + 1 holds y_i.
    """
    t = len(digits)
    if t < 1:
        raise ValueArithmeticError("Recurrence needs at least one digit")
    chain: List[Pair] = [(0, 1), (1, 0)]
    for i in range(1, t):
        a = digits[t - i - 1]
        (p1, q1), (p2, q2) = chain[-1], chain[-2]
        chain.append((a * p1 + p2, a * q1 + q2))
    return chain


def cf_recurrence(digits: Sequence[int]) -> Tuple[Pair, Pair]:
    """
    Return ((A, B), (A', B')) = (y_{t-2}, y_{t-3}) for digits a_1..a_t.

    Raises:
        ValueArithmeticError: If fewer than two digits are given
    """
    t = len(digits)
    if t < 2:
        raise ValueArithmeticError(f"cf_recurrence needs t >= 2 digits, got {t}")
    chain = recurrence_chain(digits)
    return chain[t - 1], chain[t - 2]
