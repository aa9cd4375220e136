"""
Delta-sequences: validation of integer cores, derived invariants and the
five constructive families of sequences of values at infinity.

Type A  finite integer sequences, a valid core plus one bounded last entry
Type B  lexicographic pairs closing with (-1, delta_0^2)
Type C  lexicographic pairs read off the continued fraction of the last pair
Type D  normalized rationals closing with a quadratic irrational
Type E  infinite rational sequences produced by a rule
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging
import operator
import threading
import sys
import os

from sympy import isprime

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import (
    ConstructionError,
    InvalidCoreError,
    InvalidDeltaInputError,
    WitnessNotFoundError
)
from valuations.semigroup import GeneratedSemigroup, member
from valuations.values import (
    ContinuedFraction,
    OrderedValue,
    QuadraticNumber,
    ValueKind,
    cf_expand,
    cf_fold,
    cf_recurrence,
    euclid_endpoint,
    euclid_steps,
    recurrence_chain
)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _as_int(value, label: str) -> int:
    if isinstance(value, bool):
        raise InvalidDeltaInputError(f"{label} must be an integer, got {value!r}")
    try:
        return operator.index(value)
    except TypeError:
        raise InvalidDeltaInputError(f"{label} must be an integer, got {value!r}")


@dataclass(frozen=True)
class ValidationReport:
    """Per-condition verdicts for an integer core."""
    entries: Tuple[int, ...]
    d: Tuple[int, ...]
    n: Tuple[int, ...]
    condition_1: bool
    condition_2: bool
    condition_3: bool
    failing_index_1: Optional[int] = None
    failing_index_2: Optional[int] = None
    failing_index_3: Optional[int] = None
    messages: Tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return self.condition_1 and self.condition_2 and self.condition_3

    def to_dict(self) -> dict:
        return {
            "valid": self.is_valid,
            "core": list(self.entries),
            "conditions": {
                "1": {"holds": self.condition_1, "index": self.failing_index_1},
                "2": {"holds": self.condition_2, "index": self.failing_index_2},
                "3": {"holds": self.condition_3, "index": self.failing_index_3},
            },
            "messages": list(self.messages),
        }


@dataclass(frozen=True)
class DeltaCore:
    """
    Integer core {delta_0, ..., delta_g} with g >= 1.

    The gcd chain is stored zero-based: d[k] is d_{k+1} and n[k] is n_{k+1},
    so d[0] = delta_0 and d[g] is the gcd of the whole core.
    """
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(_as_int(e, "core entry") for e in self.entries)
        if len(entries) < 2:
            raise InvalidDeltaInputError(f"a core needs at least two entries, got {len(entries)}")
        if any(e <= 0 for e in entries):
            raise InvalidDeltaInputError(f"core entries must be positive, got {list(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, entries: Union["DeltaCore", Sequence[int]]) -> "DeltaCore":
        if isinstance(entries, DeltaCore):
            return entries
        return cls(tuple(entries))

    @property
    def g(self) -> int:
        return len(self.entries) - 1

    @property
    def d(self) -> Tuple[int, ...]:
        chain = [self.entries[0]]
        for e in self.entries[1:]:
            chain.append(gcd(chain[-1], e))
        return tuple(chain)

    @property
    def n(self) -> Tuple[int, ...]:
        d = self.d
        return tuple(d[k] // d[k + 1] for k in range(self.g))

    @property
    def divides_case(self) -> bool:
        """True when delta_0 - delta_1 divides delta_0."""
        diff = self.entries[0] - self.entries[1]
        return diff > 0 and self.entries[0] % diff == 0

    def validate(self) -> ValidationReport:
        return validate_core(self)

    def require_valid(self) -> "DeltaCore":
        report = validate_core(self)
        if not report.is_valid:
            raise InvalidCoreError(self.entries, list(report.messages))
        return self

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.entries) + "}"


def validate_core(core: Union[DeltaCore, Sequence[int]]) -> ValidationReport:
    """
    Check the three semigroup conditions on an integer core.

    (1) d_{g+1} = 1 and n_i > 1 for 1 <= i <= g
    (2) n_i*delta_i lies in <delta_0, ..., delta_{i-1}> for 1 <= i <= g
    (3) delta_0 > delta_1 and delta_i < n_{i-1}*delta_{i-1} for 2 <= i <= g

    Args:
        core: DeltaCore or a sequence of positive integers

    Returns:
        ValidationReport naming the first failing index of each condition
    """
    core = DeltaCore.of(core)
    delta, d, n, g = core.entries, core.d, core.n, core.g
    messages: List[str] = []

    failing_1 = None
    for i in range(1, g + 1):
        if n[i - 1] <= 1:
            failing_1 = i
            messages.append(f"condition (1): n{i} = {n[i - 1]} is not > 1")
            break
    if failing_1 is None and d[g] != 1:
        failing_1 = g + 1
        messages.append(f"condition (1): d{g + 1} = {d[g]} ≠ 1")

    failing_2 = None
    for i in range(1, g + 1):
        target = n[i - 1] * delta[i]
        semigroup = GeneratedSemigroup.of(delta[:i])
        if not member(semigroup, OrderedValue.integer(target)).is_member:
            failing_2 = i
            listed = ",".join(str(e) for e in delta[:i])
            messages.append(f"condition (2): n{i}·δ{i} = {target} ∉ ⟨{listed}⟩")
            break

    failing_3 = None
    if not delta[0] > delta[1]:
        failing_3 = 1
        messages.append("condition (3): δ0 > δ1 fails")
    else:
        for i in range(2, g + 1):
            bound = n[i - 2] * delta[i - 1]
            if not delta[i] < bound:
                failing_3 = i
                messages.append(f"condition (3): δ{i} < n{i - 1}·δ{i - 1} fails ({delta[i]} ≥ {bound})")
                break

    return ValidationReport(
        entries=delta, d=d, n=n,
        condition_1=failing_1 is None,
        condition_2=failing_2 is None,
        condition_3=failing_3 is None,
        failing_index_1=failing_1,
        failing_index_2=failing_2,
        failing_index_3=failing_3,
        messages=tuple(messages)
    )


def em_pairs_of(values: Sequence[OrderedValue], n: Sequence[int], divides: bool) -> List[Tuple[OrderedValue, OrderedValue]]:
    """
    The (m_i, e_i) pairs of a sequence over any value group.

    n holds n_1, n_2, ... of the underlying integer core. Each e_i after the
    first is the Euclidean endpoint of the previous pair, which equals
    d_{i+1} for integer cores.
    """
    g = len(values) - 1
    if divides and g >= 2:
        m = values[0] + values[1].scale(n[0]) - values[2]
        pairs = [(m, values[0] - values[1])]
        indices = range(1, g - 1)
        offset = 1
    else:
        pairs = [(values[0], values[0] - values[1])]
        indices = range(1, g)
        offset = 0
    for i in indices:
        k = i + offset
        m = values[k].scale(n[k - 1]) - values[k + 1]
        prev_m, prev_e = pairs[-1]
        pairs.append((m, euclid_endpoint(prev_m, prev_e)))
    return pairs


@dataclass(frozen=True)
class DerivedInvariants:
    """Invariants of a valid integer core."""
    d: Tuple[int, ...]
    n: Tuple[int, ...]
    divides_case: bool
    em_pairs: Tuple[Pair, ...]
    beta: Tuple[int, ...]
    euclid_tails: Tuple[Pair, ...]
    continued_fractions: Tuple[ContinuedFraction, ...]

    def to_dict(self) -> dict:
        return {
            "d": list(self.d),
            "n": list(self.n),
            "divides_case": self.divides_case,
            "em_pairs": [list(p) for p in self.em_pairs],
            "beta": list(self.beta),
            "euclid_tails": [list(p) for p in self.euclid_tails],
            "cfs": [str(cf) for cf in self.continued_fractions],
        }


def derived_invariants(core: Union[DeltaCore, Sequence[int]]) -> DerivedInvariants:
    """
    Compute d, n, the (m, e) pairs, the beta-bar generators, the last
    Euclidean step of each pair and the continued fractions of m/e.

    Raises:
        InvalidCoreError: If the core is not valid
    """
    core = DeltaCore.of(core).require_valid()
    delta, d, n, g = core.entries, core.d, core.n, core.g
    divides = core.divides_case

    values = [OrderedValue.integer(v) for v in delta]
    pairs = [(m.payload, e.payload) for m, e in em_pairs_of(values, n, divides)]

    # beta-bar: delta_0^2/d_i - delta_i, plus delta_0 outside the divides case
    head = [delta[0] - delta[1]] if divides else [delta[0] - delta[1], delta[0]]
    beta = head + [delta[0] * delta[0] // d[i - 1] - delta[i] for i in range(2, g + 1)]

    tails = []
    cfs = []
    for m, e in pairs:
        last = None
        for step in euclid_steps(OrderedValue.integer(m), OrderedValue.integer(e)):
            last = step
        tails.append((last.dividend.payload, last.divisor.payload))
        cfs.append(cf_expand(OrderedValue.integer(m), OrderedValue.integer(e)))

    return DerivedInvariants(
        d=d, n=n, divides_case=divides,
        em_pairs=tuple(pairs), beta=tuple(beta),
        euclid_tails=tuple(tails), continued_fractions=tuple(cfs)
    )


def normalize(core: Union[DeltaCore, Sequence[int]]) -> Tuple[Fraction, ...]:
    """Divide by delta_1 so that the second entry becomes 1."""
    core = DeltaCore.of(core)
    return tuple(Fraction(e, core.entries[1]) for e in core.entries)


def denormalize(rationals: Sequence) -> DeltaCore:
    """
    The unique integer core whose normalization is the given tuple.

    The scale is the lcm of the denominators, the smallest that makes every
    entry integral.

    Raises:
        InvalidDeltaInputError: If the tuple is too short, not positive or
            its second entry is not 1
    """
    values = [Fraction(r) for r in rationals]
    if len(values) < 2:
        raise InvalidDeltaInputError("a normalized tuple needs at least two entries")
    if values[1] != 1:
        raise InvalidDeltaInputError(f"the second normalized entry must be 1, got {values[1]}")
    if any(v <= 0 for v in values):
        raise InvalidDeltaInputError("normalized entries must be positive")
    scale = 1
    for v in values:
        scale = lcm(scale, v.denominator)
    return DeltaCore(tuple(int(v * scale) for v in values))


# Typed sequences

class DeltaSequence(ABC):
    """A sequence of values at infinity of one of the five types."""

    type_tag: str = ""

    @property
    @abstractmethod
    def value_kind(self) -> ValueKind:
        """Group the entries live in."""
        pass

    @property
    def base_core(self) -> Optional[DeltaCore]:
        return None

    @abstractmethod
    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        """
        The materialized entries.

        Args:
            limit: Last index to materialize, only used by infinite sequences
        """
        pass

    def to_list(self) -> list:
        return [g.to_python() for g in self.generators()]

    def to_json(self) -> list:
        return [g.to_json() for g in self.generators()]

    def __str__(self) -> str:
        return "{" + ",".join(str(g) for g in self.generators()) + "}"

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self})"


@dataclass(frozen=True, repr=False)
class TypeASequence(DeltaSequence):
    """Valid core followed by an integer last entry at most n_g*delta_g."""
    core: DeltaCore
    last: int
    type_tag = "A"

    @property
    def value_kind(self) -> ValueKind:
        return ValueKind.INTEGER

    @property
    def base_core(self) -> DeltaCore:
        return self.core

    @property
    def free_points(self) -> int:
        """n_g*delta_g - delta_{g+1}, the number of trailing free points."""
        return self.core.n[-1] * self.core.entries[-1] - self.last

    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        return [OrderedValue.integer(v) for v in self.core.entries + (self.last,)]


@dataclass(frozen=True, repr=False)
class TypeBSequence(DeltaSequence):
    """Core embedded on the second axis followed by (-1, delta_0^2)."""
    core: DeltaCore
    type_tag = "B"

    @property
    def value_kind(self) -> ValueKind:
        return ValueKind.LEX_PAIR

    @property
    def base_core(self) -> DeltaCore:
        return self.core

    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        head = [OrderedValue.pair(0, v) for v in self.core.entries]
        return head + [OrderedValue.pair(-1, self.core.entries[0] ** 2)]


@dataclass(frozen=True, repr=False)
class TypeCSequence(DeltaSequence):
    """
    Lexicographic pairs built from the continued fraction of an (m, e) pair.

    recurrence holds ((A, B), (A', B')) and scale = A*a_t + B for the general
    construction; the small-g constructions leave both unset.
    """
    core: DeltaCore
    entries: Tuple[Pair, ...]
    continued_fraction: ContinuedFraction
    recurrence: Optional[Tuple[Pair, Pair]] = None
    scale: Optional[int] = None
    small: bool = False
    type_tag = "C"

    @property
    def value_kind(self) -> ValueKind:
        return ValueKind.LEX_PAIR

    @property
    def base_core(self) -> DeltaCore:
        return self.core

    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        return [OrderedValue.pair(*p) for p in self.entries]


@dataclass(frozen=True, repr=False)
class TypeDSequence(DeltaSequence):
    """
    Normalized rational prefix closed by a positive quadratic irrational.

    The degenerate pair {tau, 1} has an empty prefix core.
    """
    prefix: Tuple[Fraction, ...]
    last: QuadraticNumber
    prefix_core: Optional[DeltaCore] = None
    witnesses: Tuple[DeltaCore, ...] = ()
    type_tag = "D"

    @property
    def value_kind(self) -> ValueKind:
        return ValueKind.QUADRATIC

    @property
    def degenerate(self) -> bool:
        return self.prefix_core is None

    @property
    def base_core(self) -> Optional[DeltaCore]:
        return self.prefix_core

    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        return [OrderedValue.rational(p) for p in self.prefix] + [OrderedValue.real(self.last)]

    def em_pairs(self) -> List[Tuple[OrderedValue, OrderedValue]]:
        if self.degenerate:
            return em_pairs_of(self.generators(), (), False)
        return em_pairs_of(self.generators(), self.prefix_core.n, self.prefix_core.divides_case)


@dataclass(frozen=True)
class GeometricRule:
    """head = (delta_0, 1, ...), then each entry is the previous one times ratio."""
    head: Tuple[Fraction, ...]
    ratio: Fraction
    kind: str = field(default="geometric", init=False)

    def __post_init__(self):
        head = tuple(Fraction(h) for h in self.head)
        if len(head) < 2 or head[1] != 1:
            raise ConstructionError("E", "a geometric rule needs a head (delta_0, 1, ...)")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        if self.ratio <= 0:
            raise ConstructionError("E", f"ratio must be positive, got {self.ratio}")

    def entry(self, i: int) -> Fraction:
        if i < len(self.head):
            return self.head[i]
        return self.head[-1] * self.ratio ** (i - len(self.head) + 1)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "head": [str(h) for h in self.head], "ratio": str(self.ratio)}


@dataclass(frozen=True)
class ExplicitRule:
    """A finite list of normalized entries; asking past its end is an error."""
    entries: Tuple[Fraction, ...]
    kind: str = field(default="explicit", init=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in self.entries))

    def entry(self, i: int) -> Fraction:
        if i >= len(self.entries):
            raise ConstructionError("E", f"explicit rule has no entry {i}")
        return self.entries[i]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "entries": [str(e) for e in self.entries]}


@dataclass(frozen=True)
class PrefixCertificate:
    """Witness that delta_0..delta_j denormalizes to a valid core."""
    j: int
    prefix: Tuple[Fraction, ...]
    witness: DeltaCore
    report: ValidationReport

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "prefix": [str(p) for p in self.prefix],
            "witness": list(self.witness.entries),
            "valid": self.report.is_valid,
        }


class TypeESequence(DeltaSequence):
    """
    Infinite rational sequence produced lazily by a rule.

    Prefix certificates are cached per instance; the cache is shared by
    worker threads and guarded by a lock.
    """
    type_tag = "E"

    def __init__(self, rule: Union[GeometricRule, ExplicitRule]):
        self.rule = rule
        self._certificates: Dict[int, PrefixCertificate] = {}
        self._lock = threading.Lock()

    @property
    def value_kind(self) -> ValueKind:
        return ValueKind.RATIONAL

    def prefix(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.rule.entry(i) for i in range(j + 1))

    def generators(self, limit: Optional[int] = None) -> List[OrderedValue]:
        j = limit if limit is not None else get_config().delta.type_e_default_prefix
        return [OrderedValue.rational(v) for v in self.prefix(j)]

    def validate_prefix(self, j: int) -> PrefixCertificate:
        """
        Denormalize delta_0..delta_j and validate the resulting core.

        Raises:
            InvalidDeltaInputError: If j < 1 or the prefix is not normalized
            InvalidCoreError: If the witness core is not valid
        """
        if j < 1:
            raise InvalidDeltaInputError(f"prefix index must be at least 1, got {j}")
        with self._lock:
            cached = self._certificates.get(j)
        if cached is not None:
            return cached
        prefix = self.prefix(j)
        witness = denormalize(prefix)
        report = witness.validate()
        if not report.is_valid:
            raise InvalidCoreError(witness.entries, list(report.messages))
        certificate = PrefixCertificate(j, prefix, witness, report)
        with self._lock:
            self._certificates.setdefault(j, certificate)
        logger.debug("type E prefix %d certified by %s", j, witness)
        return certificate


def validate_prefix(seq: TypeESequence, j: int) -> PrefixCertificate:
    return seq.validate_prefix(j)


# Constructions

def build_type_a(core: Union[DeltaCore, Sequence[int]], last: int) -> TypeASequence:
    """
    Append delta_{g+1} to a valid core.

    Raises:
        InvalidCoreError: If the core is not valid
        ConstructionError: If last exceeds n_g*delta_g
    """
    core = DeltaCore.of(core).require_valid()
    last = _as_int(last, "last entry")
    bound = core.n[-1] * core.entries[-1]
    if last > bound:
        raise ConstructionError("A", f"δ{core.g + 1} = {last} exceeds n{core.g}·δ{core.g} = {bound}")
    return TypeASequence(core, last)


def build_type_b(core: Union[DeltaCore, Sequence[int]]) -> TypeBSequence:
    core = DeltaCore.of(core).require_valid()
    return TypeBSequence(core)


def build_type_c(core: Union[DeltaCore, Sequence[int]]) -> TypeCSequence:
    """
    General type C construction from the last (m, e) pair of a core.

    With a_1..a_t the continued fraction of m_last/e_last, (A, B) = y_{t-2},
    (A', B') = y_{t-3} and scale A*a_t + B, every delta_i for i < g becomes
    (delta_i/scale)*(A, B) and the last entry is
    ((delta_g + A'*a_t + B')/scale)*(A, B) - (A', B').

    Raises:
        ConstructionError: If g is too small or a division is not exact
    """
    core = DeltaCore.of(core).require_valid()
    invariants = derived_invariants(core)
    g = core.g
    minimum = 3 if invariants.divides_case else 2
    if g < minimum:
        raise ConstructionError(
            "C", f"g = {g} is too small for the general construction (needs g >= {minimum}); "
                 "use the small-g construction"
        )
    cf = invariants.continued_fractions[-1]
    digits = cf.digits
    if len(digits) < 2:
        raise ConstructionError("C", f"continued fraction {cf} of the last pair has fewer than two digits")
    a_t = digits[-1]
    (A, B), (A1, B1) = cf_recurrence(digits)
    scale = A * a_t + B

    entries: List[Pair] = []
    for i, delta in enumerate(core.entries[:-1]):
        if delta % scale:
            raise ConstructionError("C", f"δ{i} = {delta} is not divisible by {scale}")
        k = delta // scale
        entries.append((k * A, k * B))
    top = core.entries[-1] + A1 * a_t + B1
    if top % scale:
        raise ConstructionError("C", f"δ{g} + A'·a_t + B' = {top} is not divisible by {scale}")
    k = top // scale
    entries.append((k * A - A1, k * B - B1))

    logger.info("type C from core %s via %s with scale %d", core, cf, scale)
    return TypeCSequence(core, tuple(entries), cf, ((A, B), (A1, B1)), scale, small=False)


def build_type_c_small(core: Union[DeltaCore, Sequence[int]], j: Optional[int] = None,
                       n1: Optional[int] = None) -> TypeCSequence:
    """
    Type C construction for small cores.

    g = 1 outside the divides case: delta_0 = y_{t-1}, delta_0 - delta_1 = y_{t-2}.
    g = 2 in the divides case, with j = delta_0/(delta_0 - delta_1) and
    n1 = d_1/d_2: delta_0 = j*y_{t-2}, delta_1 = delta_0 - y_{t-2},
    delta_2 = delta_0 + n1*delta_1 - y_{t-1}.

    Args:
        core: Valid core
        j: Optional explicit j, must agree with the core
        n1: Optional explicit n_1, must agree with the core
    """
    core = DeltaCore.of(core).require_valid()
    invariants = derived_invariants(core)
    g = core.g
    cf = invariants.continued_fractions[0]
    chain = recurrence_chain(cf.digits)
    t = len(cf.digits)

    def y(i: int) -> OrderedValue:
        return OrderedValue.pair(*chain[i + 1])

    if not invariants.divides_case and g == 1:
        if j is not None or n1 is not None:
            raise ConstructionError("C", "j and n1 only apply to divides-case cores")
        d0 = y(t - 1)
        d1 = d0 - y(t - 2)
        values = [d0, d1]
    elif invariants.divides_case and g == 2:
        expected_j = core.entries[0] // (core.entries[0] - core.entries[1])
        expected_n1 = core.n[0]
        if j is not None and j != expected_j:
            raise ConstructionError("C", f"j = {j} disagrees with δ0/(δ0-δ1) = {expected_j}")
        if n1 is not None and n1 != expected_n1:
            raise ConstructionError("C", f"n1 = {n1} disagrees with d1/d2 = {expected_n1}")
        d0 = y(t - 2).scale(expected_j)
        d1 = d0 - y(t - 2)
        d2 = d0 + d1.scale(expected_n1) - y(t - 1)
        values = [d0, d1, d2]
    else:
        raise ConstructionError(
            "C", "the small-g construction covers g = 1 outside the divides case "
                 "and g = 2 inside it"
        )
    entries = tuple(v.payload for v in values)
    logger.info("small type C from core %s via %s", core, cf)
    return TypeCSequence(core, entries, cf, small=True)


def _coerce_real(value) -> QuadraticNumber:
    if isinstance(value, OrderedValue):
        return value.as_real()
    if isinstance(value, QuadraticNumber):
        return value
    return QuadraticNumber(Fraction(value))


def build_type_d(prefix: Sequence, last, witnesses: Optional[Sequence[Sequence[int]]] = None) -> TypeDSequence:
    """
    Close a normalized rational prefix with a quadratic irrational.

    Without explicit witnesses, candidate scales k = 2, 3, ... are searched for
    integers x near k*c_1*last with gcd(k, x) = 1 such that {k*c, x} is a
    valid core; each found core contributes the rational approximant
    x/(k*c_1) of last.

    Args:
        prefix: delta_0, 1, delta_2, ..., delta_{g-1} as rationals
        last: Positive irrational delta_g below n_{g-1}*delta_{g-1}
        witnesses: Optional integer cores to check instead of searching

    Raises:
        ConstructionError: If the prefix or last entry is unusable
        WitnessNotFoundError: If too few witness cores exist within the scale limit
    """
    prefix = tuple(Fraction(p) for p in prefix)
    last = _coerce_real(last)
    if last.is_rational:
        raise ConstructionError("D", f"last entry {last} must be irrational")
    if last.sign() <= 0:
        raise ConstructionError("D", f"last entry {last} must be positive")
    if len(prefix) < 2:
        raise ConstructionError("D", "prefix needs δ0 and δ1 = 1; a lone τ is the degenerate pair")
    try:
        prefix_core = denormalize(prefix)
    except InvalidDeltaInputError as e:
        raise ConstructionError("D", e.reason)
    report = prefix_core.validate()
    if not report.is_valid:
        raise ConstructionError("D", f"prefix core {prefix_core} is not valid: {'; '.join(report.messages)}")
    n_last = prefix_core.n[-1]
    bound = prefix[-1] * n_last
    if not last < bound:
        raise ConstructionError("D", f"δ{len(prefix)} = {last} must be below n{len(prefix) - 1}·δ{len(prefix) - 1} = {bound}")

    settings = get_config().delta
    if witnesses is not None:
        found = _check_witnesses(prefix, last, [DeltaCore.of(w) for w in witnesses])
        if len(found) < settings.type_d_required_witnesses:
            raise WitnessNotFoundError(settings.type_d_required_witnesses, len(found), len(witnesses))
    else:
        found = _search_witnesses(prefix_core, last, settings.type_d_required_witnesses,
                                  settings.type_d_scale_limit)
    logger.info("type D over prefix core %s with witnesses %s", prefix_core, [str(w) for w in found])
    return TypeDSequence(prefix, last, prefix_core, tuple(found))


def _check_witnesses(prefix: Tuple[Fraction, ...], last: QuadraticNumber,
                     candidates: List[DeltaCore]) -> List[DeltaCore]:
    accepted: List[DeltaCore] = []
    seen = set()
    for witness in candidates:
        normalized = normalize(witness)
        if len(normalized) != len(prefix) + 1 or normalized[:-1] != prefix:
            raise ConstructionError("D", f"witness {witness} does not extend the prefix")
        witness.require_valid()
        approximant = normalized[-1]
        if approximant not in seen:
            seen.add(approximant)
            accepted.append(witness)
    return accepted


def _search_witnesses(prefix_core: DeltaCore, last: QuadraticNumber, required: int,
                      scale_limit: int) -> List[DeltaCore]:
    c = prefix_core.entries
    n_last = prefix_core.n[-1]
    semigroup = GeneratedSemigroup.of(c)
    found: List[DeltaCore] = []
    seen = set()
    attempts = 0
    for k in range(2, scale_limit + 1):
        attempts += 1
        base = (last * (k * c[1])).floor()
        for x in (base, base + 1):
            if x <= 0 or gcd(k, x) != 1 or x >= n_last * k * c[-1]:
                continue
            if not member(semigroup, OrderedValue.integer(x)).is_member:
                continue
            approximant = Fraction(x, k * c[1])
            if approximant in seen:
                continue
            witness = DeltaCore(tuple(k * e for e in c) + (x,))
            if witness.validate().is_valid:
                seen.add(approximant)
                found.append(witness)
        if len(found) >= required:
            return found
    raise WitnessNotFoundError(required, len(found), attempts)


def build_type_d_degenerate(tau) -> TypeDSequence:
    """The pair {tau, 1} with tau > 1 irrational."""
    tau = _coerce_real(tau)
    if tau.is_rational:
        raise ConstructionError("D", f"τ = {tau} must be irrational")
    if not tau > 1:
        raise ConstructionError("D", f"τ = {tau} must exceed 1")
    return TypeDSequence((), tau)


def type_e_stream(rule: Union[GeometricRule, ExplicitRule]) -> TypeESequence:
    return TypeESequence(rule)


# Classification and comparisons

def classify(seq: DeltaSequence) -> Tuple[str, str]:
    """Return the type tag with a one-line rationale."""
    if isinstance(seq, TypeASequence):
        bound = seq.core.n[-1] * seq.core.entries[-1]
        return "A", f"finite integer sequence {seq} with last entry {seq.last} ≤ n_g·δ_g = {bound}"
    if isinstance(seq, TypeBSequence):
        return "B", f"Z² sequence closing with (-1,{seq.core.entries[0] ** 2}) over core {seq.core}"
    if isinstance(seq, TypeCSequence):
        how = "small-g" if seq.small else f"scale {seq.scale}"
        return "C", f"Z² sequence from continued fraction {seq.continued_fraction} ({how}) over core {seq.core}"
    if isinstance(seq, TypeDSequence):
        if seq.degenerate:
            return "D", f"degenerate pair {{τ,1}} with τ = {seq.last}"
        return "D", f"irrational last entry {seq.last} over prefix core {seq.prefix_core}"
    if isinstance(seq, TypeESequence):
        return "E", f"infinite rational sequence from a {seq.rule.kind} rule"
    raise InvalidDeltaInputError(f"unknown sequence object {seq!r}")


@dataclass(frozen=True)
class RatioCheck:
    holds: bool
    ratio: Fraction

    def to_dict(self) -> dict:
        return {"holds": self.holds, "ratio": str(self.ratio)}


def ratio_check(core: Union[DeltaCore, Sequence[int]],
                other: Union[DeltaCore, Sequence[int]]) -> RatioCheck:
    """
    Check delta_i/delta'_i = beta_0/beta'_0 for 0 <= i < s', where
    beta_0 = delta_0 - delta_1 and s' is the genus of the second core.

    Index 0 is checked too, beyond the usual range 1 <= i <= s' - 1 of the
    corollary; it is what rejects {18,12,33,4} against {5,3} (18/5 != 6/2).

    Raises:
        InvalidDeltaInputError: If the second core is longer than the first
    """
    core = DeltaCore.of(core).require_valid()
    other = DeltaCore.of(other).require_valid()
    if other.g > core.g:
        raise InvalidDeltaInputError(f"second core {other} is longer than {core}")
    ratio = Fraction(core.entries[0] - core.entries[1], other.entries[0] - other.entries[1])
    holds = all(Fraction(core.entries[i], other.entries[i]) == ratio for i in range(other.g))
    return RatioCheck(holds, ratio)


def _check_characteristic(p) -> int:
    p = _as_int(p, "characteristic")
    if p != 0 and not isprime(p):
        raise InvalidDeltaInputError(f"characteristic {p} is neither 0 nor prime")
    return p


def char_condition(core: Union[DeltaCore, Sequence[int]], p: int) -> bool:
    """
    True iff p = 0 or p does not divide gcd(delta_0, delta_1).

    Raises:
        InvalidDeltaInputError: If p is neither 0 nor a prime
    """
    p = _check_characteristic(p)
    core = DeltaCore.of(core).require_valid()
    if p == 0:
        return True
    return gcd(core.entries[0], core.entries[1]) % p != 0


def approximating_cores(seq: DeltaSequence, count: Optional[int] = None) -> List[TypeASequence]:
    """
    Type A sequences whose germs approximate the given sequence.

    Type A is its own approximant. Type B uses the same core with 1, 2, ...
    free points. Small type C over a g = 1 core replaces the last digit of
    its continued fraction by j = 2, 3, .... Types D and E use their witness
    cores with no free points.

    Raises:
        ConstructionError: For general type C sequences
    """
    count = count or get_config().delta.type_d_required_witnesses
    if isinstance(seq, TypeASequence):
        return [seq]
    if isinstance(seq, TypeBSequence):
        top = seq.core.n[-1] * seq.core.entries[-1]
        return [build_type_a(seq.core, top - f) for f in range(1, count + 1)]
    if isinstance(seq, TypeCSequence):
        if not seq.small or seq.core.g != 1:
            raise ConstructionError("C", "approximants exist only for small type C sequences over g = 1 cores")
        digits = seq.continued_fraction.digits
        result = []
        j = 2
        while len(result) < count:
            m, e = cf_fold(ContinuedFraction(digits[:-1] + (j,)))
            core = DeltaCore((m.payload, m.payload - e.payload))
            if core.validate().is_valid:
                result.append(build_type_a(core, core.n[-1] * core.entries[-1]))
            j += 1
        return result
    if isinstance(seq, TypeDSequence):
        if seq.degenerate:
            raise ConstructionError("D", "the degenerate pair has no witness cores")
        return [TypeASequence(w.require_valid(), w.n[-1] * w.entries[-1]) for w in seq.witnesses[:count]]
    if isinstance(seq, TypeESequence):
        result = []
        for j in range(1, count + 1):
            witness = seq.validate_prefix(j).witness
            result.append(TypeASequence(witness, witness.n[-1] * witness.entries[-1]))
        return result
    raise InvalidDeltaInputError(f"unknown sequence object {seq!r}")


def sequence_char_condition(seq: DeltaSequence, p: int, count: Optional[int] = None) -> bool:
    """The characteristic condition on every approximating core."""
    if isinstance(seq, TypeDSequence) and seq.degenerate:
        # approximants {x, k} of {tau, 1} have coprime entries
        _check_characteristic(p)
        return True
    return all(char_condition(a.core, p) for a in approximating_cores(seq, count))
