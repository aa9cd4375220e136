"""
Generated sub-semigroups of the ordered value groups.

Membership answers carry a witness coefficient vector or a certificate of
non-membership. Numerical semigroups (positive integer generators) are
decided through their Apery sets, which also give the Frobenius number and
the conductor.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, gcd, lcm
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple
from collections import deque
import heapq
import logging
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import (
    InvalidDeltaInputError,
    SemigroupBudgetError,
    SemigroupError,
    UnboundedEnumerationError,
    ValueKindMismatchError
)
from valuations.values import OrderedValue, ValueKind, kinds_compatible

if TYPE_CHECKING:
    from valuations.delta import DeltaCore, DeltaSequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedSemigroup:
    """Sub-semigroup spanned by finitely many values of one group."""
    generators: Tuple[OrderedValue, ...]
    kind: ValueKind
    core: Optional["DeltaCore"] = None

    @classmethod
    def of(cls, generators: Iterable, core: Optional["DeltaCore"] = None) -> "GeneratedSemigroup":
        values = tuple(OrderedValue.of(g) for g in generators)
        if not values:
            raise SemigroupError("A semigroup needs at least one generator")
        kind = values[0].kind
        for value in values[1:]:
            if not kinds_compatible(kind, value.kind):
                raise ValueKindMismatchError(kind.value, value.kind.value, "semigroup")
            if value.kind == ValueKind.QUADRATIC:
                kind = ValueKind.QUADRATIC
        return cls(values, kind, core)

    def __contains__(self, value) -> bool:
        return member(self, OrderedValue.of(value)).is_member is True

    def __str__(self) -> str:
        return "<" + ",".join(str(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class MembershipResult:
    """
    Outcome of a membership query.

    is_member is None when a budgeted search ran out without a decision.
    """
    is_member: Optional[bool]
    witness: Optional[Tuple[int, ...]] = None
    certificate: str = ""

    def __bool__(self) -> bool:
        return self.is_member is True

    def to_dict(self) -> dict:
        result = {"member": self.is_member}
        if self.witness is not None:
            result["witness"] = list(self.witness)
        if self.certificate:
            result["certificate"] = self.certificate
        return result


# Numerical semigroups

@lru_cache(maxsize=4096)
def _apery(generators: Tuple[int, ...]) -> Tuple[int, Tuple[Optional[int], ...], Tuple[Optional[Tuple[int, int]], ...]]:
    """
    Apery set of positive generators with respect to the least one.

    Shortest paths over residues modulo the least generator a: dist[r] is the
    least semigroup element congruent to r, or None when unreachable, and
    pred[r] = (previous residue, generator index) rebuilds a witness.
    """
    a_index = min(range(len(generators)), key=lambda i: generators[i])
    a = generators[a_index]
    dist: List[Optional[int]] = [None] * a
    pred: List[Optional[Tuple[int, int]]] = [None] * a
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        value, residue = heapq.heappop(heap)
        if value != dist[residue]:
            continue
        for index, step in enumerate(generators):
            if index == a_index:
                continue
            target = (residue + step) % a
            candidate = value + step
            if dist[target] is None or candidate < dist[target]:
                dist[target] = candidate
                pred[target] = (residue, index)
                heapq.heappush(heap, (candidate, target))
    return a_index, tuple(dist), tuple(pred)


def _member_positive(generators: Tuple[int, ...], value: int) -> MembershipResult:
    if value < 0:
        return MembershipResult(False, certificate=f"{value} is negative and all generators are positive")
    a_index, dist, pred = _apery(generators)
    a = generators[a_index]
    residue = value % a
    least = dist[residue]
    if least is None:
        return MembershipResult(False, certificate=f"no element is congruent to {residue} mod {a}")
    if value < least:
        return MembershipResult(
            False,
            certificate=f"{value} is below the Apery element {least} of its class mod {a}"
        )
    witness = [0] * len(generators)
    witness[a_index] = (value - least) // a
    while residue != 0:
        previous, index = pred[residue]
        witness[index] += 1
        residue = previous
    return MembershipResult(True, tuple(witness))


def _member_mixed(generators: Tuple[int, ...], value: int, budget: int) -> MembershipResult:
    """
    Both signs present: the semigroup is the subgroup gcd*Z.

    The value is first shifted into [-B, B], B = sum|g| * max|g|, by copies of
    the largest or the most negative generator; the rest of the witness comes
    from a BFS that never leaves that window.
    """
    bound = sum(abs(g) for g in generators) * max(abs(g) for g in generators)
    if 2 * bound + 1 > budget:
        raise SemigroupBudgetError(budget, "mixed-sign membership")
    witness = [0] * len(generators)
    target = value
    if target > bound:
        index = max(range(len(generators)), key=lambda i: generators[i])
        copies = -(-(target - bound) // generators[index])
        witness[index] += copies
        target -= copies * generators[index]
    elif target < -bound:
        index = min(range(len(generators)), key=lambda i: generators[i])
        copies = -(-(-bound - target) // -generators[index])
        witness[index] += copies
        target -= copies * generators[index]

    parent: Dict[int, Tuple[int, int]] = {0: (0, -1)}
    queue = deque([0])
    while queue:
        current = queue.popleft()
        if current == target:
            break
        for index, step in enumerate(generators):
            nxt = current + step
            if abs(nxt) <= bound and nxt not in parent:
                parent[nxt] = (current, index)
                queue.append(nxt)
    if target not in parent:
        return MembershipResult(None, certificate=f"{target} not reached within [-{bound}, {bound}]")
    current = target
    while parent[current][1] != -1:
        current, index = parent[current]
        witness[index] += 1
    return MembershipResult(True, tuple(witness))


def _member_integer(generators: Sequence[int], value: int, budget: int) -> MembershipResult:
    nonzero = [i for i, g in enumerate(generators) if g != 0]
    if not nonzero:
        if value == 0:
            return MembershipResult(True, tuple(0 for _ in generators))
        return MembershipResult(False, certificate="all generators are zero")
    divisor = 0
    for i in nonzero:
        divisor = gcd(divisor, generators[i])
    if value % divisor:
        return MembershipResult(False, certificate=f"{value} is not a multiple of the gcd {divisor}")

    reduced = tuple(generators[i] for i in nonzero)
    if all(g > 0 for g in reduced):
        sub = _member_positive(reduced, value)
    elif all(g < 0 for g in reduced):
        sub = _member_positive(tuple(-g for g in reduced), -value)
    else:
        sub = _member_mixed(reduced, value, budget)
    if sub.witness is None:
        return sub
    witness = [0] * len(generators)
    for slot, i in enumerate(nonzero):
        witness[i] = sub.witness[slot]
    return MembershipResult(sub.is_member, tuple(witness), sub.certificate)


def _clear_denominators(values: Sequence[Fraction]) -> Tuple[List[int], int]:
    scale = 1
    for v in values:
        scale = lcm(scale, Fraction(v).denominator)
    return [int(Fraction(v) * scale) for v in values], scale


def _solutions(weights: Sequence[int], target: int) -> Iterator[Tuple[int, ...]]:
    """Non-negative vectors s with sum s_i*w_i = target for positive weights."""
    if not weights:
        if target == 0:
            yield ()
        return
    head, rest = weights[0], weights[1:]
    for count in range(target // head, -1, -1):
        for tail in _solutions(rest, target - count * head):
            yield (count,) + tail


def _member_two_level(primaries: Sequence[int], secondaries: Sequence[Fraction],
                      target_primary: int, target_secondary: Fraction,
                      budget: int) -> MembershipResult:
    """
    Membership in a group ordered by a primary integer coordinate first.

    Used for lexicographic pairs (first coordinate primary) and for quadratic
    numbers (surd coefficient primary, rational part secondary).
    """
    lead = [i for i, p in enumerate(primaries) if p != 0]
    flat = [i for i, p in enumerate(primaries) if p == 0]
    flat_scale = 1
    for i in flat:
        flat_scale = lcm(flat_scale, Fraction(secondaries[i]).denominator)

    def residual_member(residual: Fraction) -> Optional[Tuple[int, ...]]:
        scaled = residual * flat_scale
        if scaled.denominator != 1:
            return None
        ints = [int(Fraction(secondaries[i]) * flat_scale) for i in flat]
        result = _member_integer(ints, int(scaled), budget)
        return result.witness if result.is_member else None

    signs = {p > 0 for p in (primaries[i] for i in lead)}
    exact = len(signs) <= 1
    if lead and exact:
        sign = 1 if signs == {True} else -1
        weights = [abs(primaries[i]) for i in lead]
        goal = sign * target_primary
        if goal < 0:
            return MembershipResult(False, certificate="primary coordinate has the wrong sign")
        solutions = _solutions(weights, goal)
    elif not lead:
        if target_primary != 0:
            return MembershipResult(False, certificate="no generator reaches the primary coordinate")
        solutions = iter([()])
    else:
        solutions = _bounded_mixed_solutions([primaries[i] for i in lead], target_primary, budget)

    explored = 0
    for vector in solutions:
        explored += 1
        if explored > budget:
            return MembershipResult(None, certificate=f"undecided after {budget} coefficient vectors")
        residual = Fraction(target_secondary) - sum(
            (c * Fraction(secondaries[i]) for c, i in zip(vector, lead)), Fraction(0))
        flat_witness = residual_member(residual)
        if flat_witness is not None:
            witness = [0] * len(primaries)
            for c, i in zip(vector, lead):
                witness[i] = c
            for c, i in zip(flat_witness, flat):
                witness[i] = c
            return MembershipResult(True, tuple(witness))
    if exact:
        return MembershipResult(False, certificate=f"all {explored} primary solutions leave a non-member residual")
    return MembershipResult(None, certificate=f"undecided after {explored} coefficient vectors")


def _bounded_mixed_solutions(weights: Sequence[int], target: int, budget: int) -> Iterator[Tuple[int, ...]]:
    """Vectors by increasing coefficient sum, stopping after budget candidates."""
    examined = 0
    total = 0
    while True:
        for combo in combinations_with_replacement(range(len(weights)), total):
            examined += 1
            if examined > budget:
                return
            vector = [0] * len(weights)
            for index in combo:
                vector[index] += 1
            if sum(c * w for c, w in zip(vector, weights)) == target:
                yield tuple(vector)
        total += 1


def member(semigroup: GeneratedSemigroup, value: OrderedValue,
           budget: Optional[int] = None) -> MembershipResult:
    """
    Decide whether value is a non-negative combination of the generators.

    Args:
        semigroup: The generated semigroup
        value: Element of a compatible group
        budget: Search budget, defaults to the configured search_budget

    Returns:
        MembershipResult with a witness vector aligned with the generators

    Raises:
        ValueKindMismatchError: If value lives in another group
    """
    value = OrderedValue.of(value)
    if not kinds_compatible(semigroup.kind, value.kind):
        raise ValueKindMismatchError(semigroup.kind.value, value.kind.value, "member")
    budget = budget or get_config().semigroup.search_budget
    generators = semigroup.generators

    if semigroup.kind == ValueKind.INTEGER:
        return _member_integer([g.payload for g in generators], value.payload, budget)
    if semigroup.kind == ValueKind.RATIONAL:
        if value.kind == ValueKind.QUADRATIC:
            return MembershipResult(False, certificate="sums of rational generators are rational")
        ints, _ = _clear_denominators([g.payload for g in generators] + [value.payload])
        return _member_integer(ints[:-1], ints[-1], budget)
    if semigroup.kind == ValueKind.LEX_PAIR:
        return _member_two_level(
            [g.payload[0] for g in generators],
            [Fraction(g.payload[1]) for g in generators],
            value.payload[0], Fraction(value.payload[1]), budget
        )
    reals = [g.as_real() for g in generators]
    target = value.as_real()
    surds = [r.surd_coefficient for r in reals] + [target.surd_coefficient]
    scaled, _ = _clear_denominators(surds)
    return _member_two_level(
        scaled[:-1], [r.rational_part for r in reals], scaled[-1], target.rational_part, budget
    )


def enumerate_members(semigroup: GeneratedSemigroup, lo: OrderedValue, hi: OrderedValue,
                      budget: Optional[int] = None) -> List[OrderedValue]:
    """
    All members in the window [lo, hi], sorted by the group order.

    Raises:
        UnboundedEnumerationError: If the window holds infinitely many members
        SemigroupBudgetError: If more candidates than the budget would be examined
    """
    lo, hi = OrderedValue.of(lo), OrderedValue.of(hi)
    for bound in (lo, hi):
        if not kinds_compatible(semigroup.kind, bound.kind):
            raise ValueKindMismatchError(semigroup.kind.value, bound.kind.value, "enumerate")
    budget = budget or get_config().semigroup.enumerate_limit
    if hi < lo:
        return []

    if semigroup.kind == ValueKind.INTEGER:
        candidates = _window(lo.payload, hi.payload, budget)
        return [OrderedValue.integer(v) for v in candidates
                if member(semigroup, OrderedValue.integer(v)).is_member]

    if semigroup.kind == ValueKind.RATIONAL:
        scale = 1
        for g in semigroup.generators:
            scale = lcm(scale, g.payload.denominator)
        low = -((-(lo.as_real() * scale)).floor())
        high = (hi.as_real() * scale).floor()
        values = [OrderedValue.rational(k, scale) for k in _window(low, high, budget)]
        return [v for v in values if member(semigroup, v).is_member]

    if semigroup.kind == ValueKind.LEX_PAIR:
        if lo.payload[0] != hi.payload[0]:
            raise UnboundedEnumerationError(
                semigroup.kind.value, "a window across first coordinates is infinite")
        first = lo.payload[0]
        values = [OrderedValue.pair(first, b) for b in _window(lo.payload[1], hi.payload[1], budget)]
        return [v for v in values if member(semigroup, v).is_member]

    if any(g.sign() <= 0 for g in semigroup.generators):
        raise UnboundedEnumerationError(semigroup.kind.value, "generators must be positive")
    return _enumerate_positive(semigroup, lo, hi, budget)


def _window(lo: int, hi: int, budget: int) -> range:
    if hi - lo + 1 > budget:
        raise SemigroupBudgetError(budget, "enumerate")
    return range(lo, hi + 1)


def _enumerate_positive(semigroup: GeneratedSemigroup, lo: OrderedValue, hi: OrderedValue,
                        budget: int) -> List[OrderedValue]:
    found: Set[OrderedValue] = set()
    zero = semigroup.generators[0].zero()
    frontier = [zero]
    seen = {zero}
    while frontier:
        nxt = []
        for value in frontier:
            if value >= lo:
                found.add(value)
            for g in semigroup.generators:
                candidate = value + g
                if candidate <= hi and candidate not in seen:
                    seen.add(candidate)
                    nxt.append(candidate)
        if len(seen) > budget:
            raise SemigroupBudgetError(budget, "enumerate")
        frontier = nxt
    return sorted(found)


def apery_set(semigroup: GeneratedSemigroup) -> Dict[int, int]:
    """Apery set {residue: least member} with respect to the least generator."""
    generators = _numerical_generators(semigroup)
    _, dist, _ = _apery(generators)
    return {r: w for r, w in enumerate(dist) if w is not None}


def frobenius_number(semigroup: GeneratedSemigroup) -> int:
    """Largest integer outside a numerical semigroup, -1 when it is all of N."""
    generators = _numerical_generators(semigroup)
    _, dist, _ = _apery(generators)
    return max(dist) - min(generators)


def conductor(semigroup: GeneratedSemigroup) -> int:
    return frobenius_number(semigroup) + 1


def gaps(semigroup: GeneratedSemigroup) -> List[int]:
    frobenius = frobenius_number(semigroup)
    return [v for v in range(frobenius + 1) if not member(semigroup, OrderedValue.integer(v)).is_member]


def _numerical_generators(semigroup: GeneratedSemigroup) -> Tuple[int, ...]:
    if semigroup.kind != ValueKind.INTEGER:
        raise SemigroupError(f"Numerical semigroup invariants need integer generators, got {semigroup.kind.value}")
    generators = tuple(g.payload for g in semigroup.generators if g.payload != 0)
    if not generators or any(g < 0 for g in generators):
        raise SemigroupError("Numerical semigroup invariants need positive generators")
    divisor = 0
    for g in generators:
        divisor = gcd(divisor, g)
    if divisor != 1:
        raise SemigroupError(f"Generators have gcd {divisor}; the complement is infinite")
    return generators


def expansion_digits(core: "DeltaCore", i: int) -> Tuple[int, ...]:
    """
    Digits (a_i0, ..., a_i,i-1) of n_i*delta_i = sum a_ij*delta_j with 0 <= a_ij < n_j for j >= 1.

    Computed from index i-1 downward: at each step the remainder must be a
    multiple of d_j, which fixes a_ij modulo n_j.

    Args:
        core: Valid delta-sequence core
        i: Index with 1 <= i <= g

    Returns:
        Tuple of i digits

    Raises:
        InvalidDeltaInputError: If the index is out of range
    """
    core.require_valid()
    if not 1 <= i <= core.g:
        raise InvalidDeltaInputError(f"expansion index {i} must lie in 1..{core.g}")
    delta = core.entries
    d = core.d  # d[k] is d_{k+1}
    n = core.n  # n[k] is n_{k+1}
    remainder = n[i - 1] * delta[i]
    digits = [0] * i
    for j in range(i - 1, 0, -1):
        d_next = d[j]  # d_{j+1}
        unit = (delta[j] // d_next) % n[j - 1]
        digit = (remainder // d_next) * pow(unit, -1, n[j - 1]) % n[j - 1] if n[j - 1] > 1 else 0
        digits[j] = digit
        remainder -= digit * delta[j]
    if remainder < 0 or remainder % delta[0]:
        raise InvalidDeltaInputError(f"n_{i}*delta_{i} has no bounded digit expansion")
    digits[0] = remainder // delta[0]
    return tuple(digits)


def is_well_ordered(seq: "DeltaSequence") -> bool:
    """
    True iff the semigroup at infinity is well ordered.

    Types D and E have positive real generators; for A, B and C this is the
    absence of a negative generator (for type A: delta_{g+1} >= 0).
    """
    if seq.type_tag in ("D", "E"):
        return True
    return all(g.sign() >= 0 for g in seq.generators())


def semigroup_of(seq: "DeltaSequence", limit: Optional[int] = None) -> GeneratedSemigroup:
    """Semigroup generated by the materialized generators of a sequence."""
    return GeneratedSemigroup.of(seq.generators(limit), core=seq.base_core)


def brute_force_generate(generators: Iterable, budget: int) -> Set[OrderedValue]:
    """
    Every sum of at most budget generators, by exhaustive expansion.

    Raises:
        SemigroupBudgetError: If the number of combinations exceeds the configured guard
    """
    values = [OrderedValue.of(g) for g in generators]
    if not values:
        raise SemigroupError("brute force generation needs generators")
    limit = get_config().semigroup.brute_force_limit
    if comb(len(values) + budget, budget) > limit:
        raise SemigroupBudgetError(limit, "brute force generation")
    zero = values[0].zero()
    result = set()
    for size in range(budget + 1):
        for combo in combinations_with_replacement(values, size):
            total = zero
            for g in combo:
                total = total + g
            result.add(total)
    return result


