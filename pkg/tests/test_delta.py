"""
Unit tests for delta-sequence validation, invariants and the five constructions.
"""
import unittest
from fractions import Fraction
from functools import reduce
from math import gcd
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from valuations.delta import (
    DeltaCore,
    ExplicitRule,
    GeometricRule,
    TypeESequence,
    approximating_cores,
    build_type_a,
    build_type_b,
    build_type_c,
    build_type_c_small,
    build_type_d,
    build_type_d_degenerate,
    char_condition,
    classify,
    denormalize,
    derived_invariants,
    normalize,
    ratio_check,
    sequence_char_condition,
    type_e_stream,
    validate_core
)
from scripts.run_exhaustive_checks import valid_cores
from valuations.values import OrderedValue, QuadraticNumber, ValueKind
from exceptions import (
    ConstructionError,
    InvalidCoreError,
    InvalidDeltaInputError,
    WitnessNotFoundError
)

CORE = (18, 12, 33, 4)
TAU = QuadraticNumber.from_parts(147, -1, 186, 2)
TYPE_D_PREFIX = (Fraction(3, 2), 1, Fraction(11, 4), Fraction(1, 3))


class TestDeltaCore(unittest.TestCase):
    """Test DeltaCore construction and the gcd chain."""

    def test_gcd_chain(self):
        """Test d and n of the running example."""
        core = DeltaCore(CORE)
        self.assertEqual(core.g, 3)
        self.assertEqual(core.d, (18, 6, 3, 1))
        self.assertEqual(core.n, (3, 2, 3))
        self.assertTrue(core.divides_case)

    def test_not_divides_case(self):
        """Test {5,3} is outside the divides case."""
        self.assertFalse(DeltaCore((5, 3)).divides_case)

    def test_rejects_short_core(self):
        """Test a single entry is rejected."""
        with self.assertRaises(InvalidDeltaInputError):
            DeltaCore((5,))

    def test_rejects_non_positive_entries(self):
        """Test zero and negative entries are rejected."""
        with self.assertRaises(InvalidDeltaInputError) as context:
            DeltaCore((5, 0))
        self.assertIn("positive", str(context.exception))

    def test_rejects_non_integers(self):
        """Test floats and booleans are rejected."""
        with self.assertRaises(InvalidDeltaInputError):
            DeltaCore((5, 2.5))
        with self.assertRaises(InvalidDeltaInputError):
            DeltaCore((5, True))

    def test_str(self):
        """Test the brace notation."""
        self.assertEqual(str(DeltaCore(CORE)), "{18,12,33,4}")


class TestValidateCore(unittest.TestCase):
    """Test the three conditions."""

    def test_valid_cores(self):
        """Test known valid cores."""
        for core in (CORE, (6, 4, 11), (5, 3), (54, 36, 99, 12, 28)):
            self.assertTrue(validate_core(core).is_valid, core)

    def test_gcd_chain_not_ending_at_one(self):
        """Test {4,6} fails conditions (1) and (3)."""
        report = validate_core((4, 6))
        self.assertFalse(report.is_valid)
        self.assertFalse(report.condition_1)
        self.assertEqual(report.failing_index_1, 2)
        self.assertTrue(report.condition_2)
        self.assertFalse(report.condition_3)
        self.assertEqual(report.failing_index_3, 1)
        self.assertIn("condition (3): δ0 > δ1 fails", report.messages)

    def test_condition_three_bound(self):
        """Test {6,4,13} violates delta_2 < n_1*delta_1."""
        report = validate_core((6, 4, 13))
        self.assertTrue(report.condition_1)
        self.assertTrue(report.condition_2)
        self.assertFalse(report.condition_3)
        self.assertEqual(report.failing_index_3, 2)

    def test_condition_two_membership(self):
        """Test {6,4,1}: 2*1 is not in <6,4>."""
        report = validate_core((6, 4, 1))
        self.assertFalse(report.condition_2)
        self.assertEqual(report.failing_index_2, 2)
        self.assertTrue(report.condition_3)

    def test_require_valid_raises(self):
        """Test require_valid lists the failures."""
        with self.assertRaises(InvalidCoreError) as context:
            DeltaCore((6, 4, 13)).require_valid()
        self.assertIn("condition (3)", str(context.exception))
        self.assertEqual(context.exception.exit_code, 2)

    def test_report_dict(self):
        """Test the JSON view of a report."""
        data = validate_core((6, 4, 1)).to_dict()
        self.assertFalse(data["valid"])
        self.assertEqual(data["core"], [6, 4, 1])
        self.assertEqual(data["conditions"]["2"], {"holds": False, "index": 2})
        self.assertEqual(data["conditions"]["1"], {"holds": True, "index": None})


class TestDerivedInvariants(unittest.TestCase):
    """Test (m, e) pairs, beta-bar and continued fractions."""

    def test_running_example(self):
        """Test the invariants of {18,12,33,4}."""
        inv = derived_invariants(CORE)
        self.assertEqual(inv.d, (18, 6, 3, 1))
        self.assertEqual(inv.n, (3, 2, 3))
        self.assertTrue(inv.divides_case)
        self.assertEqual(inv.em_pairs, ((21, 6), (62, 3)))
        self.assertEqual(inv.beta, (6, 21, 104))
        self.assertEqual([str(cf) for cf in inv.continued_fractions], ["<3;2>", "<20;1,2>"])
        self.assertEqual(inv.euclid_tails, ((6, 3), (2, 1)))

    def test_small_divides_core(self):
        """Test {6,4,11} has the single pair (7,2)."""
        inv = derived_invariants((6, 4, 11))
        self.assertEqual(inv.d, (6, 2, 1))
        self.assertEqual(inv.n, (3, 2))
        self.assertEqual(inv.em_pairs, ((7, 2),))

    def test_non_divides_core(self):
        """Test {5,3} has the pair (5,2) and beta-bar (2,5)."""
        inv = derived_invariants((5, 3))
        self.assertFalse(inv.divides_case)
        self.assertEqual(inv.em_pairs, ((5, 2),))
        self.assertEqual(inv.beta, (2, 5))

    def test_invalid_core(self):
        """Test invariants are refused for invalid cores."""
        with self.assertRaises(InvalidCoreError):
            derived_invariants((6, 4, 13))

    def test_dict(self):
        """Test the JSON view."""
        data = derived_invariants(CORE).to_dict()
        self.assertEqual(data["em_pairs"], [[21, 6], [62, 3]])
        self.assertEqual(data["cfs"], ["<3;2>", "<20;1,2>"])


class TestNormalization(unittest.TestCase):
    """Test normalize and denormalize."""

    def test_normalize(self):
        """Test division by delta_1."""
        self.assertEqual(normalize(CORE), TYPE_D_PREFIX)

    def test_denormalize(self):
        """Test the smallest integral scale is used."""
        self.assertEqual(denormalize(TYPE_D_PREFIX).entries, CORE)
        self.assertEqual(denormalize(normalize((54, 36, 99, 12, 28))).entries, (54, 36, 99, 12, 28))

    def test_normalize_idempotent(self):
        """Test normalizing the denormalized form gives the same tuple for every core with delta_0 <= 24."""
        count = 0
        for core in valid_cores(24):
            normalized = normalize(core)
            self.assertEqual(normalize(denormalize(normalized)), normalized, core)
            self.assertEqual(denormalize(normalized).entries, core.entries)
            count += 1
        self.assertGreater(count, 0)

    def test_denormalize_needs_unit_second_entry(self):
        """Test a second entry other than 1 is rejected."""
        with self.assertRaises(InvalidDeltaInputError):
            denormalize((Fraction(3, 2), 2))


class TestTypeA(unittest.TestCase):
    """Test the integer construction."""

    def test_negative_last_entry(self):
        """Test {18,12,33,4,-5} has 17 free points."""
        seq = build_type_a(CORE, -5)
        self.assertEqual(seq.free_points, 17)
        self.assertEqual(seq.to_json(), [18, 12, 33, 4, -5])
        self.assertEqual(seq.value_kind, ValueKind.INTEGER)

    def test_last_entry_at_bound(self):
        """Test delta_{g+1} = n_g*delta_g is allowed."""
        self.assertEqual(build_type_a(CORE, 12).free_points, 0)

    def test_last_entry_above_bound(self):
        """Test delta_{g+1} > n_g*delta_g is rejected."""
        with self.assertRaises(ConstructionError) as context:
            build_type_a(CORE, 13)
        self.assertIn("exceeds", str(context.exception))

    def test_invalid_core(self):
        """Test the core must be valid."""
        with self.assertRaises(InvalidCoreError):
            build_type_a((6, 4, 1), 0)


class TestTypeB(unittest.TestCase):
    """Test the lexicographic construction closing with (-1, delta_0^2)."""

    def test_generators(self):
        """Test the embedded core and the closing pair."""
        seq = build_type_b(CORE)
        generators = seq.generators()
        self.assertEqual(generators[0], OrderedValue.pair(0, 18))
        self.assertEqual(generators[-1], OrderedValue.pair(-1, 324))
        self.assertEqual(len(generators), 5)


class TestTypeC(unittest.TestCase):
    """Test the continued fraction constructions."""

    def test_general_construction(self):
        """Test {18,12,33,4} gives scale 3 through <20;1,2>."""
        seq = build_type_c(CORE)
        self.assertEqual(seq.entries, ((6, 6), (4, 4), (11, 11), (1, 2)))
        self.assertEqual(seq.scale, 3)
        self.assertEqual(seq.recurrence, ((1, 1), (1, 0)))
        self.assertEqual(str(seq.continued_fraction), "<20;1,2>")
        self.assertFalse(seq.small)

    def test_general_construction_needs_large_g(self):
        """Test {5,3} is too small for the general construction."""
        with self.assertRaises(ConstructionError) as context:
            build_type_c((5, 3))
        self.assertIn("small-g", str(context.exception))

    def test_small_non_divides(self):
        """Test {5,3} gives {(2,1),(1,1)}."""
        seq = build_type_c_small((5, 3))
        self.assertEqual(seq.entries, ((2, 1), (1, 1)))
        self.assertTrue(seq.small)
        self.assertIsNone(seq.scale)

    def test_small_divides(self):
        """Test {6,4,11} with j = n1 = 3."""
        seq = build_type_c_small((6, 4, 11), j=3, n1=3)
        self.assertEqual(seq.entries, ((3, 0), (2, 0), (6, -1)))

    def test_small_divides_wrong_j(self):
        """Test an explicit j must match the core."""
        with self.assertRaises(ConstructionError):
            build_type_c_small((6, 4, 11), j=4)

    def test_small_rejects_large_core(self):
        """Test the small construction refuses g = 3."""
        with self.assertRaises(ConstructionError):
            build_type_c_small(CORE)


class TestTypeD(unittest.TestCase):
    """Test the quadratic irrational construction."""

    def test_witness_search(self):
        """Test the running example finds {54,36,99,12,28} first."""
        seq = build_type_d(TYPE_D_PREFIX, TAU)
        self.assertEqual(seq.prefix_core.entries, CORE)
        self.assertEqual([w.entries for w in seq.witnesses], [(54, 36, 99, 12, 28), (72, 48, 132, 16, 37)])
        self.assertTrue(all(w.validate().is_valid for w in seq.witnesses))
        self.assertFalse(seq.degenerate)

    def test_em_pairs(self):
        """Test the last pair is (1 - tau, 1/12)."""
        pairs = build_type_d(TYPE_D_PREFIX, TAU, witnesses=[(54, 36, 99, 12, 28), (72, 48, 132, 16, 37)]).em_pairs()
        self.assertEqual(pairs[0], (OrderedValue.rational(7, 4), OrderedValue.rational(1, 2)))
        self.assertEqual(pairs[1], (OrderedValue.rational(31, 6), OrderedValue.rational(1, 4)))
        self.assertEqual(pairs[2], (OrderedValue.quadratic(39, 1, 186, 2), OrderedValue.rational(1, 12)))

    def test_explicit_witness_must_extend_prefix(self):
        """Test a witness over another prefix is rejected."""
        with self.assertRaises(ConstructionError):
            build_type_d(TYPE_D_PREFIX, TAU, witnesses=[(6, 4, 11)])

    def test_too_few_witnesses(self):
        """Test one explicit witness is not enough."""
        with self.assertRaises(WitnessNotFoundError) as context:
            build_type_d(TYPE_D_PREFIX, TAU, witnesses=[(54, 36, 99, 12, 28)])
        self.assertEqual(context.exception.required, 2)
        self.assertEqual(context.exception.found, 1)

    def test_rational_last_entry(self):
        """Test a rational last entry is rejected."""
        with self.assertRaises(ConstructionError):
            build_type_d(TYPE_D_PREFIX, Fraction(1, 2))

    def test_last_entry_above_bound(self):
        """Test the last entry must stay below n*delta."""
        with self.assertRaises(ConstructionError):
            build_type_d(TYPE_D_PREFIX, QuadraticNumber(0, 1, 2))

    def test_degenerate_pair(self):
        """Test {1 + sqrt 2, 1}."""
        seq = build_type_d_degenerate(QuadraticNumber(1, 1, 2))
        self.assertTrue(seq.degenerate)
        self.assertEqual(seq.to_json(), [{"a": 1, "b": 1, "c": 1, "d": 2}])

    def test_degenerate_needs_tau_above_one(self):
        """Test tau below 1 and rational tau are rejected."""
        with self.assertRaises(ConstructionError):
            build_type_d_degenerate(QuadraticNumber(-1, 1, 2))
        with self.assertRaises(ConstructionError):
            build_type_d_degenerate(3)


class TestTypeE(unittest.TestCase):
    """Test infinite rational sequences and prefix certificates."""

    def setUp(self):
        self.seq = type_e_stream(GeometricRule((Fraction(5, 3), 1), Fraction(3, 2)))

    def test_prefix(self):
        """Test the geometric rule."""
        self.assertEqual(self.seq.prefix(3), (Fraction(5, 3), 1, Fraction(3, 2), Fraction(9, 4)))

    def test_certificates(self):
        """Test the witness cores of prefixes 3 and 4."""
        self.assertEqual(self.seq.validate_prefix(3).witness.entries, (20, 12, 18, 27))
        self.assertEqual(self.seq.validate_prefix(4).witness.entries, (40, 24, 36, 54, 81))

    def test_every_short_prefix_is_valid(self):
        """Test prefixes 1 through 6 certify."""
        for j in range(1, 7):
            certificate = self.seq.validate_prefix(j)
            self.assertTrue(certificate.report.is_valid)
            self.assertEqual(certificate.j, j)

    def test_certificate_is_cached(self):
        """Test repeated calls return the same certificate."""
        self.assertIs(self.seq.validate_prefix(2), self.seq.validate_prefix(2))

    def test_prefix_index_must_be_positive(self):
        """Test j = 0 is rejected."""
        with self.assertRaises(InvalidDeltaInputError):
            self.seq.validate_prefix(0)

    def test_explicit_rule_failure(self):
        """Test an explicit rule whose fifth entry breaks condition (1)."""
        seq = TypeESequence(ExplicitRule((Fraction(3, 2), 1, Fraction(33, 12), Fraction(1, 3), Fraction(15, 4))))
        self.assertEqual(seq.validate_prefix(3).witness.entries, CORE)
        with self.assertRaises(InvalidCoreError):
            seq.validate_prefix(4)
        with self.assertRaises(ConstructionError):
            seq.validate_prefix(5)

    def test_geometric_rule_needs_unit_second_entry(self):
        """Test the head must be normalized."""
        with self.assertRaises(ConstructionError):
            GeometricRule((5, 3), 2)


class TestClassification(unittest.TestCase):
    """Test classify, ratio_check and the characteristic condition."""

    def test_classify(self):
        """Test each construction carries its type tag."""
        sequences = [
            build_type_a(CORE, -5),
            build_type_b(CORE),
            build_type_c(CORE),
            build_type_d_degenerate(QuadraticNumber(1, 1, 2)),
            type_e_stream(GeometricRule((Fraction(5, 3), 1), Fraction(3, 2)))
        ]
        tags = [classify(seq)[0] for seq in sequences]
        self.assertEqual(tags, ["A", "B", "C", "D", "E"])
        self.assertIn("degenerate", classify(sequences[3])[1])

    def test_ratio_check(self):
        """Test {18,12,33,4} against {6,4,11} and {5,3}."""
        check = ratio_check(CORE, (6, 4, 11))
        self.assertTrue(check.holds)
        self.assertEqual(check.ratio, 3)
        self.assertFalse(ratio_check(CORE, (5, 3)).holds)

    def test_ratio_check_on_truncations(self):
        """Test every valid core against each of its truncations that is valid after dividing by its gcd."""
        checked = 0
        for core in valid_cores(24):
            for k in range(2, len(core.entries)):
                head = core.entries[:k]
                d = reduce(gcd, head)
                rescaled = tuple(e // d for e in head)
                if not validate_core(rescaled).is_valid:
                    continue
                check = ratio_check(core, rescaled)
                self.assertTrue(check.holds, (core, rescaled))
                self.assertEqual(check.ratio, d)
                checked += 1
        self.assertGreater(checked, 0)

    def test_ratio_check_longer_second_core(self):
        """Test the second core may not be longer."""
        with self.assertRaises(InvalidDeltaInputError):
            ratio_check((5, 3), (6, 4, 11))

    def test_char_condition(self):
        """Test gcd(18, 12) = 6 against several characteristics."""
        self.assertTrue(char_condition(CORE, 5))
        self.assertFalse(char_condition(CORE, 3))
        self.assertFalse(char_condition(CORE, 2))
        self.assertTrue(char_condition(CORE, 0))

    def test_char_condition_needs_prime(self):
        """Test a composite characteristic is rejected."""
        with self.assertRaises(InvalidDeltaInputError) as context:
            char_condition(CORE, 4)
        self.assertIn("prime", str(context.exception))


class TestApproximatingCores(unittest.TestCase):
    """Test the type A approximants of each type."""

    def test_type_a_is_its_own_approximant(self):
        """Test type A returns itself."""
        seq = build_type_a(CORE, -5)
        self.assertEqual(approximating_cores(seq), [seq])

    def test_type_b(self):
        """Test type B uses 1, 2, ... free points."""
        approximants = approximating_cores(build_type_b((5, 3)), 2)
        self.assertEqual([a.last for a in approximants], [14, 13])

    def test_small_type_c(self):
        """Test small type C replaces the last digit."""
        approximants = approximating_cores(build_type_c_small((5, 3)), 2)
        self.assertEqual(approximants[0].core.entries, (5, 3))
        self.assertEqual(approximants[1].core.entries, (7, 4))

    def test_general_type_c(self):
        """Test general type C has no approximants."""
        with self.assertRaises(ConstructionError):
            approximating_cores(build_type_c(CORE))

    def test_type_e(self):
        """Test type E uses its prefix witnesses."""
        seq = type_e_stream(GeometricRule((Fraction(5, 3), 1), Fraction(3, 2)))
        approximants = approximating_cores(seq, 2)
        self.assertEqual([a.core.entries for a in approximants], [(5, 3), (10, 6, 9)])

    def test_sequence_char_condition(self):
        """Test the characteristic condition over the approximants."""
        seq = type_e_stream(GeometricRule((Fraction(5, 3), 1), Fraction(3, 2)))
        self.assertFalse(sequence_char_condition(seq, 2, 2))
        self.assertTrue(sequence_char_condition(seq, 3, 2))
        self.assertTrue(sequence_char_condition(build_type_d_degenerate(QuadraticNumber(1, 1, 2)), 2))


if __name__ == '__main__':
    unittest.main()
