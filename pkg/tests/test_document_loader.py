"""
Unit tests for sequence documents.
"""
import unittest
import tempfile
import json
from fractions import Fraction
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from utils.document_loader import DocumentLoader, SequenceDocument
from valuations.delta import (
    TypeASequence,
    TypeBSequence,
    TypeCSequence,
    TypeDSequence,
    TypeESequence
)
from exceptions import (
    ConstructionError,
    DocumentFormatError,
    DocumentNotFoundError,
    InvalidCoreError
)

TYPE_D_DOCUMENT = {
    "type": "D",
    "prefix": ["3/2", 1, "11/4", "1/3"],
    "surd": {"a": 147, "b": -1, "c": 186, "d": 2}
}


class TestSequenceDocument(unittest.TestCase):
    """Test shape validation and construction."""

    def test_type_a(self):
        """Test a type A document builds."""
        document = SequenceDocument.from_dict({"type": "A", "core": [18, 12, 33, 4], "last": -5})
        seq = document.build()
        self.assertIsInstance(seq, TypeASequence)
        self.assertEqual(seq.free_points, 17)

    def test_type_b(self):
        """Test a type B document builds."""
        seq = SequenceDocument.from_dict({"type": "B", "core": [5, 3]}).build()
        self.assertIsInstance(seq, TypeBSequence)

    def test_type_c_picks_construction(self):
        """Test small and general type C cores."""
        small = SequenceDocument.from_dict({"type": "C", "core": [5, 3]}).build()
        self.assertTrue(small.small)
        general = SequenceDocument.from_dict({"type": "C", "core": [18, 12, 33, 4]}).build()
        self.assertIsInstance(general, TypeCSequence)
        self.assertEqual(general.scale, 3)

    def test_type_c_j_on_general_core(self):
        """Test j is refused for the general construction."""
        document = SequenceDocument.from_dict({"type": "C", "core": [18, 12, 33, 4], "j": 3})
        with self.assertRaises(DocumentFormatError):
            document.build()

    def test_type_d(self):
        """Test a type D document with rational strings."""
        document = SequenceDocument.from_dict(TYPE_D_DOCUMENT)
        self.assertEqual(document.prefix, (Fraction(3, 2), 1, Fraction(11, 4), Fraction(1, 3)))
        seq = document.build()
        self.assertIsInstance(seq, TypeDSequence)
        self.assertEqual(seq.prefix_core.entries, (18, 12, 33, 4))

    def test_type_d_degenerate(self):
        """Test a document without prefix is the pair {tau, 1}."""
        seq = SequenceDocument.from_dict({"type": "D", "surd": {"a": 1, "b": 1, "c": 1, "d": 2}}).build()
        self.assertTrue(seq.degenerate)

    def test_type_e(self):
        """Test a geometric rule document."""
        document = SequenceDocument.from_dict({
            "type": "E", "rule": {"kind": "geometric", "head": ["5/3", 1], "ratio": "3/2"}, "j": 4
        })
        self.assertEqual(document.prefix_length, 4)
        seq = document.build()
        self.assertIsInstance(seq, TypeESequence)
        self.assertEqual(seq.validate_prefix(4).witness.entries, (40, 24, 36, 54, 81))

    def test_missing_field(self):
        """Test a type A document without last."""
        with self.assertRaises(DocumentFormatError) as context:
            SequenceDocument.from_dict({"type": "A", "core": [5, 3]})
        self.assertIn("missing last", str(context.exception))

    def test_extra_field(self):
        """Test fields of another type are rejected."""
        with self.assertRaises(DocumentFormatError) as context:
            SequenceDocument.from_dict({"type": "B", "core": [5, 3], "last": 1})
        self.assertIn("unexpected last", str(context.exception))

    def test_unknown_type(self):
        """Test the type tag must be A to E."""
        with self.assertRaises(DocumentFormatError):
            SequenceDocument.from_dict({"type": "F", "core": [5, 3]})
        with self.assertRaises(DocumentFormatError):
            SequenceDocument.from_dict([5, 3])

    def test_non_integer_core(self):
        """Test strings and booleans in a core are rejected."""
        with self.assertRaises(DocumentFormatError):
            SequenceDocument.from_dict({"type": "B", "core": [5, "3"]})
        with self.assertRaises(DocumentFormatError):
            SequenceDocument.from_dict({"type": "B", "core": [5, True]})

    def test_bad_rationals(self):
        """Test malformed rational strings."""
        for value in ("3/0", "1.5", "x"):
            document = dict(TYPE_D_DOCUMENT, prefix=[value, 1])
            with self.assertRaises(DocumentFormatError):
                SequenceDocument.from_dict(document)

    def test_characteristic(self):
        """Test char must be a prime."""
        document = SequenceDocument.from_dict({"type": "B", "core": [5, 3], "char": 3})
        self.assertEqual(document.char, 3)
        with self.assertRaises(DocumentFormatError) as context:
            SequenceDocument.from_dict({"type": "B", "core": [5, 3], "char": 4})
        self.assertIn("prime", str(context.exception))

    def test_surd_radicand(self):
        """Test the radicand must be at least 2."""
        document = dict(TYPE_D_DOCUMENT, surd={"a": 1, "b": 1, "c": 1, "d": 1})
        with self.assertRaises(DocumentFormatError):
            SequenceDocument.from_dict(document)

    def test_invalid_core_surfaces_on_build(self):
        """Test mathematical errors come from build, not from parsing."""
        document = SequenceDocument.from_dict({"type": "A", "core": [6, 4, 13], "last": 1})
        with self.assertRaises(InvalidCoreError):
            document.build()
        document = SequenceDocument.from_dict({"type": "A", "core": [18, 12, 33, 4], "last": 13})
        with self.assertRaises(ConstructionError):
            document.build()

    def test_canonical_dict(self):
        """Test to_dict keeps only the set fields."""
        document = SequenceDocument.from_dict(TYPE_D_DOCUMENT)
        self.assertEqual(document.to_dict(), {
            "type": "D",
            "prefix": ["3/2", "1", "11/4", "1/3"],
            "surd": {"a": 147, "b": -1, "c": 186, "d": 2}
        })


class TestDocumentLoader(unittest.TestCase):
    """Test reading documents from text and files."""

    def setUp(self):
        self.loader = DocumentLoader()

    def test_loads(self):
        """Test parsing JSON text."""
        document = self.loader.loads('{"type": "A", "core": [5, 3], "last": 15}')
        self.assertEqual(document.core, (5, 3))
        self.assertEqual(document.last, 15)

    def test_floats_rejected(self):
        """Test floating point numbers are not exact."""
        with self.assertRaises(DocumentFormatError) as context:
            self.loader.loads('{"type": "A", "core": [5, 3], "last": 1.5}')
        self.assertIn("not exact", str(context.exception))

    def test_malformed_json(self):
        """Test a JSON syntax error is reported with its position."""
        with self.assertRaises(DocumentFormatError) as context:
            self.loader.loads('{"type": "A", ')
        self.assertIn("malformed JSON", str(context.exception))

    def test_load_file(self):
        """Test loading and saving through a temporary directory."""
        with tempfile.TemporaryDirectory() as tmp_dir:
            loader = DocumentLoader(base_dir=tmp_dir)
            with open(os.path.join(tmp_dir, "seq.json"), "w") as f:
                json.dump(TYPE_D_DOCUMENT, f)
            document = loader.load("seq.json")
            self.assertEqual(document.surd.parts, (147, -1, 186, 2))

            loader.save(document, "copy.json")
            self.assertEqual(loader.load("copy.json"), document)

    def test_missing_file(self):
        """Test a missing file raises DocumentNotFoundError."""
        with tempfile.TemporaryDirectory() as tmp_dir:
            with self.assertRaises(DocumentNotFoundError) as context:
                DocumentLoader(base_dir=tmp_dir).load("absent.json")
            self.assertEqual(context.exception.exit_code, 1)

    def test_dumps_is_sorted(self):
        """Test the serialized form has sorted keys."""
        text = DocumentLoader.dumps(SequenceDocument.from_dict({"type": "B", "core": [5, 3], "char": 2}))
        self.assertEqual(text, '{"char": 2, "core": [5, 3], "type": "B"}')


if __name__ == '__main__':
    unittest.main()
