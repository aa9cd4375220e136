"""
Loader for sequence documents: the JSON description of a delta-sequence of one
of the types A to E.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union
import json
import logging
import re
import sys
import os

from sympy import isprime

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import DocumentFormatError, DocumentNotFoundError
from valuations.delta import (
    DeltaCore,
    DeltaSequence,
    ExplicitRule,
    GeometricRule,
    build_type_a,
    build_type_b,
    build_type_c,
    build_type_c_small,
    build_type_d,
    build_type_d_degenerate,
    type_e_stream
)
from valuations.values import QuadraticNumber

logger = logging.getLogger(__name__)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")

# Required and optional fields per declared type
_FIELDS = {
    "A": ({"core", "last"}, {"char"}),
    "B": ({"core"}, {"char"}),
    "C": ({"core"}, {"j", "n1", "char"}),
    "D": ({"surd"}, {"prefix", "witnesses", "char"}),
    "E": ({"rule"}, {"j", "char"}),
}


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentFormatError(field, f"expected an integer, got {value!r}")
    return value


def _integer_list(value: Any, field: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise DocumentFormatError(field, f"expected a non-empty list of integers, got {value!r}")
    return tuple(_integer(v, f"{field}[{i}]") for i, v in enumerate(value))


def _rational(value: Any, field: str) -> Fraction:
    """Integers or "p/q" strings; floats are rejected."""
    if isinstance(value, bool):
        raise DocumentFormatError(field, f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        mo = _RATIONAL_RE.match(value)
        if mo:
            denominator = int(mo.group(2)) if mo.group(2) else 1
            if denominator == 0:
                raise DocumentFormatError(field, f"zero denominator in '{value}'")
            return Fraction(int(mo.group(1)), denominator)
    raise DocumentFormatError(field, f"expected an exact rational such as \"3/2\", got {value!r}")


def _rational_list(value: Any, field: str) -> Tuple[Fraction, ...]:
    if not isinstance(value, list) or not value:
        raise DocumentFormatError(field, f"expected a non-empty list of rationals, got {value!r}")
    return tuple(_rational(v, f"{field}[{i}]") for i, v in enumerate(value))


def _strict_keys(data: Dict[str, Any], required: set, optional: set, field: str) -> None:
    missing = sorted(required - data.keys())
    if missing:
        raise DocumentFormatError(field, f"missing {', '.join(missing)}")
    extra = sorted(data.keys() - required - optional)
    if extra:
        raise DocumentFormatError(field, f"unexpected {', '.join(extra)}")


def _surd(value: Any) -> QuadraticNumber:
    if not isinstance(value, dict):
        raise DocumentFormatError("surd", f"expected a record {{a,b,c,d}}, got {value!r}")
    _strict_keys(value, {"a", "b", "c", "d"}, set(), "surd")
    a, b, c, d = (_integer(value[k], f"surd.{k}") for k in "abcd")
    if c == 0:
        raise DocumentFormatError("surd.c", "denominator must be nonzero")
    if d < 2:
        raise DocumentFormatError("surd.d", f"radicand must be at least 2, got {d}")
    return QuadraticNumber.from_parts(a, b, c, d)


def _rule(value: Any) -> Union[GeometricRule, ExplicitRule]:
    if not isinstance(value, dict) or "kind" not in value:
        raise DocumentFormatError("rule", f"expected a record with a kind, got {value!r}")
    kind = value["kind"]
    if kind == "geometric":
        _strict_keys(value, {"kind", "head", "ratio"}, set(), "rule")
        return GeometricRule(_rational_list(value["head"], "rule.head"), _rational(value["ratio"], "rule.ratio"))
    if kind == "explicit":
        _strict_keys(value, {"kind", "entries"}, set(), "rule")
        return ExplicitRule(_rational_list(value["entries"], "rule.entries"))
    raise DocumentFormatError("rule.kind", f"expected 'geometric' or 'explicit', got {kind!r}")


@dataclass(frozen=True)
class SequenceDocument:
    """
    Parsed sequence document.

    Only the fields of the declared type are set. Numbers are exact:
    integers for cores, Fractions for rationals, QuadraticNumber for surds.
    """
    type: str
    core: Optional[Tuple[int, ...]] = None
    last: Optional[int] = None
    prefix: Optional[Tuple[Fraction, ...]] = None
    surd: Optional[QuadraticNumber] = None
    rule: Optional[Union[GeometricRule, ExplicitRule]] = None
    witnesses: Optional[Tuple[Tuple[int, ...], ...]] = None
    j: Optional[int] = None
    n1: Optional[int] = None
    char: Optional[int] = None

    @classmethod
    def from_dict(cls, data: Any) -> "SequenceDocument":
        """
        Validate the shape of a decoded document.

        Raises:
            DocumentFormatError: If a field is missing, extra or not exact
        """
        if not isinstance(data, dict):
            raise DocumentFormatError("document", f"expected a JSON object, got {type(data).__name__}")
        kind = data.get("type")
        if kind not in _FIELDS:
            raise DocumentFormatError("type", f"expected one of A, B, C, D, E, got {kind!r}")
        required, optional = _FIELDS[kind]
        _strict_keys(data, required | {"type"}, optional, "document")

        fields: Dict[str, Any] = {"type": kind}
        if "core" in data:
            fields["core"] = _integer_list(data["core"], "core")
        if "last" in data:
            fields["last"] = _integer(data["last"], "last")
        if "prefix" in data:
            fields["prefix"] = _rational_list(data["prefix"], "prefix")
        if "surd" in data:
            fields["surd"] = _surd(data["surd"])
        if "rule" in data:
            fields["rule"] = _rule(data["rule"])
        if "witnesses" in data:
            if not isinstance(data["witnesses"], list):
                raise DocumentFormatError("witnesses", "expected a list of integer cores")
            fields["witnesses"] = tuple(_integer_list(w, f"witnesses[{i}]")
                                        for i, w in enumerate(data["witnesses"]))
        for name in ("j", "n1"):
            if name in data:
                value = _integer(data[name], name)
                if value < 1:
                    raise DocumentFormatError(name, f"must be positive, got {value}")
                fields[name] = value
        if "char" in data:
            p = _integer(data["char"], "char")
            if not isprime(p):
                raise DocumentFormatError("char", f"must be a prime, got {p}")
            fields["char"] = p
        return cls(**fields)

    def to_dict(self) -> Dict[str, Any]:
        """Canonical form: only the set fields, rationals as "p/q" strings."""
        result: Dict[str, Any] = {"type": self.type}
        if self.core is not None:
            result["core"] = list(self.core)
        if self.last is not None:
            result["last"] = self.last
        if self.prefix is not None:
            result["prefix"] = [str(p) for p in self.prefix]
        if self.surd is not None:
            result["surd"] = self.surd.to_dict()
        if self.rule is not None:
            result["rule"] = self.rule.to_dict()
        if self.witnesses is not None:
            result["witnesses"] = [list(w) for w in self.witnesses]
        for name in ("j", "n1", "char"):
            value = getattr(self, name)
            if value is not None:
                result[name] = value
        return result

    @property
    def prefix_length(self) -> int:
        """Last materialized index for type E."""
        return self.j if self.j is not None else get_config().delta.type_e_default_prefix

    def build(self) -> DeltaSequence:
        """
        Construct the typed sequence.

        Raises:
            DeltaSequenceError: If the data is not a valid sequence of its type
        """
        if self.type == "A":
            return build_type_a(self.core, self.last)
        if self.type == "B":
            return build_type_b(self.core)
        if self.type == "C":
            core = DeltaCore.of(self.core).require_valid()
            small = (core.g == 1 and not core.divides_case) or (core.g == 2 and core.divides_case)
            if small:
                return build_type_c_small(core, self.j, self.n1)
            if self.j is not None or self.n1 is not None:
                raise DocumentFormatError("j", "j and n1 only apply to small type C cores")
            return build_type_c(core)
        if self.type == "D":
            if self.prefix is None:
                return build_type_d_degenerate(self.surd)
            return build_type_d(self.prefix, self.surd, self.witnesses)
        return type_e_stream(self.rule)


class DocumentLoader:
    """
    Reads sequence documents from files, strings or stdin ("-").
    """

    def __init__(self, base_dir: str = "."):
        self.base_dir = base_dir
        self.name = "Document Loader"

    def resolve(self, path: str) -> str:
        if path == "-" or os.path.isabs(path):
            return path
        return os.path.join(self.base_dir, path)

    def loads(self, text: str) -> SequenceDocument:
        """
        Parse document text.

        Raises:
            DocumentFormatError: If the text is not valid JSON or has a bad shape
        """
        try:
            data = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
        except json.JSONDecodeError as e:
            raise DocumentFormatError("document", f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}")
        document = SequenceDocument.from_dict(data)
        logger.debug("loaded type %s document", document.type)
        return document

    def load(self, path: str) -> SequenceDocument:
        """
        Load a document from a file path, or stdin for "-".

        Raises:
            DocumentNotFoundError: If the file does not exist
            DocumentFormatError: If the content is malformed
        """
        if path == "-":
            return self.loads(sys.stdin.read())
        filepath = self.resolve(path)
        if not os.path.isfile(filepath):
            raise DocumentNotFoundError(filepath)
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                text = f.read()
        except (OSError, UnicodeDecodeError) as e:
            raise DocumentFormatError("document", f"cannot read {filepath}: {e}")
        return self.loads(text)

    @staticmethod
    def dumps(document: SequenceDocument) -> str:
        return json.dumps(document.to_dict(), sort_keys=True, ensure_ascii=False)

    def save(self, document: SequenceDocument, path: str) -> None:
        with open(self.resolve(path), "w", encoding="utf-8") as f:
            f.write(self.dumps(document) + "\n")


def _reject_float(text: str):
    raise DocumentFormatError("document", f"floating point number {text} is not exact")


def load_document(path: str) -> SequenceDocument:
    return DocumentLoader().load(path)
