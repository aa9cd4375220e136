"""
semigroup: membership and window enumeration in the semigroup at infinity.
"""
from fractions import Fraction
from typing import Any, Dict
import argparse
import json
import re
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from exceptions import InvalidParameterError, SemigroupError
from valuations.semigroup import GeneratedSemigroup, enumerate_members, member, semigroup_of
from valuations.values import OrderedValue, QuadraticNumber, ValueKind

_PAIR_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_value(text: str, kind: ValueKind) -> OrderedValue:
    """
    Read a CLI value for a semigroup of the given kind: 47, "3/2", "(a,b)" or
    a JSON surd record {"a":..,"b":..,"c":..,"d":..}.

    Raises:
        InvalidParameterError: If the text matches none of the forms
    """
    text = text.strip()
    mo = _PAIR_RE.match(text)
    if mo:
        return OrderedValue.pair(int(mo.group(1)), int(mo.group(2)))
    mo = _RATIONAL_RE.match(text)
    if mo:
        if mo.group(2) is not None:
            if int(mo.group(2)) == 0:
                raise InvalidParameterError("value", text, "zero denominator")
            return OrderedValue.rational(Fraction(int(mo.group(1)), int(mo.group(2))))
        if kind in (ValueKind.RATIONAL, ValueKind.QUADRATIC):
            return OrderedValue.rational(int(mo.group(1)))
        return OrderedValue.integer(int(mo.group(1)))
    if text.startswith("{"):
        try:
            record = json.loads(text)
            return OrderedValue.real(QuadraticNumber.from_parts(*(int(record[k]) for k in "abcd")))
        except (ValueError, KeyError, TypeError) as e:
            raise InvalidParameterError("value", text, f"bad surd record ({e})")
    raise InvalidParameterError("value", text, "expected an integer, p/q, (a,b) or a surd record")


class SemigroupCommand(BaseCommand):
    """
    Queries the semigroup generated by the materialized entries of a
    document, or by its integer core with --core-only.
    """

    name = "semigroup"
    help = "Membership and enumeration in the semigroup at infinity"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        query = parser.add_mutually_exclusive_group(required=True)
        query.add_argument("--member", metavar="V", help="Value to test: 47, 3/2, \"(a,b)\" or a JSON surd")
        query.add_argument("--enumerate", nargs=2, metavar=("LO", "HI"), help="List members in [LO, HI]")
        parser.add_argument("--core-only", action="store_true",
                            help="Use the integer core instead of the full sequence")
        parser.add_argument("--budget", type=int, default=None, help="Search budget override")

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        seq = document.build()
        if args.core_only:
            if seq.base_core is None:
                raise SemigroupError(f"type {seq.type_tag} sequence {seq} has no integer core")
            semigroup = GeneratedSemigroup.of(seq.base_core.entries, core=seq.base_core)
        else:
            semigroup = semigroup_of(seq, document.prefix_length)
        self._log(f"semigroup {semigroup}")

        if args.member is not None:
            value = parse_value(args.member, semigroup.kind)
            return {"output": member(semigroup, value, args.budget).to_dict()}

        lo, hi = (parse_value(v, semigroup.kind) for v in args.enumerate)
        members = enumerate_members(semigroup, lo, hi, args.budget)
        return {"output": {"members": [v.to_json() for v in members]}}
