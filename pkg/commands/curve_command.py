"""
curve and value: approximate roots of the integer core and values at infinity of polynomials.
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from exceptions import InvalidParameterError, PolynomialError
from utils.document_loader import SequenceDocument
from valuations.curves import approximate_roots, core_value, parse_poly, value_at_infinity
from valuations.delta import DeltaCore, DeltaSequence, TypeESequence


def parse_t(text: Optional[str]) -> Optional[List[Fraction]]:
    """Comma separated rationals, e.g. "1,2/3,-1"."""
    if text is None:
        return None
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParameterError("t", text, str(e))


def curve_core(seq: DeltaSequence, document: SequenceDocument) -> DeltaCore:
    if isinstance(seq, TypeESequence):
        return seq.validate_prefix(document.prefix_length).witness
    if seq.base_core is None:
        raise PolynomialError(f"type {seq.type_tag} sequence {seq} has no integer core")
    return seq.base_core


class CurveCommand(BaseCommand):
    """
    Builds q_0..q_{g+1} for the integer core behind a document.
    """

    name = "curve"
    help = "Print the approximate roots of the curve with one place at infinity"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--t", default=None, metavar="a,b,c",
                            help="Nonzero rational coefficients t_1..t_g (default: all 1)")

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        seq = document.build()
        roots = approximate_roots(curve_core(seq, document), parse_t(args.t))
        output = roots.to_dict()
        output["expanded"] = {f"q{i}": str(q) for i, q in enumerate(roots.polynomials)}
        self._log(f"degrees {roots.degrees()}")
        return {"output": output}


class ValueCommand(BaseCommand):
    """
    Evaluates -nu(f) for a type A or B document.
    """

    name = "value"
    help = "Evaluate the value at infinity of a polynomial"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--poly", required=True, metavar="EXPR", help="Polynomial in x and y")
        parser.add_argument("--t", default=None, metavar="a,b,c",
                            help="Nonzero rational coefficients t_1..t_g (default: all 1)")

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        seq = document.build()
        f = parse_poly(args.poly)
        roots = approximate_roots(curve_core(seq, document), parse_t(args.t))
        result = value_at_infinity(f, seq, roots)
        output = result.to_dict()
        _, remainder = f.divmod_y(roots[roots.g + 1])
        if not remainder.is_zero():
            output["core_value"] = core_value(f, roots)
        return {"output": output}
