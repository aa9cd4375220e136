"""
invariants: gcd chain, (m, e) pairs, continued fractions and maximal contact values.
"""
from typing import Any, Dict, List, Tuple
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from valuations.delta import (
    DeltaCore,
    TypeASequence,
    TypeCSequence,
    TypeDSequence,
    TypeESequence,
    derived_invariants,
    em_pairs_of,
    normalize
)
from valuations.semigroup import is_well_ordered
from valuations.values import OrderedValue, cf_expand


def core_invariants(core: DeltaCore) -> Dict[str, Any]:
    """JSON view of the invariants of an integer core."""
    invariants = derived_invariants(core)
    return {
        "core": list(core.entries),
        "d": list(invariants.d),
        "n": list(invariants.n),
        "case": "divides" if invariants.divides_case else "non-divides",
        "em_pairs": [list(p) for p in invariants.em_pairs],
        "cf": [str(cf) for cf in invariants.continued_fractions],
        "euclid_tails": [list(p) for p in invariants.euclid_tails],
        "beta": list(invariants.beta),
        "normalized": [str(v) for v in normalize(core)],
    }


def value_pairs(pairs: List[Tuple[OrderedValue, OrderedValue]]) -> Dict[str, Any]:
    """Pairs over any value group with the continued fraction of each quotient."""
    return {
        "em_pairs": [[m.to_json(), e.to_json()] for m, e in pairs],
        "cf": [str(cf_expand(m, e)) for m, e in pairs],
    }


class InvariantsCommand(BaseCommand):
    """
    Types A and B report their integer core. Types C and D report the pairs
    of their own entries; type E reports the witness core of its prefix.
    """

    name = "invariants"
    help = "Print the derived invariants of a sequence document"

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        seq = document.build()
        output: Dict[str, Any] = {
            "type": seq.type_tag,
            "generators": [g.to_json() for g in seq.generators(document.prefix_length)],
            "well_ordered": is_well_ordered(seq),
        }

        if isinstance(seq, TypeESequence):
            certificate = seq.validate_prefix(document.prefix_length)
            output.update(core_invariants(certificate.witness))
            output["normalized"] = [str(v) for v in certificate.prefix]
        elif isinstance(seq, TypeDSequence):
            if not seq.degenerate:
                prefix = core_invariants(seq.prefix_core)
                output.update({k: prefix[k] for k in ("d", "n", "case")})
                output["prefix_core"] = prefix["core"]
            output.update(value_pairs(seq.em_pairs()))
            output["normalized"] = [g.to_json() for g in seq.generators()]
        elif isinstance(seq, TypeCSequence):
            output.update(core_invariants(seq.core))
            output.update(value_pairs(em_pairs_of(seq.generators(), seq.core.n, seq.core.divides_case)))
            if seq.scale is not None:
                output["scale"] = seq.scale
                output["recurrence"] = [list(p) for p in seq.recurrence]
        else:
            output.update(core_invariants(seq.base_core))

        if isinstance(seq, TypeASequence):
            output["f_free"] = seq.free_points
        self._log(f"{len(output.get('em_pairs', []))} pairs")
        return {"output": output}
