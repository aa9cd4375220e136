"""
validate: per-condition verdicts and the classification of a sequence document.
"""
from typing import Any, Dict, Optional
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from utils.document_loader import SequenceDocument
from valuations.delta import (
    TypeDSequence,
    TypeESequence,
    ValidationReport,
    classify,
    denormalize,
    sequence_char_condition,
    validate_core
)
from valuations.semigroup import is_well_ordered

INVALID_EXIT_CODE = 2


class ValidateCommand(BaseCommand):
    """
    Checks conditions (1)-(3) on the integer core behind a document, then
    builds the typed sequence and classifies it.
    """

    name = "validate"
    help = "Validate a sequence document and classify it"

    @staticmethod
    def core_report(document: SequenceDocument) -> Optional[ValidationReport]:
        """Report on the integer core, or None for types without one (E, degenerate D)."""
        if document.core is not None:
            return validate_core(document.core)
        if document.type == "D" and document.prefix is not None:
            return validate_core(denormalize(document.prefix))
        return None

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        output: Dict[str, Any] = {"type": document.type, "document": document.to_dict()}

        report = self.core_report(document)
        if report is not None:
            output["conditions"] = report.to_dict()
            if not report.is_valid:
                output["valid"] = False
                for message in report.messages:
                    self._log(message)
                return {"output": output, "exit_code": INVALID_EXIT_CODE}

        seq = document.build()
        tag, rationale = classify(seq)
        output["valid"] = True
        output["type"] = tag
        output["classification"] = rationale
        output["well_ordered"] = is_well_ordered(seq)

        if isinstance(seq, TypeDSequence) and not seq.degenerate:
            output["witnesses"] = [list(w.entries) for w in seq.witnesses]
        if isinstance(seq, TypeESequence):
            output["certificates"] = [seq.validate_prefix(j).to_dict()
                                      for j in range(1, document.prefix_length + 1)]

        if document.char is not None:
            holds = sequence_char_condition(seq, document.char)
            output["char_condition"] = holds
            if not holds:
                output["valid"] = False
                return {"output": output, "exit_code": INVALID_EXIT_CODE}
        return {"output": output}
