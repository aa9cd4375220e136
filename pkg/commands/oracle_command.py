"""
oracle: run the value/resultant corpus and print the agreement summary.
"""
from dataclasses import replace
from typing import Any, Dict
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from config import get_config
from oracle_runner import OracleRunner

DISAGREEMENT_EXIT_CODE = 2


class OracleCommand(BaseCommand):
    name = "oracle"
    help = "Check value_at_infinity against the resultant oracle on a random corpus"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--mode", choices=["parallel", "sequential"], default=None,
                            help="Execution mode (default: from configuration)")
        parser.add_argument("--size", type=int, default=None, help="Polynomials per core")
        parser.add_argument("--seed", type=int, default=None, help="Random seed")
        parser.add_argument("--workers", type=int, default=None, help="Thread pool size")

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        overrides = {key: value for key, value in (
            ("execution_mode", args.mode), ("corpus_size", args.size),
            ("seed", args.seed), ("max_workers", args.workers)) if value is not None}
        runner = OracleRunner(replace(get_config().oracle, **overrides))
        runner.run()
        summary = runner.summary()
        self._log(f"{summary['agree']}/{summary['cases']} cases agree")
        if not runner.all_agree():
            return {"output": summary, "exit_code": DISAGREEMENT_EXIT_CODE}
        return {"output": summary}
