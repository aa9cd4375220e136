"""
Unit tests for the BaseCommand base class.
"""
import unittest
import argparse
import sys
import os
from typing import Dict, Any

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from commands.base_command import BaseCommand, CommandResult, render_json
from exceptions import InvalidCoreError, SemigroupBudgetError


class EchoCommand(BaseCommand):
    """Test command that returns its argument."""

    name = "echo"

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        """Simple test processing."""
        return {"output": {"value": args.value, "label": "δ"}}


class FailingCommand(BaseCommand):
    """Command that raises the exception it is given."""

    name = "failing"

    def __init__(self, error: Exception):
        super().__init__()
        self.error = error

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        """Always raises."""
        raise self.error


class TestCommandResult(unittest.TestCase):
    """Test CommandResult class."""

    def test_initialization(self):
        """Test CommandResult initialization."""
        result = CommandResult(command_name="echo", status="completed", output={"value": 42})
        self.assertEqual(result.command_name, "echo")
        self.assertEqual(result.status, "completed")
        self.assertEqual(result.output["value"], 42)
        self.assertEqual(result.exit_code, 0)

    def test_to_dict(self):
        """Test conversion to dictionary."""
        result_dict = CommandResult("echo", "completed", output={"value": 42}).to_dict()
        self.assertEqual(result_dict["command"], "echo")
        self.assertEqual(result_dict["output"]["value"], 42)
        self.assertIsNone(result_dict["error"])

    def test_is_successful(self):
        """Test success check."""
        self.assertTrue(CommandResult("echo", "completed").is_successful())
        self.assertFalse(CommandResult("echo", "completed", exit_code=2).is_successful())
        self.assertFalse(CommandResult("echo", "failed", error="boom", exit_code=1).is_successful())

    def test_render(self):
        """Test text takes precedence over the JSON payload."""
        self.assertEqual(CommandResult("echo", "completed", output={"b": 1, "a": 2}).render(),
                         '{"a": 2, "b": 1}')
        self.assertEqual(CommandResult("echo", "completed", output={"a": 1}, text="graph {}\n").render(),
                         "graph {}\n")
        self.assertIsNone(CommandResult("echo", "failed").render())

    def test_render_json_keeps_unicode(self):
        """Test non-ASCII characters are written as is."""
        self.assertEqual(render_json({"key": "⟨4,6⟩"}), '{"key": "⟨4,6⟩"}')


class TestBaseCommand(unittest.TestCase):
    """Test BaseCommand functionality."""

    def test_successful_run(self):
        """Test a completed run."""
        command = EchoCommand()
        result = command.run(argparse.Namespace(value=7))
        self.assertTrue(result.is_successful())
        self.assertEqual(result.output, {"value": 7, "label": "δ"})
        self.assertEqual(command.status, "completed")
        self.assertIs(command.last_result, result)

    def test_failed_run_with_math_error(self):
        """Test a library error maps to its exit code."""
        command = FailingCommand(InvalidCoreError([6, 4, 13], ["condition (3) fails"]))
        result = command.run(argparse.Namespace())
        self.assertEqual(result.status, "failed")
        self.assertEqual(result.exit_code, 2)
        self.assertIn("InvalidCoreError", result.error)
        self.assertEqual(command.status, "failed")

    def test_failed_run_with_budget_error(self):
        """Test budget errors exit with 3."""
        result = FailingCommand(SemigroupBudgetError(10, "enumerate")).run(argparse.Namespace())
        self.assertEqual(result.exit_code, 3)

    def test_failed_run_with_unexpected_error(self):
        """Test foreign exceptions exit with 1."""
        result = FailingCommand(RuntimeError("Intentional failure for testing")).run(argparse.Namespace())
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error, "RuntimeError: Intentional failure for testing")

    def test_repr(self):
        """Test string representation."""
        self.assertEqual(repr(EchoCommand()), "EchoCommand(name='echo', status='initialized')")


if __name__ == '__main__':
    unittest.main()
