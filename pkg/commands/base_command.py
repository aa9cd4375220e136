"""
Base class for the command line sub-commands.
Every command loads its input, calls the library and returns a CommandResult;
errors never escape run().
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional
import argparse
import json
import logging
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from exceptions import ValuationSystemException
from utils.document_loader import DocumentLoader, SequenceDocument

logger = logging.getLogger(__name__)


def render_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, UTF-8 text."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


class CommandResult:
    """
    Result container for one command execution.
    """

    def __init__(
        self,
        command_name: str,
        status: str,
        output: Any = None,
        text: Optional[str] = None,
        error: Optional[str] = None,
        exit_code: int = 0
    ):
        """
        Initialize command result.

        Args:
            command_name: Name of the command that produced this result
            status: "completed" or "failed"
            output: JSON-serializable payload
            text: Plain text output (DOT), printed instead of the payload
            error: Error message if status is "failed"
            exit_code: Process exit code
        """
        self.command_name = command_name
        self.status = status
        self.output = output
        self.text = text
        self.error = error
        self.exit_code = exit_code

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command_name,
            "status": self.status,
            "output": self.output,
            "error": self.error,
            "exit_code": self.exit_code
        }

    def is_successful(self) -> bool:
        return self.status == "completed" and self.exit_code == 0

    def render(self) -> Optional[str]:
        """Text for stdout, or None when there is nothing to print."""
        if self.text is not None:
            return self.text
        if self.output is None:
            return None
        return render_json(self.output)


class BaseCommand(ABC):
    """
    Abstract base class for all sub-commands.
    """

    name: str = "command"
    help: str = ""

    def __init__(self, loader: Optional[DocumentLoader] = None):
        self.loader = loader or DocumentLoader()
        self.status = "initialized"
        self.last_result: Optional[CommandResult] = None

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Register the command's arguments on its sub-parser."""
        parser.add_argument("file", help="Sequence document (JSON), or - for stdin")

    @abstractmethod
    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        """
        Run the command.

        Returns:
            Dictionary with keys:
                - output (optional): JSON payload
                - text (optional): plain text output
                - exit_code (optional): non-zero for a completed run that
                  reports mathematically invalid input
        """
        pass

    def load(self, args: argparse.Namespace) -> SequenceDocument:
        return self.loader.load(args.file)

    def run(self, args: argparse.Namespace) -> CommandResult:
        """
        Execute process() with error handling and status management.
        """
        try:
            self.status = "running"
            self._log("Starting...")
            result_dict = self.process(args)
            self.status = "completed"
            self._log("Completed")
            result = CommandResult(
                command_name=self.name,
                status="completed",
                output=result_dict.get("output"),
                text=result_dict.get("text"),
                exit_code=result_dict.get("exit_code", 0)
            )
        except Exception as e:
            self.status = "failed"
            error_msg = f"{type(e).__name__}: {str(e)}"
            exit_code = e.exit_code if isinstance(e, ValuationSystemException) else 1
            self._log(f"Error: {error_msg}", level=logging.ERROR)
            result = CommandResult(
                command_name=self.name,
                status="failed",
                error=error_msg,
                exit_code=exit_code
            )
        self.last_result = result
        return result

    def _log(self, message: str, level: int = logging.DEBUG) -> None:
        """Log a message with the command name prefix."""
        logger.log(level, f"[{self.name}] {message}")

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name='{self.name}', status='{self.status}')"
