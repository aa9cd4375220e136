"""
Command line sub-commands
"""
from .base_command import BaseCommand, CommandResult
from .validate_command import ValidateCommand
from .invariants_command import InvariantsCommand
from .semigroup_command import SemigroupCommand
from .dualgraph_command import DualGraphCommand
from .curve_command import CurveCommand, ValueCommand
from .oracle_command import OracleCommand

COMMANDS = [
    ValidateCommand,
    InvariantsCommand,
    SemigroupCommand,
    DualGraphCommand,
    CurveCommand,
    ValueCommand,
    OracleCommand
]

__all__ = ['BaseCommand', 'CommandResult', 'ValidateCommand', 'InvariantsCommand', 'SemigroupCommand',
           'DualGraphCommand', 'CurveCommand', 'ValueCommand', 'OracleCommand', 'COMMANDS']
