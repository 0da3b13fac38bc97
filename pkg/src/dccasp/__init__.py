"""Goal-directed answer set programming with dynamic consistency checking."""

from .engine import Answer, Engine, Stats, run_query
from .syntax import ParseError, parse_program, parse_query
from .terms import KERNEL
from .transform import compile_program

__all__ = [
    "Answer",
    "Engine",
    "KERNEL",
    "ParseError",
    "Stats",
    "compile_program",
    "parse_program",
    "parse_query",
    "run_query",
]
