"""Arduino-flavoured firmware language: parsing, execution and code metrics."""

from .ast import Program
from .interp import (
    DEFAULT_STEP_BUDGET,
    IDLE_TICK_US,
    LOOP_START,
    FirmwareRuntimeError,
    HalCall,
    HalContract,
    Interpreter,
    RunReport,
    StepBudgetExceeded,
    run_until,
)
from .lexer import FirmwareSyntaxError
from .metrics import CodeMetrics, code_metrics, cyclomatic_complexity, lines_of_code
from .parser import FirmwareProgramError, parse_program

__all__ = [
    "CodeMetrics", "DEFAULT_STEP_BUDGET", "FirmwareProgramError", "FirmwareRuntimeError",
    "FirmwareSyntaxError", "HalCall", "HalContract", "IDLE_TICK_US", "Interpreter",
    "LOOP_START", "Program", "RunReport", "StepBudgetExceeded", "code_metrics",
    "cyclomatic_complexity", "lines_of_code", "parse_program", "run_until",
]
