"""Benchmark toolkit for microcontroller projects: circuits, firmware and simulation.

The subpackages are usable on their own:

* :mod:`pcbench.circuit` parses logical and breadboard circuit documents.
* :mod:`pcbench.netlist` computes electrical nets and reduces layouts.
* :mod:`pcbench.validate` reports structural errors against a reference.
* :mod:`pcbench.firmware` parses and interprets the firmware dialect.
* :mod:`pcbench.sim` and :mod:`pcbench.testproc` simulate and check behaviour.
* :mod:`pcbench.harness` runs generation tasks and writes reports.
"""

from .circuit import LOGICAL, PHYSICAL, CircuitDoc, CircuitParseError, parse_circuit
from .firmware import parse_program
from .netlist import build_nets, reduce_to_logical, same_pin_partition
from .testproc import Verdict, parse_testproc, simulate
from .validate import ErrorCategory, ValidationReport, validate

__version__ = "0.1.0"

__all__ = [
    "CircuitDoc", "CircuitParseError", "ErrorCategory", "LOGICAL", "PHYSICAL",
    "ValidationReport", "Verdict", "build_nets", "parse_circuit", "parse_program",
    "parse_testproc", "reduce_to_logical", "same_pin_partition", "simulate", "validate",
]
