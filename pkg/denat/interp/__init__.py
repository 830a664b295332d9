# encoding: utf-8

from .machine import (
    DEFAULT_FUEL, EXTERN_CALL, FUEL_EXHAUSTED, OK, RETURN, RUNTIME_ERROR, ExecResult, ExternOracle, Status, TraceEvent,
    run,
)
from .oracle import DIVERGENT, EQUIVALENT, INCONCLUSIVE, Verdict, Witness, equivalent, equivalent_units
from .values import Array, Bool, Int, IntArray, Str, Value, from_json

__all__ = (
    'Array', 'Bool', 'DEFAULT_FUEL', 'DIVERGENT', 'EQUIVALENT', 'EXTERN_CALL', 'ExecResult', 'ExternOracle',
    'FUEL_EXHAUSTED', 'INCONCLUSIVE', 'Int', 'IntArray', 'OK', 'RETURN', 'RUNTIME_ERROR', 'Status', 'Str',
    'TraceEvent', 'Value', 'Verdict', 'Witness', 'equivalent', 'equivalent_units', 'from_json', 'run',
)
