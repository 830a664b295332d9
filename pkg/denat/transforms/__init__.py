# encoding: utf-8

from .base import (  # noqa: F401
    DEFAULT_GUARD_FORMS, RuleConfig, TransformOutcome, TransformRule, TransformRuleId, UnitContext, get_rule,
)
# The rule modules register their rules on import.
from .confusion import ConfusionInsertRule
from .dead_code import DeadCodeRule
from .engine import (
    apply, apply_each, apply_rule, block_swap, confusion_insert, find_sites, inject_dead_code, loop_exchange,
    operand_swap, select_rule, var_rename,
)
from .loops import LoopExchangeRule
from .renaming import VarRenameRule
from .swaps import BlockSwapRule, OperandSwapRule

__all__ = (
    'BlockSwapRule', 'ConfusionInsertRule', 'DEFAULT_GUARD_FORMS', 'DeadCodeRule', 'LoopExchangeRule',
    'OperandSwapRule', 'RuleConfig', 'TransformOutcome', 'TransformRule', 'TransformRuleId', 'UnitContext',
    'VarRenameRule', 'apply', 'apply_each', 'apply_rule', 'block_swap', 'confusion_insert', 'find_sites',
    'get_rule', 'inject_dead_code', 'loop_exchange', 'operand_swap', 'select_rule', 'var_rename',
)
