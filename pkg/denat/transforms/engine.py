# encoding: utf-8
"""
The three-step application procedure: find the sites of all enabled rules,
select one applicable rule and one of its sites at random and apply it.
"""

import logging

from ..exceptions import NoApplicableRule, TransformError
from ..utils.internal import derive_seed, make_rng
from .base import RuleConfig, TransformRuleId, UnitContext, get_rule

logger = logging.getLogger(__name__)


def find_sites(unit, rule, config=None):
    """
    Find all nodes of a unit a rule can be applied at.

    :param unit: The unit (or its analysis context).
    :type unit: denat.syntax.SourceUnit | denat.transforms.base.UnitContext
    :param TransformRuleId rule: The rule.
    :param RuleConfig | None config: The rule configuration.
    :return: The ids of the site nodes in source order.
    :rtype: list[int]
    """
    return get_rule(rule, config).find_sites(UnitContext.of(unit))


def _collect_sites(context, config):
    return [(rule, sites) for rule, sites in
            ((rule, find_sites(context, rule, config)) for rule in TransformRuleId if config.is_enabled(rule))
            if sites]


def _choose(applicable, rng):
    rule, sites = rng.choice(applicable)
    return rule, rng.choice(sites)


def select_rule(unit, config=None, seed=0):
    """
    Select a rule uniformly among the applicable ones, then one of its sites.

    :param unit: The unit (or its analysis context).
    :type unit: denat.syntax.SourceUnit | denat.transforms.base.UnitContext
    :param RuleConfig | None config: The rule configuration.
    :param int seed: The selection seed.
    :return: A 2-tuple containing the selected rule and site node id.
    :rtype: (TransformRuleId, int)
    :raises NoApplicableRule: If no enabled rule applies anywhere.
    """
    context = UnitContext.of(unit)
    applicable = _collect_sites(context, config or RuleConfig())
    if not applicable:
        raise NoApplicableRule('No enabled transformation rule applies to unit "{}".'.format(context.unit.name))
    return _choose(applicable, make_rng(seed))


def apply(unit, config=None, seed=0):
    """
    Apply exactly one randomly selected rule to a unit. If the selected rule
    fails, it is dropped and the selection is repeated with the same random
    stream until a rule succeeds.

    :param unit: The unit (or its analysis context).
    :type unit: denat.syntax.SourceUnit | denat.transforms.base.UnitContext
    :param RuleConfig | None config: The rule configuration.
    :param int seed: The seed for the selection and the rule itself.
    :return: The outcome of the applied rule.
    :rtype: denat.transforms.base.TransformOutcome
    :raises NoApplicableRule: If no enabled rule can be applied.
    """
    config = config or RuleConfig()
    context = UnitContext.of(unit)
    applicable = _collect_sites(context, config)
    rng = make_rng(seed)
    failed = []
    while applicable:
        rule, site = _choose(applicable, rng)
        try:
            outcome = get_rule(rule, config).transform(context, site, seed)
        except TransformError as e:
            logger.debug('Rule %s failed at node %d of %s: %s', rule.cli_name, site, context.unit.name, e)
            failed.append(rule.value)
            applicable = [entry for entry in applicable if entry[0] is not rule]
            continue
        if failed:
            outcome.auxiliary['fallback_from'] = failed
        return outcome
    raise NoApplicableRule('No enabled transformation rule applies to unit "{}".'.format(context.unit.name))


def apply_each(unit, config=None, seed=0):
    """
    Apply every applicable rule separately (one outcome per rule), each at a
    randomly selected site.

    :param unit: The unit (or its analysis context).
    :type unit: denat.syntax.SourceUnit | denat.transforms.base.UnitContext
    :param RuleConfig | None config: The rule configuration.
    :param int seed: The seed for the site selection and the rules.
    :return: The outcomes in rule order. Rules that fail are skipped.
    :rtype: list[denat.transforms.base.TransformOutcome]
    :raises NoApplicableRule: If no enabled rule can be applied.
    """
    config = config or RuleConfig()
    context = UnitContext.of(unit)
    outcomes = []
    for rule, sites in _collect_sites(context, config):
        sites = list(sites)
        rng = make_rng(derive_seed(seed, rule.value))
        while sites:
            site = rng.choice(sites)
            try:
                outcomes.append(get_rule(rule, config).transform(context, site, seed))
                break
            except TransformError as e:
                logger.debug('Rule %s failed at node %d of %s: %s', rule.cli_name, site, context.unit.name, e)
                sites.remove(site)
    if not outcomes:
        raise NoApplicableRule('No enabled transformation rule applies to unit "{}".'.format(context.unit.name))
    return outcomes


def apply_rule(unit, rule, config=None, seed=0):
    """
    Apply a given rule at a randomly selected site (used for forced rules).

    :param unit: The unit (or its analysis context).
    :type unit: denat.syntax.SourceUnit | denat.transforms.base.UnitContext
    :param TransformRuleId rule: The rule to apply.
    :param RuleConfig | None config: The rule configuration.
    :param int seed: The seed for the site selection and the rule.
    :return: The outcome.
    :rtype: denat.transforms.base.TransformOutcome
    :raises NoApplicableRule: If the rule can't be applied anywhere.
    """
    config = config or RuleConfig()
    return apply(unit, config._replace(rules_enabled=frozenset((rule,))), seed)


# Single-rule operations.

def loop_exchange(unit, site, seed=0):
    return get_rule(TransformRuleId.LOOP_EXCHANGE).transform(unit, site, seed)


def inject_dead_code(unit, site, seed=0, config=None):
    return get_rule(TransformRuleId.DEAD_CODE, config).transform(unit, site, seed)


def block_swap(unit, site, seed=0):
    return get_rule(TransformRuleId.BLOCK_SWAP).transform(unit, site, seed)


def operand_swap(unit, site, seed=0):
    return get_rule(TransformRuleId.OPERAND_SWAP).transform(unit, site, seed)


def confusion_insert(unit, site, seed=0):
    return get_rule(TransformRuleId.CONFUSION_INSERT).transform(unit, site, seed)


def var_rename(unit, site, config=None, seed=0):
    return get_rule(TransformRuleId.VAR_RENAME, config).transform(unit, site, seed)
