# encoding: utf-8
from collections import Counter

import pytest

from denat.exceptions import NoApplicableRule, TransformError
from denat.transforms import (
    OperandSwapRule, RuleConfig, TransformRuleId, UnitContext, apply, apply_each, apply_rule, find_sites, select_rule,
)
from ..conftest import unit_of


class TestFindSites(object):

    @pytest.mark.parametrize('rule, expected_count', [
        (TransformRuleId.LOOP_EXCHANGE, 1),
        (TransformRuleId.BLOCK_SWAP, 2),
        (TransformRuleId.OPERAND_SWAP, 3),
        (TransformRuleId.CONFUSION_INSERT, 0),
        (TransformRuleId.VAR_RENAME, 1),
    ])
    def test_bsearch(self, bsearch, rule, expected_count):
        assert len(find_sites(bsearch, rule)) == expected_count

    def test_sites_are_sorted(self, bsearch):
        for rule in TransformRuleId:
            sites = find_sites(bsearch, rule)
            assert sites == sorted(sites)


class TestSelectRule(object):

    def test_single_rule(self):
        unit = unit_of('int f(int a) { return a; }')
        assert select_rule(unit) == (TransformRuleId.VAR_RENAME, unit.functions[0].id)

    def test_deterministic(self, bsearch):
        assert select_rule(bsearch, seed=42) == select_rule(bsearch, seed=42)

    def test_rules_are_drawn_uniformly(self):
        context = UnitContext(unit_of('int f(int a) { while (a < 3) { } return a; }'))
        counts = Counter(select_rule(context, seed=seed)[0] for seed in range(10000))
        assert set(counts) == {TransformRuleId.LOOP_EXCHANGE, TransformRuleId.OPERAND_SWAP, TransformRuleId.VAR_RENAME}
        assert all(abs(count - 3333) <= 150 for count in counts.values())

    def test_disabled_rules(self, bsearch):
        config = RuleConfig(rules_enabled=['block-swap'])
        for seed in range(10):
            assert select_rule(bsearch, config, seed)[0] is TransformRuleId.BLOCK_SWAP

    def test_no_applicable_rule(self):
        with pytest.raises(NoApplicableRule):
            select_rule(unit_of('int f(){ return 0; }'))


class TestApply(object):

    def test_no_applicable_rule(self):
        with pytest.raises(NoApplicableRule):
            apply(unit_of('int f(){ return 0; }'))

    def test_rules_over_seeds(self, bsearch):
        rules = {apply(bsearch, seed=seed).rule for seed in range(200)}
        assert rules == set(TransformRuleId) - {TransformRuleId.CONFUSION_INSERT}

    def test_deterministic(self, bsearch):
        a, b = apply(bsearch, seed=7), apply(bsearch, seed=7)
        assert a.transformed.canonical_text == b.transformed.canonical_text
        assert a.auxiliary == b.auxiliary
        assert a.seed == 7

    def test_fallback(self, monkeypatch):
        def fail(self, context, site, rng):
            raise TransformError('Broken.', rule=self.rule_id, site=site)

        monkeypatch.setattr(OperandSwapRule, 'rewrite', fail)
        unit = unit_of('bool f(int a, int b) { return a < b; }')
        outcomes = [apply(unit, seed=seed) for seed in range(20)]
        assert all(outcome.rule is TransformRuleId.VAR_RENAME for outcome in outcomes)
        assert any(outcome.auxiliary.get('fallback_from') == ['operand_swap'] for outcome in outcomes)

    def test_nothing_works(self, monkeypatch):
        def fail(self, context, site, rng):
            raise TransformError('Broken.', rule=self.rule_id, site=site)

        monkeypatch.setattr(OperandSwapRule, 'rewrite', fail)
        with pytest.raises(NoApplicableRule):
            apply(unit_of('bool f(int a, int b) { return a < b; }'), RuleConfig(rules_enabled=['operand-swap']))

    def test_apply_rule(self, bsearch):
        outcome = apply_rule(bsearch, TransformRuleId.BLOCK_SWAP, seed=3)
        assert outcome.rule is TransformRuleId.BLOCK_SWAP
        assert outcome.site_node_id in find_sites(bsearch, TransformRuleId.BLOCK_SWAP)
        with pytest.raises(NoApplicableRule):
            apply_rule(bsearch, TransformRuleId.CONFUSION_INSERT)

    def test_apply_each(self, bsearch):
        outcomes = apply_each(bsearch, seed=1)
        assert [outcome.rule for outcome in outcomes] == [
            TransformRuleId.LOOP_EXCHANGE,
            TransformRuleId.DEAD_CODE,
            TransformRuleId.BLOCK_SWAP,
            TransformRuleId.OPERAND_SWAP,
            TransformRuleId.VAR_RENAME,
        ]
        assert all(outcome.original is bsearch for outcome in outcomes)
