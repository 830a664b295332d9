# encoding: utf-8
"""
Every rule must preserve the observable behavior of generated programs.
"""

import pytest

from denat.exceptions import TransformError
from denat.fuzz import generate_program
from denat.interp import equivalent_units
from denat.transforms import RuleConfig, TransformRuleId, apply, apply_each, apply_rule, find_sites, get_rule

LARGE_SAMPLE_SIZE = 1000


def assert_preserved(outcome):
    verdict = equivalent_units(outcome.original, outcome.transformed, seed=outcome.seed)
    assert not verdict.divergent, (outcome.rule, outcome.transformed.canonical_text, verdict.witness)


class TestPreservation(object):

    @pytest.mark.parametrize('seed', range(40))
    def test_apply(self, seed):
        assert_preserved(apply(generate_program(seed), seed=seed))

    @pytest.mark.parametrize('seed', range(10))
    def test_apply_each(self, seed):
        for outcome in apply_each(generate_program(seed), RuleConfig(rename_fraction=1.0), seed=seed):
            assert_preserved(outcome)

    @pytest.mark.parametrize('rule', list(TransformRuleId))
    def test_every_rule(self, rule):
        applied = 0
        for seed in range(30):
            unit = generate_program(seed)
            if find_sites(unit, rule):
                assert_preserved(apply_rule(unit, rule, seed=seed))
                applied += 1
        assert applied > 0

    def test_every_site(self):
        unit = generate_program(3)
        for rule in TransformRuleId:
            for site in find_sites(unit, rule):
                assert_preserved(get_rule(rule).transform(unit, site, seed=site))

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', range(LARGE_SAMPLE_SIZE))
    def test_apply_each_large_sample(self, seed):
        outcomes = apply_each(generate_program(seed + 1000), seed=seed)
        assert outcomes
        for outcome in outcomes:
            assert_preserved(outcome)

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', range(100))
    def test_every_site_large_sample(self, seed):
        unit = generate_program(seed + 5000)
        for rule in TransformRuleId:
            for site in find_sites(unit, rule):
                try:
                    outcome = get_rule(rule).transform(unit, site, seed=site)
                except TransformError:
                    continue
                assert_preserved(outcome)

    def test_known_units(self, bsearch, counter, clamp):
        for unit in (bsearch, counter, clamp):
            for seed in range(5):
                assert_preserved(apply(unit, seed=seed))
