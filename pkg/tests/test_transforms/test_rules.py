# encoding: utf-8
from itertools import product

import pytest
from mock import Mock

from denat.dataflow import build_def_use, occurrences_of
from denat.exceptions import (
    IneligibleOperator, NoDonorStatement, NoElseBranch, NotALoopSite, NothingToRename, PatternMismatch,
)
from denat.interp import Bool, Int, run
from denat.syntax import NodeKind
from denat.transforms import (
    DEFAULT_GUARD_FORMS, ConfusionInsertRule, DeadCodeRule, LoopExchangeRule, OperandSwapRule, RuleConfig,
    UnitContext, VarRenameRule, block_swap, confusion_insert, find_sites, inject_dead_code, loop_exchange,
    operand_swap, var_rename,
)
from denat.transforms.base import TransformRuleId
from ..conftest import node_with_text, unit_of


def first_of_kind(unit, kind):
    return unit.ast.of_kind(kind)[0]


class TestLoopExchange(object):

    def test_for_to_while(self):
        unit = unit_of('void f() { for(int i = 0; i < 10; i++){ if(i){ foo(); continue;} bar(); } }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.FOR).id)
        assert outcome.transformed.canonical_text == (
            'void f ( ) { int i = 0 ; while ( i < 10 ) { if ( i ) { foo ( ) ; i ++ ; continue ; } bar ( ) ; i ++ ; } }'
        )
        assert outcome.rule is TransformRuleId.LOOP_EXCHANGE
        assert outcome.auxiliary['direction'] == 'for-to-while'
        assert outcome.auxiliary['hoisting'] == 'flat'
        assert outcome.auxiliary['update_insertions'] == 1
        assert outcome.auxiliary['update'] == 'i ++'

    def test_while_to_for(self):
        unit = unit_of('void f(bool c) { while (c) { b(); } }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.WHILE).id)
        assert outcome.transformed.canonical_text == 'void f ( bool c ) { for ( ; c ; ) { b ( ) ; } }'
        assert outcome.auxiliary['direction'] == 'while-to-for'
        assert outcome.auxiliary['hoisting'] == 'none'

    def test_missing_condition(self):
        unit = unit_of('void f(int x) { for(;;){ if(x) break; } }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.FOR).id)
        assert outcome.transformed.canonical_text == 'void f ( int x ) { while ( true ) { if ( x ) break ; } }'
        assert 'update' not in outcome.auxiliary

    def test_block_hoisting(self):
        unit = unit_of('void f() { for (int i = 0; i < 2; i++) { } for (int i = 0; i < 3; i++) { } }')
        sites = find_sites(unit, TransformRuleId.LOOP_EXCHANGE)
        assert len(sites) == 2
        outcome = loop_exchange(unit, sites[0])
        assert outcome.transformed.canonical_text == (
            'void f ( ) { { int i = 0 ; while ( i < 2 ) { i ++ ; } } for ( int i = 0 ; i < 3 ; i ++ ) { } }'
        )
        assert outcome.auxiliary['hoisting'] == 'block'

    def test_loop_local_update_before_break(self):
        unit = unit_of('int f(int n) { int s = 0; for (int i = 0; i < n; i++) { if (i > 3) break; s += i; } '
                       'return s; }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.FOR).id)
        assert outcome.transformed.canonical_text == (
            'int f ( int n ) { int s = 0 ; int i = 0 ; while ( i < n ) { if ( i > 3 ) { i ++ ; break ; } '
            's += i ; i ++ ; } return s ; }'
        )
        assert outcome.auxiliary['update_insertions'] == 1

    def test_non_local_update_before_break(self):
        unit = unit_of('int f(int n) { int s = 0; for (int i = 0; i < n; s++) { if (i > 3) break; i++; } '
                       'return s; }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.FOR).id)
        assert 'if ( i > 3 ) break ;' in outcome.transformed.canonical_text
        assert outcome.auxiliary['update_insertions'] == 0

    def test_nested_loop_jumps(self):
        unit = unit_of('void f(int n) { for (int i = 0; i < n; i++) { while (n > 0) { continue; } } }')
        outcome = loop_exchange(unit, first_of_kind(unit, NodeKind.FOR).id)
        assert outcome.transformed.canonical_text == (
            'void f ( int n ) { int i = 0 ; while ( i < n ) { while ( n > 0 ) { continue ; } i ++ ; } }'
        )
        assert outcome.auxiliary['update_insertions'] == 0

    def test_no_sites(self):
        assert find_sites(unit_of('int f(){ return 1; }'), TransformRuleId.LOOP_EXCHANGE) == []

    def test_captured_update_is_no_site(self):
        unit = unit_of('void f(int n, int k) { for (int i = 0; i < n; i = i + k) { int k = 1; } }')
        assert find_sites(unit, TransformRuleId.LOOP_EXCHANGE) == []

    @pytest.mark.parametrize('text', [
        'void f(int x) { x = 1; }',
        'int f(){ return 1; }',
    ])
    def test_not_a_loop(self, text):
        unit = unit_of(text)
        with pytest.raises(NotALoopSite) as e:
            loop_exchange(unit, unit.functions[0].id)
        assert e.value.rule is TransformRuleId.LOOP_EXCHANGE
        assert e.value.site == unit.functions[0].id

    def test_is_loop_local(self, counter):
        context = UnitContext(counter)
        assert LoopExchangeRule().is_loop_local(context, first_of_kind(counter, NodeKind.FOR).id)


class TestDeadCode(object):

    def test_rewrite(self):
        unit = unit_of('void f(int i) { int high = 0; int mid = 3; high = mid + 1; log(high); }')
        context = UnitContext(unit)
        site = node_with_text(unit, 'log ( high ) ;').id
        indices = iter([0, 0, 1])
        rng = Mock()
        rng.choice.side_effect = lambda options: options[next(indices)]
        rule = DeadCodeRule()

        tree, auxiliary = rule.rewrite(context, site, rng)
        outcome = rule.build_outcome(context, site, 0, tree, auxiliary)
        assert outcome.transformed.canonical_text == (
            'void f ( int i ) { int high = 0 ; int mid = 3 ; high = mid + 1 ; if ( i < i ) { high = mid + 1 ; } '
            'log ( high ) ; }'
        )
        form_options = rng.choice.call_args_list[1][0][0]
        operand_options = rng.choice.call_args_list[2][0][0]
        assert tuple(form_options) == DEFAULT_GUARD_FORMS
        assert operand_options == ['high', 'i', 'mid', '0']
        assert outcome.auxiliary['donor'] == 'high = mid + 1 ;'
        assert outcome.auxiliary['guard'] == 'if ( i < i ) { high = mid + 1 ; }'
        assert outcome.auxiliary['guard_operand'] == 'i'
        assert outcome.auxiliary['position'] == 'before'

    def test_no_donor(self):
        unit = unit_of('int f(int a) { return a; }')
        assert find_sites(unit, TransformRuleId.DEAD_CODE) == []
        with pytest.raises(NoDonorStatement):
            inject_dead_code(unit, unit.functions[0].id)

    @pytest.mark.parametrize('seed', range(5))
    def test_only_inserts(self, bsearch, seed):
        sites = find_sites(bsearch, TransformRuleId.DEAD_CODE)
        assert sites
        for site in sites:
            outcome = inject_dead_code(bsearch, site, seed)
            guard = outcome.auxiliary['guard']
            assert outcome.transformed.canonical_text.replace(guard + ' ', '', 1) == bsearch.canonical_text

    def test_donor_variables_are_visible(self, bsearch):
        for site in find_sites(bsearch, TransformRuleId.DEAD_CODE):
            outcome = inject_dead_code(bsearch, site, seed=site)
            build_def_use(outcome.transformed.ast)

    def test_compound_donors(self, clamp):
        context = UnitContext(clamp)
        function_id = clamp.functions[0].id
        assert len(DeadCodeRule().donors(context, function_id)) == 3
        assert len(DeadCodeRule(RuleConfig(allow_compound_donors=True)).donors(context, function_id)) == 5

    def test_guard_form(self, bsearch):
        config = RuleConfig(dead_guard_forms=(DEFAULT_GUARD_FORMS[1],))
        site = find_sites(bsearch, TransformRuleId.DEAD_CODE, config)[0]
        outcome = inject_dead_code(bsearch, site, config=config)
        assert outcome.auxiliary['guard'].startswith('while ( ')

    def test_block_end(self):
        unit = unit_of('void f(int a) { a = a + 1; { } }')
        context = UnitContext(unit)
        inner = unit.ast.of_kind(NodeKind.BLOCK)[1]
        rng = Mock()
        rng.choice.side_effect = lambda options: options[-1]
        tree, auxiliary = DeadCodeRule().rewrite(context, inner.id, rng)
        outcome = DeadCodeRule().build_outcome(context, inner.id, 0, tree, auxiliary)
        assert outcome.transformed.canonical_text == (
            'void f ( int a ) { a = a + 1 ; { while ( 0 != 0 ) { a = a + 1 ; } } }'
        )
        assert outcome.auxiliary['position'] == 'end'


class TestBlockSwap(object):

    def test_comparison(self, bsearch):
        sites = find_sites(bsearch, TransformRuleId.BLOCK_SWAP)
        assert len(sites) == 2
        outcome = block_swap(bsearch, sites[0])
        assert (
            'if ( arr [ mid ] != key ) { if ( arr [ mid ] < key ) { low = mid + 1 ; } else { high = mid - 1 ; } } '
            'else { return mid ; }'
        ) in outcome.transformed.canonical_text
        assert outcome.auxiliary['negated_condition'] == 'arr [ mid ] != key'

    def test_negation_is_removed(self):
        unit = unit_of('void f(bool done) { if (!done) { a(); } else { b(); } }')
        outcome = block_swap(unit, first_of_kind(unit, NodeKind.IF).id)
        assert outcome.transformed.canonical_text == 'void f ( bool done ) { if ( done ) { b ( ) ; } else { a ( ) ; } }'

    def test_wrapped_negation(self):
        unit = unit_of('void f(bool a, bool b) { if (a && b) { x(); } else { y(); } }')
        outcome = block_swap(unit, first_of_kind(unit, NodeKind.IF).id)
        assert 'if ( ! ( a && b ) ) { y ( ) ; } else { x ( ) ; }' in outcome.transformed.canonical_text

    def test_behavior_is_kept(self):
        unit = unit_of('int f(bool a, bool b) { int r = 0; if (a && b) { r = 1; } else { r = 2; } return r; }')
        transformed = block_swap(unit, first_of_kind(unit, NodeKind.IF).id).transformed
        for a, b in product((True, False), repeat=2):
            args = [Bool(a), Bool(b)]
            expected = Int(1 if a and b else 2)
            assert run(unit, 'f', args).result == run(transformed, 'f', args).result == expected

    def test_no_else_branch(self):
        unit = unit_of('void f(bool c) { if (c) { x(); } }')
        with pytest.raises(NoElseBranch):
            block_swap(unit, first_of_kind(unit, NodeKind.IF).id)


class TestOperandSwap(object):

    def test_mirrored_comparison(self, bsearch):
        site = find_sites(bsearch, TransformRuleId.OPERAND_SWAP)[0]
        outcome = operand_swap(bsearch, site)
        assert 'while ( high >= low )' in outcome.transformed.canonical_text
        assert outcome.auxiliary['operator'] == '<='
        assert outcome.auxiliary['swapped_operator'] == '>='

    @pytest.mark.parametrize('text, expected_text', [
        ('bool h(int a, int b) { return a == b; }', 'bool h ( int a , int b ) { return b == a ; }'),
        ('bool h(int x) { return f(x) < 3; }', 'bool h ( int x ) { return 3 > f ( x ) ; }'),
        ('bool h(bool a, bool b) { return a && b; }', 'bool h ( bool a , bool b ) { return b && a ; }'),
    ])
    def test_swap(self, text, expected_text):
        unit = unit_of(text)
        outcome = operand_swap(unit, first_of_kind(unit, NodeKind.BINARY).id)
        assert outcome.transformed.canonical_text == expected_text

    @pytest.mark.parametrize('text', [
        'bool h(int x, int y) { return f(x) && g(y); }',
        'bool h(int a) { return a == a; }',
        'bool h(int x, int y) { return f(x) < g(y); }',
        'int h(int a, int b) { return a + b; }',
        'bool h(int i, int n) { return i++ < n; }',
    ])
    def test_ineligible(self, text):
        unit = unit_of(text)
        assert find_sites(unit, TransformRuleId.OPERAND_SWAP) == []
        with pytest.raises(IneligibleOperator):
            operand_swap(unit, first_of_kind(unit, NodeKind.BINARY).id)

    def test_flip_operator(self):
        rule = OperandSwapRule()
        assert [rule.flip_operator(operator) for operator in ('<', '<=', '>', '>=', '==', '&&')] == [
            '>', '>=', '<', '<=', '==', '&&',
        ]


class TestConfusionInsert(object):

    @pytest.mark.parametrize('increment', ['j += 1;', 'j = j + 1;'])
    def test_post_increment(self, increment):
        unit = unit_of('void f(int i, int j) { i = j; ' + increment + ' }')
        site = find_sites(unit, TransformRuleId.CONFUSION_INSERT)[0]
        outcome = confusion_insert(unit, site)
        assert outcome.transformed.canonical_text == 'void f ( int i , int j ) { i = j ++ ; }'
        assert outcome.auxiliary['pattern'] == 'post-increment'
        assert outcome.auxiliary['statement'] == 'i = j ++ ;'

    def test_ternary(self):
        unit = unit_of('void f(int x, int y, int p, int q) { if (x != 0) { y = p; } else { y = q; } }')
        outcome = confusion_insert(unit, first_of_kind(unit, NodeKind.IF).id)
        assert outcome.transformed.canonical_text == (
            'void f ( int x , int y , int p , int q ) { y = ( x != 0 ) ? p : q ; }'
        )
        assert outcome.auxiliary['pattern'] == 'ternary'

    def test_element_target(self):
        unit = unit_of('void f(int[] xs, int c) { if (c > 0) { xs[0] = 1; } else { xs[0] = 2; } }')
        outcome = confusion_insert(unit, first_of_kind(unit, NodeKind.IF).id)
        assert 'xs [ 0 ] = ( c > 0 ) ? 1 : 2 ;' in outcome.transformed.canonical_text

    @pytest.mark.parametrize('text', [
        'void f(int c, int a, int b) { if (c > 0) { a = 1; } else { b = 1; } }',
        'void f(int i, int j) { i = j; j += 2; }',
        'void f(str s, str t) { s = t; t += 1; }',
        'void f(int c, int y) { if (c++ > 0) { y = 1; } else { y = 2; } }',
    ])
    def test_no_sites(self, text):
        assert find_sites(unit_of(text), TransformRuleId.CONFUSION_INSERT) == []

    def test_pattern_mismatch(self):
        unit = unit_of('void f(int k) { k += 1; }')
        with pytest.raises(PatternMismatch):
            confusion_insert(unit, node_with_text(unit, 'k += 1 ;').id)

    def test_make_ternary_adds_parentheses(self):
        unit = unit_of('void f(int x, int y, int p, int q) { if (x) { y = p; } else { y = q; } }')
        outcome = ConfusionInsertRule().transform(unit, first_of_kind(unit, NodeKind.IF).id)
        assert 'y = ( x ) ? p : q ;' in outcome.transformed.canonical_text


class TestVarRename(object):

    def test_chosen_chains(self, bsearch):
        graph = build_def_use(bsearch.ast)
        decl_ids = [occurrences_of(graph, name)[0].decl_id for name in ('arr', 'high')]
        outcome = VarRenameRule().transform_chains(bsearch, bsearch.functions[0].id, decl_ids)
        assert outcome.transformed.canonical_text == (
            'int bsearch ( int [ ] VAR_1 , int key ) { int low = 0 ; int VAR_2 = len ( VAR_1 ) - 1 ; '
            'while ( low <= VAR_2 ) { int mid = ( low + VAR_2 ) / 2 ; if ( VAR_1 [ mid ] == key ) { return mid ; } '
            'else if ( VAR_1 [ mid ] < key ) { low = mid + 1 ; } else { VAR_2 = mid - 1 ; } } return - 1 ; }'
        )
        assert outcome.auxiliary['renamed'] == [['arr', 'VAR_1'], ['high', 'VAR_2']]

    def test_all_chains(self):
        unit = unit_of('int f(int a) { int b = a; int c = b + a; return c; }')
        outcome = var_rename(unit, unit.functions[0].id, RuleConfig(rename_fraction=1.0))
        transformed = outcome.transformed
        assert transformed.canonical_text == (
            'int f ( int VAR_1 ) { int VAR_2 = VAR_1 ; int VAR_3 = VAR_2 + VAR_1 ; return VAR_3 ; }'
        )
        assert build_def_use(unit.ast).anonymized_edges(unit.ast) == \
            build_def_use(transformed.ast).anonymized_edges(transformed.ast)

    def test_prefix(self):
        unit = unit_of('int f(int a) { return a; }')
        outcome = var_rename(unit, unit.functions[0].id, RuleConfig(rename_prefix='var_'))
        assert outcome.transformed.canonical_text == 'int f ( int var_1 ) { return var_1 ; }'

    def test_used_names_are_skipped(self):
        unit = unit_of('int f(int VAR_1, int b) { return VAR_1 + b; }')
        outcome = var_rename(unit, unit.functions[0].id, RuleConfig(rename_fraction=1.0))
        assert outcome.transformed.canonical_text == 'int f ( int VAR_1 , int VAR_2 ) { return VAR_1 + VAR_2 ; }'

    def test_default_names_are_kept_with_other_prefix(self):
        unit = unit_of('int f(int VAR_1, int var_3, int b) { return VAR_1 + var_3 + b; }')
        outcome = var_rename(unit, unit.functions[0].id, RuleConfig(rename_fraction=1.0, rename_prefix='var_'))
        assert outcome.transformed.canonical_text == (
            'int f ( int VAR_1 , int var_3 , int var_1 ) { return VAR_1 + var_3 + var_1 ; }'
        )
        assert outcome.auxiliary['renamed'] == [['b', 'var_1']]
        unit = unit_of('int f(int VAR_1) { return VAR_1; }')
        with pytest.raises(NothingToRename):
            var_rename(unit, unit.functions[0].id, RuleConfig(rename_prefix='var_'))

    def test_shadowed_chains(self):
        unit = unit_of('void f() { int x = 1; { int x = 2; x = x + 1; } x = x + 2; }')
        outcome = var_rename(unit, unit.functions[0].id, RuleConfig(rename_fraction=1.0))
        assert outcome.transformed.canonical_text == (
            'void f ( ) { int VAR_1 = 1 ; { int VAR_2 = 2 ; VAR_2 = VAR_2 + 1 ; } VAR_1 = VAR_1 + 2 ; }'
        )

    @pytest.mark.parametrize('seed', range(3))
    def test_fraction(self, bsearch, seed):
        outcome = var_rename(bsearch, bsearch.functions[0].id, seed=seed)
        assert len(outcome.auxiliary['renamed']) == 3

    def test_nothing_to_rename(self):
        unit = unit_of('int f() { return 0; }')
        with pytest.raises(NothingToRename):
            var_rename(unit, unit.functions[0].id)

    def test_unknown_chain(self, bsearch):
        with pytest.raises(NothingToRename):
            VarRenameRule().transform_chains(bsearch, bsearch.functions[0].id, [bsearch.functions[0].id])
