# encoding: utf-8

import pytest

from denat.dataflow import (
    DEF, UPDATE, USE, build_def_use, can_fault, chains_of, declared_names, enclosing_loop, free_vars, is_pure,
    occurrences_of, visible_names, writes,
)
from denat.exceptions import DataflowError, UnknownName, UnresolvedVariable
from denat.syntax import NodeKind
from .conftest import node_with_text, unit_of


def edge_summary(graph):
    return sorted((source.name, source.role, target.role) for source, target in graph.edges)


class TestBuildDefUse(object):

    def test_straight_line(self):
        graph = build_def_use(unit_of('void f(int y) { int x = 1; y = x; }').ast)
        assert edge_summary(graph) == [('x', DEF, USE)]

    def test_loop(self):
        graph = build_def_use(unit_of('void f() { int i = 0; while (i < 3) { i = i + 1; } }').ast)
        uses = [occurrence for occurrence in graph.occurrences if occurrence.role == USE]
        assert len(uses) == 2
        assert {(source.role, target.node_id) for source, target in graph.edges} == {
            (DEF, uses[0].node_id),
            (DEF, uses[1].node_id),
            (UPDATE, uses[0].node_id),
            (UPDATE, uses[1].node_id),
        }

    def test_evaluation_order(self):
        graph = build_def_use(unit_of('void f() { int i = 0; i = i + 1; }').ast)
        assert [occurrence.role for occurrence in graph.occurrences] == [DEF, USE, UPDATE]
        assert edge_summary(graph) == [('i', DEF, USE)]

    def test_declaration_inside_loop_is_renewed(self):
        graph = build_def_use(unit_of('void f() { while (true) { int k = 0; k = k + 1; } }').ast)
        assert edge_summary(graph) == [('k', DEF, USE)]

    def test_compound_assignment_reads(self):
        graph = build_def_use(unit_of('void f() { int s = 0; s += 2; s += 3; }').ast)
        assert edge_summary(graph) == [('s', DEF, UPDATE), ('s', DEF, UPDATE), ('s', UPDATE, UPDATE)]
        assert len(graph.reads) == 2

    def test_element_write_updates_array(self):
        graph = build_def_use(unit_of('void f(int[] xs, int i) { xs[i] = 1; }').ast)
        roles = [(occurrence.name, occurrence.role) for occurrence in graph.occurrences]
        assert roles == [('xs', DEF), ('i', DEF), ('i', USE), ('xs', UPDATE)]
        assert edge_summary(graph) == [('i', DEF, USE), ('xs', DEF, UPDATE)]

    def test_scope_exit(self):
        with pytest.raises(UnresolvedVariable) as e:
            build_def_use(unit_of('void f(int b) { { int a = 1; } b = a; }').ast)
        assert e.value.name == 'a'
        assert e.value.span is not None

    def test_for_initializer_scope(self):
        with pytest.raises(UnresolvedVariable):
            build_def_use(unit_of('void f(int n) { for (int i = 0; i < n; i++) { } n = i; }').ast)

    def test_duplicate_declaration(self):
        with pytest.raises(DataflowError):
            build_def_use(unit_of('void f() { int a = 1; int a = 2; }').ast)

    def test_declared_types(self, bsearch):
        graph = build_def_use(bsearch.ast)
        types = {bsearch.ast.node(decl_id).lexeme: decl_type for decl_id, decl_type in graph.decl_types.items()}
        assert types == {'arr': 'int[]', 'key': 'int', 'low': 'int', 'high': 'int', 'mid': 'int'}

    def test_scopes(self, bsearch):
        graph = build_def_use(bsearch.ast)
        assert graph.scopes[0].parent_id is None
        assert all(scope.parent_id < scope.id for scope in graph.scopes[1:])

    def test_calls_are_no_variables(self):
        graph = build_def_use(unit_of('int g() { return log(1); }').ast)
        assert graph.occurrences == ()


class TestOccurrencesOf(object):

    def test_parameter(self, bsearch):
        graph = build_def_use(bsearch.ast)
        occurrences = occurrences_of(graph, 'arr')
        assert [occurrence.role for occurrence in occurrences] == [DEF, USE, USE, USE]
        assert len({occurrence.decl_id for occurrence in occurrences}) == 1

    def test_shadowing(self):
        unit = unit_of('void f() { int x = 1; { int x = 2; x = x + 1; } x = x + 2; }')
        graph = build_def_use(unit.ast)
        outer, inner = chains_of(graph, 'x')
        assert len(outer) == len(inner) == 3
        assert not {occurrence.node_id for occurrence in outer} & {occurrence.node_id for occurrence in inner}
        assert occurrences_of(graph, 'x') == outer
        assert occurrences_of(graph, 'x', inner[0].decl_id) == inner

    def test_unknown_name(self, bsearch):
        graph = build_def_use(bsearch.ast)
        with pytest.raises(UnknownName):
            occurrences_of(graph, 'missing')
        with pytest.raises(UnknownName):
            occurrences_of(graph, 'arr', decl_id=-1)

    def test_chain_numbers(self, bsearch):
        graph = build_def_use(bsearch.ast)
        numbers = graph.chain_numbers()
        names = [bsearch.ast.node(decl_id).lexeme for decl_id in sorted(numbers, key=numbers.get)]
        assert names == ['arr', 'key', 'low', 'high', 'mid']


class TestAnonymizedEdges(object):

    def test_renaming_invariance(self):
        a = unit_of('int f(int n) { int s = 0; while (n > 0) { s = s + n; n = n - 1; } return s; }')
        b = unit_of('int f(int q) { int t = 0; while (q > 0) { t = t + q; q = q - 1; } return t; }')
        assert build_def_use(a.ast).anonymized_edges(a.ast) == build_def_use(b.ast).anonymized_edges(b.ast)

    def test_chain_numbers_matter(self):
        a = unit_of('int f(int x, int y) { x = y; return x; }')
        b = unit_of('int f(int x, int y) { y = x; return y; }')
        assert build_def_use(a.ast).anonymized_edges(a.ast) != build_def_use(b.ast).anonymized_edges(b.ast)


UNIT_WITH_STATEMENTS = '''
bool g(int high, int mid, int n, int s, int x, int i, int[] xs) {
  high = mid + 1;
  int t = 0;
  for (int k = 0; k < n; k++) s = s + k;
  bool a = low(high) <= high;
  bool b = f(x) > 0;
  bool c = i++ < n;
  int d = mid / x;
  int e = xs[0];
  s = s + "a/b";
  return high <= mid;
}
'''


class TestQueries(object):

    @pytest.fixture
    def unit(self):
        return unit_of(UNIT_WITH_STATEMENTS)

    @pytest.mark.parametrize('text, expected_names', [
        ('high = mid + 1 ;', {'high', 'mid'}),
        ('int t = 0 ;', set()),
        ('for ( int k = 0 ; k < n ; k ++ ) s = s + k ;', {'n', 's'}),
        ('bool b = f ( x ) > 0 ;', {'x'}),
    ])
    def test_free_vars(self, unit, text, expected_names):
        assert free_vars(unit.ast, node_with_text(unit, text).id) == expected_names

    @pytest.mark.parametrize('text, expected_result', [
        ('high <= mid', True),
        ('f ( x ) > 0', False),
        ('i ++ < n', False),
        ('mid / x', True),
    ])
    def test_is_pure(self, unit, text, expected_result):
        assert is_pure(unit.ast, node_with_text(unit, text).id) is expected_result

    @pytest.mark.parametrize('text, expected_result', [
        ('i ++ < n', True),
        ('high = mid + 1', True),
        ('f ( x ) > 0', False),
    ])
    def test_writes(self, unit, text, expected_result):
        assert writes(unit.ast, node_with_text(unit, text).id) is expected_result

    @pytest.mark.parametrize('text, expected_result', [
        ('mid / x', True),
        ('xs [ 0 ]', True),
        ('s + "a/b"', False),
        ('high <= mid', False),
    ])
    def test_can_fault(self, unit, text, expected_result):
        assert can_fault(unit.ast, node_with_text(unit, text).id) is expected_result

    def test_visible_names(self, unit):
        statement = node_with_text(unit, 'bool b = f ( x ) > 0 ;')
        visible = visible_names(unit.ast, statement.id)
        assert set(visible) == {'high', 'mid', 'n', 's', 'x', 'i', 'xs', 't', 'a'}
        assert visible['t'][1] == 'int'
        assert visible['xs'][1] == 'int[]'

    def test_visible_names_at_block_end(self, unit):
        body = unit.ast.child(unit.functions[0].id, 'body')
        assert 'e' not in visible_names(unit.ast, body.id)
        assert 'e' in visible_names(unit.ast, body.id, at_end=True)

    def test_visible_names_in_for_body(self, unit):
        update = node_with_text(unit, 's = s + k ;')
        assert 'k' in visible_names(unit.ast, update.id)

    def test_declared_names(self, unit):
        assert declared_names(unit.ast, unit.functions[0].id) == [
            'high', 'mid', 'n', 's', 'x', 'i', 'xs', 't', 'k', 'a', 'b', 'c', 'd', 'e',
        ]

    def test_enclosing_loop(self, counter):
        continue_statement = counter.ast.of_kind(NodeKind.CONTINUE)[0]
        assert enclosing_loop(counter.ast, continue_statement.id).kind is NodeKind.FOR
