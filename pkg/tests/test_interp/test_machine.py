# encoding: utf-8

import pytest

from denat.exceptions import ConfigurationError, MisplacedJump, SignatureMismatch
from denat.interp import (
    EXTERN_CALL, FUEL_EXHAUSTED, OK, RETURN, RUNTIME_ERROR, Bool, ExternOracle, Int, IntArray, Str, run,
)
from denat.interp.machine import (
    ARITY_MISMATCH, DIVISION_BY_ZERO, INDEX_OUT_OF_BOUNDS, STACK_OVERFLOW, TYPE_MISMATCH, UNDEFINED_VARIABLE,
)
from denat.interp.values import VOID_VALUE
from ..conftest import unit_of


def result_of(text, *args, **kwargs):
    return run(unit_of(text), 'f', list(args), **kwargs)


class TestRun(object):

    @pytest.mark.parametrize('key, expected_index', [
        (5, 2),
        (1, 0),
        (7, 3),
        (4, -1),
    ])
    def test_bsearch(self, bsearch, key, expected_index):
        result = run(bsearch, 'bsearch', [IntArray([1, 3, 5, 7]), Int(key)])
        assert result.ok
        assert result.result == Int(expected_index)
        assert [event.kind for event in result.trace] == [RETURN]
        assert result.trace[-1].returned == Int(expected_index)

    def test_counter(self, counter):
        assert run(counter, 'count', [Int(7)]).result == Int(1 + 2 + 4 + 5)

    def test_clamp(self, clamp):
        results = [run(clamp, 'clamp', [Int(x), Int(0), Int(10)]).result for x in (-3, 4, 12)]
        assert results == [Int(0), Int(4), Int(10)]

    def test_fuel_exhausted(self):
        result = result_of('int f() { while (true) { } return 0; }', fuel=1000)
        assert result.fuel_exhausted
        assert result.status.kind == FUEL_EXHAUSTED
        assert result.result is None

    def test_void(self):
        result = result_of('void f() { }')
        assert result.status.kind == OK
        assert result.result == VOID_VALUE

    def test_invalid_fuel(self, bsearch):
        with pytest.raises(ConfigurationError):
            run(bsearch, 'bsearch', [IntArray([]), Int(0)], fuel=0)

    def test_missing_entry(self, bsearch):
        with pytest.raises(SignatureMismatch):
            run(bsearch, 'search', [])


class TestArithmetic(object):

    @pytest.mark.parametrize('expression, expected_number', [
        ('-7 % 3', -1),
        ('7 % -3', 1),
        ('-7 / 2', -3),
        ('7 / -2', -3),
        ('2 + 3 * 4', 14),
        ('(2 + 3) * 4', 20),
        ('10 - 4 - 3', 3),
    ])
    def test_integers(self, expression, expected_number):
        assert result_of('int f() { return ' + expression + '; }').result == Int(expected_number)

    @pytest.mark.parametrize('a, expected_number', [
        (2 ** 62, -2 ** 63),
        (2 ** 63 - 1, -2),
    ])
    def test_wrap_around(self, a, expected_number):
        assert result_of('int f(int a) { return a + a; }', Int(a)).result == Int(expected_number)

    def test_strings(self):
        assert result_of('str f(str s) { return s + "!\\t"; }', Str('a')).result == Str('a!\t')
        assert result_of('int f(str s) { return len(s); }', Str('abc')).result == Int(3)
        assert result_of('bool f(str s) { return s < "b"; }', Str('a')).result == Bool(True)

    def test_post_increment(self):
        assert result_of('int f(int i) { int j = i++; return j * 10 + i; }', Int(3)).result == Int(34)

    def test_compound_assignment(self):
        assert result_of('int f(int i) { i *= 3; i -= 1; return i; }', Int(2)).result == Int(5)

    def test_short_circuit(self):
        text = 'bool f(int a) { return a != 0 && 10 / a > 1; }'
        assert result_of(text, Int(0)).result == Bool(False)
        assert result_of(text, Int(2)).result == Bool(True)

    def test_integer_conditions(self):
        text = 'int f(int a) { if (a) { return 1; } return a ? 2 : 3; }'
        assert result_of(text, Int(5)).result == Int(1)
        assert result_of(text, Int(0)).result == Int(3)

    def test_ternary(self):
        assert result_of('int f(bool c) { return c ? 1 : 2; }', Bool(False)).result == Int(2)


class TestState(object):

    def test_arrays_are_values(self):
        text = 'int f(int[] xs) { int[] ys = xs; ys[0] = 9; return xs[0] * 10 + ys[0]; }'
        assert result_of(text, IntArray([1, 2])).result == Int(19)

    def test_element_compound_assignment(self):
        text = 'int f(int[] xs) { xs[1] += 5; xs[0]++; return xs[0] + xs[1]; }'
        assert result_of(text, IntArray([1, 2])).result == Int(9)

    def test_default_initialization(self):
        assert result_of('int f() { int x; bool b; if (!b) { x = x + 1; } return x; }').result == Int(1)

    def test_loops(self):
        text = '''
        int f(int n) {
          int s = 0;
          for (int i = 0; i < n; i++) {
            if (i == 2) continue;
            if (i == 5) break;
            s += i;
          }
          int k = 0;
          while (k < 3) { k++; s = s * 2; }
          return s;
        }
        '''
        assert result_of(text, Int(10)).result == Int((0 + 1 + 3 + 4) * 8)

    def test_jumps_bind_to_the_innermost_loop(self):
        text = '''
        int f() {
          int s = 0;
          for (int i = 0; i < 3; i++) {
            while (true) { if (s > 100) { return s; } break; }
            s += 1;
          }
          return s;
        }
        '''
        assert result_of(text).result == Int(3)

    def test_jump_outside_of_loop_is_rejected(self):
        with pytest.raises(MisplacedJump):
            unit_of('int f(int a) { if (a > 0) { break; } return a; }')

    def test_deepest_expression(self):
        text = 'int f(int a) {{ return {}; }}'.format(' + '.join(['a'] * 60))
        assert result_of(text, Int(2)).result == Int(120)

    def test_recursion(self):
        text = 'int f(int n) { if (n <= 1) { return 1; } return n * f(n - 1); }'
        assert result_of(text, Int(5)).result == Int(120)

    def test_scopes(self):
        text = 'int f() { int x = 1; { int x = 2; x = x + 1; } return x; }'
        assert result_of(text).result == Int(1)


class TestRuntimeErrors(object):

    @pytest.mark.parametrize('text, args, expected_error', [
        ('int f(int a) { return a / 0; }', [Int(1)], DIVISION_BY_ZERO),
        ('int f(int a) { return a % (a - a); }', [Int(1)], DIVISION_BY_ZERO),
        ('int f(int[] xs) { return xs[3]; }', [IntArray([1])], INDEX_OUT_OF_BOUNDS),
        ('int f(int[] xs) { return xs[-1]; }', [IntArray([1])], INDEX_OUT_OF_BOUNDS),
        ('bool f(str s) { return s < 1; }', [Str('a')], TYPE_MISMATCH),
        ('int f(str s) { if (s) { return 1; } return 0; }', [Str('')], TYPE_MISMATCH),
        ('int f() { { int a = 1; } return a; }', [], UNDEFINED_VARIABLE),
        ('int g(int a) { return a; } int f() { return g(); }', [], ARITY_MISMATCH),
        ('int f(int n) { return f(n + 1); }', [Int(0)], STACK_OVERFLOW),
    ])
    def test_errors(self, text, args, expected_error):
        result = run(unit_of(text), 'f', args)
        assert result.status.kind == RUNTIME_ERROR
        assert result.status.error == expected_error
        assert result.result is None
        assert str(result.status).startswith('runtime-error({}'.format(expected_error))

    def test_error_span(self):
        unit = unit_of('int f(int a) { return a / 0; }')
        span = run(unit, 'f', [Int(1)]).status.span
        assert unit.text.encode('utf-8')[span.start:span.end] == b'a / 0'

    def test_trace_before_error(self):
        result = result_of('int f(int a) { log(a); return a / 0; }', Int(1))
        assert [event.kind for event in result.trace] == [EXTERN_CALL]


class TestExternOracle(object):

    def test_trace(self):
        result = result_of('int f(int x) { int y = log(x) + log(x + 1); return y; }', Int(4))
        calls = [event for event in result.trace if event.kind == EXTERN_CALL]
        assert [(event.callee, event.args) for event in calls] == [('log', (Int(4),)), ('log', (Int(5),))]
        assert all(-64 <= event.returned.data <= 64 for event in calls)
        assert result.result == Int(calls[0].returned.data + calls[1].returned.data)

    def test_deterministic(self):
        assert [ExternOracle(3)('g', []) for _ in range(2)] == [ExternOracle(3)('g', []) for _ in range(2)]

    def test_depends_on_call_index_not_args(self):
        a, b = ExternOracle(3), ExternOracle(3)
        assert a('g', [Int(1)]) == b('g', [Int(2)])
        assert [a('g', []) for _ in range(8)] != [a('h', []) for _ in range(8)]

    def test_calls_are_counted_per_callee(self):
        a, b = ExternOracle(3), ExternOracle(3)
        first = a('g', [])
        a('h', [])
        a('h', [])
        second = a('g', [])
        assert [first, second] == [b('g', []), b('g', [])]
        assert a.calls == {'g': 2, 'h': 2}

    def test_results_independent_of_other_callees(self):
        first = result_of('int f() { int x = log(0); int y = g(0); return x - y; }')
        second = result_of('int f() { int y = g(0); int x = log(0); return x - y; }')
        assert first.result == second.result
        assert first.trace != second.trace

    def test_seeded(self):
        text = 'int f() { return log(0) + log(0) + log(0) + log(0); }'
        results = {result_of(text, extern_oracle=ExternOracle(seed)).result for seed in range(10)}
        assert len(results) > 1
