# encoding: utf-8
"""
A reference interpreter for MiniLang units.

Every evaluated statement and expression consumes one unit of fuel. Runtime
errors and fuel exhaustion never escape the interpreter; they are reported
as the status of the execution result instead.
"""

import sys
from collections import Counter, namedtuple
from contextlib import contextmanager

from ..exceptions import ConfigurationError, SignatureMismatch
from ..syntax import NodeKind
from ..utils.internal import derive_seed, make_rng
from .values import (
    ARRAY, BOOL, INT, STR, VOID_VALUE, Array, Bool, Int, Str, default_value, unescape,
)

DEFAULT_FUEL = 20000
MAX_CALL_DEPTH = 64
EXTERN_RANGE = (-64, 64)
BUILTINS = frozenset(('len',))

OK = 'ok'
FUEL_EXHAUSTED = 'fuel-exhausted'
RUNTIME_ERROR = 'runtime-error'

DIVISION_BY_ZERO = 'DivisionByZero'
INDEX_OUT_OF_BOUNDS = 'IndexOutOfBounds'
TYPE_MISMATCH = 'TypeMismatch'
UNDEFINED_VARIABLE = 'UndefinedVariable'
ARITY_MISMATCH = 'ArityMismatch'
STACK_OVERFLOW = 'StackOverflow'

EXTERN_CALL = 'extern-call'
RETURN = 'return'


class Status(namedtuple('Status', 'kind error span')):
    """
    The way an execution ended: ``ok``, ``fuel-exhausted`` or
    ``runtime-error`` (with the error kind and the span of the failing node).
    """
    __slots__ = ()

    def __str__(self):
        if self.kind == RUNTIME_ERROR:
            location = ' at {}'.format(self.span) if self.span is not None else ''
            return '{}({}{})'.format(self.kind, self.error, location)
        return self.kind


STATUS_OK = Status(OK, None, None)
STATUS_FUEL_EXHAUSTED = Status(FUEL_EXHAUSTED, None, None)


class TraceEvent(namedtuple('TraceEvent', 'kind callee args returned')):
    """An observable event: a call of an unknown function or the final return."""
    __slots__ = ()


class ExecResult(namedtuple('ExecResult', 'trace result status')):
    __slots__ = ()

    @property
    def ok(self):
        return self.status.kind == OK

    @property
    def fuel_exhausted(self):
        return self.status.kind == FUEL_EXHAUSTED

    def comparable(self):
        """
        Get the parts of the result that must agree between equivalent units.
        Error spans are left out since they point into different texts.

        :rtype: tuple
        """
        return self.trace, self.result, self.status.kind, self.status.error


class ExternOracle(object):
    """
    A deterministic stand-in for functions that aren't part of the unit. The
    returned integer only depends on the seed, the callee name and the number
    of earlier calls of the same callee within the run.
    """

    def __init__(self, seed=0):
        self.seed = seed
        self.calls = Counter()

    def __call__(self, callee, args):
        rng = make_rng(derive_seed(self.seed, callee, self.calls[callee]))
        self.calls[callee] += 1
        return Int(rng.randint(*EXTERN_RANGE))


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Return(Exception):

    def __init__(self, value):
        super(_Return, self).__init__()
        self.value = value


class _Fault(Exception):

    def __init__(self, kind, span):
        super(_Fault, self).__init__(kind)
        self.kind = kind
        self.span = span


class _OutOfFuel(Exception):
    pass


@contextmanager
def _recursion_limit(limit):
    previous = sys.getrecursionlimit()
    sys.setrecursionlimit(max(previous, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(previous)


class Machine(object):
    """
    The state of a single run: fuel, trace and the variable scopes of the
    active call.
    """

    def __init__(self, unit, oracle, fuel):
        self.ast = unit.ast
        self.functions = {function.lexeme: function for function in unit.functions}
        self.oracle = oracle
        self.fuel = fuel
        self.trace = []
        self.scopes = []
        self.depth = 0

    def tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel()

    def fault(self, kind, node):
        raise _Fault(kind, self.ast.span_of(node.id) if node is not None else None)

    # Variables

    def lookup_scope(self, node):
        for scope in reversed(self.scopes):
            if node.lexeme in scope:
                return scope
        self.fault(UNDEFINED_VARIABLE, node)

    def truthy(self, value, node):
        if value.tag == BOOL:
            return value.data
        if value.tag == INT:
            return value.data != 0
        self.fault(TYPE_MISMATCH, node)

    # Calls

    def call(self, function, args, node=None):
        """
        Call a function of the unit.

        :param denat.syntax.nodes.AstNode function: The function node.
        :param list[Value] args: The argument values.
        :param denat.syntax.nodes.AstNode | None node: The call node.
        :return: The returned value.
        :rtype: Value
        """
        params = self.ast.children(self.ast.child(function.id, 'params').id)
        if len(params) != len(args):
            self.fault(ARITY_MISMATCH, node)
        if self.depth >= MAX_CALL_DEPTH:
            self.fault(STACK_OVERFLOW, node)
        saved_scopes = self.scopes
        self.scopes = [{param.lexeme: arg for param, arg in zip(params, args)}]
        self.depth += 1
        try:
            self.execute(self.ast.child(function.id, 'body'))
        except _Return as e:
            return e.value
        finally:
            self.scopes = saved_scopes
            self.depth -= 1
        return VOID_VALUE

    def call_builtin(self, node, args):
        if len(args) != 1:
            self.fault(ARITY_MISMATCH, node)
        if args[0].tag not in (ARRAY, STR):
            self.fault(TYPE_MISMATCH, node)
        return Int(len(args[0].data))

    # Statements

    def execute(self, node):
        self.tick()
        kind = node.kind
        if kind is NodeKind.BLOCK:
            self.scopes.append({})
            try:
                for statement in self.ast.children(node.id):
                    self.execute(statement)
            finally:
                self.scopes.pop()
        elif kind is NodeKind.DECL_STMT:
            init = self.ast.child(node.id, 'init')
            value = self.evaluate(init) if init is not None else default_value(node.decl_type)
            self.scopes[-1][self.ast.child(node.id, 'name').lexeme] = value
        elif kind is NodeKind.EXPR_STMT:
            self.evaluate(self.ast.child(node.id, 'expr'))
        elif kind is NodeKind.IF:
            if self.truthy(self.evaluate(self.ast.child(node.id, 'cond')), node):
                self.execute_nested(self.ast.child(node.id, 'then'))
            elif 'else' in node.roles:
                self.execute_nested(self.ast.child(node.id, 'else'))
        elif kind is NodeKind.WHILE:
            condition, body = self.ast.child(node.id, 'cond'), self.ast.child(node.id, 'body')
            while self.truthy(self.evaluate(condition), condition):
                try:
                    self.execute_nested(body)
                except _Break:
                    break
                except _Continue:
                    pass
        elif kind is NodeKind.FOR:
            self.execute_for(node)
        elif kind is NodeKind.RETURN:
            value = self.ast.child(node.id, 'value')
            raise _Return(self.evaluate(value) if value is not None else VOID_VALUE)
        elif kind is NodeKind.BREAK:
            raise _Break()
        elif kind is NodeKind.CONTINUE:
            raise _Continue()

    def execute_nested(self, node):
        self.scopes.append({})
        try:
            self.execute(node)
        finally:
            self.scopes.pop()

    def execute_for(self, node):
        init, condition = self.ast.child(node.id, 'init'), self.ast.child(node.id, 'cond')
        update, body = self.ast.child(node.id, 'update'), self.ast.child(node.id, 'body')
        self.scopes.append({})
        try:
            if init is not None:
                self.execute(init)
            while condition is None or self.truthy(self.evaluate(condition), condition):
                try:
                    self.execute_nested(body)
                except _Break:
                    break
                except _Continue:
                    pass
                if update is not None:
                    self.evaluate(update)
        finally:
            self.scopes.pop()

    # Expressions

    def evaluate(self, node):
        self.tick()
        kind = node.kind
        if kind is NodeKind.IDENTIFIER:
            return self.lookup_scope(node)[node.lexeme]
        if kind is NodeKind.INT_LIT:
            return Int(int(node.lexeme))
        if kind is NodeKind.BOOL_LIT:
            return Bool(node.lexeme == 'true')
        if kind is NodeKind.STR_LIT:
            return Str(unescape(node.lexeme))
        if kind is NodeKind.ASSIGN:
            return self.evaluate_assignment(node)
        if kind is NodeKind.UNARY:
            return self.evaluate_unary(node)
        if kind is NodeKind.BINARY:
            return self.evaluate_binary(node)
        if kind is NodeKind.TERNARY:
            condition, then, otherwise = self.ast.children(node.id)
            return self.evaluate(then if self.truthy(self.evaluate(condition), condition) else otherwise)
        if kind is NodeKind.INDEX:
            base, index = (self.evaluate(child) for child in self.ast.children(node.id))
            return self.element(base, index, node)
        if kind is NodeKind.CALL:
            return self.evaluate_call(node)
        self.fault(TYPE_MISMATCH, node)

    def evaluate_call(self, node):
        args = [self.evaluate(child) for child in self.ast.children(node.id)]
        function = self.functions.get(node.lexeme)
        if function is not None:
            return self.call(function, args, node)
        if node.lexeme in BUILTINS:
            return self.call_builtin(node, args)
        returned = self.oracle(node.lexeme, args)
        self.trace.append(TraceEvent(EXTERN_CALL, node.lexeme, tuple(args), returned))
        return returned

    def element(self, base, index, node):
        if base.tag != ARRAY or index.tag != INT:
            self.fault(TYPE_MISMATCH, node)
        if not 0 <= index.data < len(base.data):
            self.fault(INDEX_OUT_OF_BOUNDS, node)
        return base.data[index.data]

    def store(self, target, compute):
        """
        Write to an assignable expression.

        :param denat.syntax.nodes.AstNode target: The identifier or index
                                                  expression.
        :param function compute: A function computing the new value from the
                                 old one.
        :return: A 2-tuple containing the old and the new value.
        :rtype: (Value, Value)
        """
        if target.kind is NodeKind.IDENTIFIER:
            scope = self.lookup_scope(target)
            old = scope[target.lexeme]
            scope[target.lexeme] = new = compute(old)
            return old, new
        if target.kind is not NodeKind.INDEX:
            self.fault(TYPE_MISMATCH, target)
        base, index_node = self.ast.children(target.id)
        index = self.evaluate(index_node)
        values = []

        def update(array):
            old = self.element(array, index, target)
            values.extend((old, compute(old)))
            items = list(array.data)
            items[index.data] = values[1]
            return Array(items)

        self.store(base, update)
        return tuple(values)

    def evaluate_assignment(self, node):
        target, value_node = self.ast.children(node.id)
        value = self.evaluate(value_node)
        if node.lexeme == '=':
            return self.store(target, lambda old: value)[1]
        operator = node.lexeme[:-1]
        return self.store(target, lambda old: self.arithmetic(operator, old, value, node))[1]

    def evaluate_unary(self, node):
        operand = self.ast.child(node.id, 'operand')
        if node.lexeme in ('++', '--'):
            step = 1 if node.lexeme == '++' else -1
            return self.store(operand, lambda old: self.arithmetic('+', old, Int(step), node))[0]
        value = self.evaluate(operand)
        if node.lexeme == '!':
            return Bool(not self.truthy(value, node))
        if value.tag != INT:
            self.fault(TYPE_MISMATCH, node)
        return Int(-value.data)

    def evaluate_binary(self, node):
        left, right = self.ast.children(node.id)
        operator = node.lexeme
        if operator == '&&':
            return Bool(self.truthy(self.evaluate(left), left) and self.truthy(self.evaluate(right), right))
        if operator == '||':
            return Bool(self.truthy(self.evaluate(left), left) or self.truthy(self.evaluate(right), right))
        left_value = self.evaluate(left)
        right_value = self.evaluate(right)
        if operator in ('==', '!='):
            if left_value.tag != right_value.tag:
                self.fault(TYPE_MISMATCH, node)
            return Bool((left_value.data == right_value.data) == (operator == '=='))
        if operator in ('<', '<=', '>', '>='):
            if left_value.tag != right_value.tag or left_value.tag not in (INT, STR):
                self.fault(TYPE_MISMATCH, node)
            a, b = left_value.data, right_value.data
            return Bool({'<': a < b, '<=': a <= b, '>': a > b, '>=': a >= b}[operator])
        return self.arithmetic(operator, left_value, right_value, node)

    def arithmetic(self, operator, left, right, node):
        if operator == '+' and left.tag == STR and right.tag == STR:
            return Str(left.data + right.data)
        if left.tag != INT or right.tag != INT:
            self.fault(TYPE_MISMATCH, node)
        a, b = left.data, right.data
        if operator == '+':
            return Int(a + b)
        if operator == '-':
            return Int(a - b)
        if operator == '*':
            return Int(a * b)
        if b == 0:
            self.fault(DIVISION_BY_ZERO, node)
        # Division truncates toward zero, the remainder takes the dividend's sign.
        quotient = abs(a) // abs(b) * (1 if (a < 0) == (b < 0) else -1)
        if operator == '/':
            return Int(quotient)
        return Int(a - b * quotient)


def run(unit, entry, args, extern_oracle=None, fuel=DEFAULT_FUEL):
    """
    Run a function of a unit.

    :param denat.syntax.SourceUnit unit: The unit.
    :param str entry: The name of the function to run.
    :param list[Value] args: The argument values.
    :param ExternOracle | None extern_oracle: The stand-in for unknown
                                              functions (seed 0 by default).
    :param int fuel: The step budget.
    :return: The execution result.
    :rtype: ExecResult
    :raises SignatureMismatch: If the unit has no such function.
    :raises ConfigurationError: If the fuel is not positive.
    """
    if fuel <= 0:
        raise ConfigurationError('The fuel must be positive, got {}.'.format(fuel))
    function = unit.function(entry)
    if function is None:
        raise SignatureMismatch('Unit "{}" has no function "{}".'.format(unit.name, entry))
    machine = Machine(unit, extern_oracle if extern_oracle is not None else ExternOracle(), fuel)
    with _recursion_limit(MAX_CALL_DEPTH * 200):
        try:
            result = machine.call(function, list(args))
        except _OutOfFuel:
            return ExecResult(tuple(machine.trace), None, STATUS_FUEL_EXHAUSTED)
        except _Fault as e:
            return ExecResult(tuple(machine.trace), None, Status(RUNTIME_ERROR, e.kind, e.span))
    machine.trace.append(TraceEvent(RETURN, entry, (), result))
    return ExecResult(tuple(machine.trace), result, STATUS_OK)
