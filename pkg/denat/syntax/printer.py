# encoding: utf-8
"""
Canonical printing of syntax trees.

Every token is separated from its neighbours by a single space, so the printed
form of a tree is its token yield. Parentheses are emitted where the source
had them and wherever operator precedence requires them.
"""

from .nodes import Ast, NodeKind

_BINARY_PRECEDENCE = {
    '||': 3,
    '&&': 4,
    '==': 5, '!=': 5,
    '<': 6, '<=': 6, '>': 6, '>=': 6,
    '+': 7, '-': 7,
    '*': 8, '/': 8, '%': 8,
}
_PREFIX_PRECEDENCE = 9
_POSTFIX_PRECEDENCE = 10
_PRIMARY_PRECEDENCE = 11


def precedence(node):
    """
    Get the binding strength of an expression node (higher binds tighter).

    :param node: The expression node (mutable or immutable).
    :return: The precedence level.
    :rtype: int
    """
    if node.kind is NodeKind.ASSIGN:
        return 1
    if node.kind is NodeKind.TERNARY:
        return 2
    if node.kind is NodeKind.BINARY:
        return _BINARY_PRECEDENCE[node.lexeme]
    if node.kind is NodeKind.UNARY:
        return _POSTFIX_PRECEDENCE if is_postfix(node) else _PREFIX_PRECEDENCE
    if node.kind is NodeKind.INDEX:
        return _POSTFIX_PRECEDENCE
    return _PRIMARY_PRECEDENCE


def is_postfix(node):
    return node.kind is NodeKind.UNARY and node.lexeme in ('++', '--')


def needs_parens(node, parent, role):
    """
    Decide if an expression must be parenthesized to keep its position in the
    tree when printed below the given parent.

    :param node: The expression node.
    :param parent: The parent node.
    :param str role: The role of the node in the parent.
    :return: True if parentheses are required; otherwise False.
    :rtype: bool
    """
    if parent is None:
        return False
    own = precedence(node)
    if parent.kind is NodeKind.BINARY:
        limit = precedence(parent)
        return own < limit if role == 'left' else own <= limit
    if parent.kind is NodeKind.UNARY:
        return own < precedence(parent)
    if parent.kind is NodeKind.INDEX and role == 'base':
        return own < _POSTFIX_PRECEDENCE
    if parent.kind is NodeKind.TERNARY:
        if role == 'cond':
            return own <= 2
        if role == 'else':
            return own < 2
    if parent.kind is NodeKind.ASSIGN and role == 'target':
        return own < _POSTFIX_PRECEDENCE
    return False


def _type_lexemes(decl_type):
    base = decl_type.replace('[]', '')
    yield base
    for _ in range(decl_type.count('[]')):
        yield '['
        yield ']'


def _ends_with_open_if(node):
    # A trailing else-less if would capture an else printed after it.
    while True:
        if node.kind is NodeKind.IF:
            otherwise = node.child('else')
            if otherwise is None:
                return True
            node = otherwise
        elif node.kind in (NodeKind.WHILE, NodeKind.FOR):
            node = node.child('body')
        else:
            return False


class _Printer(object):

    def __init__(self):
        self.lexemes = []

    def emit(self, *lexemes):
        self.lexemes.extend(lexemes)

    def visit(self, node, parent=None, role=None):
        getattr(self, 'visit_{}'.format(node.kind.name.lower()))(node, parent, role)

    def visit_unit(self, node, parent, role):
        for function in node.children:
            self.visit(function, node, 'function')

    def visit_function(self, node, parent, role):
        self.emit(*_type_lexemes(node.decl_type))
        self.emit(node.lexeme)
        self.visit(node.child('params'), node, 'params')
        self.visit(node.child('body'), node, 'body')

    def visit_param_list(self, node, parent, role):
        self.emit('(')
        for index, param in enumerate(node.children):
            if index:
                self.emit(',')
            self.emit(*_type_lexemes(param.decl_type))
            self.emit(param.lexeme)
        self.emit(')')

    def visit_block(self, node, parent, role):
        self.emit('{')
        for statement in node.children:
            self.visit(statement, node, 'stmt')
        self.emit('}')

    def visit_if(self, node, parent, role):
        self.emit('if', '(')
        self.visit(node.child('cond'), node, 'cond')
        self.emit(')')
        then, otherwise = node.child('then'), node.child('else')
        if otherwise is not None and _ends_with_open_if(then):
            self.emit('{')
            self.visit(then, node, 'then')
            self.emit('}')
        else:
            self.visit(then, node, 'then')
        if otherwise is not None:
            self.emit('else')
            self.visit(otherwise, node, 'else')

    def visit_while(self, node, parent, role):
        self.emit('while', '(')
        self.visit(node.child('cond'), node, 'cond')
        self.emit(')')
        self.visit(node.child('body'), node, 'body')

    def visit_for(self, node, parent, role):
        self.emit('for', '(')
        init = node.child('init')
        if init is None:
            self.emit(';')
        else:
            self.visit(init, node, 'init')
        condition = node.child('cond')
        if condition is not None:
            self.visit(condition, node, 'cond')
        self.emit(';')
        update = node.child('update')
        if update is not None:
            self.visit(update, node, 'update')
        self.emit(')')
        self.visit(node.child('body'), node, 'body')

    def visit_return(self, node, parent, role):
        self.emit('return')
        value = node.child('value')
        if value is not None:
            self.visit(value, node, 'value')
        self.emit(';')

    def visit_break(self, node, parent, role):
        self.emit('break', ';')

    def visit_continue(self, node, parent, role):
        self.emit('continue', ';')

    def visit_decl_stmt(self, node, parent, role):
        self.emit(*_type_lexemes(node.decl_type))
        self.emit(node.child('name').lexeme)
        init = node.child('init')
        if init is not None:
            self.emit('=')
            self.visit(init, node, 'init')
        self.emit(';')

    def visit_expr_stmt(self, node, parent, role):
        self.visit(node.child('expr'), node, 'expr')
        self.emit(';')

    def visit_expression(self, node, parent, role, emit_body):
        count = node.parens or (1 if needs_parens(node, parent, role) else 0)
        self.emit(*('(',) * count)
        emit_body()
        self.emit(*(')',) * count)

    def visit_assign(self, node, parent, role):
        def body():
            self.visit(node.child('target'), node, 'target')
            self.emit(node.lexeme)
            self.visit(node.child('value'), node, 'value')
        self.visit_expression(node, parent, role, body)

    def visit_binary(self, node, parent, role):
        def body():
            self.visit(node.child('left'), node, 'left')
            self.emit(node.lexeme)
            self.visit(node.child('right'), node, 'right')
        self.visit_expression(node, parent, role, body)

    def visit_unary(self, node, parent, role):
        def body():
            if is_postfix(node):
                self.visit(node.child('operand'), node, 'operand')
                self.emit(node.lexeme)
            else:
                self.emit(node.lexeme)
                self.visit(node.child('operand'), node, 'operand')
        self.visit_expression(node, parent, role, body)

    def visit_ternary(self, node, parent, role):
        def body():
            self.visit(node.child('cond'), node, 'cond')
            self.emit('?')
            self.visit(node.child('then'), node, 'then')
            self.emit(':')
            self.visit(node.child('else'), node, 'else')
        self.visit_expression(node, parent, role, body)

    def visit_call(self, node, parent, role):
        def body():
            self.emit(node.lexeme, '(')
            for index, argument in enumerate(node.children):
                if index:
                    self.emit(',')
                self.visit(argument, node, 'arg')
            self.emit(')')
        self.visit_expression(node, parent, role, body)

    def visit_index(self, node, parent, role):
        def body():
            self.visit(node.child('base'), node, 'base')
            self.emit('[')
            self.visit(node.child('index'), node, 'index')
            self.emit(']')
        self.visit_expression(node, parent, role, body)

    def visit_leaf(self, node, parent, role):
        self.visit_expression(node, parent, role, lambda: self.emit(node.lexeme))

    visit_identifier = visit_int_lit = visit_bool_lit = visit_str_lit = visit_leaf


def iter_lexemes(node):
    """
    Produce the token lexemes of a mutable node tree in printing order.

    :param denat.syntax.nodes.Node node: The root of the (sub)tree.
    :return: The lexemes.
    :rtype: list[str]
    """
    printer = _Printer()
    printer.visit(node)
    return printer.lexemes


def unparse(tree, node_id=None):
    """
    Print a tree (or one of its subtrees) in canonical form. Functions of a
    unit are separated by newlines, all other tokens by single spaces.

    :param tree: The tree to print.
    :type tree: Ast | denat.syntax.nodes.Node
    :param int | None node_id: The id of the subtree to print if an
                               :class:`Ast` is given.
    :return: The source text.
    :rtype: str
    """
    if isinstance(tree, Ast):
        tree = tree.to_tree(node_id)[0]
    if tree.kind is NodeKind.UNIT:
        return '\n'.join(' '.join(iter_lexemes(function)) for function in tree.children)
    return ' '.join(iter_lexemes(tree))
