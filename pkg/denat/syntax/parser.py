# encoding: utf-8
"""
Recursive descent parser for the MiniLang grammar.

Operator chains are parsed iteratively, so the parser only recurses for
nested statements and nested expressions (parentheses, arguments, indices,
conditional branches and assignment values). Both kinds of nesting are
limited to :data:`MAX_NESTING_DEPTH` levels, which also bounds the depth of
every tree the later (recursive) passes have to walk.
"""

from contextlib import contextmanager

from ..exceptions import MisplacedJump, NestingTooDeep, ParseError
from .nodes import Ast, Node, NodeKind, covering_span
from .tokens import IDENTIFIER, INT_LITERAL, STRING_LITERAL, TYPE_KEYWORDS, lex

MAX_NESTING_DEPTH = 64
ASSIGNMENT_OPERATORS = ('=', '+=', '-=', '*=', '/=', '%=')
# Binary operator levels from the loosest to the tightest binding one.
BINARY_LEVELS = (
    ('||',),
    ('&&',),
    ('==', '!='),
    ('<', '<=', '>', '>='),
    ('+', '-'),
    ('*', '/', '%'),
)
BINARY_PRECEDENCE = {operator: level for level, operators in enumerate(BINARY_LEVELS) for operator in operators}
PREFIX_OPERATORS = ('!', '-')
POSTFIX_OPERATORS = ('++', '--')
LVALUE_KINDS = (NodeKind.IDENTIFIER, NodeKind.INDEX)


class Parser(object):
    """
    A single-use parser over a token list. The public entry points are the
    ``parse_*`` methods for units, statements and expressions.
    """

    def __init__(self, tokens):
        """
        Initialize a new parser.

        :param list[denat.syntax.tokens.Token] tokens: The tokens to parse.
        """
        self.tokens = list(tokens)
        self.position = 0
        self.loop_depth = 0
        self.depth = 0

    @contextmanager
    def nested(self):
        """
        Enter a nesting level for the duration of the with block.

        :raises NestingTooDeep: If the maximum nesting depth is exceeded.
        """
        self.depth += 1
        try:
            if self.depth > MAX_NESTING_DEPTH:
                token = self.peek()
                raise NestingTooDeep(MAX_NESTING_DEPTH, token.span if token is not None else None)
            yield
        finally:
            self.depth -= 1

    @contextmanager
    def loop_body(self):
        self.loop_depth += 1
        try:
            yield
        finally:
            self.loop_depth -= 1

    def peek(self, offset=0):
        index = self.position + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, *lexemes):
        token = self.peek()
        return token is not None and token.is_(*lexemes)

    def advance(self):
        token = self.peek()
        self.position += 1
        return token

    def accept(self, *lexemes):
        """
        Consume the next token if it is one of the given lexemes.

        :param str lexemes: The accepted lexemes.
        :return: The consumed token or None if the next token didn't match.
        :rtype: denat.syntax.tokens.Token | None
        """
        if self.at(*lexemes):
            return self.advance()
        return None

    def expect(self, *lexemes):
        token = self.accept(*lexemes)
        if token is None:
            raise ParseError(self.peek(), ' or '.join('"{}"'.format(lexeme) for lexeme in lexemes))
        return token

    def expect_kind(self, kind, description):
        token = self.peek()
        if token is None or token.kind != kind:
            raise ParseError(token, description)
        return self.advance()

    def expect_end(self):
        if self.peek() is not None:
            raise ParseError(self.peek(), 'end of input')

    def at_type(self):
        return self.at(*TYPE_KEYWORDS)

    def parse_type(self):
        """
        Parse a type, including any number of array suffixes.

        :return: A 2-tuple containing the type text (e.g. ``int[]``) and its
                 span.
        :rtype: (str, denat.syntax.tokens.Span)
        """
        token = self.peek()
        if token is None or not token.is_(*TYPE_KEYWORDS):
            raise ParseError(token, 'a type')
        self.advance()
        text, span = token.lexeme, token.span
        while self.at('['):
            self.advance()
            span = covering_span(span, self.expect(']').span)
            text += '[]'
        return text, span

    # Top level

    def parse_unit(self):
        functions = [self.parse_function()]
        while self.peek() is not None:
            functions.append(self.parse_function())
        return Node(NodeKind.UNIT, children=functions, roles=['function'] * len(functions),
                    span=covering_span(*(function.span for function in functions)))

    def parse_function(self):
        decl_type, type_span = self.parse_type()
        name = self.expect_kind(IDENTIFIER, 'a function name')
        opening = self.expect('(')
        params = []
        if not self.at(')'):
            params.append(self.parse_param())
            while self.accept(','):
                params.append(self.parse_param())
        closing = self.expect(')')
        param_list = Node(NodeKind.PARAM_LIST, children=params, roles=['param'] * len(params),
                          span=covering_span(opening.span, closing.span))
        body = self.parse_block()
        return Node(NodeKind.FUNCTION, name, [param_list, body], ['params', 'body'], decl_type,
                    span=covering_span(type_span, body.span))

    def parse_param(self):
        decl_type, type_span = self.parse_type()
        name = self.expect_kind(IDENTIFIER, 'a parameter name')
        return Node(NodeKind.IDENTIFIER, name, decl_type=decl_type, span=covering_span(type_span, name.span))

    # Statements

    def parse_block(self):
        opening = self.expect('{')
        statements = []
        while not self.at('}'):
            if self.peek() is None:
                raise ParseError(None, '"}"')
            statements.append(self.parse_statement())
        closing = self.expect('}')
        return Node(NodeKind.BLOCK, children=statements, roles=['stmt'] * len(statements),
                    span=covering_span(opening.span, closing.span))

    def parse_statement(self):
        """
        Parse a single statement.

        :return: The statement node.
        :rtype: Node
        """
        token = self.peek()
        if token is None:
            raise ParseError(None, 'a statement')
        with self.nested():
            if token.is_('{'):
                return self.parse_block()
            if token.is_('if'):
                return self.parse_if()
            if token.is_('for'):
                return self.parse_for()
            if token.is_('while'):
                return self.parse_while()
            if token.is_('return'):
                self.advance()
                children, roles = [], []
                if not self.at(';'):
                    children.append(self.parse_expression())
                    roles.append('value')
                closing = self.expect(';')
                return Node(NodeKind.RETURN, token, children, roles, span=covering_span(token.span, closing.span))
            if token.is_('break', 'continue'):
                return self.parse_jump()
            if self.at_type():
                return self.parse_declaration()
            return self.parse_expression_statement()

    def parse_jump(self):
        token = self.advance()
        if not self.loop_depth:
            raise MisplacedJump(token)
        closing = self.expect(';')
        kind = NodeKind.BREAK if token.lexeme == 'break' else NodeKind.CONTINUE
        return Node(kind, token, span=covering_span(token.span, closing.span))

    def parse_declaration(self):
        decl_type, type_span = self.parse_type()
        name = self.expect_kind(IDENTIFIER, 'a variable name')
        children = [Node(NodeKind.IDENTIFIER, name, span=name.span)]
        roles = ['name']
        if self.accept('='):
            children.append(self.parse_expression())
            roles.append('init')
        closing = self.expect(';')
        return Node(NodeKind.DECL_STMT, None, children, roles, decl_type, span=covering_span(type_span, closing.span))

    def parse_expression_statement(self):
        expression = self.parse_expression()
        closing = self.expect(';')
        return Node(NodeKind.EXPR_STMT, children=[expression], roles=['expr'],
                    span=covering_span(expression.span, closing.span))

    def parse_condition(self):
        self.expect('(')
        condition = self.parse_expression()
        self.expect(')')
        return condition

    def parse_if(self):
        keyword = self.advance()
        children = [self.parse_condition(), self.parse_statement()]
        roles = ['cond', 'then']
        # The else binds to the nearest if since nested ifs consume it first.
        if self.accept('else'):
            children.append(self.parse_statement())
            roles.append('else')
        return Node(NodeKind.IF, keyword, children, roles, span=covering_span(keyword.span, children[-1].span))

    def parse_while(self):
        keyword = self.advance()
        condition = self.parse_condition()
        with self.loop_body():
            body = self.parse_statement()
        return Node(NodeKind.WHILE, keyword, [condition, body], ['cond', 'body'],
                    span=covering_span(keyword.span, body.span))

    def parse_for(self):
        keyword = self.advance()
        self.expect('(')
        children, roles = [], []
        if self.at_type():
            children.append(self.parse_declaration())
            roles.append('init')
        elif not self.accept(';'):
            children.append(self.parse_expression_statement())
            roles.append('init')
        if not self.at(';'):
            children.append(self.parse_expression())
            roles.append('cond')
        self.expect(';')
        if not self.at(')'):
            children.append(self.parse_expression())
            roles.append('update')
        self.expect(')')
        with self.loop_body():
            body = self.parse_statement()
        children.append(body)
        roles.append('body')
        return Node(NodeKind.FOR, keyword, children, roles, span=covering_span(keyword.span, body.span))

    # Expressions

    def parse_expression(self):
        """
        Parse an expression, starting at the assignment level.

        :return: The expression node.
        :rtype: Node
        """
        with self.nested():
            target = self.parse_ternary()
            if self.at(*ASSIGNMENT_OPERATORS):
                operator = self.peek()
                if target.kind not in LVALUE_KINDS or target.parens:
                    raise ParseError(operator,
                                     'an operator other than an assignment after a non-assignable expression')
                self.advance()
                value = self.parse_expression()
                return Node(NodeKind.ASSIGN, operator, [target, value], ['target', 'value'],
                            span=covering_span(target.span, value.span))
            return target

    def parse_ternary(self):
        branches = []
        condition = self.parse_binary()
        while self.accept('?'):
            then = self.parse_expression()
            self.expect(':')
            branches.append((condition, then))
            condition = self.parse_binary()
        # Conditional expressions are right-associative.
        expression = condition
        for condition, then in reversed(branches):
            expression = Node(NodeKind.TERNARY, None, [condition, then, expression], ['cond', 'then', 'else'],
                              span=covering_span(condition.span, expression.span))
        return expression

    def parse_binary(self):
        """
        Parse a chain of binary operations by precedence climbing with an
        explicit operator stack. All binary operators are left-associative.

        :return: The expression node.
        :rtype: Node
        """
        operands = [self.parse_unary()]
        operators = []
        while self.at(*BINARY_PRECEDENCE):
            operator = self.advance()
            while operators and BINARY_PRECEDENCE[operators[-1].lexeme] >= BINARY_PRECEDENCE[operator.lexeme]:
                self.reduce_binary(operands, operators)
            operators.append(operator)
            operands.append(self.parse_unary())
        while operators:
            self.reduce_binary(operands, operators)
        return operands[0]

    @staticmethod
    def reduce_binary(operands, operators):
        right = operands.pop()
        left = operands.pop()
        operands.append(Node(NodeKind.BINARY, operators.pop(), [left, right], ['left', 'right'],
                             span=covering_span(left.span, right.span)))

    def parse_unary(self):
        operators = []
        while self.at(*PREFIX_OPERATORS):
            operators.append(self.advance())
        operand = self.parse_postfix()
        for operator in reversed(operators):
            operand = Node(NodeKind.UNARY, operator, [operand], ['operand'],
                           span=covering_span(operator.span, operand.span))
        return operand

    def parse_postfix(self):
        expression = self.parse_primary()
        while True:
            if self.at('['):
                self.advance()
                index = self.parse_expression()
                closing = self.expect(']')
                expression = Node(NodeKind.INDEX, None, [expression, index], ['base', 'index'],
                                  span=covering_span(expression.span, closing.span))
            elif self.at(*POSTFIX_OPERATORS):
                operator = self.peek()
                if expression.kind not in LVALUE_KINDS or expression.parens:
                    raise ParseError(operator, 'an operator applicable to a non-assignable expression')
                self.advance()
                expression = Node(NodeKind.UNARY, operator, [expression], ['operand'],
                                  span=covering_span(expression.span, operator.span))
            else:
                return expression

    def parse_primary(self):
        token = self.peek()
        if token is None:
            raise ParseError(None, 'an expression')
        if token.kind == INT_LITERAL:
            return Node(NodeKind.INT_LIT, self.advance(), span=token.span)
        if token.kind == STRING_LITERAL:
            return Node(NodeKind.STR_LIT, self.advance(), span=token.span)
        if token.is_('true', 'false'):
            return Node(NodeKind.BOOL_LIT, self.advance(), span=token.span)
        if token.kind == IDENTIFIER:
            self.advance()
            if not self.at('('):
                return Node(NodeKind.IDENTIFIER, token, span=token.span)
            self.advance()
            arguments = []
            if not self.at(')'):
                arguments.append(self.parse_expression())
                while self.accept(','):
                    arguments.append(self.parse_expression())
            closing = self.expect(')')
            return Node(NodeKind.CALL, token, arguments, ['arg'] * len(arguments),
                        span=covering_span(token.span, closing.span))
        if token.is_('('):
            self.advance()
            expression = self.parse_expression()
            closing = self.expect(')')
            expression.parens += 1
            expression.span = covering_span(token.span, closing.span)
            return expression
        raise ParseError(token, 'an expression')


def parse(tokens, unit_name='<unit>'):
    """
    Parse the tokens of a MiniLang compilation unit.

    :param list[denat.syntax.tokens.Token] tokens: The tokens of the unit.
    :param str unit_name: The name of the unit.
    :return: The AST of the unit.
    :rtype: Ast
    :raises ParseError: If the tokens don't follow the MiniLang grammar.
    :raises MisplacedJump: If a jump statement appears outside of a loop.
    :raises NestingTooDeep: If the unit is nested too deeply.
    """
    parser = Parser(tokens)
    root = parser.parse_unit()
    parser.expect_end()
    check_depth(root)
    return Ast.from_tree(root, unit_name)


def check_depth(root, limit=MAX_NESTING_DEPTH):
    """
    Make sure that a tree isn't deeper than the given limit. Operator chains
    (e.g. ``a + b + ... + z``) are parsed without nesting but still produce
    deep trees.

    :param Node root: The root of the tree.
    :param int limit: The maximum depth below the root.
    :raises NestingTooDeep: If the tree is deeper than the limit.
    """
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        if depth > limit:
            raise NestingTooDeep(limit, node.span)
        stack.extend((child, depth + 1) for child in node.children)


def parse_text(text, unit_name='<unit>'):
    return parse(lex(text), unit_name)


def parse_statement(text):
    """
    Parse a single statement (e.g. a rule template) into a mutable node tree.

    :param str text: The statement text.
    :return: The statement node.
    :rtype: Node
    :raises denat.exceptions.MiniLangSyntaxError: If the text isn't exactly
                                                  one valid statement.
    """
    parser = Parser(lex(text))
    statement = parser.parse_statement()
    parser.expect_end()
    return statement


def parse_expression(text):
    """
    Parse a single expression into a mutable node tree.

    :param str text: The expression text.
    :return: The expression node.
    :rtype: Node
    :raises denat.exceptions.MiniLangSyntaxError: If the text isn't exactly
                                                  one valid expression.
    """
    parser = Parser(lex(text))
    expression = parser.parse_expression()
    parser.expect_end()
    return expression
