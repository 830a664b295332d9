# encoding: utf-8

from ..dataflow import can_fault, is_pure, writes
from ..exceptions import PatternMismatch
from ..syntax import Node, NodeKind, iter_lexemes, make_token
from .base import TransformRule, TransformRuleId, expression_statement, replace_child, thaw

POST_INCREMENT = 'post-increment'
TERNARY = 'ternary'


class ConfusionInsertRule(TransformRule):
    """
    Fold common statement patterns into harder to read expressions:

    * ``i = j; j += 1;`` (or ``j = j + 1;``) becomes ``i = j++;``
    * ``if (C) { y = p; } else { y = q; }`` becomes ``y = (C) ? p : q;``
    """

    rule_id = TransformRuleId.CONFUSION_INSERT
    site_error = PatternMismatch

    def find_sites(self, context):
        ast = context.ast
        sites = []
        for block in ast.of_kind(NodeKind.BLOCK):
            statements = ast.children(block.id)
            for first, second in zip(statements, statements[1:]):
                if self.match_post_increment(context, first, second):
                    sites.append(first.id)
        for node in ast.of_kind(NodeKind.IF):
            if self.match_ternary(context, node):
                sites.append(node.id)
        return sorted(sites)

    @staticmethod
    def _assignment(context, statement, operator='='):
        if statement.kind is not NodeKind.EXPR_STMT:
            return None
        expression = context.ast.child(statement.id, 'expr')
        if expression.kind is not NodeKind.ASSIGN or expression.lexeme != operator:
            return None
        return expression

    def match_post_increment(self, context, first, second):
        """
        Match ``i = j;`` followed by an increment of ``j`` by one.

        :param UnitContext context: The analyzed unit.
        :param denat.syntax.nodes.AstNode first: The first statement.
        :param denat.syntax.nodes.AstNode second: The following statement.
        :return: The ``j`` identifier node of the first statement or None if
                 the statements don't match.
        :rtype: denat.syntax.nodes.AstNode | None
        """
        ast = context.ast
        copy = self._assignment(context, first)
        if copy is None:
            return None
        target, source = ast.children(copy.id)
        if target.kind is not NodeKind.IDENTIFIER or source.kind is not NodeKind.IDENTIFIER or \
                target.lexeme == source.lexeme or context.type_of(source.id) != 'int':
            return None

        increment = self._assignment(context, second, '+=') or self._assignment(context, second)
        if increment is None:
            return None
        counter, value = ast.children(increment.id)
        if counter.kind is not NodeKind.IDENTIFIER or counter.lexeme != source.lexeme:
            return None
        if increment.lexeme == '=':
            if value.kind is not NodeKind.BINARY or value.lexeme != '+':
                return None
            base, value = ast.children(value.id)
            if base.kind is not NodeKind.IDENTIFIER or base.lexeme != source.lexeme:
                return None
        if value.kind is not NodeKind.INT_LIT or value.lexeme != '1':
            return None
        return source

    @staticmethod
    def _branch_assignment(context, branch):
        ast = context.ast
        if branch.kind is NodeKind.BLOCK:
            statements = ast.children(branch.id)
            if len(statements) != 1:
                return None
            branch = statements[0]
        return ConfusionInsertRule._assignment(context, branch)

    def match_ternary(self, context, node):
        """
        Match an if statement whose branches assign to the same location.

        :param UnitContext context: The analyzed unit.
        :param denat.syntax.nodes.AstNode node: The if statement.
        :return: A 2-tuple of the assignments of both branches or None if the
                 statement doesn't match.
        :rtype: (denat.syntax.nodes.AstNode, denat.syntax.nodes.AstNode) | None
        """
        ast = context.ast
        if 'else' not in node.roles or writes(ast, ast.child(node.id, 'cond').id):
            return None
        assignments = [self._branch_assignment(context, ast.child(node.id, role)) for role in ('then', 'else')]
        if None in assignments:
            return None
        targets = [ast.child(assignment.id, 'target') for assignment in assignments]
        if ast.structure(targets[0].id) != ast.structure(targets[1].id):
            return None
        target = targets[0]
        if target.kind is NodeKind.INDEX:
            base, index = ast.children(target.id)
            if base.kind is not NodeKind.IDENTIFIER or not is_pure(ast, index.id) or can_fault(ast, index.id):
                return None
        elif target.kind is not NodeKind.IDENTIFIER:
            return None
        return tuple(assignments)

    def make_ternary(self, condition, then, otherwise):
        condition.parens = max(condition.parens, 1)
        return Node(NodeKind.TERNARY, None, [condition, then, otherwise], ['cond', 'then', 'else'])

    def rewrite(self, context, site, rng):
        ast = context.ast
        root, nodes = thaw(context)
        node = ast.node(site)
        if node.kind is NodeKind.IF:
            then, otherwise = (nodes[assignment.id] for assignment in self.match_ternary(context, node))
            value = self.make_ternary(nodes[ast.child(site, 'cond').id], then.child('value'),
                                      otherwise.child('value'))
            assignment = Node(NodeKind.ASSIGN, make_token('='), [then.child('target'), value], ['target', 'value'])
            statement = expression_statement(assignment)
            replace_child(context, nodes, site, statement)
            return root, {'pattern': TERNARY, 'statement': ' '.join(iter_lexemes(statement))}

        block = ast.parent(site)
        statements = ast.children(block.id)
        second = statements[statements.index(node) + 1]
        source = self.match_post_increment(context, node, second)
        copy = nodes[site].child('expr')
        copy.set_child('value', Node(NodeKind.UNARY, make_token('++'), [nodes[source.id]], ['operand']))
        nodes[source.id].parens = 0
        replace_child(context, nodes, second.id)
        return root, {'pattern': POST_INCREMENT, 'statement': ' '.join(iter_lexemes(nodes[site]))}
