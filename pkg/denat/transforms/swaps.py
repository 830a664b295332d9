# encoding: utf-8

from ..dataflow import can_fault, is_pure, writes
from ..exceptions import IneligibleOperator, NoElseBranch
from ..syntax import Node, NodeKind, iter_lexemes, make_token
from ..syntax.nodes import COMPARISON_OPERATORS
from .base import TransformRule, TransformRuleId, as_block, thaw

#: Operators yielding the negated result of a comparison.
NEGATED_COMPARISONS = {
    '==': '!=',
    '!=': '==',
    '<': '>=',
    '>=': '<',
    '>': '<=',
    '<=': '>',
}
#: Operators yielding the same result with exchanged operands.
MIRRORED_COMPARISONS = {
    '==': '==',
    '!=': '!=',
    '<': '>',
    '>': '<',
    '<=': '>=',
    '>=': '<=',
}
SHORT_CIRCUIT_OPERATORS = frozenset(('&&', '||'))


class BlockSwapRule(TransformRule):
    """
    Exchange the branches of an if statement with an else branch and negate
    its condition.
    """

    rule_id = TransformRuleId.BLOCK_SWAP
    site_error = NoElseBranch

    def find_sites(self, context):
        return [node.id for node in context.ast.of_kind(NodeKind.IF) if 'else' in node.roles]

    def negate(self, condition):
        """
        Negate a condition, preferring an inverted comparison operator or the
        removal of a leading ``!`` over wrapping the condition.

        :param denat.syntax.nodes.Node condition: The condition.
        :return: The negated condition.
        :rtype: denat.syntax.nodes.Node
        """
        if condition.kind is NodeKind.BINARY and condition.lexeme in NEGATED_COMPARISONS:
            condition.token = make_token(NEGATED_COMPARISONS[condition.lexeme])
            return condition
        if condition.kind is NodeKind.UNARY and condition.lexeme == '!':
            operand = condition.child('operand')
            operand.parens = 0
            return operand
        condition.parens = max(condition.parens, 1)
        return Node(NodeKind.UNARY, make_token('!'), [condition], ['operand'])

    def rewrite(self, context, site, rng):
        root, nodes = thaw(context)
        node = nodes[site]
        condition = self.negate(node.child('cond'))
        then, otherwise = node.child('then'), node.child('else')
        node.children = [condition, as_block(otherwise), as_block(then)]
        node.roles = ['cond', 'then', 'else']
        return root, {'negated_condition': ' '.join(iter_lexemes(condition))}


class OperandSwapRule(TransformRule):
    """
    Exchange the operands of a comparison or a short-circuiting logical
    operation, mirroring asymmetric comparison operators.

    Comparisons qualify if at most one operand may have effects or fault and
    that operand doesn't write any variable. ``&&`` and ``||`` qualify only if
    both operands are pure and can't fault, since their evaluation order is
    observable otherwise.
    """

    rule_id = TransformRuleId.OPERAND_SWAP
    site_error = IneligibleOperator

    def is_eligible(self, context, node):
        ast = context.ast
        left, right = ast.children(node.id)
        if node.lexeme in SHORT_CIRCUIT_OPERATORS:
            eligible = all(is_pure(ast, operand.id) and not can_fault(ast, operand.id) for operand in (left, right))
        elif node.lexeme in COMPARISON_OPERATORS:
            risky = [operand for operand in (left, right)
                     if not is_pure(ast, operand.id) or can_fault(ast, operand.id)]
            eligible = len(risky) <= 1 and not any(writes(ast, operand.id) for operand in risky)
        else:
            return False
        # Symmetric operators with equal operands would print the same text.
        if eligible and self.flip_operator(node.lexeme) == node.lexeme:
            return ast.structure(left.id) != ast.structure(right.id)
        return eligible

    def find_sites(self, context):
        return [node.id for node in context.ast.of_kind(NodeKind.BINARY) if self.is_eligible(context, node)]

    def flip_operator(self, operator):
        return MIRRORED_COMPARISONS.get(operator, operator)

    def rewrite(self, context, site, rng):
        root, nodes = thaw(context)
        node = nodes[site]
        original = node.lexeme
        node.token = make_token(self.flip_operator(original))
        node.children.reverse()
        return root, {'operator': original, 'swapped_operator': node.lexeme}
