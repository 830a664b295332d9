# encoding: utf-8

from ..dataflow import free_vars, visible_names
from ..exceptions import NoDonorStatement
from ..syntax import NodeKind, parse_statement, unparse
from .base import TransformRule, TransformRuleId, replace_child, thaw

COMPOUND_DONOR_KINDS = (NodeKind.IF, NodeKind.WHILE, NodeKind.FOR)
FORBIDDEN_DONOR_KINDS = (NodeKind.RETURN, NodeKind.BREAK, NodeKind.CONTINUE, NodeKind.DECL_STMT)
GUARD_LITERAL = '0'


class DeadCodeRule(TransformRule):
    """
    Inject a statement transplanted from the same function, guarded by a
    condition that can never hold.

    Sites are statements inside blocks (the dead code is inserted before them)
    and blocks (the dead code is appended to them).
    """

    rule_id = TransformRuleId.DEAD_CODE
    site_error = NoDonorStatement

    def is_donor(self, context, node):
        if node.kind is NodeKind.EXPR_STMT:
            return True
        if not self.config.allow_compound_donors or node.kind not in COMPOUND_DONOR_KINDS:
            return False
        return not any(descendant.kind in FORBIDDEN_DONOR_KINDS for descendant in context.ast.iter_subtree(node.id))

    def donors(self, context, function_id):
        """
        Collect the statements of a function that may be transplanted.

        :param UnitContext context: The analyzed unit.
        :param int function_id: The id of the function.
        :return: 2-tuples of donor nodes and their free variables.
        :rtype: list[(denat.syntax.nodes.AstNode, set[str])]
        """
        return [(node, free_vars(context.ast, node.id)) for node in context.ast.iter_subtree(function_id)
                if self.is_donor(context, node)]

    def candidate_positions(self, context, function_id):
        ast = context.ast
        for node in ast.iter_subtree(function_id):
            if node.kind is NodeKind.BLOCK:
                yield node.id, visible_names(ast, node.id, at_end=True)
            elif ast.parent(node.id).kind is NodeKind.BLOCK:
                yield node.id, visible_names(ast, node.id)

    def find_sites(self, context):
        sites = []
        for function in context.unit.functions:
            donors = self.donors(context, function.id)
            if not donors:
                continue
            for site, visible in self.candidate_positions(context, function.id):
                if any(names.issubset(visible) for donor, names in donors):
                    sites.append(site)
        return sorted(sites)

    def rewrite(self, context, site, rng):
        ast = context.ast
        node = ast.node(site)
        visible = visible_names(ast, site, at_end=node.kind is NodeKind.BLOCK)
        donors = [donor for donor, names in self.donors(context, context.function_of(site).id)
                  if names.issubset(visible)]
        donor = rng.choice(donors)
        form = rng.choice(self.config.dead_guard_forms)
        operands = sorted(name for name, (decl_id, decl_type) in visible.items() if decl_type == 'int')
        operand = rng.choice(operands + [GUARD_LITERAL])
        guard = parse_statement(form.format(x=operand, body='{{ {} }}'.format(unparse(ast, donor.id))))

        root, nodes = thaw(context)
        if node.kind is NodeKind.BLOCK:
            nodes[site].children.append(guard)
            nodes[site].roles.append('stmt')
        else:
            replace_child(context, nodes, site, guard, nodes[site])
        return root, {
            'donor': unparse(ast, donor.id),
            'donor_span': list(ast.span_of(donor.id)),
            'guard': unparse(guard),
            'guard_operand': operand,
            'position': 'end' if node.kind is NodeKind.BLOCK else 'before',
        }
