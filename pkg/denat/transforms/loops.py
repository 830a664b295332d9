# encoding: utf-8

from ..dataflow import FAULTING_OPERATORS, declared_names, free_vars
from ..exceptions import NotALoopSite
from ..syntax import Node, NodeKind, iter_lexemes, make_token
from ..syntax.nodes import LOOP_KINDS
from .base import TransformRule, TransformRuleId, as_block, expression_statement, replace_child, thaw


class LoopExchangeRule(TransformRule):
    """
    Turn ``for`` loops into equivalent ``while`` loops and vice versa.

    The initializer of a ``for`` loop is hoisted in front of the new ``while``
    loop, either directly or (if its declaration could clash with another one)
    wrapped in a block together with the loop. The update is appended to the
    loop body and repeated before every ``continue`` of the loop.
    """

    rule_id = TransformRuleId.LOOP_EXCHANGE
    site_error = NotALoopSite

    def find_sites(self, context):
        ast = context.ast
        sites = []
        for node in ast.of_kind(NodeKind.FOR, NodeKind.WHILE):
            if node.kind is NodeKind.FOR:
                update = ast.child(node.id, 'update')
                # The moved update must not be captured by body declarations.
                if update is not None and \
                        free_vars(ast, update.id) & set(declared_names(ast, ast.child(node.id, 'body').id)):
                    continue
            sites.append(node.id)
        return sites

    def rewrite(self, context, site, rng):
        if context.ast.node(site).kind is NodeKind.WHILE:
            return self.while_to_for(context, site)
        return self.for_to_while(context, site)

    def while_to_for(self, context, site):
        root, nodes = thaw(context)
        loop = nodes[site]
        replacement = Node(NodeKind.FOR, make_token('for'), [loop.child('cond'), loop.child('body')], ['cond', 'body'])
        replace_child(context, nodes, site, replacement)
        return root, {'direction': 'while-to-for', 'hoisting': 'none', 'update_insertions': 0}

    def for_to_while(self, context, site):
        root, nodes = thaw(context)
        loop = nodes[site]
        init, condition, update = loop.child('init'), loop.child('cond'), loop.child('update')
        if condition is None:
            condition = Node(NodeKind.BOOL_LIT, make_token('true'))
        body = as_block(loop.child('body'))
        insertions = 0
        if update is not None:
            update.parens = 0
            include_breaks = self.is_loop_local(context, site)
            body, insertions = self.insert_before_jumps(body, update, include_breaks)
            body.children.append(expression_statement(update.copy()))
            body.roles.append('stmt')
        replacement = Node(NodeKind.WHILE, make_token('while'), [condition, body], ['cond', 'body'])

        if init is None:
            hoisting = 'none'
            replace_child(context, nodes, site, replacement)
        elif self.can_hoist_flat(context, site):
            hoisting = 'flat'
            replace_child(context, nodes, site, init, replacement)
        else:
            hoisting = 'block'
            replace_child(context, nodes, site, Node(NodeKind.BLOCK, children=[init, replacement],
                                                     roles=['stmt', 'stmt']))
        auxiliary = {
            'direction': 'for-to-while',
            'hoisting': hoisting,
            'update_insertions': insertions,
        }
        if update is not None:
            auxiliary['update'] = ' '.join(iter_lexemes(update))
        return root, auxiliary

    def insert_before_jumps(self, body, update, include_breaks):
        """
        Insert a copy of the update statement before every ``continue`` (and
        optionally every ``break``) that binds to the loop with the given body.

        :param denat.syntax.nodes.Node body: The loop body block.
        :param denat.syntax.nodes.Node update: The update expression.
        :param bool include_breaks: Whether to insert before ``break`` too.
        :return: The modified body and the number of insertions.
        :rtype: (denat.syntax.nodes.Node, int)
        """
        jumps = (NodeKind.CONTINUE, NodeKind.BREAK) if include_breaks else (NodeKind.CONTINUE,)
        counter = [0]

        def insert(node):
            # Jumps inside nested loops bind to those loops and stay untouched.
            if node.kind in LOOP_KINDS:
                return node
            if node.kind in jumps:
                counter[0] += 1
                return Node(NodeKind.BLOCK, children=[expression_statement(update.copy()), node],
                            roles=['stmt', 'stmt'])
            if node.kind is NodeKind.BLOCK:
                children, roles = [], []
                for child in node.children:
                    if child.kind in jumps:
                        counter[0] += 1
                        children.extend((expression_statement(update.copy()), child))
                        roles.extend(('stmt', 'stmt'))
                    else:
                        children.append(insert(child))
                        roles.append('stmt')
                node.children, node.roles = children, roles
            elif node.kind is NodeKind.IF:
                for index, role in enumerate(node.roles):
                    if role in ('then', 'else'):
                        node.children[index] = insert(node.children[index])
            return node

        return insert(body), counter[0]

    def is_loop_local(self, context, site):
        """
        Check if running the update one extra time before leaving the loop via
        ``break`` is unobservable: it may only write variables declared by the
        loop initializer and must neither call functions nor fault.

        :param UnitContext context: The analyzed unit.
        :param int site: The id of the loop.
        :rtype: bool
        """
        ast = context.ast
        init = ast.child(site, 'init')
        update = ast.child(site, 'update')
        if init is None or init.kind is not NodeKind.DECL_STMT:
            return False
        local_name = ast.child(init.id, 'name').lexeme
        for node in ast.iter_subtree(update.id):
            if node.kind in (NodeKind.CALL, NodeKind.INDEX) or node.lexeme in FAULTING_OPERATORS:
                return False
            if node.kind is NodeKind.ASSIGN or (node.kind is NodeKind.UNARY and node.lexeme in ('++', '--')):
                target = ast.children(node.id)[0]
                if target.kind is not NodeKind.IDENTIFIER or target.lexeme != local_name:
                    return False
        return True

    def can_hoist_flat(self, context, site):
        """
        Check if the initializer can be placed directly in front of the new
        loop without wrapping both in a block.

        :param UnitContext context: The analyzed unit.
        :param int site: The id of the loop.
        :rtype: bool
        """
        ast = context.ast
        if ast.parent(site).kind is not NodeKind.BLOCK:
            return False
        init = ast.child(site, 'init')
        if init.kind is not NodeKind.DECL_STMT:
            return True
        name = ast.child(init.id, 'name').lexeme
        return declared_names(ast, context.function_of(site).id).count(name) == 1

