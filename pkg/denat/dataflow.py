# encoding: utf-8
"""
Scope resolution and def-use analysis for MiniLang units.

The analysis is a flow-insensitive approximation of reaching definitions: a
use of a variable is linked to every definition or update of the same
declaration that precedes it in evaluation order, as well as to every later
one that shares an enclosing loop with it (as long as that loop doesn't also
re-run the declaration itself).
"""

from collections import Counter, OrderedDict, namedtuple

from .exceptions import DataflowError, UnknownName, UnresolvedVariable
from .syntax.nodes import LOOP_KINDS, NodeKind

DEF = 'def'
USE = 'use'
UPDATE = 'update'

COMPOUND_ASSIGNMENT_OPERATORS = frozenset(('+=', '-=', '*=', '/=', '%='))
FAULTING_OPERATORS = frozenset(('/', '%', '/=', '%='))


class VarOccurrence(namedtuple('VarOccurrence', 'name node_id role scope_id decl_id')):
    """
    A single occurrence of a variable. ``decl_id`` is the node id of the
    identifier declaring the variable and therefore identifies its chain.
    """
    __slots__ = ()

    @property
    def is_write(self):
        return self.role in (DEF, UPDATE)


Scope = namedtuple('Scope', 'id parent_id node_id')


class DefUseGraph(namedtuple('DefUseGraph', 'occurrences edges scopes decl_types reads')):
    """
    The def-use graph of a unit.

    * ``occurrences``: all variable occurrences in evaluation order.
    * ``edges``: pairs of (definition or update, use) occurrences.
    * ``scopes``: the lexical scopes of the unit with parent links.
    * ``decl_types``: a mapping of declaration ids to the declared types.
    * ``reads``: node ids of update occurrences that also read the variable
      (compound assignments, ``++``/``--`` and array element writes).
    """
    __slots__ = ()

    def chain(self, decl_id):
        return [occurrence for occurrence in self.occurrences if occurrence.decl_id == decl_id]

    def chain_ids(self):
        """
        Get the declaration ids of all chains in order of their first
        occurrence.

        :return: The declaration ids.
        :rtype: list[int]
        """
        return list(OrderedDict.fromkeys(occurrence.decl_id for occurrence in self.occurrences))

    def chain_numbers(self):
        """
        Number all chains in order of their first occurrence, starting at 1.

        :return: A dictionary mapping declaration ids to chain numbers.
        :rtype: dict[int, int]
        """
        return {decl_id: number for number, decl_id in enumerate(self.chain_ids(), start=1)}

    def names(self):
        return {occurrence.name for occurrence in self.occurrences}

    def anonymized_edges(self, ast):
        """
        Build the multiset of anonymized def-use edges. Each edge is described
        by its chain number, the role of its source occurrence and the node
        kinds of the parents of both occurrences, so the result doesn't depend
        on variable names.

        :param denat.syntax.nodes.Ast ast: The tree the graph was built for.
        :return: The edge multiset.
        :rtype: collections.Counter
        """
        numbers = self.chain_numbers()
        edges = Counter()
        for source, target in self.edges:
            edges[(numbers[source.decl_id], source.role, _parent_kind(ast, source.node_id),
                   _parent_kind(ast, target.node_id))] += 1
        return edges


def _parent_kind(ast, node_id):
    parent = ast.parent(node_id)
    return parent.kind.value if parent is not None else None


class _GraphBuilder(object):

    def __init__(self, ast):
        self.ast = ast
        self.occurrences = []
        self.loops = []
        self.reads = set()
        self.scopes = []
        self.decl_types = {}
        self.decl_loops = {}
        self.stack = []
        self.loop_stack = []

    # Scopes

    def open_scope(self, node_id):
        parent_id = self.stack[-1][0] if self.stack else None
        scope = Scope(len(self.scopes), parent_id, node_id)
        self.scopes.append(scope)
        self.stack.append((scope.id, {}))

    def close_scope(self):
        self.stack.pop()

    def resolve(self, name):
        for scope_id, names in reversed(self.stack):
            if name in names:
                return names[name]
        return None

    # Occurrences

    def record(self, node, role, decl_id, reads=False):
        self.occurrences.append(VarOccurrence(node.lexeme, node.id, role, self.stack[-1][0], decl_id))
        self.loops.append(frozenset(self.loop_stack))
        if reads:
            self.reads.add(node.id)

    def declare(self, node, decl_type):
        scope_id, names = self.stack[-1]
        if node.lexeme in names:
            raise DataflowError('Variable "{}" is declared twice in the same scope (at byte offset {}).'.format(
                node.lexeme, node.span.start if node.span is not None else '?'))
        names[node.lexeme] = node.id
        self.decl_types[node.id] = decl_type
        self.decl_loops[node.id] = frozenset(self.loop_stack)
        self.record(node, DEF, node.id)

    def reference(self, node, role, reads=False):
        decl_id = self.resolve(node.lexeme)
        if decl_id is None:
            raise UnresolvedVariable(node.lexeme, node.span)
        self.record(node, role, decl_id, reads)

    # Traversal

    def build(self):
        self.open_scope(self.ast.root)
        for function in self.ast.children(self.ast.root):
            self.visit_function(function)
        self.close_scope()
        return self.finish()

    def visit_function(self, function):
        self.open_scope(function.id)
        for param in self.ast.children(self.ast.child(function.id, 'params').id):
            self.declare(param, param.decl_type)
        self.visit_statement(self.ast.child(function.id, 'body'))
        self.close_scope()

    def visit_nested(self, statement):
        # Declarations as the direct body of an if/loop live in their own scope.
        if statement.kind is NodeKind.DECL_STMT:
            self.open_scope(statement.id)
            self.visit_statement(statement)
            self.close_scope()
        else:
            self.visit_statement(statement)

    def visit_statement(self, node):
        kind = node.kind
        if kind is NodeKind.BLOCK:
            self.open_scope(node.id)
            for statement in self.ast.children(node.id):
                self.visit_statement(statement)
            self.close_scope()
        elif kind is NodeKind.DECL_STMT:
            init = self.ast.child(node.id, 'init')
            if init is not None:
                self.visit_expression(init)
            self.declare(self.ast.child(node.id, 'name'), node.decl_type)
        elif kind is NodeKind.EXPR_STMT:
            self.visit_expression(self.ast.child(node.id, 'expr'))
        elif kind is NodeKind.RETURN:
            value = self.ast.child(node.id, 'value')
            if value is not None:
                self.visit_expression(value)
        elif kind is NodeKind.IF:
            self.visit_expression(self.ast.child(node.id, 'cond'))
            self.visit_nested(self.ast.child(node.id, 'then'))
            otherwise = self.ast.child(node.id, 'else')
            if otherwise is not None:
                self.visit_nested(otherwise)
        elif kind is NodeKind.WHILE:
            self.loop_stack.append(node.id)
            self.visit_expression(self.ast.child(node.id, 'cond'))
            self.visit_nested(self.ast.child(node.id, 'body'))
            self.loop_stack.pop()
        elif kind is NodeKind.FOR:
            self.visit_for(node)

    def visit_for(self, node):
        self.open_scope(node.id)
        init = self.ast.child(node.id, 'init')
        if init is not None:
            self.visit_statement(init)
        self.loop_stack.append(node.id)
        for role in ('cond', 'body', 'update'):
            child = self.ast.child(node.id, role)
            if child is None:
                continue
            if role == 'body':
                self.visit_nested(child)
            else:
                self.visit_expression(child)
        self.loop_stack.pop()
        self.close_scope()

    def visit_target(self, target, reads):
        if target.kind is NodeKind.IDENTIFIER:
            self.reference(target, UPDATE, reads)
        elif target.kind is NodeKind.INDEX:
            # An element write updates the whole array.
            self.visit_expression(self.ast.child(target.id, 'index'))
            self.visit_target(self.ast.child(target.id, 'base'), reads=True)
        else:
            self.visit_expression(target)

    def visit_expression(self, node):
        kind = node.kind
        if kind is NodeKind.IDENTIFIER:
            self.reference(node, USE)
        elif kind is NodeKind.ASSIGN:
            self.visit_expression(self.ast.child(node.id, 'value'))
            self.visit_target(self.ast.child(node.id, 'target'), node.lexeme in COMPOUND_ASSIGNMENT_OPERATORS)
        elif kind is NodeKind.UNARY and node.lexeme in ('++', '--'):
            self.visit_target(self.ast.child(node.id, 'operand'), reads=True)
        else:
            for child in self.ast.children(node.id):
                self.visit_expression(child)

    def finish(self):
        writers = {}
        for index, occurrence in enumerate(self.occurrences):
            if occurrence.is_write:
                writers.setdefault(occurrence.decl_id, []).append(index)
        edges = []
        for index, occurrence in enumerate(self.occurrences):
            if occurrence.role != USE and occurrence.node_id not in self.reads:
                continue
            for writer in writers.get(occurrence.decl_id, ()):
                shared_loops = (self.loops[writer] & self.loops[index]) - self.decl_loops[occurrence.decl_id]
                if writer < index or shared_loops:
                    edges.append((self.occurrences[writer], occurrence))
        return DefUseGraph(tuple(self.occurrences), tuple(edges), tuple(self.scopes), dict(self.decl_types),
                           frozenset(self.reads))


def build_def_use(ast):
    """
    Resolve all variables of a unit and build its def-use graph.

    :param denat.syntax.nodes.Ast ast: The tree of the unit.
    :return: The def-use graph.
    :rtype: DefUseGraph
    :raises UnresolvedVariable: If a variable is used without a visible
                                declaration.
    :raises DataflowError: If a variable is declared twice in one scope.
    """
    return _GraphBuilder(ast).build()


def chains_of(graph, name):
    """
    Get all declaration chains of a name.

    :param DefUseGraph graph: The def-use graph.
    :param str name: The variable name.
    :return: The chains (occurrence lists) in order of their first occurrence.
    :rtype: list[list[VarOccurrence]]
    """
    decl_ids = [decl_id for decl_id in graph.chain_ids() if graph.chain(decl_id)[0].name == name]
    return [graph.chain(decl_id) for decl_id in decl_ids]


def occurrences_of(graph, name, decl_id=None):
    """
    Get all occurrences belonging to the same declaration chain of a name.
    Shadowing declarations form distinct chains.

    :param DefUseGraph graph: The def-use graph.
    :param str name: The variable name.
    :param int | None decl_id: The declaration to get the chain for. Defaults
                               to the first declared chain of the name.
    :return: The occurrences of the chain.
    :rtype: list[VarOccurrence]
    :raises UnknownName: If the name is never declared.
    """
    chains = chains_of(graph, name)
    if not chains:
        raise UnknownName(name)
    if decl_id is None:
        return chains[0]
    for chain in chains:
        if chain[0].decl_id == decl_id:
            return chain
    raise UnknownName(name)


def free_vars(ast, node_id):
    """
    Collect the names used under a node that are not declared under it.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the subtree root.
    :return: The free variable names.
    :rtype: set[str]
    """
    declared, used = set(), set()
    for node in ast.iter_subtree(node_id):
        if node.kind is NodeKind.DECL_STMT:
            declared.add(ast.child(node.id, 'name').lexeme)
        elif node.kind is NodeKind.IDENTIFIER:
            parent = ast.parent(node.id)
            if parent is None or parent.kind is NodeKind.PARAM_LIST:
                continue
            if parent.kind is not NodeKind.DECL_STMT or ast.child(parent.id, 'name').id != node.id:
                used.add(node.lexeme)
        elif node.kind is NodeKind.PARAM_LIST:
            declared.update(param.lexeme for param in ast.children(node.id))
    return used - declared


def is_pure(ast, node_id):
    """
    Check if an expression is free of assignments, updates and calls.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the expression.
    :return: True if the expression is pure; otherwise False.
    :rtype: bool
    """
    for node in ast.iter_subtree(node_id):
        if node.kind in (NodeKind.ASSIGN, NodeKind.CALL):
            return False
        if node.kind is NodeKind.UNARY and node.lexeme in ('++', '--'):
            return False
    return True


def writes(ast, node_id):
    """
    Check if an expression contains an assignment or ``++``/``--``.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the expression.
    :rtype: bool
    """
    return any(node.kind is NodeKind.ASSIGN or (node.kind is NodeKind.UNARY and node.lexeme in ('++', '--'))
               for node in ast.iter_subtree(node_id))


def can_fault(ast, node_id):
    """
    Check if evaluating an expression may raise a runtime error, i.e. if it
    contains an index access or a division.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the expression.
    :rtype: bool
    """
    return any(node.kind is NodeKind.INDEX or node.lexeme in FAULTING_OPERATORS
               for node in ast.iter_subtree(node_id) if node.kind is not NodeKind.STR_LIT)


def visible_names(ast, node_id, at_end=False):
    """
    Collect the variables visible right before a statement (or, with
    ``at_end``, at the end of a block).

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the statement or block.
    :param bool at_end: Whether to include the declarations of the block
                        itself (the node must be a block).
    :return: A dictionary mapping visible names to 2-tuples of the
             declaration id and the declared type. Inner declarations shadow
             outer ones.
    :rtype: dict[str, (int, str)]
    """
    layers = []
    if at_end:
        layers.append([child for child in ast.children(node_id) if child.kind is NodeKind.DECL_STMT])
    current = ast.node(node_id)
    for ancestor in ast.ancestors(node_id):
        layer = []
        if ancestor.kind is NodeKind.BLOCK:
            for sibling in ast.children(ancestor.id):
                if sibling.id == current.id:
                    break
                if sibling.kind is NodeKind.DECL_STMT:
                    layer.append(sibling)
        elif ancestor.kind is NodeKind.FOR:
            init = ast.child(ancestor.id, 'init')
            if init is not None and init.id != current.id and init.kind is NodeKind.DECL_STMT:
                layer.append(init)
        elif ancestor.kind is NodeKind.FUNCTION:
            layer.extend(ast.children(ast.child(ancestor.id, 'params').id))
        layers.append(layer)
        current = ancestor

    visible = {}
    for layer in layers:
        for declaration in layer:
            if declaration.kind is NodeKind.DECL_STMT:
                name = ast.child(declaration.id, 'name')
                entry = (name.id, declaration.decl_type)
            else:
                name, entry = declaration, (declaration.id, declaration.decl_type)
            visible.setdefault(name.lexeme, entry)
    return visible


def declared_names(ast, node_id):
    """
    Collect all names declared (as locals or parameters) under a node.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the subtree root.
    :rtype: list[str]
    """
    names = []
    for node in ast.iter_subtree(node_id):
        if node.kind is NodeKind.DECL_STMT:
            names.append(ast.child(node.id, 'name').lexeme)
        elif node.kind is NodeKind.PARAM_LIST:
            names.extend(param.lexeme for param in ast.children(node.id))
    return names


def enclosing_loop(ast, node_id):
    """
    Find the loop a ``break`` or ``continue`` binds to.

    :param denat.syntax.nodes.Ast ast: The tree.
    :param int node_id: The id of the statement.
    :return: The loop node or None.
    :rtype: denat.syntax.nodes.AstNode | None
    """
    return ast.enclosing(node_id, *LOOP_KINDS)
