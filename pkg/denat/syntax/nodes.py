# encoding: utf-8
"""
Syntax tree representations.

Parsed code is stored in an immutable :class:`Ast` arena of :class:`AstNode`
objects addressed by their ids. Rewrites work on mutable :class:`Node` trees
that are obtained via :meth:`Ast.to_tree` and turned back into source text by
the printer.
"""

from collections import namedtuple
from copy import deepcopy
from enum import Enum

from .tokens import IDENTIFIER, Span


class NodeKind(Enum):
    UNIT = 'Unit'
    FUNCTION = 'Function'
    PARAM_LIST = 'ParamList'
    BLOCK = 'Block'
    IF = 'If'
    FOR = 'For'
    WHILE = 'While'
    RETURN = 'Return'
    BREAK = 'Break'
    CONTINUE = 'Continue'
    DECL_STMT = 'DeclStmt'
    EXPR_STMT = 'ExprStmt'
    ASSIGN = 'Assign'
    BINARY = 'Binary'
    UNARY = 'Unary'
    TERNARY = 'Ternary'
    CALL = 'Call'
    INDEX = 'Index'
    IDENTIFIER = 'Identifier'
    INT_LIT = 'IntLit'
    BOOL_LIT = 'BoolLit'
    STR_LIT = 'StrLit'

    def __str__(self):
        return self.value


STATEMENT_KINDS = frozenset((
    NodeKind.BLOCK, NodeKind.IF, NodeKind.FOR, NodeKind.WHILE, NodeKind.RETURN, NodeKind.BREAK, NodeKind.CONTINUE,
    NodeKind.DECL_STMT, NodeKind.EXPR_STMT,
))
LOOP_KINDS = frozenset((NodeKind.FOR, NodeKind.WHILE))
LITERAL_KINDS = frozenset((NodeKind.INT_LIT, NodeKind.BOOL_LIT, NodeKind.STR_LIT))
COMPARISON_OPERATORS = frozenset(('==', '!=', '<', '<=', '>', '>='))
UPDATE_OPERATORS = frozenset(('++', '--'))


class Node(object):
    """
    A mutable syntax tree node. Children are stored in source order, each one
    labelled with its role in the parent (e.g. ``cond`` or ``body``).
    """

    __slots__ = ('kind', 'token', 'children', 'roles', 'decl_type', 'parens', 'span', 'origin')

    def __init__(self, kind, token=None, children=(), roles=(), decl_type=None, parens=0, span=None, origin=None):
        """
        Initialize a new syntax tree node.

        :param NodeKind kind: The kind of the node.
        :param denat.syntax.tokens.Token | None token: The token carried by
                                                       the node (operator,
                                                       name or literal).
        :param children: The child nodes.
        :param roles: The role names of the children (same length).
        :param str | None decl_type: The declared type of functions,
                                     declarations and parameters.
        :param int parens: The number of parenthesis pairs around the node.
        :param Span | None span: The source span if the node was parsed.
        :param int | None origin: The id of the :class:`AstNode` this node was
                                  created from.
        """
        self.kind = kind
        self.token = token
        self.children = list(children)
        self.roles = list(roles)
        if len(self.children) != len(self.roles):
            raise ValueError('Every child of a node needs a role.')
        self.decl_type = decl_type
        self.parens = parens
        self.span = span
        self.origin = origin

    def __repr__(self):
        label = ' {}'.format(self.token.lexeme) if self.token is not None else ''
        return '<Node: {}{}>'.format(self.kind, label)

    @property
    def lexeme(self):
        return self.token.lexeme if self.token is not None else None

    def child(self, role):
        """
        Get the (first) child with the given role.

        :param str role: The role of the child.
        :return: The child node or None if there is no child with that role.
        :rtype: Node | None
        """
        for child, child_role in zip(self.children, self.roles):
            if child_role == role:
                return child
        return None

    def set_child(self, role, node):
        """
        Replace the child with the given role or add it if the node doesn't
        have a child with that role yet.

        :param str role: The role of the child.
        :param Node node: The new child.
        """
        for index, child_role in enumerate(self.roles):
            if child_role == role:
                self.children[index] = node
                return
        self.children.append(node)
        self.roles.append(role)

    def iter_nodes(self):
        """
        Iterate over this node and all of its descendants in preorder.

        :return: A generator yielding the nodes.
        :rtype: collections.Iterable[Node]
        """
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def copy(self):
        return deepcopy(self)


class AstNode(namedtuple('AstNode', 'id kind children token span roles decl_type parens')):
    """An immutable syntax tree node stored in an :class:`Ast` arena."""
    __slots__ = ()

    @property
    def lexeme(self):
        return self.token.lexeme if self.token is not None else None

    def role_index(self, role):
        try:
            return self.roles.index(role)
        except ValueError:
            return None


class Ast(object):
    """
    A parsed MiniLang unit. Nodes are stored in preorder, so the id of a node
    is its index in :attr:`nodes` and the root always has the id 0.
    """

    __slots__ = ('root', 'nodes', 'unit_name', '_parents')

    def __init__(self, nodes, unit_name='<unit>'):
        self.root = 0
        self.nodes = tuple(nodes)
        self.unit_name = unit_name
        self._parents = None

    def __repr__(self):
        return '<Ast: {} ({} nodes)>'.format(self.unit_name, len(self.nodes))

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        return isinstance(other, Ast) and self.nodes == other.nodes and self.unit_name == other.unit_name

    def __hash__(self):
        return hash((self.nodes, self.unit_name))

    @classmethod
    def from_tree(cls, root, unit_name='<unit>'):
        """
        Freeze a mutable node tree into an AST arena, assigning preorder ids.

        :param Node root: The root node of the tree.
        :param str unit_name: The name of the unit.
        :return: The AST.
        :rtype: Ast
        """
        ordered = list(root.iter_nodes())
        ids = {id(node): index for index, node in enumerate(ordered)}
        nodes = [
            AstNode(ids[id(node)], node.kind, tuple(ids[id(child)] for child in node.children), node.token,
                    node.span, tuple(node.roles), node.decl_type, node.parens)
            for node in ordered
        ]
        return cls(nodes, unit_name)

    def node(self, node_id):
        return self.nodes[node_id]

    def children(self, node_id):
        return [self.nodes[child_id] for child_id in self.nodes[node_id].children]

    def child(self, node_id, role):
        """
        Get the child of a node that has the given role.

        :param int node_id: The id of the parent node.
        :param str role: The role of the child.
        :return: The child node or None.
        :rtype: AstNode | None
        """
        node = self.nodes[node_id]
        index = node.role_index(role)
        return self.nodes[node.children[index]] if index is not None else None

    def parent(self, node_id):
        """
        Get the parent of a node.

        :param int node_id: The id of the node.
        :return: The parent node or None for the root.
        :rtype: AstNode | None
        """
        if self._parents is None:
            parents = [None] * len(self.nodes)
            for node in self.nodes:
                for child_id in node.children:
                    parents[child_id] = node.id
            self._parents = tuple(parents)
        parent_id = self._parents[node_id]
        return self.nodes[parent_id] if parent_id is not None else None

    def ancestors(self, node_id):
        """
        Iterate over the ancestors of a node, starting with its parent.

        :param int node_id: The id of the node.
        :return: A generator yielding the ancestor nodes.
        :rtype: collections.Iterable[AstNode]
        """
        parent = self.parent(node_id)
        while parent is not None:
            yield parent
            parent = self.parent(parent.id)

    def iter_subtree(self, node_id=None):
        """
        Iterate over a node and all of its descendants in preorder.

        :param int | None node_id: The id of the subtree root. Defaults to the
                                   root of the AST.
        :return: A generator yielding the nodes.
        :rtype: collections.Iterable[AstNode]
        """
        # Preorder ids make every subtree a contiguous id range.
        start = self.root if node_id is None else node_id
        end = start + self.subtree_size(start)
        return iter(self.nodes[start:end])

    def subtree_size(self, node_id):
        size = 1
        for child_id in self.nodes[node_id].children:
            size += self.subtree_size(child_id)
        return size

    def of_kind(self, *kinds):
        return [node for node in self.nodes if node.kind in kinds]

    def enclosing(self, node_id, *kinds):
        """
        Find the closest ancestor of a node with one of the given kinds.

        :param int node_id: The id of the node.
        :param NodeKind kinds: The kinds to look for.
        :return: The closest matching ancestor or None.
        :rtype: AstNode | None
        """
        for ancestor in self.ancestors(node_id):
            if ancestor.kind in kinds:
                return ancestor
        return None

    def span_of(self, node_id):
        """
        Get the source span of a node, falling back to the span covering its
        descendants.

        :param int node_id: The id of the node.
        :return: The span or None if no part of the subtree has one.
        :rtype: Span | None
        """
        span = None
        for node in self.iter_subtree(node_id):
            if node.span is not None:
                span = node.span if span is None else span.cover(node.span)
        return span

    def to_tree(self, node_id=None):
        """
        Thaw (a part of) the AST into a mutable node tree.

        :param int | None node_id: The id of the subtree root. Defaults to the
                                   root of the AST.
        :return: A 2-tuple containing the root of the mutable tree and a
                 dictionary mapping AST node ids to the created nodes.
        :rtype: (Node, dict[int, Node])
        """
        mapping = {}

        def thaw(ast_node):
            node = Node(ast_node.kind, ast_node.token, [thaw(self.nodes[child_id]) for child_id in ast_node.children],
                        ast_node.roles, ast_node.decl_type, ast_node.parens, ast_node.span, ast_node.id)
            mapping[ast_node.id] = node
            return node

        root = thaw(self.nodes[self.root if node_id is None else node_id])
        return root, mapping

    def structure(self, node_id=None):
        """
        Build a hashable representation of a subtree that captures node kinds,
        roles, declared types and token lexemes while ignoring ids, spans and
        parentheses.

        :param int | None node_id: The id of the subtree root. Defaults to the
                                   root of the AST.
        :return: The nested tuple representation.
        :rtype: tuple
        """
        node = self.nodes[self.root if node_id is None else node_id]
        return (node.kind, node.lexeme, node.decl_type, node.roles,
                tuple(self.structure(child_id) for child_id in node.children))

    def structurally_equal(self, other):
        return self.structure() == other.structure()

    def identifier_names(self):
        """
        Collect every name appearing in the unit (variables, functions and
        callees).

        :return: The set of names.
        :rtype: set[str]
        """
        return {node.lexeme for node in self.nodes if node.token is not None and node.token.kind == IDENTIFIER}


def covering_span(*spans):
    """
    Build the smallest span covering all given spans, ignoring missing ones.

    :param spans: The spans to cover.
    :return: The covering span or None if no span was given.
    :rtype: Span | None
    """
    result = None
    for span in spans:
        if span is not None:
            result = span if result is None else Span.cover(result, span)
    return result
