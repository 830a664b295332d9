# encoding: utf-8

from collections import namedtuple

from .nodes import NodeKind
from .parser import parse
from .printer import unparse
from .tokens import lex

LANGUAGE = 'minilang'


class SourceUnit(namedtuple('SourceUnit', 'text tokens ast language')):
    """
    A parsed MiniLang compilation unit. Tokens and tree are derived from the
    text, so two units with equal texts are equal.
    """
    __slots__ = ()

    @classmethod
    def from_text(cls, text, name='<unit>'):
        """
        Lex and parse a source text.

        :param str text: The source text.
        :param str name: A name for the unit (usually its path).
        :return: The parsed unit.
        :rtype: SourceUnit
        :raises denat.exceptions.MiniLangSyntaxError: If the text is not a
                                                      valid MiniLang unit.
        """
        tokens = tuple(lex(text))
        return cls(text, tokens, parse(tokens, name), LANGUAGE)

    @classmethod
    def from_tree(cls, tree, name='<unit>'):
        """
        Print a (rewritten) mutable tree and parse the result into a new unit.

        :param denat.syntax.nodes.Node tree: The root of the unit tree.
        :param str name: A name for the unit.
        :return: The parsed unit.
        :rtype: SourceUnit
        """
        return cls.from_text(unparse(tree), name)

    def __repr__(self):
        return '<SourceUnit: {}>'.format(self.name)

    @property
    def name(self):
        return self.ast.unit_name

    @property
    def canonical_text(self):
        return unparse(self.ast)

    @property
    def token_pairs(self):
        return [(token.kind, token.lexeme) for token in self.tokens]

    @property
    def functions(self):
        return [self.ast.node(node_id) for node_id in self.ast.node(self.ast.root).children
                if self.ast.node(node_id).kind is NodeKind.FUNCTION]

    def function(self, name):
        """
        Look up a function of the unit by its name.

        :param str name: The function name.
        :return: The function node or None if the unit has no such function.
        :rtype: denat.syntax.nodes.AstNode | None
        """
        for function in self.functions:
            if function.lexeme == name:
                return function
        return None

    def signature(self, name):
        """
        Get the signature of a function as return type and parameter types.

        :param str name: The function name.
        :return: A 2-tuple containing the return type and the parameter types,
                 or None if the unit has no such function.
        :rtype: (str, tuple[str]) | None
        """
        function = self.function(name)
        if function is None:
            return None
        params = self.ast.child(function.id, 'params')
        return function.decl_type, tuple(self.ast.node(param_id).decl_type for param_id in params.children)
