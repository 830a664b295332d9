# encoding: utf-8

from .nodes import Ast, AstNode, Node, NodeKind
from .parser import parse, parse_expression, parse_statement, parse_text
from .printer import iter_lexemes, unparse
from .tokens import Span, Token, lex, make_token
from .unit import LANGUAGE, SourceUnit

__all__ = (
    'Ast', 'AstNode', 'LANGUAGE', 'Node', 'NodeKind', 'SourceUnit', 'Span', 'Token', 'iter_lexemes', 'lex',
    'make_token', 'parse', 'parse_expression', 'parse_statement', 'parse_text', 'unparse',
)
