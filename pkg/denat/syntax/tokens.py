# encoding: utf-8
"""Tokens of the MiniLang subset and the lexer producing them."""

import re
from collections import namedtuple

from ..exceptions import LexError

KEYWORD = 'keyword'
IDENTIFIER = 'identifier'
INT_LITERAL = 'int-literal'
STRING_LITERAL = 'string-literal'
OPERATOR = 'operator'
PUNCTUATION = 'punctuation'

KEYWORDS = frozenset((
    'int', 'bool', 'str', 'void', 'if', 'else', 'for', 'while', 'return', 'break', 'continue', 'true', 'false',
))
TYPE_KEYWORDS = frozenset(('int', 'bool', 'str', 'void'))

# Longest operators first so that the alternation implements maximal munch.
OPERATORS = (
    '++', '--', '+=', '-=', '*=', '/=', '%=', '==', '!=', '<=', '>=', '&&', '||',
    '+', '-', '*', '/', '%', '<', '>', '=', '!', '?', ':',
)
PUNCTUATIONS = ('(', ')', '{', '}', '[', ']', ',', ';')

_TOKEN_PATTERNS = (
    ('space', br'[ \t\r\n\f\v]+'),
    ('comment', br'//[^\n]*|/\*.*?\*/'),
    ('bad_number', br'[0-9]+[A-Za-z_][A-Za-z0-9_]*'),
    (INT_LITERAL, br'[0-9]+'),
    (STRING_LITERAL, br'"(?:[^"\\\n]|\\["\\nt])*"'),
    ('word', br'[A-Za-z_][A-Za-z0-9_]*'),
    (OPERATOR, b'|'.join(re.escape(op.encode('ascii')) for op in OPERATORS)),
    (PUNCTUATION, b'|'.join(re.escape(p.encode('ascii')) for p in PUNCTUATIONS)),
)
_MASTER_PATTERN = re.compile(
    b'|'.join(b'(?P<' + name.replace('-', '_').encode('ascii') + b'>' + pattern + b')'
              for name, pattern in _TOKEN_PATTERNS),
    re.DOTALL,
)
_GROUP_KINDS = {name.replace('-', '_'): name for name, _ in _TOKEN_PATTERNS}


class Span(namedtuple('Span', 'start end')):
    """A half-open range of UTF-8 byte offsets into a source text."""
    __slots__ = ()

    def __str__(self):
        return '{}..{}'.format(self.start, self.end)

    def cover(self, other):
        """
        Build the smallest span containing both this span and the given one.

        :param Span | None other: The other span. None is ignored.
        :return: The covering span.
        :rtype: Span
        """
        if other is None:
            return self
        return Span(min(self.start, other.start), max(self.end, other.end))


class Token(namedtuple('Token', 'kind lexeme span')):
    """
    A single MiniLang token. The lexeme is the exact source slice at the
    token's span.
    """
    __slots__ = ()

    def __repr__(self):
        return '<Token: {} {!r}>'.format(self.kind, self.lexeme)

    def is_(self, *lexemes):
        """
        Check if this token is an operator, punctuation or keyword token with
        one of the given lexemes.

        :param str lexemes: The lexemes to check against.
        :return: True if the lexeme matches; otherwise False.
        :rtype: bool
        """
        return self.kind in (KEYWORD, OPERATOR, PUNCTUATION) and self.lexeme in lexemes


def lex(text):
    """
    Split a MiniLang source text into tokens using maximal munch. Whitespace
    and comments are discarded.

    :param text: The source text (or its UTF-8 encoded bytes).
    :type text: str | bytes
    :return: The token list in source order.
    :rtype: list[Token]
    :raises LexError: If a character outside the MiniLang alphabet is found
                      or a number literal is malformed.
    """
    data = text.encode('utf-8') if isinstance(text, str) else text
    tokens = []
    position = 0
    while position < len(data):
        if data.startswith(b'/*', position) and data.find(b'*/', position + 2) < 0:
            raise LexError('Unterminated comment', position)
        match = _MASTER_PATTERN.match(data, position)
        if match is None:
            if data.startswith(b'"', position):
                raise LexError('Unterminated or malformed string literal', position)
            raise LexError('Unexpected character {!r}'.format(data[position:position + 1].decode('utf-8', 'replace')),
                           position)
        kind = _GROUP_KINDS[match.lastgroup]
        if kind == 'bad_number':
            raise LexError('Malformed number literal "{}"'.format(match.group().decode('ascii')), position)
        if kind not in ('space', 'comment'):
            lexeme = match.group().decode('utf-8')
            if kind == 'word':
                kind = KEYWORD if lexeme in KEYWORDS else IDENTIFIER
            tokens.append(Token(kind, lexeme, Span(match.start(), match.end())))
        position = match.end()
    return tokens


def make_token(lexeme, kind=None):
    """
    Create a synthetic token (without a meaningful source position) for
    rewritten trees.

    :param str lexeme: The token text.
    :param str | None kind: The token kind. Determined from the lexeme if
                            omitted.
    :return: The token.
    :rtype: Token
    """
    if kind is None:
        if lexeme in KEYWORDS:
            kind = KEYWORD
        elif lexeme in OPERATORS:
            kind = OPERATOR
        elif lexeme in PUNCTUATIONS:
            kind = PUNCTUATION
        elif lexeme.isdigit():
            kind = INT_LITERAL
        elif lexeme.startswith('"'):
            kind = STRING_LITERAL
        else:
            kind = IDENTIFIER
    return Token(kind, lexeme, None)
