# encoding: utf-8
"""Runtime values of the MiniLang interpreter."""

from collections import namedtuple

INT = 'int'
BOOL = 'bool'
STR = 'str'
ARRAY = 'array'
VOID = 'void'

INT_BITS = 64
_INT_RANGE = 1 << INT_BITS
_INT_MIN = -(1 << (INT_BITS - 1))


def wrap(number):
    """
    Wrap an arbitrary integer into the signed 64-bit range.

    :param int number: The integer.
    :return: The wrapped integer.
    :rtype: int
    """
    return (number - _INT_MIN) % _INT_RANGE + _INT_MIN


class Value(namedtuple('Value', 'tag data')):
    """
    A tagged runtime value. Arrays hold a tuple of values and therefore have
    value semantics: writing an element produces a new array.
    """
    __slots__ = ()

    def __repr__(self):
        return '{}({!r})'.format(self.tag, self.data)

    def to_json(self):
        """
        Convert the value to a JSON-compatible representation.

        :return: The plain Python value (None for void).
        """
        if self.tag == ARRAY:
            return [item.to_json() for item in self.data]
        return self.data


def Int(number):
    return Value(INT, wrap(number))


def Bool(flag):
    return Value(BOOL, bool(flag))


def Str(text):
    return Value(STR, text)


def Array(items):
    return Value(ARRAY, tuple(items))


def IntArray(numbers):
    return Array(Int(number) for number in numbers)


VOID_VALUE = Value(VOID, None)


def default_value(decl_type):
    """
    Get the value of a declared but not initialized variable.

    :param str decl_type: The declared type.
    :return: The default value.
    :rtype: Value
    """
    if decl_type.endswith('[]'):
        return Array(())
    return {
        'int': Int(0),
        'bool': Bool(False),
        'str': Str(''),
    }.get(decl_type, VOID_VALUE)


def from_json(data, decl_type):
    """
    Convert a plain Python value into a runtime value of the given type.

    :param data: The plain value.
    :param str decl_type: The declared type.
    :return: The runtime value.
    :rtype: Value
    """
    if decl_type.endswith('[]'):
        return Array(from_json(item, decl_type[:-2]) for item in data)
    if decl_type == 'int':
        return Int(int(data))
    if decl_type == 'bool':
        return Bool(data)
    if decl_type == 'str':
        return Str(str(data))
    return VOID_VALUE


def unescape(lexeme):
    """
    Decode a string literal lexeme (including its quotes).

    :param str lexeme: The literal.
    :return: The decoded text.
    :rtype: str
    """
    escapes = {'"': '"', '\\': '\\', 'n': '\n', 't': '\t'}
    characters = []
    iterator = iter(lexeme[1:-1])
    for character in iterator:
        if character == '\\':
            character = escapes[next(iterator)]
        characters.append(character)
    return ''.join(characters)
