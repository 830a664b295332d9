# encoding: utf-8


class DenatError(Exception):
    """Base class for all errors raised by denat."""


class ConfigurationError(DenatError, ValueError):
    """A configuration value is out of its allowed range."""


class MiniLangSyntaxError(DenatError):
    """Some kind of problem with the syntax of a MiniLang source text."""

    def __init__(self, message, span=None):
        super(MiniLangSyntaxError, self).__init__(message)
        self.span = span

    @property
    def offset(self):
        return self.span.start if self.span is not None else None


class LexError(MiniLangSyntaxError):
    """The source text contains a character sequence outside the MiniLang alphabet."""

    def __init__(self, message, offset):
        from .syntax.tokens import Span

        super(LexError, self).__init__('{} (at byte offset {})'.format(message, offset), Span(offset, offset + 1))


class ParseError(MiniLangSyntaxError):
    """The token stream does not follow the MiniLang grammar."""

    def __init__(self, token, expected):
        if token is None:
            found, span = 'end of input', None
        else:
            found, span = '"{}"'.format(token.lexeme), token.span
        message = 'Expected {}, found {}'.format(expected, found)
        if span is not None:
            message = '{} at byte offset {}'.format(message, span.start)
        super(ParseError, self).__init__(message, span)
        self.expected = expected


class MisplacedJump(MiniLangSyntaxError):
    """A ``break`` or ``continue`` statement appears outside of any loop."""

    def __init__(self, token):
        super(MisplacedJump, self).__init__('"{}" outside of a loop at byte offset {}'.format(
            token.lexeme, token.span.start), token.span)


class NestingTooDeep(MiniLangSyntaxError):
    """The statements or expressions of a unit are nested too deeply."""

    def __init__(self, limit, span=None):
        message = 'Nesting exceeds {} levels'.format(limit)
        if span is not None:
            message = '{} at byte offset {}'.format(message, span.start)
        super(NestingTooDeep, self).__init__(message, span)
        self.limit = limit


class DataflowError(DenatError):
    """The variables of a unit can't be resolved consistently."""


class UnresolvedVariable(DataflowError):
    """A variable is used without a visible declaration."""

    def __init__(self, name, span=None):
        location = ' at byte offset {}'.format(span.start) if span is not None else ''
        super(UnresolvedVariable, self).__init__('Variable "{}" is not declared{}.'.format(name, location))
        self.name = name
        self.span = span


class UnknownName(DataflowError):
    """A name was queried that is never declared in the unit."""

    def __init__(self, name):
        super(UnknownName, self).__init__('Name "{}" is never declared.'.format(name))
        self.name = name


class TransformError(DenatError):
    """A transformation rule can't be applied at the requested site."""

    def __init__(self, message, rule=None, site=None):
        super(TransformError, self).__init__(message)
        self.rule = rule
        self.site = site


class NotALoopSite(TransformError):
    pass


class NoDonorStatement(TransformError):
    pass


class NoElseBranch(TransformError):
    pass


class IneligibleOperator(TransformError):
    pass


class PatternMismatch(TransformError):
    pass


class NothingToRename(TransformError):
    pass


class VacuousTransform(TransformError):
    """Applying the rule would not change the text of the unit."""


class NoApplicableRule(DenatError):
    """None of the enabled rules applies anywhere in the unit."""


class SignatureMismatch(DenatError):
    """Two units don't share the signature of the entry function."""


class EmptyCorpus(DenatError):
    """An operation that requires data was given none."""


class AlignmentError(DenatError):
    """Hypotheses are not aligned with the dataset records."""

    def __init__(self, index, expected_id, actual_id):
        super(AlignmentError, self).__init__('Hypothesis #{} has id "{}", but record id "{}" was expected.'.format(
            index, actual_id, expected_id))
        self.index = index
        self.expected_id = expected_id
        self.actual_id = actual_id
