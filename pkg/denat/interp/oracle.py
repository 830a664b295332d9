# encoding: utf-8
"""
Differential execution of two units: the semantic preservation check for
transformed code.
"""

import logging
from collections import namedtuple

from ..exceptions import ConfigurationError, SignatureMismatch
from ..utils.internal import derive_seed, make_rng
from .machine import DEFAULT_FUEL, ExternOracle, run
from .values import VOID_VALUE, Array, Bool, Int, Str

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 16
INT_ARGUMENT_RANGE = (-64, 64)
MAX_ARRAY_LENGTH = 8
MAX_STRING_LENGTH = 4
STRING_ALPHABET = 'ab \n'

EQUIVALENT = 'equivalent'
DIVERGENT = 'divergent'
INCONCLUSIVE = 'inconclusive'


class Witness(namedtuple('Witness', 'entry args left right')):
    """The input of the first diverging trial along with both results."""
    __slots__ = ()

    def to_json(self):
        return {
            'entry': self.entry,
            'args': [arg.to_json() for arg in self.args],
            'left': _describe(self.left),
            'right': _describe(self.right),
        }


def _describe(result):
    return {
        'status': str(result.status),
        'result': result.result.to_json() if result.result is not None else None,
        'trace': [[event.kind, event.callee, [arg.to_json() for arg in event.args],
                   event.returned.to_json() if event.returned is not None else None] for event in result.trace],
    }


class Verdict(namedtuple('Verdict', 'kind witness trials')):
    __slots__ = ()

    @property
    def equivalent(self):
        return self.kind == EQUIVALENT

    @property
    def divergent(self):
        return self.kind == DIVERGENT

    @property
    def inconclusive(self):
        return self.kind == INCONCLUSIVE


def random_value(rng, decl_type):
    """
    Draw a random argument value of the given type.

    :param random.Random rng: The random generator.
    :param str decl_type: The parameter type.
    :return: The value.
    :rtype: Value
    """
    if decl_type.endswith('[]'):
        return Array(random_value(rng, decl_type[:-2]) for _ in range(rng.randint(0, MAX_ARRAY_LENGTH)))
    if decl_type == 'int':
        return Int(rng.randint(*INT_ARGUMENT_RANGE))
    if decl_type == 'bool':
        return Bool(rng.random() < 0.5)
    if decl_type == 'str':
        return Str(''.join(rng.choice(STRING_ALPHABET) for _ in range(rng.randint(0, MAX_STRING_LENGTH))))
    return VOID_VALUE


def random_arguments(rng, param_types):
    return [random_value(rng, decl_type) for decl_type in param_types]


def check_signatures(a, b, entry):
    """
    Make sure that both units define the entry function with the same
    signature.

    :param denat.syntax.SourceUnit a: The first unit.
    :param denat.syntax.SourceUnit b: The second unit.
    :param str entry: The name of the entry function.
    :return: The shared signature.
    :rtype: (str, tuple[str])
    :raises SignatureMismatch: If the signatures differ or are missing.
    """
    signature = a.signature(entry)
    if signature is None:
        raise SignatureMismatch('Unit "{}" has no function "{}".'.format(a.name, entry))
    other = b.signature(entry)
    if other != signature:
        raise SignatureMismatch('Function "{}" has signature {} in unit "{}" but {} in unit "{}".'.format(
            entry, signature, a.name, other, b.name))
    return signature


def _prefix_equal(left, right):
    length = min(len(left), len(right))
    return left[:length] == right[:length]


def compare_trial(left, right):
    """
    Compare the results of both units for a single input.

    :param denat.interp.machine.ExecResult left: The result of the first unit.
    :param denat.interp.machine.ExecResult right: The result of the second
                                                  unit.
    :return: The verdict kind of the trial.
    :rtype: str
    """
    if left.fuel_exhausted or right.fuel_exhausted:
        if _prefix_equal(left.trace, right.trace):
            return INCONCLUSIVE
        return DIVERGENT
    return EQUIVALENT if left.comparable() == right.comparable() else DIVERGENT


def equivalent(a, b, entry, trials=DEFAULT_TRIALS, seed=0, fuel=DEFAULT_FUEL):
    """
    Check two units for observable equivalence by running the entry function
    of both on seeded random inputs with the same extern oracle.

    :param denat.syntax.SourceUnit a: The first unit.
    :param denat.syntax.SourceUnit b: The second unit.
    :param str entry: The name of the entry function.
    :param int trials: The number of random inputs.
    :param int seed: The seed for inputs and extern results.
    :param int fuel: The step budget of every single run.
    :return: The verdict.
    :rtype: Verdict
    :raises SignatureMismatch: If the units don't share the entry signature.
    """
    if trials < 1:
        raise ConfigurationError('At least one trial is required, got {}.'.format(trials))
    _, param_types = check_signatures(a, b, entry)
    rng = make_rng(derive_seed(seed, entry))
    inconclusive = False
    for trial in range(trials):
        args = random_arguments(rng, param_types)
        oracle_seed = derive_seed(seed, entry, trial)
        left = run(a, entry, args, ExternOracle(oracle_seed), fuel)
        right = run(b, entry, args, ExternOracle(oracle_seed), fuel)
        outcome = compare_trial(left, right)
        if outcome == DIVERGENT:
            logger.debug('"%s" diverges between "%s" and "%s" in trial %d.', entry, a.name, b.name, trial)
            return Verdict(DIVERGENT, Witness(entry, tuple(args), left, right), trial + 1)
        inconclusive = inconclusive or outcome == INCONCLUSIVE
    return Verdict(INCONCLUSIVE if inconclusive else EQUIVALENT, None, trials)


def equivalent_units(a, b, trials=DEFAULT_TRIALS, seed=0, fuel=DEFAULT_FUEL):
    """
    Check every function of two units for equivalence.

    :param denat.syntax.SourceUnit a: The first unit.
    :param denat.syntax.SourceUnit b: The second unit.
    :param int trials: The number of random inputs per function.
    :param int seed: The seed for inputs and extern results.
    :param int fuel: The step budget of every single run.
    :return: The first divergent verdict, otherwise an inconclusive verdict if
             any function was inconclusive, otherwise an equivalent verdict.
    :rtype: Verdict
    :raises SignatureMismatch: If the units don't define the same functions.
    """
    names = [function.lexeme for function in a.functions]
    other_names = [function.lexeme for function in b.functions]
    if sorted(names) != sorted(other_names):
        raise SignatureMismatch('Units "{}" and "{}" define different functions: {} vs. {}.'.format(
            a.name, b.name, names, other_names))
    verdicts = []
    for name in names:
        verdict = equivalent(a, b, name, trials, seed, fuel)
        if verdict.divergent:
            return verdict
        verdicts.append(verdict)
    total = sum(verdict.trials for verdict in verdicts)
    if any(verdict.inconclusive for verdict in verdicts):
        return Verdict(INCONCLUSIVE, None, total)
    return Verdict(EQUIVALENT, None, total)
