# encoding: utf-8
"""The ``denat`` command line interface."""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .exceptions import ConfigurationError, DataflowError, DenatError, MiniLangSyntaxError, NoApplicableRule
from .interp import DEFAULT_FUEL
from .pipeline import (
    DEFAULT_TRIALS, DEFAULT_VALID_FRACTION, GenerationConfig, audit, evaluate, generate_pairs, ingest, load_unit,
    read_jsonl, read_records, split, write_evaluation, write_generation, write_json,
)
from .transforms import RuleConfig, TransformRuleId, apply, apply_rule
from .transforms.base import DEFAULT_RENAME_FRACTION, DEFAULT_RENAME_PREFIX

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_INPUT_ERROR = 2
EXIT_NO_APPLICABLE_RULE = 3
EXIT_DIVERGENCE = 4

SEED_VARIABLE = 'DENAT_SEED'
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def default_seed():
    """
    Get the seed used when no ``--seed`` is given: the value of the
    ``DENAT_SEED`` environment variable or 0.

    :rtype: int
    """
    value = os.environ.get(SEED_VARIABLE, '').strip()
    if not value:
        return 0
    try:
        return int(value)
    except ValueError:
        raise ConfigurationError('{} must be an integer, got "{}".'.format(SEED_VARIABLE, value))


def _rule_name(value):
    try:
        return TransformRuleId.from_name(value)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(str(e))


def _rule_list(value):
    return [_rule_name(name) for name in value.split(',') if name.strip()]


def _fraction(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError('"{}" is not a number.'.format(value))
    if not 0 <= number <= 1:
        raise argparse.ArgumentTypeError('{} is not in [0, 1].'.format(value))
    return number


def _add_rule_options(parser):
    parser.add_argument('--seed', type=int, default=None,
                        help='master seed (default: ${} or 0)'.format(SEED_VARIABLE))
    parser.add_argument('--rules', type=_rule_list, default=None, metavar='RULE[,RULE...]',
                        help='enabled rules (default: all): {}'.format(', '.join(rule.cli_name
                                                                                 for rule in TransformRuleId)))
    parser.add_argument('--rename-fraction', type=_fraction, default=DEFAULT_RENAME_FRACTION,
                        help='fraction of variables renamed by var-rename (default: %(default)s)')
    parser.add_argument('--rename-prefix', default=DEFAULT_RENAME_PREFIX,
                        help='prefix of renamed variables (default: %(default)s)')
    parser.add_argument('--compound-donors', action='store_true',
                        help='allow if/loop statements as dead code')


def _add_check_options(parser):
    parser.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                        help='random inputs per function for the equivalence check (default: %(default)s)')
    parser.add_argument('--fuel', type=int, default=DEFAULT_FUEL,
                        help='interpreter step budget per run (default: %(default)s)')


def build_parser():
    parser = argparse.ArgumentParser(prog='denat', description='Semantics preserving de-naturalization of '
                                                               'MiniLang code and evaluation of naturalization.')
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='log warnings and errors only')
    parser.add_argument('--no-progress', action='store_true', help='never show progress bars')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    transform = commands.add_parser('transform', help='transform a single file and print the result')
    transform.add_argument('file', help='MiniLang source file')
    transform.add_argument('--rule', type=_rule_name, default=None, help='force this rule')
    _add_rule_options(transform)

    generate = commands.add_parser('generate', help='build a pair dataset from a corpus')
    generate.add_argument('inputs', nargs='+', metavar='PATH', help='MiniLang files or directories')
    generate.add_argument('--out', required=True, help='output directory')
    generate.add_argument('--jobs', type=int, default=None,
                          help='worker processes (default: available parallelism)')
    generate.add_argument('--dedup', action='store_true', help='drop units with duplicate canonical text')
    generate.add_argument('--per-rule', action='store_true', help='emit one record per applicable rule')
    generate.add_argument('--strict', action='store_true', help='fail if any record is quarantined')
    _add_rule_options(generate)
    _add_check_options(generate)

    split_parser = commands.add_parser('split', help='split a dataset into training and validation ids')
    split_parser.add_argument('dataset', help='pair dataset (JSON lines)')
    split_parser.add_argument('--out', required=True, help='manifest file')
    split_parser.add_argument('--valid-fraction', type=_fraction, default=DEFAULT_VALID_FRACTION,
                              help='validation fraction (default: %(default)s)')
    split_parser.add_argument('--split-seed', type=int, default=0, help='seed of the sampling (default: 0)')

    evaluate_parser = commands.add_parser('evaluate', help='score hypotheses against a dataset')
    evaluate_parser.add_argument('dataset', help='pair dataset (JSON lines)')
    evaluate_parser.add_argument('hypotheses', help='hypotheses (JSON lines with id and hypothesis)')
    evaluate_parser.add_argument('--out', required=True, help='output directory')

    check = commands.add_parser('check', help='re-check the semantic equivalence of a dataset')
    check.add_argument('dataset', help='pair dataset (JSON lines)')
    check.add_argument('--seed', type=int, default=None,
                       help='seed of inputs and extern results (default: ${} or 0)'.format(SEED_VARIABLE))
    _add_check_options(check)
    return parser


def configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format=LOG_FORMAT)


def show_progress(args):
    return not args.no_progress and sys.stderr.isatty()


def rule_config(args, per_rule=False):
    return RuleConfig(rename_fraction=args.rename_fraction, rules_enabled=args.rules,
                      rename_prefix=args.rename_prefix, allow_compound_donors=args.compound_donors,
                      per_rule=per_rule)


def seed_of(args):
    return args.seed if args.seed is not None else default_seed()


def _print_json(data, stream):
    stream.write(json.dumps(data, ensure_ascii=False, indent=2))
    stream.write('\n')


def cmd_transform(args):
    unit = load_unit(args.file)
    config = rule_config(args)
    seed = seed_of(args)
    if args.rule is not None:
        outcome = apply_rule(unit, args.rule, config, seed)
    else:
        outcome = apply(unit, config, seed)
    sys.stdout.write(outcome.transformed.canonical_text + '\n')
    span = outcome.site_span
    _print_json({
        'rule': outcome.rule.value,
        'site_span': [span.start, span.end],
        'seed': str(seed),
        'auxiliary': outcome.auxiliary,
    }, sys.stderr)
    return EXIT_OK


def cmd_generate(args):
    progress = show_progress(args)
    ingested = ingest(args.inputs, progress)
    config = GenerationConfig(rule_config(args, args.per_rule), seed_of(args), args.trials, args.jobs, args.dedup,
                              args.fuel)
    result = generate_pairs(ingested.units, config, progress)
    write_generation(result, args.out)
    summary = result.report.to_json()
    summary['parse_skipped'] = len(ingested.skipped)
    _print_json(summary, sys.stderr)
    if args.strict and result.rejected:
        return EXIT_DIVERGENCE
    return EXIT_OK


def cmd_split(args):
    manifest = split(read_records(args.dataset), args.valid_fraction, args.split_seed)
    directory = os.path.dirname(args.out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    write_json(manifest.to_json(), args.out)
    logger.info('Split %d records: %d for training, %d for validation.',
                len(manifest.train_ids) + len(manifest.valid_ids), len(manifest.train_ids), len(manifest.valid_ids))
    return EXIT_OK


def cmd_evaluate(args):
    result = evaluate(read_records(args.dataset), read_jsonl(args.hypotheses), progress=show_progress(args))
    write_evaluation(result, args.out)
    _print_json(result.summary, sys.stderr)
    return EXIT_OK


def cmd_check(args):
    result = audit(read_records(args.dataset), args.trials, seed_of(args), args.fuel, show_progress(args))
    for record, witness in result.divergent:
        _print_json({'id': record.id, 'rule': record.rule, 'witness': witness.to_json()}, sys.stderr)
    for record, reason in result.invalid:
        _print_json({'id': record.id, 'rule': record.rule, 'error': reason}, sys.stderr)
    if result.divergent:
        return EXIT_DIVERGENCE
    if result.invalid:
        return EXIT_INPUT_ERROR
    return EXIT_OK


COMMANDS = {
    'transform': cmd_transform,
    'generate': cmd_generate,
    'split': cmd_split,
    'evaluate': cmd_evaluate,
    'check': cmd_check,
}


def main(argv=None):
    """
    Run the command line interface.

    :param list[str] | None argv: The arguments (``sys.argv[1:]`` by default).
    :return: The exit code.
    :rtype: int
    """
    args = build_parser().parse_args(argv)
    configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except (MiniLangSyntaxError, DataflowError) as e:
        logger.error('%s', e)
        return EXIT_INPUT_ERROR
    except NoApplicableRule as e:
        logger.error('%s', e)
        return EXIT_NO_APPLICABLE_RULE
    except (OSError, DenatError) as e:
        logger.error('%s', e)
        return EXIT_FATAL


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
