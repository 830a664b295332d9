# encoding: utf-8
"""
Corpus level operations: reading MiniLang files, producing the pair dataset,
splitting it and evaluating hypotheses of a naturalization model against it.
"""

import json
import logging
import os
from collections import OrderedDict, defaultdict, namedtuple
from fractions import Fraction
from math import floor
from multiprocessing import Pool
from statistics import median_low

from tqdm import tqdm

from .dataflow import build_def_use
from .exceptions import (
    AlignmentError, ConfigurationError, DataflowError, EmptyCorpus, MiniLangSyntaxError, NoApplicableRule,
    SignatureMismatch,
)
from .interp import DEFAULT_FUEL, equivalent_units
from .metrics import DEFAULT_WEIGHTS, bucket_report, copy_analysis, score_pair, summarize, write_csv
from .syntax import LANGUAGE, SourceUnit
from .transforms import RuleConfig, apply, apply_each
from .utils.internal import derive_seed, digest, make_rng

logger = logging.getLogger(__name__)

SOURCE_SUFFIX = '.mini'
DEFAULT_VALID_FRACTION = 0.001
DEFAULT_TRIALS = 16
RECORD_ID_LENGTH = 16

PAIRS_FILE = 'pairs.jsonl'
REJECTED_FILE = 'rejected.jsonl'
GENERATION_REPORT_FILE = 'report.json'
EVALUATION_CSV_FILE = 'report.csv'
EVALUATION_SUMMARY_FILE = 'summary.json'


def record_id(original, seed, rule=None):
    """
    Build the stable id of a record from its canonical original text and its
    seed (and the rule for datasets with one record per applicable rule).

    :rtype: str
    """
    parts = (original, seed) if rule is None else (original, seed, rule)
    return digest(*parts)[:RECORD_ID_LENGTH]


def unit_seed(master_seed, text):
    return derive_seed(master_seed, text)


class PairRecord(namedtuple('PairRecord', 'id language original transformed rule site_span seed auxiliary')):
    """A single (de-naturalized, natural) training pair."""
    __slots__ = ()

    @classmethod
    def from_outcome(cls, outcome, per_rule=False):
        """
        Build a record from a transformation outcome.

        :param denat.transforms.TransformOutcome outcome: The outcome.
        :param bool per_rule: Whether the dataset holds one record per
                              applicable rule (which makes the rule part of
                              the id).
        :rtype: PairRecord
        """
        original = outcome.original.canonical_text
        span = outcome.site_span
        return cls(
            record_id(original, outcome.seed, outcome.rule.value if per_rule else None),
            outcome.original.language,
            original,
            outcome.transformed.canonical_text,
            outcome.rule.value,
            (span.start, span.end),
            str(outcome.seed),
            outcome.auxiliary,
        )

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data['id'], data.get('language', LANGUAGE), data['original'], data['transformed'],
                       data['rule'], tuple(data['site_span']), str(data['seed']), data.get('auxiliary', {}))
        except (KeyError, TypeError) as e:
            raise ConfigurationError('Invalid pair record {!r}: {}'.format(data, e))

    def to_json(self):
        data = OrderedDict(zip(self._fields, self))
        data['site_span'] = list(self.site_span)
        return data


class SplitManifest(namedtuple('SplitManifest', 'train_ids valid_ids valid_fraction split_seed')):
    __slots__ = ()

    def to_json(self):
        return OrderedDict([
            ('train_ids', list(self.train_ids)),
            ('valid_ids', list(self.valid_ids)),
            ('valid_fraction', self.valid_fraction),
            ('split_seed', self.split_seed),
        ])


class GenerationConfig(namedtuple('GenerationConfig', 'rule_config master_seed trials jobs dedup fuel')):
    """Settings of a dataset generation run."""
    __slots__ = ()

    def __new__(cls, rule_config=None, master_seed=0, trials=DEFAULT_TRIALS, jobs=1, dedup=False, fuel=DEFAULT_FUEL):
        if trials < 1:
            raise ConfigurationError('At least one equivalence trial is required, got {}.'.format(trials))
        if jobs is None:
            jobs = os.cpu_count() or 1
        if jobs < 1:
            raise ConfigurationError('The number of jobs must be positive, got {}.'.format(jobs))
        if fuel < 1:
            raise ConfigurationError('The fuel must be positive, got {}.'.format(fuel))
        return super(GenerationConfig, cls).__new__(cls, rule_config or RuleConfig(), int(master_seed), int(trials),
                                                    int(jobs), bool(dedup), int(fuel))


SkippedFile = namedtuple('SkippedFile', 'path reason span')


class IngestResult(namedtuple('IngestResult', 'units skipped')):
    __slots__ = ()

    def to_json(self):
        return OrderedDict([
            ('units', len(self.units)),
            ('skipped', [OrderedDict([('path', skipped.path), ('reason', skipped.reason),
                                      ('span', list(skipped.span) if skipped.span else None)])
                         for skipped in self.skipped]),
        ])


class GenerationReport(namedtuple('GenerationReport', 'units emitted no_rule quarantined inconclusive duplicates '
                                                      'errors rules')):
    """
    The counters of a generation run. Every unit ends up emitted, skipped for
    lack of an applicable rule, quarantined, dropped as duplicate or failed.
    """
    __slots__ = ()

    def to_json(self):
        data = OrderedDict(zip(self._fields, self))
        data['rules'] = OrderedDict(sorted(self.rules.items()))
        return data


GenerationResult = namedtuple('GenerationResult', 'records rejected report')
EvaluationResult = namedtuple('EvaluationResult', 'rows summary reports')
AuditResult = namedtuple('AuditResult', 'checked divergent inconclusive invalid')


def _progress(iterable, enabled, total=None, description=None):
    return tqdm(iterable, total=total, desc=description, unit='unit', disable=not enabled, leave=False)


# Ingestion

def iter_source_files(paths):
    """
    Expand files and directories into the MiniLang files they denote.
    Directories are searched recursively and their files sorted by path.

    :param collections.Iterable[str] paths: The files and directories.
    :return: A generator yielding file paths; missing paths yield an
             :class:`OSError` instead.
    """
    for path in paths:
        if os.path.isdir(path):
            found = []
            for directory, _, files in os.walk(path):
                found.extend(os.path.join(directory, name) for name in files if name.endswith(SOURCE_SUFFIX))
            for file_path in sorted(found):
                yield file_path
        elif os.path.isfile(path):
            yield path
        else:
            yield OSError('No such file or directory: "{}"'.format(path))


def load_unit(path):
    """
    Read, parse and analyze a MiniLang file.

    :param str path: The file path.
    :return: The unit.
    :rtype: SourceUnit
    :raises OSError: If the file can't be read.
    :raises MiniLangSyntaxError: If the file doesn't parse.
    :raises DataflowError: If its variables can't be resolved.
    """
    with open(path, encoding='utf-8') as f:
        text = f.read()
    unit = SourceUnit.from_text(text, path)
    build_def_use(unit.ast)
    return unit


def ingest(paths, progress=False):
    """
    Load every MiniLang file below the given paths. Files that can't be read,
    parsed or analyzed are skipped and reported.

    :param collections.Iterable[str] paths: Files and directories.
    :param bool progress: Whether to show a progress bar.
    :return: The units and the skipped files.
    :rtype: IngestResult
    """
    units, skipped = [], []
    for path in _progress(list(iter_source_files(paths)), progress, description='ingest'):
        if isinstance(path, OSError):
            logger.warning('%s', path)
            skipped.append(SkippedFile(str(path), 'io-error', None))
            continue
        try:
            units.append(load_unit(path))
        except (OSError, UnicodeDecodeError) as e:
            logger.warning('Could not read "%s": %s', path, e)
            skipped.append(SkippedFile(path, 'io-error', None))
        except MiniLangSyntaxError as e:
            logger.info('Skipping "%s": %s', path, e)
            skipped.append(SkippedFile(path, 'syntax-error: {}'.format(e), e.span))
        except DataflowError as e:
            logger.info('Skipping "%s": %s', path, e)
            skipped.append(SkippedFile(path, 'dataflow-error: {}'.format(e), getattr(e, 'span', None)))
    logger.info('Ingested %d units, skipped %d files.', len(units), len(skipped))
    return IngestResult(units, skipped)


# Generation

NO_RULE = 'no-rule'
PROCESSED = 'processed'
FAILED = 'failed'

UnitResult = namedtuple('UnitResult', 'status records rejected inconclusive')


def process_unit(text, name, config):
    """
    Transform a single unit and gate the outcomes through the equivalence
    oracle.

    :param str text: The source text of the unit.
    :param str name: The name of the unit.
    :param GenerationConfig config: The generation settings.
    :return: The emitted and the quarantined records (as JSON objects).
    :rtype: UnitResult
    """
    rule_config = config.rule_config
    try:
        unit = SourceUnit.from_text(text, name)
        seed = unit_seed(config.master_seed, text)
        if rule_config.per_rule:
            outcomes = apply_each(unit, rule_config, seed)
        else:
            outcomes = [apply(unit, rule_config, seed)]
    except NoApplicableRule as e:
        logger.debug('%s', e)
        return UnitResult(NO_RULE, [], [], 0)
    except (MiniLangSyntaxError, DataflowError) as e:
        logger.warning('Could not transform "%s": %s', name, e)
        return UnitResult(FAILED, [], [], 0)

    records, rejected, inconclusive = [], [], 0
    for outcome in outcomes:
        record = PairRecord.from_outcome(outcome, rule_config.per_rule).to_json()
        try:
            verdict = equivalent_units(outcome.original, outcome.transformed, config.trials, seed, config.fuel)
        except SignatureMismatch as e:
            record['witness'] = {'error': str(e)}
            rejected.append(record)
            continue
        if verdict.divergent:
            logger.warning('Quarantined %s record of "%s": transformed code diverges.', record['rule'], name)
            record['witness'] = verdict.witness.to_json()
            rejected.append(record)
        else:
            inconclusive += verdict.inconclusive
            records.append(record)
    return UnitResult(PROCESSED, records, rejected, inconclusive)


def _process_task(task):
    return process_unit(*task)


def _unique_units(units, dedup):
    seen = set()
    for unit in units:
        if dedup:
            key = digest(unit.canonical_text)
            if key in seen:
                yield None
                continue
            seen.add(key)
        yield unit


def generate_pairs(units, config=None, progress=False):
    """
    Build the pair dataset: apply one rule to every unit (or every applicable
    rule in per-rule mode) and keep the outcomes that the equivalence oracle
    doesn't reject. The output order follows the input order regardless of the
    number of worker processes.

    :param list[SourceUnit] units: The corpus.
    :param GenerationConfig | None config: The generation settings.
    :param bool progress: Whether to show a progress bar.
    :return: The records, the quarantined records and the counters.
    :rtype: GenerationResult
    :raises EmptyCorpus: If no units are given.
    """
    config = config or GenerationConfig()
    units = list(units)
    if not units:
        raise EmptyCorpus('Cannot generate pairs without any units.')

    counters = defaultdict(int)
    rules = defaultdict(int)
    tasks = []
    for unit in _unique_units(units, config.dedup):
        if unit is None:
            counters['duplicates'] += 1
        else:
            tasks.append((unit.text, unit.name, config))

    records, rejected = [], []
    if config.jobs > 1 and len(tasks) > 1:
        with Pool(config.jobs) as pool:
            results = list(_progress(pool.imap(_process_task, tasks, chunksize=4), progress, len(tasks),
                                     'generate'))
    else:
        results = [_process_task(task) for task in _progress(tasks, progress, len(tasks), 'generate')]

    for result in results:
        if result.status == NO_RULE:
            counters['no_rule'] += 1
        elif result.status == FAILED:
            counters['errors'] += 1
        elif result.records:
            counters['emitted'] += 1
        else:
            counters['quarantined'] += 1
        counters['inconclusive'] += result.inconclusive
        for record in result.records:
            rules[record['rule']] += 1
        records.extend(result.records)
        rejected.extend(result.rejected)

    report = GenerationReport(len(units), counters['emitted'], counters['no_rule'], counters['quarantined'],
                              counters['inconclusive'], counters['duplicates'], counters['errors'], dict(rules))
    logger.info('Generated %d records from %d units (%d without applicable rule, %d quarantined).',
                len(records), len(units), report.no_rule, report.quarantined)
    return GenerationResult(records, rejected, report)


# Splitting

def validation_size(total, fraction):
    """
    Get the number of validation records: the fraction of the total rounded
    half up, but at least one for a non-empty corpus.

    :rtype: int
    """
    if total < 1:
        return 0
    size = int(floor(Fraction(str(fraction)) * total + Fraction(1, 2)))
    return min(total, max(1, size))


def allocate(counts, size):
    """
    Distribute a number of validation slots over strata proportionally to
    their sizes using the largest remainder method.

    :param dict[str, int] counts: The size of every stratum.
    :param int size: The number of slots.
    :return: The number of slots of every stratum.
    :rtype: dict[str, int]
    """
    total = sum(counts.values())
    exact = {key: Fraction(count * size, total) for key, count in counts.items()}
    quotas = {key: int(floor(value)) for key, value in exact.items()}
    remaining = size - sum(quotas.values())
    for key in sorted(exact, key=lambda key: (-(exact[key] - quotas[key]), key))[:remaining]:
        quotas[key] += 1
    return quotas


def split(records, valid_fraction=DEFAULT_VALID_FRACTION, split_seed=0):
    """
    Split a dataset into training and validation ids. The validation set is
    sampled per rule so that it follows the rule distribution of the corpus.

    :param records: The records (or their JSON objects).
    :type records: list[PairRecord | dict]
    :param float valid_fraction: The validation fraction in [0, 1].
    :param int split_seed: The seed of the sampling.
    :return: The manifest listing ids in dataset order.
    :rtype: SplitManifest
    :raises EmptyCorpus: If no records are given.
    """
    if not 0 <= valid_fraction <= 1:
        raise ConfigurationError('The validation fraction must be in [0, 1], got {}.'.format(valid_fraction))
    records = [record if isinstance(record, PairRecord) else PairRecord.from_json(record) for record in records]
    if not records:
        raise EmptyCorpus('Cannot split an empty dataset.')
    strata = OrderedDict()
    for record in records:
        strata.setdefault(record.rule, []).append(record.id)
    quotas = allocate({rule: len(ids) for rule, ids in strata.items()},
                      validation_size(len(records), valid_fraction))
    valid = set()
    for rule, ids in strata.items():
        shuffled = list(ids)
        make_rng(derive_seed(split_seed, rule)).shuffle(shuffled)
        valid.update(shuffled[:quotas[rule]])
    order = [record.id for record in records]
    return SplitManifest([id_ for id_ in order if id_ not in valid], [id_ for id_ in order if id_ in valid],
                         valid_fraction, split_seed)


# Evaluation

def check_alignment(records, hypotheses):
    """
    Make sure hypotheses and records refer to the same ids in the same order.

    :param list[PairRecord] records: The dataset records.
    :param list[dict] hypotheses: The hypothesis objects.
    :raises AlignmentError: On the first mismatch.
    """
    for index in range(max(len(records), len(hypotheses))):
        expected = records[index].id if index < len(records) else None
        actual = hypotheses[index].get('id') if index < len(hypotheses) else None
        if expected != actual:
            raise AlignmentError(index, expected, actual)


def evaluate(records, hypotheses, weights=DEFAULT_WEIGHTS, progress=False):
    """
    Score model hypotheses against the original code of their records.

    :param records: The dataset records.
    :type records: list[PairRecord | dict]
    :param list[dict] hypotheses: Objects with ``id`` and ``hypothesis`` in the
                                  order of the records.
    :param denat.metrics.MetricWeights weights: The CodeBLEU weights.
    :param bool progress: Whether to show a progress bar.
    :return: The per-rule rows, the overall summary and every single report.
    :rtype: EvaluationResult
    :raises AlignmentError: If the hypotheses don't match the records.
    :raises EmptyCorpus: If there is nothing to evaluate.
    """
    records = [record if isinstance(record, PairRecord) else PairRecord.from_json(record) for record in records]
    check_alignment(records, hypotheses)
    if not records:
        raise EmptyCorpus('Cannot evaluate an empty dataset.')
    reports = []
    for record, hypothesis in _progress(list(zip(records, hypotheses)), progress, description='evaluate'):
        reports.append(score_pair(hypothesis.get('hypothesis', ''), record.original, record.transformed, weights))

    copies = copy_analysis((record.transformed, hypothesis.get('hypothesis', ''))
                           for record, hypothesis in zip(records, hypotheses))
    summary = summarize(reports)
    summary['copy_rate'] = copies.copy_rate
    summary['median_edit_distance_to_input'] = copies.median_edit_distance
    summary['median_edit_distance_to_reference'] = median_low(report.edit_distance for report in reports)
    rows = bucket_report((record.rule, report) for record, report in zip(records, reports))
    logger.info('Evaluated %d hypotheses: exact match rate %.4f, CodeBLEU %.4f.', len(reports),
                summary['em_rate'], summary['codebleu'])
    return EvaluationResult(rows, summary, reports)


# Auditing

def audit(records, trials=DEFAULT_TRIALS, seed=0, fuel=DEFAULT_FUEL, progress=False):
    """
    Re-run the equivalence check over an existing dataset.

    :param records: The dataset records.
    :type records: list[PairRecord | dict]
    :param int trials: The number of random inputs per function.
    :param int seed: The seed of inputs and extern results.
    :param int fuel: The step budget of every run.
    :param bool progress: Whether to show a progress bar.
    :return: The number of checked records, the divergent records with their
             witnesses, the number of inconclusive ones and the invalid ones.
    :rtype: AuditResult
    """
    records = [record if isinstance(record, PairRecord) else PairRecord.from_json(record) for record in records]
    divergent, invalid, inconclusive = [], [], 0
    for record in _progress(records, progress, description='check'):
        try:
            original = SourceUnit.from_text(record.original, record.id)
            transformed = SourceUnit.from_text(record.transformed, record.id)
            if original.token_pairs == transformed.token_pairs:
                raise ConfigurationError('Record "{}" does not change the code.'.format(record.id))
            verdict = equivalent_units(original, transformed, trials, seed, fuel)
        except (MiniLangSyntaxError, SignatureMismatch, ConfigurationError) as e:
            logger.warning('Invalid record "%s": %s', record.id, e)
            invalid.append((record, str(e)))
            continue
        if verdict.divergent:
            logger.warning('Record "%s" is not semantics preserving.', record.id)
            divergent.append((record, verdict.witness))
        inconclusive += verdict.inconclusive
    logger.info('Checked %d records: %d divergent, %d inconclusive, %d invalid.', len(records), len(divergent),
                inconclusive, len(invalid))
    return AuditResult(len(records), divergent, inconclusive, invalid)


# Files

def dump_json_line(data):
    return json.dumps(data, ensure_ascii=False, separators=(', ', ': '))


def write_jsonl(objects, path):
    """
    Write JSON objects to a file, one per line.

    :param collections.Iterable objects: The objects (or objects with a
                                         ``to_json`` method).
    :param str path: The file path.
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for data in objects:
            f.write(dump_json_line(data.to_json() if hasattr(data, 'to_json') else data))
            f.write('\n')


def read_jsonl(path):
    """
    Read a file with one JSON object per line, ignoring blank lines.

    :param str path: The file path.
    :return: The objects.
    :rtype: list[dict]
    :raises ConfigurationError: If a line is no valid JSON.
    """
    objects = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                objects.append(json.loads(line, object_pairs_hook=OrderedDict))
            except ValueError as e:
                raise ConfigurationError('Line {} of "{}" is no valid JSON: {}'.format(number, path, e))
    return objects


def read_records(path):
    return [PairRecord.from_json(data) for data in read_jsonl(path)]


def write_json(data, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write('\n')


def write_generation(result, directory):
    """
    Write the outputs of a generation run into a directory.

    :param GenerationResult result: The generation result.
    :param str directory: The output directory (created if missing).
    """
    os.makedirs(directory, exist_ok=True)
    write_jsonl(result.records, os.path.join(directory, PAIRS_FILE))
    write_jsonl(result.rejected, os.path.join(directory, REJECTED_FILE))
    write_json(result.report.to_json(), os.path.join(directory, GENERATION_REPORT_FILE))


def write_evaluation(result, directory):
    """
    Write the per-rule CSV table and the JSON summary of an evaluation.

    :param EvaluationResult result: The evaluation result.
    :param str directory: The output directory (created if missing).
    """
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, EVALUATION_CSV_FILE), 'w', encoding='utf-8', newline='') as f:
        write_csv(result.rows, f)
    write_json(result.summary, os.path.join(directory, EVALUATION_SUMMARY_FILE))
