# encoding: utf-8
"""
Scores measuring how close a naturalized hypothesis comes to the original
code: exact match, syntax match, dataflow match, BLEU and CodeBLEU, plus the
copy analysis and the per-rule aggregation of evaluation runs.
"""

import csv
import logging
from collections import Counter, OrderedDict, namedtuple
from fractions import Fraction
from math import exp, log
from statistics import median_low

from nltk.metrics.distance import edit_distance
from nltk.translate.bleu_score import (
    SmoothingFunction, brevity_penalty, closest_ref_length, modified_precision, sentence_bleu,
)

from .dataflow import build_def_use
from .exceptions import ConfigurationError, DataflowError, EmptyCorpus, MiniLangSyntaxError
from .syntax import SourceUnit, lex
from .syntax.tokens import IDENTIFIER, INT_LITERAL, KEYWORDS, STRING_LITERAL
from .transforms.base import TransformRuleId

logger = logging.getLogger(__name__)

KEYWORD_WEIGHT = 5
BLEU_WEIGHTS = (0.25, 0.25, 0.25, 0.25)
ANONYMIZED_TOKEN_KINDS = frozenset((IDENTIFIER, INT_LITERAL, STRING_LITERAL))
CSV_COLUMNS = ('rule', 'count', 'em_rate', 'sm', 'dm', 'bleu', 'wbleu', 'codebleu')

HYPOTHESIS_UNPARSEABLE = 'hypothesis-unparseable'
HYPOTHESIS_UNRESOLVED = 'hypothesis-unresolved'
REFERENCE_WITHOUT_DATAFLOW = 'reference-without-dataflow'

_smoothing = SmoothingFunction()


class MetricWeights(namedtuple('MetricWeights', 'alpha beta gamma delta')):
    """
    The weights of BLEU, weighted BLEU, syntax match and dataflow match in
    CodeBLEU.
    """
    __slots__ = ()

    def __new__(cls, alpha=0.25, beta=0.25, gamma=0.25, delta=0.25):
        weights = (alpha, beta, gamma, delta)
        if any(weight < 0 for weight in weights) or abs(sum(weights) - 1) > 1e-9:
            raise ConfigurationError('CodeBLEU weights must be non-negative and sum up to 1, got {}.'.format(
                weights))
        return super(MetricWeights, cls).__new__(cls, *(float(weight) for weight in weights))


DEFAULT_WEIGHTS = MetricWeights()


class MetricReport(namedtuple('MetricReport', 'em sm dm bleu weighted_bleu codebleu edit_distance is_copy flags')):
    """The scores of a single hypothesis."""
    __slots__ = ()

    def to_json(self):
        data = OrderedDict(zip(self._fields, self))
        data['flags'] = list(self.flags)
        return data


class CopyAnalysis(namedtuple('CopyAnalysis', 'copy_rate median_edit_distance')):
    __slots__ = ()


class BucketRow(namedtuple('BucketRow', 'rule count em_rate sm dm bleu wbleu codebleu')):
    """The mean scores of all hypotheses for one rule."""
    __slots__ = ()


def token_pairs(code):
    """
    Get the (kind, lexeme) token sequence of a piece of code.

    :param code: A unit, a source text or a token sequence.
    :type code: SourceUnit | str | collections.Iterable[denat.syntax.Token]
    :return: The token pairs.
    :rtype: list[(str, str)]
    :raises denat.exceptions.LexError: If a text can't be lexed.
    """
    if isinstance(code, SourceUnit):
        return code.token_pairs
    if isinstance(code, str):
        code = lex(code)
    return [(token.kind, token.lexeme) for token in code]


def _lexemes(code):
    return [lexeme for kind, lexeme in token_pairs(code)]


def exact_match(hyp, ref):
    """
    Check if hypothesis and reference consist of the same tokens, regardless
    of their formatting.

    :return: 1 on a match, otherwise 0.
    :rtype: int
    """
    return int(token_pairs(hyp) == token_pairs(ref))


class _SubtreeCodes(object):
    """
    Assigns a number to every distinct anonymized subtree shape. Identifiers
    and literals are reduced to their node kind while operators, keywords and
    declared types are kept.
    """

    def __init__(self):
        self.codes = {}

    def label(self, node):
        if node.token is None:
            return None
        if node.token.kind in ANONYMIZED_TOKEN_KINDS or node.lexeme in ('true', 'false'):
            return node.kind.value
        return node.lexeme

    def encode(self, ast):
        """
        Encode every subtree of a tree.

        :param denat.syntax.Ast ast: The tree.
        :return: The multiset of subtree codes (one per node).
        :rtype: collections.Counter
        """
        codes = [None] * len(ast.nodes)
        # Children have higher preorder ids than their parents.
        for node in reversed(ast.nodes):
            key = (node.kind, self.label(node), node.decl_type, tuple(codes[child] for child in node.children))
            codes[node.id] = self.codes.setdefault(key, len(self.codes))
        return Counter(codes)


def _ast_of(code):
    return code.ast if isinstance(code, SourceUnit) else code


def syntax_match(hyp, ref):
    """
    Compute the fraction of the reference's anonymized subtrees that also
    appear in the hypothesis (as multisets).

    :param hyp: The hypothesis tree or None if it didn't parse.
    :type hyp: denat.syntax.Ast | SourceUnit | None
    :param ref: The reference tree.
    :type ref: denat.syntax.Ast | SourceUnit
    :return: The syntax match in [0, 1].
    :rtype: float
    """
    if hyp is None:
        return 0.0
    coder = _SubtreeCodes()
    ref_subtrees = coder.encode(_ast_of(ref))
    hyp_subtrees = coder.encode(_ast_of(hyp))
    return sum((ref_subtrees & hyp_subtrees).values()) / sum(ref_subtrees.values())


def _dataflow_match(hyp, ref):
    ref_edges = build_def_use(ref.ast).anonymized_edges(ref.ast)
    if not ref_edges:
        return 1.0, REFERENCE_WITHOUT_DATAFLOW
    if hyp is None:
        return 0.0, HYPOTHESIS_UNPARSEABLE
    try:
        hyp_edges = build_def_use(hyp.ast).anonymized_edges(hyp.ast)
    except DataflowError:
        return 0.0, HYPOTHESIS_UNRESOLVED
    return sum((ref_edges & hyp_edges).values()) / sum(ref_edges.values()), None


def dataflow_match(hyp, ref):
    """
    Compute the fraction of the reference's anonymized def-use edges that also
    appear in the hypothesis (as multisets). A reference without any edge
    scores 1, a hypothesis whose variables can't be resolved scores 0.

    :param SourceUnit | None hyp: The hypothesis or None if it didn't parse.
    :param SourceUnit ref: The reference.
    :return: The dataflow match in [0, 1].
    :rtype: float
    """
    return _dataflow_match(hyp, ref)[0]


def bleu_score(hyp_lexemes, ref_lexemes):
    if hyp_lexemes == ref_lexemes:
        return 1.0
    if not hyp_lexemes:
        return 0.0
    return float(sentence_bleu([ref_lexemes], hyp_lexemes, weights=BLEU_WEIGHTS,
                               smoothing_function=_smoothing.method1))


def bleu(hyp, ref):
    """
    Compute the smoothed 4-gram token BLEU of a hypothesis. Token-equal code
    always scores 1, even if it's shorter than four tokens.

    :param hyp: The hypothesis as unit, text or tokens.
    :param ref: The reference as unit, text or tokens.
    :return: The BLEU score in [0, 1].
    :rtype: float
    """
    return bleu_score(_lexemes(hyp), _lexemes(ref))


def keyword_weight(lexeme):
    return KEYWORD_WEIGHT if lexeme in KEYWORDS else 1


def weighted_unigram_precision(hyp_lexemes, ref_lexemes):
    """
    Compute the clipped unigram precision where every keyword counts
    :data:`KEYWORD_WEIGHT` times.

    :rtype: fractions.Fraction
    """
    hyp_counts, ref_counts = Counter(hyp_lexemes), Counter(ref_lexemes)
    numerator = sum(min(count, ref_counts[lexeme]) * keyword_weight(lexeme) for lexeme, count in hyp_counts.items())
    denominator = sum(count * keyword_weight(lexeme) for lexeme, count in hyp_counts.items())
    return Fraction(numerator, max(1, denominator))


def weighted_bleu_score(hyp_lexemes, ref_lexemes):
    if hyp_lexemes == ref_lexemes:
        return 1.0
    if not hyp_lexemes:
        return 0.0
    precisions = [weighted_unigram_precision(hyp_lexemes, ref_lexemes)]
    precisions.extend(modified_precision([ref_lexemes], hyp_lexemes, n) for n in range(2, len(BLEU_WEIGHTS) + 1))
    if precisions[0] == 0:
        return 0.0
    smoothed = _smoothing.method1(precisions)
    hyp_length = len(hyp_lexemes)
    penalty = brevity_penalty(closest_ref_length([ref_lexemes], hyp_length), hyp_length)
    return float(penalty * exp(sum(weight * log(p) for weight, p in zip(BLEU_WEIGHTS, smoothed))))


def weighted_bleu(hyp, ref):
    """
    Compute BLEU with a keyword-weighted unigram precision. Higher order
    precisions, brevity penalty and smoothing are the same as for
    :func:`bleu`.

    :param hyp: The hypothesis as unit, text or tokens.
    :param ref: The reference as unit, text or tokens.
    :return: The weighted BLEU score in [0, 1].
    :rtype: float
    """
    return weighted_bleu_score(_lexemes(hyp), _lexemes(ref))


def _safe_token_pairs(code):
    try:
        return token_pairs(code)
    except MiniLangSyntaxError:
        return None


def _safe_parse(code, tokens):
    if isinstance(code, SourceUnit):
        return code
    if tokens is None:
        return None
    try:
        return SourceUnit.from_text(code, 'hypothesis')
    except MiniLangSyntaxError as e:
        logger.debug('Hypothesis does not parse: %s', e)
        return None


def score_pair(hyp, ref, source=None, weights=DEFAULT_WEIGHTS):
    """
    Score a hypothesis against its reference.

    :param hyp: The hypothesis. It may fail to lex or parse, which yields a
                flagged report with zero scores where they can't be computed.
    :type hyp: SourceUnit | str
    :param ref: The reference, which must parse.
    :type ref: SourceUnit | str
    :param source: The model input the hypothesis was produced from, used to
                   detect copies.
    :type source: SourceUnit | str | None
    :param MetricWeights weights: The CodeBLEU weights.
    :return: The report.
    :rtype: MetricReport
    """
    ref_unit = ref if isinstance(ref, SourceUnit) else SourceUnit.from_text(ref, 'reference')
    ref_tokens = ref_unit.token_pairs
    hyp_tokens = _safe_token_pairs(hyp)
    hyp_unit = _safe_parse(hyp, hyp_tokens)
    flags = [] if hyp_unit is not None else [HYPOTHESIS_UNPARSEABLE]

    sm = syntax_match(hyp_unit, ref_unit)
    dm, dataflow_flag = _dataflow_match(hyp_unit, ref_unit)
    if dataflow_flag is not None and dataflow_flag not in flags:
        flags.append(dataflow_flag)
    if hyp_tokens is None:
        em, bleu_value, weighted_value, distance = 0, 0.0, 0.0, len(ref_tokens)
    else:
        hyp_lexemes = [lexeme for kind, lexeme in hyp_tokens]
        ref_lexemes = [lexeme for kind, lexeme in ref_tokens]
        em = int(hyp_tokens == ref_tokens)
        bleu_value = bleu_score(hyp_lexemes, ref_lexemes)
        weighted_value = weighted_bleu_score(hyp_lexemes, ref_lexemes)
        distance = edit_distance(hyp_tokens, ref_tokens)
    codebleu = weights.alpha * bleu_value + weights.beta * weighted_value + weights.gamma * sm + weights.delta * dm
    is_copy = source is not None and hyp_tokens is not None and hyp_tokens == _safe_token_pairs(source)
    return MetricReport(em, sm, dm, bleu_value, weighted_value, codebleu, distance, is_copy, tuple(flags))


def code_bleu(hyp, ref, weights=DEFAULT_WEIGHTS):
    """
    Compute CodeBLEU and its components for a hypothesis.

    :param hyp: The hypothesis.
    :type hyp: SourceUnit | str
    :param ref: The reference.
    :type ref: SourceUnit | str
    :param MetricWeights weights: The weights of the components.
    :return: The report (without copy detection).
    :rtype: MetricReport
    """
    return score_pair(hyp, ref, weights=weights)


def token_edit_distance(a, b):
    """
    Compute the Levenshtein distance between the token sequences of two
    pieces of code.

    :rtype: int
    """
    return edit_distance(token_pairs(a), token_pairs(b))


def copy_analysis(pairs):
    """
    Measure how often hypotheses merely copy the model input and how far they
    move away from it.

    :param pairs: 2-tuples of model inputs and hypotheses (as units, texts or
                  token sequences).
    :type pairs: collections.Iterable[tuple]
    :return: The rate of token-equal copies and the lower median of the token
             edit distances.
    :rtype: CopyAnalysis
    :raises EmptyCorpus: If no pairs are given.
    """
    copies, distances = 0, []
    for source, hyp in pairs:
        source_tokens = token_pairs(source)
        hyp_tokens = _safe_token_pairs(hyp)
        if hyp_tokens is None:
            distances.append(len(source_tokens))
            continue
        copies += hyp_tokens == source_tokens
        distances.append(edit_distance(source_tokens, hyp_tokens))
    if not distances:
        raise EmptyCorpus('The copy analysis requires at least one pair.')
    return CopyAnalysis(copies / len(distances), median_low(distances))


def bucket_report(scored):
    """
    Average the scores per transformation rule.

    :param scored: 2-tuples of rule ids and reports.
    :type scored: collections.Iterable[(TransformRuleId, MetricReport)]
    :return: One row per rule that occurs, in the order of the rule ids.
    :rtype: list[BucketRow]
    """
    totals = {}
    for rule, report in scored:
        rule = rule if isinstance(rule, TransformRuleId) else TransformRuleId.from_name(rule)
        count, sums = totals.get(rule, (0, (0.0,) * 6))
        values = (report.em, report.sm, report.dm, report.bleu, report.weighted_bleu, report.codebleu)
        totals[rule] = (count + 1, tuple(total + value for total, value in zip(sums, values)))
    rows = []
    for rule in TransformRuleId:
        if rule in totals:
            count, sums = totals[rule]
            rows.append(BucketRow(rule.value, count, *(total / count for total in sums)))
    return rows


def summarize(reports):
    """
    Average all reports regardless of their rule.

    :param list[MetricReport] reports: The reports.
    :return: The mean scores and the copy/error counts.
    :rtype: collections.OrderedDict
    """
    if not reports:
        raise EmptyCorpus('Nothing to summarize.')
    count = len(reports)
    summary = OrderedDict([('count', count)])
    for field in ('em', 'sm', 'dm', 'bleu', 'weighted_bleu', 'codebleu'):
        summary[field if field != 'em' else 'em_rate'] = sum(getattr(report, field) for report in reports) / count
    summary['unparseable'] = sum(HYPOTHESIS_UNPARSEABLE in report.flags for report in reports)
    return summary


def write_csv(rows, stream):
    """
    Write bucket rows as CSV with a header row and four decimals per rate.

    :param list[BucketRow] rows: The rows.
    :param stream: A text stream opened with ``newline=''``.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([row.rule, row.count] + ['{:.4f}'.format(value) for value in row[2:]])
