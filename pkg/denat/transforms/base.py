# encoding: utf-8
"""Common infrastructure of the de-naturalizing transformation rules."""

import logging
import math
from collections import namedtuple
from enum import Enum

from ..dataflow import build_def_use
from ..exceptions import ConfigurationError, MiniLangSyntaxError, NestingTooDeep, TransformError, VacuousTransform
from ..syntax import Node, NodeKind, SourceUnit, parse_statement
from ..utils.internal import derive_seed, make_rng

logger = logging.getLogger(__name__)

DEFAULT_RENAME_FRACTION = 0.5
DEFAULT_RENAME_PREFIX = 'VAR_'
DEFAULT_GUARD_FORMS = (
    'if ( {x} < {x} ) {body}',
    'while ( {x} != {x} ) {body}',
)


class TransformRuleId(Enum):
    LOOP_EXCHANGE = 'loop_exchange'
    DEAD_CODE = 'dead_code'
    BLOCK_SWAP = 'block_swap'
    OPERAND_SWAP = 'operand_swap'
    CONFUSION_INSERT = 'confusion_insert'
    VAR_RENAME = 'var_rename'

    def __str__(self):
        return self.value

    @property
    def cli_name(self):
        return self.value.replace('_', '-')

    @classmethod
    def from_name(cls, name):
        """
        Look up a rule by its record (snake-case) or command line (kebab-case)
        name.

        :param str name: The rule name.
        :return: The rule id.
        :rtype: TransformRuleId
        :raises ConfigurationError: If no rule has the given name.
        """
        try:
            return cls(name.strip().lower().replace('-', '_'))
        except ValueError:
            raise ConfigurationError('Unknown transformation rule "{}". Valid rules: {}.'.format(
                name, ', '.join(rule.cli_name for rule in cls)))


class RuleConfig(namedtuple('RuleConfig', 'rename_fraction dead_guard_forms rules_enabled rename_prefix '
                                          'allow_compound_donors per_rule')):
    """
    Immutable configuration of the transformation rules and the engine.
    """
    __slots__ = ()

    def __new__(cls, rename_fraction=DEFAULT_RENAME_FRACTION, dead_guard_forms=DEFAULT_GUARD_FORMS,
                rules_enabled=None, rename_prefix=DEFAULT_RENAME_PREFIX, allow_compound_donors=False, per_rule=False):
        """
        Build and validate a new rule configuration.

        :param float rename_fraction: The fraction of variable chains renamed
                                      by the variable renaming rule, in (0, 1].
        :param collections.Sequence[str] dead_guard_forms: Statement templates
            for dead code guards. ``{x}`` is replaced by the guard operand and
            ``{body}`` by the braced donor statement.
        :param rules_enabled: The enabled rules (all of them by default).
        :type rules_enabled: collections.Iterable[TransformRuleId | str] | None
        :param str rename_prefix: The prefix of renamed variables.
        :param bool allow_compound_donors: Whether if/loop statements may be
                                           transplanted as dead code.
        :param bool per_rule: Whether the pipeline emits one record per
                              applicable rule instead of one per unit.
        :raises ConfigurationError: If a value is out of its allowed range.
        """
        if not 0 < rename_fraction <= 1:
            raise ConfigurationError('The rename fraction must be in (0, 1], got {}.'.format(rename_fraction))
        if rules_enabled is None:
            rules_enabled = tuple(TransformRuleId)
        rules_enabled = frozenset(rule if isinstance(rule, TransformRuleId) else TransformRuleId.from_name(rule)
                                  for rule in rules_enabled)
        if not rules_enabled:
            raise ConfigurationError('At least one transformation rule must be enabled.')
        dead_guard_forms = tuple(dead_guard_forms)
        if not dead_guard_forms:
            raise ConfigurationError('At least one dead code guard form is required.')
        for form in dead_guard_forms:
            validate_guard_form(form)
        if not rename_prefix or not (rename_prefix[0].isalpha() or rename_prefix[0] == '_') or \
                not rename_prefix.replace('_', 'a').isalnum():
            raise ConfigurationError('Invalid rename prefix "{}".'.format(rename_prefix))
        return super(RuleConfig, cls).__new__(cls, float(rename_fraction), dead_guard_forms, rules_enabled,
                                              rename_prefix, bool(allow_compound_donors), bool(per_rule))

    def is_enabled(self, rule):
        return rule in self.rules_enabled


def validate_guard_form(form):
    """
    Make sure a dead code guard template renders to a single valid statement.

    :param str form: The template.
    :raises ConfigurationError: If the template is invalid.
    """
    if '{x}' not in form or '{body}' not in form:
        raise ConfigurationError('Guard form "{}" must contain the placeholders {{x}} and {{body}}.'.format(form))
    try:
        parse_statement(form.format(x='x', body='{ x = x ; }'))
    except (MiniLangSyntaxError, KeyError, IndexError, ValueError) as e:
        raise ConfigurationError('Guard form "{}" is not a valid statement template: {}'.format(form, e))


class TransformOutcome(namedtuple('TransformOutcome', 'rule site_node_id original transformed seed auxiliary')):
    """The result of applying one rule at one site of a unit."""
    __slots__ = ()

    @property
    def site_span(self):
        return self.original.ast.span_of(self.site_node_id)


class UnitContext(object):
    """
    A parsed unit together with the analysis results the rules need.
    """

    __slots__ = ('unit', 'ast', 'graph', 'occurrences')

    def __init__(self, unit):
        """
        Analyze the given unit.

        :param SourceUnit unit: The unit.
        :raises denat.exceptions.DataflowError: If the variables of the unit
                                                can't be resolved.
        """
        self.unit = unit
        self.ast = unit.ast
        self.graph = build_def_use(unit.ast)
        self.occurrences = {occurrence.node_id: occurrence for occurrence in self.graph.occurrences}

    @classmethod
    def of(cls, unit_or_context):
        if isinstance(unit_or_context, cls):
            return unit_or_context
        return cls(unit_or_context)

    def type_of(self, node_id):
        """
        Get the declared type of the variable an identifier refers to.

        :param int node_id: The id of the identifier node.
        :return: The declared type or None if the node is no variable.
        :rtype: str | None
        """
        occurrence = self.occurrences.get(node_id)
        return self.graph.decl_types[occurrence.decl_id] if occurrence is not None else None

    def function_of(self, node_id):
        node = self.ast.node(node_id)
        if node.kind is NodeKind.FUNCTION:
            return node
        return self.ast.enclosing(node_id, NodeKind.FUNCTION)


class RuleMeta(type):
    """
    Metaclass for transformation rules that registers every concrete rule
    class under its rule id.
    """

    registry = {}

    def __new__(mcs, name, bases, attrs):
        cls = super(RuleMeta, mcs).__new__(mcs, name, bases, attrs)
        # Only classes that declare their own rule id are registered, so
        # dynamically derived variants don't replace the actual rule.
        if attrs.get('rule_id') is not None:
            mcs.registry[attrs['rule_id']] = cls
        return cls


class TransformRule(metaclass=RuleMeta):
    """
    Base class for the de-naturalizing rules. Subclasses implement site
    discovery and the actual rewrite on a mutable copy of the unit's tree.
    """

    rule_id = None
    #: The error raised if a rule is applied at a site it can't handle.
    site_error = TransformError

    def __init__(self, config=None):
        self.config = config or RuleConfig()

    def __repr__(self):
        return '<{}: {}>'.format(self.__class__.__name__, self.rule_id)

    def find_sites(self, context):
        """
        Find all nodes the rule can be applied at.

        :param UnitContext context: The analyzed unit.
        :return: The node ids in source order.
        :rtype: list[int]
        """
        raise NotImplementedError()

    def rewrite(self, context, site, rng):
        """
        Apply the rule at the given site.

        :param UnitContext context: The analyzed unit.
        :param int site: The id of the site node.
        :param random.Random rng: The random generator for rule-internal
                                  choices.
        :return: A 2-tuple containing the root of the rewritten (mutable) tree
                 and the rule-specific auxiliary data.
        :rtype: (denat.syntax.nodes.Node, dict)
        """
        raise NotImplementedError()

    def check_site(self, context, site):
        if site not in self.find_sites(context):
            raise self.site_error('Node {} is not a valid site for {}.'.format(site, self.rule_id.cli_name),
                                  rule=self.rule_id, site=site)

    def transform(self, unit, site, seed=0):
        """
        Apply the rule at the given site and parse the result.

        :param unit: The unit to transform (or its analysis context).
        :type unit: SourceUnit | UnitContext
        :param int site: The id of the site node.
        :param int seed: The seed for rule-internal random choices.
        :return: The outcome of the transformation.
        :rtype: TransformOutcome
        :raises TransformError: If the rule can't be applied at the site.
        """
        context = UnitContext.of(unit)
        self.check_site(context, site)
        rng = make_rng(derive_seed(seed, self.rule_id.value, site))
        tree, auxiliary = self.rewrite(context, site, rng)
        return self.build_outcome(context, site, seed, tree, auxiliary)

    def build_outcome(self, context, site, seed, tree, auxiliary):
        """
        Parse a rewritten tree and wrap it into an outcome.

        :param UnitContext context: The analyzed original unit.
        :param int site: The id of the site node.
        :param int seed: The seed used for the rewrite.
        :param denat.syntax.nodes.Node tree: The rewritten tree.
        :param dict auxiliary: The rule-specific auxiliary data.
        :return: The outcome.
        :rtype: TransformOutcome
        :raises VacuousTransform: If the rewrite didn't change the text.
        :raises TransformError: If the rewritten unit is nested too deeply.
        """
        try:
            transformed = SourceUnit.from_tree(tree, context.unit.name)
        except NestingTooDeep as e:
            raise TransformError('Applying {} at node {} would produce an invalid unit: {}'.format(
                self.rule_id.cli_name, site, e), rule=self.rule_id, site=site)
        if transformed.canonical_text == context.unit.canonical_text:
            raise VacuousTransform('Applying {} at node {} would not change the unit.'.format(
                self.rule_id.cli_name, site), rule=self.rule_id, site=site)
        auxiliary = dict(auxiliary, rule=self.rule_id.value, site=site)
        logger.debug('Applied %s at node %d of %s.', self.rule_id.cli_name, site, context.unit.name)
        return TransformOutcome(self.rule_id, site, context.unit, transformed, seed, auxiliary)


def get_rule(rule_id, config=None):
    """
    Create the registered rule object for a rule id.

    :param TransformRuleId rule_id: The rule id.
    :param RuleConfig | None config: The configuration to use.
    :return: The rule object.
    :rtype: TransformRule
    """
    return RuleMeta.registry[rule_id](config)


def rename_count(fraction, total):
    return int(math.ceil(fraction * total - 1e-9))


def thaw(context, node_id=None):
    """
    Create a mutable copy of the unit's tree.

    :param UnitContext context: The analyzed unit.
    :param int | None node_id: The id of the subtree root (the whole unit by
                               default).
    :return: The mutable root and the mapping of node ids to mutable nodes.
    :rtype: (denat.syntax.nodes.Node, dict[int, denat.syntax.nodes.Node])
    """
    return context.ast.to_tree(node_id)


def as_block(statement):
    """
    Wrap a statement in a block unless it already is one.

    :param denat.syntax.nodes.Node statement: The statement.
    :return: The block.
    :rtype: denat.syntax.nodes.Node
    """
    if statement.kind is NodeKind.BLOCK:
        return statement
    return Node(NodeKind.BLOCK, children=[statement], roles=['stmt'])


def expression_statement(expression):
    return Node(NodeKind.EXPR_STMT, children=[expression], roles=['expr'])


def replace_child(context, nodes, node_id, *replacements):
    """
    Replace a node in its mutable parent by the given nodes. Multiple
    replacements are only allowed if the parent is a block.

    :param UnitContext context: The analyzed unit.
    :param dict[int, denat.syntax.nodes.Node] nodes: The mapping of node ids
                                                     to mutable nodes.
    :param int node_id: The id of the replaced node.
    :param denat.syntax.nodes.Node replacements: The new nodes.
    """
    parent = context.ast.parent(node_id)
    mutable = nodes[parent.id]
    index = mutable.children.index(nodes[node_id])
    role = mutable.roles[index]
    if len(replacements) != 1 and parent.kind is not NodeKind.BLOCK:
        raise ValueError('Only blocks can take multiple statements.')
    mutable.children[index:index + 1] = list(replacements)
    mutable.roles[index:index + 1] = [role] * len(replacements)
