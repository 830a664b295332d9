# encoding: utf-8

import re

from ..exceptions import NothingToRename
from ..syntax import NodeKind, make_token
from ..syntax.tokens import IDENTIFIER
from ..utils.internal import NodeModifier
from .base import TransformRule, TransformRuleId, UnitContext, rename_count, thaw

# Names in the default renaming scheme are never renamed again, whatever the
# configured prefix.
RENAMED_PATTERN = re.compile(r'^VAR_\d+$')


class VarRenameRule(TransformRule):
    """
    Rename a fraction of the variables of a function to meaningless numbered
    names (``VAR_1``, ``VAR_2``, ...). Every declaration chain is renamed as a
    whole, so shadowed variables are renamed independently.
    """

    rule_id = TransformRuleId.VAR_RENAME
    site_error = NothingToRename

    def is_renamed(self, name):
        prefixed = re.match(r'^{}\d+$'.format(re.escape(self.config.rename_prefix)), name)
        return bool(prefixed or RENAMED_PATTERN.match(name))

    def candidates(self, context, function_id):
        """
        Get the declaration ids of the chains of a function that may be
        renamed, in order of their first occurrence.

        :param UnitContext context: The analyzed unit.
        :param int function_id: The id of the function.
        :rtype: list[int]
        """
        first, last = function_id, function_id + context.ast.subtree_size(function_id)
        return [decl_id for decl_id in context.graph.chain_ids()
                if first <= decl_id < last and not self.is_renamed(context.ast.node(decl_id).lexeme)]

    def find_sites(self, context):
        return [function.id for function in context.unit.functions if self.candidates(context, function.id)]

    def occurrences_to_rename(self, chain):
        return chain

    def rewrite(self, context, site, rng):
        candidates = self.candidates(context, site)
        chosen = rng.sample(candidates, rename_count(self.config.rename_fraction, len(candidates)))
        return self.rename_chains(context, sorted(chosen, key=candidates.index))

    def rename_chains(self, context, decl_ids):
        """
        Rename the given declaration chains to numbered names in the given
        order, skipping numbers whose names are already in use in the unit.

        :param UnitContext context: The analyzed unit.
        :param list[int] decl_ids: The declaration ids of the chains.
        :return: A 2-tuple containing the root of the rewritten tree and the
                 auxiliary data listing the renamings.
        :rtype: (denat.syntax.nodes.Node, dict)
        """
        used = context.ast.identifier_names()
        names, renamings, number = {}, [], 1
        for decl_id in decl_ids:
            while '{}{}'.format(self.config.rename_prefix, number) in used:
                number += 1
            name = '{}{}'.format(self.config.rename_prefix, number)
            number += 1
            renamings.append([context.ast.node(decl_id).lexeme, name])
            for occurrence in self.occurrences_to_rename(context.graph.chain(decl_id)):
                names[occurrence.node_id] = name

        root, nodes = thaw(context)
        targets = {id(nodes[node_id]): name for node_id, name in names.items()}

        def rename(node):
            if node.kind is NodeKind.IDENTIFIER and id(node) in targets:
                node.token = make_token(targets[id(node)], IDENTIFIER)
            return node

        root = NodeModifier(rename).modify_nodes(root, copy=False)
        return root, {'renamed': renamings}

    def transform_chains(self, unit, site, decl_ids, seed=0):
        """
        Rename explicitly chosen chains instead of a random selection.

        :param unit: The unit to transform (or its analysis context).
        :param int site: The id of the function.
        :param list[int] decl_ids: The declaration ids of the chains to rename.
        :param int seed: The seed recorded in the outcome.
        :return: The outcome of the transformation.
        :rtype: denat.transforms.base.TransformOutcome
        """
        context = UnitContext.of(unit)
        self.check_site(context, site)
        candidates = self.candidates(context, site)
        for decl_id in decl_ids:
            if decl_id not in candidates:
                raise NothingToRename('Node {} declares no renamable variable of function {}.'.format(
                    decl_id, site), rule=self.rule_id, site=site)
        tree, auxiliary = self.rename_chains(context, list(decl_ids))
        return self.build_outcome(context, site, seed, tree, auxiliary)
