# encoding: utf-8
"""
Internal utilities used by denat, which may change without notice or be
removed without deprecation.
"""

import hashlib
import random

SEED_BYTES = 8


class NodeProcessor(object):
    """
    Base class for utilities that work with mutable syntax trees.
    """

    def __init__(self, func):
        """
        Initialize a new node processor.

        :param function func: The function that is applied to nodes. The
                              function must take the node as its first
                              argument as well as potentially more context
                              arguments based on the concrete implementation,
                              which also defines the expected return value.
        """
        self.func = func

    def iter_branches(self, node):
        """
        Iterate over all descendants of the given node, regardless of their
        depth.

        :param denat.syntax.nodes.Node node: The node to get the descendants
                                             from.
        :return: A generator yielding 3-tuples for each descendant consisting
                 of its parent node, its index in the parent's children and
                 the descendant itself.
        :rtype: collections.Iterable[(denat.syntax.nodes.Node, int,
                denat.syntax.nodes.Node)]
        """
        for index, child in enumerate(list(node.children)):
            yield node, index, child
            for result in self.iter_branches(child):
                yield result


class NodeModifier(NodeProcessor):
    """
    A utility to modify tree nodes using the configured function, which
    therefore must return the replacement node for a given node (which may be
    the node itself).
    """

    def modify_nodes(self, node, copy=True, **context):
        """
        Modify the descendants of the given node using the configured
        function.

        :param denat.syntax.nodes.Node node: The node whose descendants should
                                             be modified.
        :param bool copy: If True, a copy of the given node will be created and
                          modified, leaving the original node untouched. If
                          False, the original node will be modified in place.
        :param context: Additional context parameters that will be passed
                        through to the configured function.
        :return: The modified node.
        :rtype: denat.syntax.nodes.Node
        """
        if copy:
            node = node.copy()
        for parent, index, child in list(self.iter_branches(node)):
            parent.children[index] = self.func(child, **context)
        return node


class InjectableMixin(object):
    """
    Base class for mixins that override single hooks of a class, e.g. to build
    deliberately broken variants of transformation rules. The variants are
    created on demand via :meth:`mix_with_class`.
    """

    # Shared by all mixins, keyed by (base class, mixin class, name).
    _created_classes = {}

    @classmethod
    def mix_with_class(cls, base_class, class_name=None):
        """
        Build (or reuse) a subclass of the given class that has this mixin in
        front of it in the MRO.

        :param type base_class: The class to derive the variant from.
        :param str class_name: The name of the variant. Defaults to the name
                               of the base class.
        :return: The variant, or the base class itself if it already contains
                 this mixin.
        :rtype: type
        """
        if issubclass(base_class, cls):
            return base_class

        class_name = str(class_name or base_class.__name__)
        cache_key = (base_class, cls, class_name)
        if cache_key not in cls._created_classes:
            mixin_meta, base_meta = type(cls), type(base_class)
            if issubclass(base_meta, mixin_meta):
                metaclass = base_meta
            elif issubclass(mixin_meta, base_meta):
                metaclass = mixin_meta
            else:
                # Unrelated metaclasses (e.g. a rule metaclass and a mixin
                # metaclass) need a common derived metaclass.
                metaclass = type(base_meta.__name__, (mixin_meta, base_meta), {})
            cls._created_classes[cache_key] = metaclass(class_name, (cls, base_class), {})
        return cls._created_classes[cache_key]


def digest(*parts):
    """
    Build a SHA-256 digest over the given parts, separated by NUL characters.

    :param parts: The parts to hash. Non-string parts are converted via str.
    :return: The hex digest.
    :rtype: str
    """
    text = '\0'.join(part if isinstance(part, str) else str(part) for part in parts)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def derive_seed(*parts):
    """
    Derive a deterministic unsigned 64-bit seed from the given parts.

    :param parts: The parts to derive the seed from.
    :return: The seed.
    :rtype: int
    """
    return int(digest(*parts)[:SEED_BYTES * 2], 16)


def make_rng(seed):
    return random.Random(seed)
