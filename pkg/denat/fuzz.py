# encoding: utf-8
"""
A seeded generator of random (but well-formed and terminating) MiniLang
programs, used to exercise the rules and the equivalence oracle.

Every generated function returns a value that depends on all of its
top-level locals and calls the extern ``log`` on the way, so that most
changes in behavior become observable.
"""

from .syntax import SourceUnit
from .utils.internal import make_rng

COMPARISONS = ('<', '<=', '>', '>=', '==', '!=')
ASYMMETRIC_COMPARISONS = ('<', '<=', '>', '>=')
EXTERN = 'log'
LOCALS = ('s', 't', 'u', 'w')


class ProgramGenerator(object):
    """
    Builds the text of a random unit. The generated code always declares its
    variables before use, keeps loop bounds constant and never divides by a
    value that can be zero.
    """

    def __init__(self, seed, max_segments=5, helper_probability=0.3):
        self.rng = make_rng(seed)
        self.max_segments = max_segments
        self.helper_probability = helper_probability
        self.loop_counter = 0

    def comparison(self, left, right, asymmetric=False):
        operator = self.rng.choice(ASYMMETRIC_COMPARISONS if asymmetric else COMPARISONS)
        return '{} {} {}'.format(left, operator, right)

    def operand(self, names):
        if self.rng.random() < 0.25:
            return str(self.rng.randint(0, 9))
        return self.rng.choice(names)

    def loop_variable(self):
        self.loop_counter += 1
        return 'i{}'.format(self.loop_counter)

    # Segments

    def for_loop(self, names):
        var = self.loop_variable()
        bound = self.rng.randint(2, 6)
        target, other = self.rng.sample(LOCALS[:2], 2)
        if self.rng.random() < 0.5:
            skip = '{} == {}'.format(var, self.rng.randint(0, bound - 1))
        else:
            skip = '{} % 2 == 1'.format(var)
        lines = [
            'for (int {v} = 0; {v} < {n}; {v}++) {{'.format(v=var, n=bound),
            '  {t} = {t} + {e}({v});'.format(t=target, e=EXTERN, v=var),
            '  if ({}) {{'.format(skip),
            '    continue;',
            '  }',
            '  {o} = {o} + {v} * {x};'.format(o=other, v=var, x=self.operand(names)),
        ]
        if self.rng.random() < 0.3:
            lines[-1:-1] = [
                '  if ({} > {}) {{'.format(target, self.rng.randint(20, 60)),
                '    break;',
                '  }',
            ]
        lines.append('}')
        return lines

    def while_loop(self, names):
        counter = 'w'
        start = self.rng.randint(1, 5)
        target = self.rng.choice(LOCALS[:2])
        lines = [
            '{} = {};'.format(counter, start),
            'while ({} > 0) {{'.format(counter),
            '  {c} = {c} - 1;'.format(c=counter),
        ]
        if self.rng.random() < 0.5:
            lines += [
                '  if ({} == {}) {{'.format(counter, self.rng.randint(0, start - 1)),
                '    continue;',
                '  }',
            ]
        lines += [
            '  {t} = {t} + {e}({c} + {x});'.format(t=target, e=EXTERN, c=counter, x=self.operand(names)),
            '}',
        ]
        return lines

    def if_else(self, names):
        left, right = self.rng.sample(names, 2)
        target, other = self.rng.sample(LOCALS[:2], 2)
        return [
            'if ({}) {{'.format(self.comparison(left, right, asymmetric=True)),
            '  {t} = {t} + {e}({l});'.format(t=target, e=EXTERN, l=left),
            '} else {',
            '  {o} = {o} - {r};'.format(o=other, r=right),
            '}',
        ]

    def post_increment(self, names):
        source = self.rng.choice(LOCALS[:2])
        if self.rng.random() < 0.5:
            increment = '{s} += 1;'.format(s=source)
        else:
            increment = '{s} = {s} + 1;'.format(s=source)
        return ['u = {};'.format(source), increment]

    def ternary(self, names):
        left, right = self.rng.sample(names, 2)
        return [
            'if ({}) {{'.format(self.comparison(left, right)),
            '  u = {} - {};'.format(left, self.rng.randint(1, 9)),
            '} else {',
            '  u = {}({});'.format(EXTERN, right),
            '}',
        ]

    def array_access(self, names):
        target = self.rng.choice(LOCALS[:2])
        return [
            'if (len(xs) > 0) {',
            '  {t} = {t} + xs[len(xs) - 1];'.format(t=target),
            '  xs[0] = xs[0] + {}({});'.format(EXTERN, self.rng.choice(names)),
            '  {} = {} - xs[0];'.format(target, target),
            '}',
        ]

    def extern_statement(self, names):
        target = self.rng.choice(LOCALS[:2])
        return ['{t} += {e}({x});'.format(t=target, e=EXTERN, x=self.rng.choice(names))]

    def segments(self):
        return (self.for_loop, self.while_loop, self.if_else, self.post_increment, self.ternary,
                self.array_access, self.extern_statement)

    # Functions

    def helper(self):
        return [
            'int helper(int x) {',
            '  if (x > 0) {',
            '    return x * 2 + {}(x);'.format(EXTERN),
            '  }',
            '  return 0 - x;',
            '}',
        ]

    def main(self, with_helper):
        names = ['a', 'b'] + list(LOCALS)
        lines = [
            'int f(int a, int b, int[] xs) {',
            '  int s = a + {}(b);'.format(EXTERN),
            '  int t = 0;',
            '  int u = 0;',
            '  int w = 0;',
        ]
        if with_helper:
            lines.append('  t = helper(a - b);')
        # The first segment is always a loop so that every program has one.
        chosen = [self.rng.choice((self.for_loop, self.for_loop, self.while_loop))]
        for _ in range(self.rng.randint(2, self.max_segments)):
            chosen.append(self.rng.choice(self.segments()))
        for segment in chosen:
            lines.extend('  ' + line for line in segment(names))
        lines.append('  return s + t + u + w + a + b + len(xs);')
        lines.append('}')
        return lines

    def generate(self):
        with_helper = self.rng.random() < self.helper_probability
        lines = self.helper() if with_helper else []
        lines.extend(self.main(with_helper))
        return '\n'.join(lines) + '\n'


def generate_text(seed, **kwargs):
    """
    Generate the source text of a random program.

    :param int seed: The seed.
    :param kwargs: Further options of :class:`ProgramGenerator`.
    :return: The source text.
    :rtype: str
    """
    return ProgramGenerator(seed, **kwargs).generate()


def generate_program(seed, **kwargs):
    """
    Generate a random program.

    :param int seed: The seed.
    :param kwargs: Further options of :class:`ProgramGenerator`.
    :return: The parsed program.
    :rtype: SourceUnit
    """
    return SourceUnit.from_text(generate_text(seed, **kwargs), 'fuzz-{}'.format(seed))
