# encoding: utf-8

import os

import pytest

from denat.syntax import SourceUnit, unparse

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
BSEARCH_PATH = os.path.join(DATA_DIR, 'bsearch.mini')

COUNTER_SOURCE = '''
int count(int n) {
  int total = 0;
  for (int i = 0; i < n; i++) {
    if (i % 3 == 0) {
      continue;
    }
    total = total + i;
  }
  return total;
}
'''

CLAMP_SOURCE = '''
int clamp(int x, int low, int high) {
  int result = x;
  if (x < low) {
    result = low;
  } else {
    result = x;
  }
  if (result > high) {
    result = high;
  }
  return result;
}
'''


def read_data(name):
    with open(os.path.join(DATA_DIR, name), encoding='utf-8') as f:
        return f.read()


def unit_of(text, name='<test>'):
    return SourceUnit.from_text(text, name)


def find_node(unit, predicate):
    """Get the first node (in preorder) of a unit that matches a predicate."""
    for node in unit.ast.nodes:
        if predicate(node):
            return node
    raise LookupError('No matching node.')


def node_with_text(unit, text, kind=None):
    return find_node(unit, lambda node: (kind is None or node.kind is kind) and unparse(unit.ast, node.id) == text)


@pytest.fixture
def bsearch_text():
    return read_data('bsearch.mini')


@pytest.fixture
def bsearch(bsearch_text):
    return SourceUnit.from_text(bsearch_text, BSEARCH_PATH)


@pytest.fixture
def counter():
    return SourceUnit.from_text(COUNTER_SOURCE, 'counter.mini')


@pytest.fixture
def clamp():
    return SourceUnit.from_text(CLAMP_SOURCE, 'clamp.mini')


@pytest.fixture
def corpus(tmpdir):
    """A small corpus directory with a nested file and a non-MiniLang file."""
    root = tmpdir.mkdir('corpus')
    root.join('bsearch.mini').write(read_data('bsearch.mini'))
    root.join('counter.mini').write(COUNTER_SOURCE)
    root.mkdir('nested').join('clamp.mini').write(CLAMP_SOURCE)
    root.join('notes.txt').write('not MiniLang')
    return root
