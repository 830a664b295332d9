# encoding: utf-8
"""Semantic-preserving de-naturalization of source code and naturalization metrics."""

__version__ = '0.3.0'
__author__ = 'The denat developers'
__copyright__ = 'Copyright 2024, The denat developers'
__license__ = 'BSD'
__status__ = 'Beta'
