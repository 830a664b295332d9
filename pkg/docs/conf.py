#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# denat documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

import os
import sys

# Get the project root dir, which is the parent dir of this
project_root = os.path.dirname(os.getcwd())

# Insert the project root dir as the first element in the PYTHONPATH.
# This lets us ensure that the source package is imported when autodoc is used.
sys.path.insert(0, project_root)

# exec the package's __init__.py instead of importing it. Importing may trigger
# unwanted side-effects (if autodoc is used, the package may be imported anyway).
meta = {}
exec(open(os.path.join(project_root, 'denat', '__init__.py'), 'rb').read(), {}, meta)

# -- General configuration ---------------------------------------------

# Add any Sphinx extension module names here, as strings. They can be
# extensions coming with Sphinx (named 'sphinx.ext.*') or your custom ones.
extensions = ['sphinx.ext.autodoc', 'sphinx.ext.autosectionlabel', 'sphinx.ext.intersphinx', 'sphinx.ext.viewcode']

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# The suffix of source filenames.
source_suffix = ['.rst']

# The master toctree document.
master_doc = 'index'

# General information about the project.
project = u'denat'
title = u'{} Documentation'.format(project)
copyright = meta['__copyright__'].replace('Copyright', '').strip()
author = meta['__author__']
description = meta['__doc__']

# The short X.Y version.
version = meta['__version__']
# The full version, including alpha/beta/rc tags.
release = meta['__version__']

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build']

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------

# The theme to use for HTML and HTML Help pages.
html_theme = 'sphinx_rtd_theme'

# Output file base name for HTML help builder.
htmlhelp_basename = 'denat_doc'

# -- Options for manual page output ------------------------------------

# One entry per manual page. List of tuples
# (source start file, name, description, authors, manual section).
man_pages = [
    ('index', 'denat', title, [author], 1)
]

# -- Extension configuration -------------------------------------------

autosectionlabel_prefix_document = True

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
}


def autodoc_skip_member(app, what, name, obj, skip, options):
    # The rule hooks are documented on the base class only.
    if (getattr(obj, '__module__', None) or '').startswith('denat.transforms.') and name in ('find_sites', 'rewrite'):
        return not getattr(obj, '__qualname__', '').startswith('TransformRule.')
    return None


def setup(app):
    app.connect('autodoc-skip-member', autodoc_skip_member)
