# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/master/config

# -- Project information -----------------------------------------------------

import cloud_sptheme as csp

import plambda

project = 'plambda'
copyright = '2021, the plambda developers'
author = 'the plambda developers'

# The short X.Y version.
version = '.'.join(plambda.__version__.split('.', 2)[:2])
# The full version, including alpha/beta/rc tags.
release = plambda.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = []
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = "cloud"
html_theme_path = [csp.get_theme_dir()]
html_static_path = []
htmlhelp_basename = 'plambdadoc'


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'plambda', 'plambda Documentation', [author], 1)
]


# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'networkx': ('https://networkx.org/documentation/stable', None),
}

nitpick_ignore = [
    ('py:class', 'PathType'),
    ('py:class', 'Term'),
    ('py:class', 'ExtTerm'),
    ('py:class', 'NamedEnv'),
    ('py:class', 'FrameStack'),
]
