# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('..'))


def get_version():
    from tmspy import __version__
    return __version__


# -- Project information -----------------------------------------------------

project = 'TMSPy'
copyright = "2024, TMSPy"

release = get_version()
version = ".".join(release.split(".")[:2])


# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.napoleon',
              'sphinx.ext.autosummary',
              'm2r2',
              'sphinx.ext.mathjax',
              ]

autosummary_generate = True

autodoc_typehints = "description"
autodoc_typehints_format = "short"
autodoc_inherit_docstrings = False

napoleon_use_admonition_for_examples = True

mathjax3_config = {
    "tex": {"macros": {"sinc": r"\operatorname{sinc}"}},
}

templates_path = ['_templates']

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_book_theme'

html_title = "TMSPy"

html_theme_options = {
    "path_to_docs": "docs",
    "extra_navbar": "",
}

master_doc = 'index'
