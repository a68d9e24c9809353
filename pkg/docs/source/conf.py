# Configuration file for the Sphinx documentation builder.

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))


# -- Project information -----------------------------------------------------

project = 'bohmvar'
copyright = '2026, bohmvar developers'
author = 'bohmvar developers'


# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc']
templates_path = ['_templates']
exclude_patterns = []
master_doc = 'index'


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
