# -*- coding: utf-8 -*-
#
# prnuauth documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath('../src'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.napoleon'
]

# heavy compiled dependencies are not needed to render the API pages
autodoc_mock_imports = ['pywt', 'matplotlib']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'prnuauth'
copyright = u'2026, prnuauth developers'
author = u'prnuauth developers'

version = u'0.1'
release = u'0.1.0'

language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'

html_static_path = ['_static']

htmlhelp_basename = 'prnuauthdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'prnuauth.tex', u'prnuauth Documentation',
     u'prnuauth developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'prnuauth', u'prnuauth Documentation',
     [author], 1)
]
