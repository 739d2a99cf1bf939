# -*- coding: utf-8 -*-
#
# degest documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath(".."))

extensions = [
    'sphinx.ext.autodoc',
    #'sphinxcontrib.fulltoc'
]

autodoc_member_order = 'bysource'

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'degest'
copyright = u'2026, Garrett Pennington'

version = '0.1.0'
release = '0.1.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'degestdoc'

man_pages = [
    ('index', 'degest', u'degest Documentation',
     [u'Garrett Pennington'], 1)
]
