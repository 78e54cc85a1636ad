# Configuration file for the Sphinx documentation builder.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import trlearn

# -- General configuration ---------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
]

autosummary_generate = True
autodoc_member_order = "bysource"
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_init_with_doc = False
napoleon_use_rtype = True  # having a separate entry generally helps readability
napoleon_use_param = True
napoleon_custom_sections = [("Params", "Parameters")]
todo_include_todos = False

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "trLearn"
copyright = "2026, trLearn developers"
author = "trLearn developers"

version = trlearn.__version__
release = trlearn.__version__

language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "trlearndoc"

# -- Options for LaTeX output ------------------------------------------

latex_documents = [
    (
        master_doc,
        "trlearn.tex",
        "trLearn Documentation",
        "trLearn developers",
        "manual",
    ),
]

man_pages = [(master_doc, "trlearn", "trLearn Documentation", [author], 1)]

texinfo_documents = [
    (
        master_doc,
        "trlearn",
        "trLearn Documentation",
        author,
        "trlearn",
        "Cross-validated Tikhonov regression for multivariate calibration.",
        "Miscellaneous",
    ),
]
