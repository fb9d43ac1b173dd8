# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import datetime
import os
import sys

sys.path.insert(0, os.path.abspath("../"))
from sentipulse import __version__

now = datetime.datetime.now()


# -- Project information -----------------------------------------------------

project = "sentipulse"
copyright = f"{now.year}, sentipulse developers"
author = "sentipulse developers"

# The full version, including alpha/beta/rc tags
release = __version__


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx_copybutton",
    "myst_parser",
    "sphinx.ext.imgmath",
    "sphinx.ext.autosectionlabel",
]

autodoc_typehints = "description"

# external packages mocked for the doc build
autodoc_mock_imports = [
    "numpy",
    "scipy",
    "pandas",
    "tabulate",
    "loguru",
]

# If true, the current module name will be prepended to all description
# unit titles (such as .. function::).
add_module_names = False

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "friendly"

# -- Options for HTML output -------------------------------------------------

html_theme = "furo"
html_title = "sentipulse"
