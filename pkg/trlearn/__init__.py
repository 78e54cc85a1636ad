"""Top-level package for trLearn."""

__author__ = """trLearn developers"""
__version__ = "0.1.0"


from ._settings import settings
from . import pp
from . import tl
from . import logging

# Wrapper

from .wrapper.read import load_dataset
from .wrapper.read import read_matrix_csv
