"""
NGBS-Toolkit: Generalized binomial states, nonclassicality witnesses and
phase-space distributions
"""

__version__ = "0.1.0"
__author__ = "Keeg"

from .fock.state import FockSuperposition, make_state
from .states.ngbs import NGBSParams, ngbs_state
from .runner import ToolkitRunner
from .parser import SpecParser
from .cli import main

__all__ = ['FockSuperposition', 'make_state', 'NGBSParams', 'ngbs_state',
           'ToolkitRunner', 'SpecParser', 'main']
