"""
Counterexamples and sharpness experiments.
"""

from .Tables import *
from .Counterexamples import *
