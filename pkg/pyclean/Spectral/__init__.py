"""
Spectral tools: Schur forms, Riesz projections and strongly clean decompositions.
"""

from .Schur import *
from .Riesz import *
from .StronglyClean import *
