"""
Dense matrix foundations: validation, norms, projections and their lattice.
"""

from .Core import *
from .Projections import *
