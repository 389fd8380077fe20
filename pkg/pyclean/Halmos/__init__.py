"""
Two-projection canonical forms and the invertibility criteria built on them.
"""

from .Form import *
from .Criteria import *
