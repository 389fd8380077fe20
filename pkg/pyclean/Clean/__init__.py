"""
Clean decomposition pipelines and their certificates.
"""

from .Certificate import *
from .Pipelines import *
