"""
Matrix files, corpora, reports and the command line dispatcher.
"""

from .MatrixFile import *
from .Corpus import *
from .Report import *
from .Commands import *
