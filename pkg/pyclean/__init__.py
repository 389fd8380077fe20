"""
Certified clean decompositions of complex matrices.

A decomposition writes an element T as U + P, with U invertible (or injective)
and P an idempotent, and every decomposition comes with a certificate that can
be checked independently of the code which built it.

Subpackages:

* `Matrix`: matrix validation, norms and projections.
* `Spectral`: Schur forms, Riesz projections and strongly clean decompositions.
* `Halmos`: the canonical form of a projection pair and the criteria built on it.
* `Clean`: the decomposition pipelines and their certificates.
* `Witness`: counterexamples and sharpness tables.
* `Host`: matrix files, corpora, reports and the command dispatcher.
"""

from .Constants import CleanConstants, default_tolerance
from .Errors import *
