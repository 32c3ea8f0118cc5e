"""modlie: exact modular Lie algebra computations over prime fields.

Structure constants, restricted structures and minimal p-envelopes,
module constructions (baby Verma modules and friends), Chevalley-Eilenberg
cohomology, restricted 1-cohomology, and a machine-checkable catalogue of
dimension results for the Zassenhaus family W(m).
"""

__version__ = "0.1.0"

DEFAULT_SEED = 20240915
