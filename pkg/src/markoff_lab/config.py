"""Engineering constants shared by the library, the runner and the CLI."""

from fractions import Fraction

# Trial-division bound when stripping square factors off discriminants.
SQUAREFREE_TRIAL_LIMIT = 2**12

# Bits of √5 used for the rational enclosure of the golden ratio γ.
GAMMA_BITS = 40

# Working precision (bits) of the mpmath interval context.
IV_PRECISION = 128

# Bounded-band diagnostics; the underlying statements only assert ≍.
BAND_LO = Fraction(1, 10**3)
BAND_HI = Fraction(10**3)

# Digits required on each side of a position before it counts as interior.
INTERIOR_MARGIN = 32

DEFAULT_DEPTH = 6
DEFAULT_ZIGZAG_STEPS = 12
DEFAULT_BOX = 50
DEFAULT_DIGITS = 300
DEFAULT_PRECISION = Fraction(1, 10**60)

THREADS_ENV = "MARKOFF_LAB_THREADS"
