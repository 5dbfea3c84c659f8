"""Exact computations around the Markoff spectrum, the Cohn lift and the extremal numbers ξₘ."""

__version__ = "1.0.0"
