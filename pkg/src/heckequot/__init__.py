"""heckequot: exact Kazhdan-Lusztig cell computations, asymptotic rings,
and extended-quotient matching for a small catalog of reductive groups."""

__version__ = "0.1.0"
