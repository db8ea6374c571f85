"""Pseudo-random subsets of F_p from polynomial families.

Exact pseudorandomness measures, family complexity with witness
certificates, and numerical verification of the exponential-sum and
point-counting bounds the constructions rest on.
"""

__version__ = "0.1.0"
