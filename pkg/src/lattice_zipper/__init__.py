"""Exact lattice Green's functions on Z^2 and the triangular lattice, their
branched double covers, and the dimer/spanning-tree statistics built on them."""

from .exact import ComplexElem, RingElem, Series, parse, ring_to_float, to_text

__all__ = ["ComplexElem", "RingElem", "Series", "parse", "ring_to_float", "to_text"]
__version__ = "0.1.0"
