"""Exact verification toolkit for spectral R-matrices, RLL algebras, Fock
space constructions of affine gl(n) and q-deformed correlation functions."""

__version__ = "0.1.0"
