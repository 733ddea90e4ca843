"""
Spectral module for Theta Complex: chain operators and dense linear algebra.
"""
