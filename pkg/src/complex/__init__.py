"""
Simplicial complex module for Theta Complex.
"""
