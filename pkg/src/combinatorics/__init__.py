"""
Combinatorial invariants module for Theta Complex.
"""
