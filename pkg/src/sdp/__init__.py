"""
Semidefinite programming module for Theta Complex.
"""
