"""
Test package for Theta Complex.
"""
