"""
Random complex module for Theta Complex.
"""
