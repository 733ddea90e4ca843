"""
CLI module for Theta Complex.
"""
