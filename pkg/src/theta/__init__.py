"""
Theta number module for Theta Complex.
"""
