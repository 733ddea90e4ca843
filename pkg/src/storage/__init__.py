"""
Storage module for Theta Complex.
"""
