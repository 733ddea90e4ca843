"""
Theta Complex - Lovasz-type theta numbers of pure simplicial complexes.
"""

__version__ = "0.1.0"
