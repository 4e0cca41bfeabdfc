"""
Test package for the lattice move explorer.
"""

__version__ = "1.0.0"
