"""
Configuration package for the lattice protein move explorer.
"""

from .settings import *
