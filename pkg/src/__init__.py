"""
Lattice Protein Move Explorer

Constraint-based strict k-local move neighborhoods for backbone-only and
side chain lattice proteins, with energy evaluation, gradient walks,
two-stage folding simulations and dRMSD/cRMSD structure comparison.
"""

__version__ = "1.0.0"
__author__ = "Lattice Move Explorer Team"
