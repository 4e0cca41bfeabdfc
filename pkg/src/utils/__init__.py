"""
Core utilities of the lattice protein move explorer.
"""

from .csp_solver import Problem, is_solution, propagate, solve_all, solve_random
from .lattice import Coord, LatticeDescriptor, are_neighbors, lattice_from_name, neighbors_of
from .metrics import RigidMotion, crmsd, drmsd, kabsch
from .moves import (
    MoveInterval,
    MoveSolution,
    apply_move,
    build_move_csp,
    enumerate_neighbors,
    random_neighbor,
)
from .protein_model import (
    BackboneStructure,
    ContactPotential,
    HPMapping,
    ModelKind,
    Sequence,
    SideChainStructure,
    energy,
    energy_backbone,
    energy_sidechain,
    hp_potential,
    load_potential,
    translate_to_hp,
    validate_backbone,
    validate_sidechain,
)
from .search import AnnealSchedule, gradient_walk, metropolis_run, two_stage_fold
