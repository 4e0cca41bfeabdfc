"""
Integer lattices and their neighborhood relation.

This module defines lattice coordinates, the SQ / CUB / FCC lattice
descriptors, neighbor iteration, the scaling of lattice units to Å and the
signed axis permutations preserving a lattice's neighbor vectors.
The square lattice is embedded in Z^3 with z = 0.
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import FrozenSet, Iterable, List, NamedTuple, Set, Tuple

import numpy as np

from ..config.settings import CA_DISTANCE_ANGSTROM, SUPPORTED_LATTICES
from .exceptions import LatticeError, LatticeNotSupportedError


class Coord(NamedTuple):
    """Lattice point in lattice units. Tuple order gives the lexicographic order."""

    x: int
    y: int
    z: int

    def shift(self, v: "Coord") -> "Coord":
        """Return self + v."""
        return Coord(self.x + v.x, self.y + v.y, self.z + v.z)

    def delta(self, other: "Coord") -> "Coord":
        """Return self - other."""
        return Coord(self.x - other.x, self.y - other.y, self.z - other.z)

    def negate(self) -> "Coord":
        return Coord(-self.x, -self.y, -self.z)


ORIGIN = Coord(0, 0, 0)


@dataclass(frozen=True)
class LatticeDescriptor:
    """
    Named integer lattice with its neighbor vector set.

    Attributes:
        name: Lattice identifier (SQ, CUB, FCC)
        neighbor_vectors: Neighbor vectors in lexicographic order
        unit_length: Euclidean length of every neighbor vector
        angstrom_per_unit: Scale mapping neighbor distance to 3.8 Å
    """

    name: str
    neighbor_vectors: Tuple[Coord, ...]
    unit_length: float = field(init=False)
    angstrom_per_unit: float = field(init=False)
    _vector_set: FrozenSet[Coord] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vectors = tuple(sorted(Coord(*v) for v in self.neighbor_vectors))
        vector_set = frozenset(vectors)
        if not vectors:
            raise LatticeError("Lattice needs at least one neighbor vector", lattice=self.name)
        if len(vector_set) != len(vectors):
            raise LatticeError("Neighbor vectors must be distinct", lattice=self.name)
        if ORIGIN in vector_set:
            raise LatticeError("Zero vector cannot be a neighbor vector", lattice=self.name)
        if any(v.negate() not in vector_set for v in vectors):
            raise LatticeError("Neighbor vectors must be closed under negation", lattice=self.name)
        lengths = {v.x * v.x + v.y * v.y + v.z * v.z for v in vectors}
        if len(lengths) != 1:
            raise LatticeError("Neighbor vectors must share one length", lattice=self.name)

        unit_length = math.sqrt(lengths.pop())
        object.__setattr__(self, "neighbor_vectors", vectors)
        object.__setattr__(self, "_vector_set", vector_set)
        object.__setattr__(self, "unit_length", unit_length)
        object.__setattr__(self, "angstrom_per_unit", CA_DISTANCE_ANGSTROM / unit_length)

    @property
    def coordination(self) -> int:
        return len(self.neighbor_vectors)

    def is_neighbor_vector(self, v: Tuple[int, int, int]) -> bool:
        return v in self._vector_set

    def are_neighbors(self, p: Coord, q: Coord) -> bool:
        return (p[0] - q[0], p[1] - q[1], p[2] - q[2]) in self._vector_set

    def neighbors_of(self, p: Coord) -> List[Coord]:
        # vectors are sorted, so the translated list is sorted too
        return [Coord(p[0] + v.x, p[1] + v.y, p[2] + v.z) for v in self.neighbor_vectors]


_VECTORS = {
    "SQ": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)],
    "CUB": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    "FCC": [
        (1, 1, 0), (-1, -1, 0),
        (1, 0, 1), (-1, 0, -1),
        (0, 1, 1), (0, -1, -1),
        (1, -1, 0), (-1, 1, 0),
        (1, 0, -1), (-1, 0, 1),
        (0, 1, -1), (0, -1, 1),
    ],
}


@lru_cache(maxsize=None)
def lattice_from_name(name: str) -> LatticeDescriptor:
    """
    Return the descriptor of a supported lattice.

    Args:
        name: Lattice name, case-insensitive (SQ, CUB or FCC)

    Returns:
        LatticeDescriptor with the published neighbor vector set

    Raises:
        LatticeNotSupportedError: For any other name
    """
    key = str(name).strip().upper()
    if key not in _VECTORS:
        raise LatticeNotSupportedError(
            f"Lattice '{name}' is not supported; valid lattices: {', '.join(SUPPORTED_LATTICES)}",
            lattice=str(name),
        )
    return LatticeDescriptor(key, tuple(Coord(*v) for v in _VECTORS[key]))


def are_neighbors(lattice: LatticeDescriptor, p: Coord, q: Coord) -> bool:
    """True iff p - q is a neighbor vector of the lattice."""
    return lattice.are_neighbors(p, q)


def neighbors_of(lattice: LatticeDescriptor, p: Coord) -> List[Coord]:
    """All lattice neighbors of p in lexicographic order."""
    return lattice.neighbors_of(p)


def to_angstrom(lattice: LatticeDescriptor, p: Coord) -> np.ndarray:
    """Scale a lattice point to Å so that neighbored points are 3.8 Å apart."""
    return np.asarray(p, dtype=float) * lattice.angstrom_per_unit


def coords_to_angstrom(lattice: LatticeDescriptor, coords: Iterable[Coord]) -> np.ndarray:
    """Scale a sequence of lattice points to an (m, 3) Å array."""
    arr = np.asarray(list(coords), dtype=float).reshape(-1, 3)
    return arr * lattice.angstrom_per_unit


def lattice_ball(
    lattice: LatticeDescriptor, centers: Iterable[Coord], radius: int
) -> Set[Coord]:
    """
    All lattice points reachable from any center within ``radius`` neighbor steps.

    Args:
        lattice: Lattice descriptor
        centers: Start points (included in the result)
        radius: Maximal number of neighbor steps

    Returns:
        Set of reachable points
    """
    reached = {Coord(*c) for c in centers}
    frontier = list(reached)
    for _ in range(radius):
        next_frontier = []
        for p in frontier:
            for q in lattice.neighbors_of(p):
                if q not in reached:
                    reached.add(q)
                    next_frontier.append(q)
        frontier = next_frontier
    return reached


@lru_cache(maxsize=None)
def point_group(lattice: LatticeDescriptor) -> Tuple[np.ndarray, ...]:
    """
    Signed axis permutations mapping the neighbor vector set onto itself.

    Returns 48 matrices for CUB and FCC and 16 for SQ.
    """
    vectors = np.array(lattice.neighbor_vectors, dtype=int)
    vector_set = set(lattice.neighbor_vectors)
    group = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            matrix = np.zeros((3, 3), dtype=int)
            for row, (col, sign) in enumerate(zip(perm, signs)):
                matrix[row, col] = sign
            mapped = {Coord(*map(int, v)) for v in vectors @ matrix.T}
            if mapped == vector_set:
                matrix.setflags(write=False)
                group.append(matrix)
    return tuple(group)


def apply_symmetry(matrix: np.ndarray, p: Coord) -> Coord:
    """Apply an integer 3x3 matrix to a lattice point."""
    x, y, z = (int(c) for c in matrix @ np.asarray(p, dtype=int))
    return Coord(x, y, z)


@lru_cache(maxsize=None)
def ball_offsets(lattice: LatticeDescriptor, radius: int) -> FrozenSet[Coord]:
    """Offsets of all points within ``radius`` neighbor steps of the origin."""
    return frozenset(lattice_ball(lattice, [ORIGIN], radius))


def ball_around(lattice: LatticeDescriptor, center: Coord, radius: int) -> Set[Coord]:
    """lattice_ball for a single center, translated from cached offsets."""
    cx, cy, cz = center
    return {Coord(cx + o.x, cy + o.y, cz + o.z) for o in ball_offsets(lattice, radius)}
