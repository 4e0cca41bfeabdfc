"""
Strict k-local moves for lattice protein structures.

A k-local move replaces the coordinates of one consecutive interval of at most
k residues. It is strict when both interval ends change, so every neighbor
structure belongs to exactly one (interval length, start) pair. The moves of
one interval are the solutions of a constraint problem built here and solved
by the csp_solver module.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Set, Tuple, Union

import numpy as np

from ..config.logging_config import get_logger, log_computation_complete, log_computation_start
from .csp_solver import (
    AllDifferent,
    Assignment,
    Constraint,
    Neigh,
    NeighAnchor,
    NotEqualAnchor,
    OrNotEqualAnchors,
    Problem,
    solve_all,
    solve_random,
)
from .exceptions import InvalidMoveIntervalError, StaleMoveError
from .lattice import Coord, ball_around, lattice_ball
from .protein_model import (
    BackboneStructure,
    ModelKind,
    SideChainStructure,
    Structure,
    validate_structure,
)
from .validation import validate_move_length, validate_seed

logger = get_logger(__name__)

Neighbor = Tuple["MoveSolution", Structure]


@dataclass(frozen=True)
class MoveInterval:
    """Residue interval [start, start + length - 1], 1-based."""

    start: int
    length: int

    def __post_init__(self):
        if isinstance(self.start, bool) or not isinstance(self.start, (int, np.integer)):
            raise InvalidMoveIntervalError("Interval start must be an integer", field="start")
        if isinstance(self.length, bool) or not isinstance(self.length, (int, np.integer)):
            raise InvalidMoveIntervalError("Interval length must be an integer", field="length")
        if self.start < 1 or self.length < 1:
            raise InvalidMoveIntervalError(
                f"Invalid interval s={self.start} len={self.length}",
                field="interval",
                value=(self.start, self.length),
            )

    @property
    def end(self) -> int:
        """Last residue of the interval (1-based, inclusive)."""
        return self.start + self.length - 1

    def check_range(self, n: int) -> None:
        """Raise InvalidMoveIntervalError unless the interval fits a chain of n residues."""
        if self.end > n:
            raise InvalidMoveIntervalError(
                f"Interval s={self.start} len={self.length} exceeds chain length {n}",
                field="interval",
                value=(self.start, self.length),
            )

    def indices(self) -> range:
        """0-based residue indices covered by the interval."""
        return range(self.start - 1, self.end)


@dataclass(frozen=True)
class MoveSolution:
    """Replacement coordinates for the residues of one interval."""

    interval: MoveInterval
    backbone: Tuple[Coord, ...]
    sidechain: Optional[Tuple[Coord, ...]] = None

    def describe(self) -> str:
        parts = []
        for i in range(self.interval.length):
            b = self.backbone[i]
            text = f"{b.x},{b.y},{b.z}"
            if self.sidechain is not None:
                c = self.sidechain[i]
                text += f"/{c.x},{c.y},{c.z}"
            parts.append(text)
        return " ".join(parts)


def move_intervals(n: int, k: int) -> List[MoveInterval]:
    """
    All move intervals of a chain with n residues, length-major.

    Lengths run from 1 to min(k, n), starts from 1 to n - length + 1. The list is
    the unit of partitioned enumeration.
    """
    k = validate_move_length(k)
    return [
        MoveInterval(s, length)
        for length in range(1, min(k, n) + 1)
        for s in range(1, n - length + 2)
    ]


def _fixed_points(structure: Structure, interval: MoveInterval) -> Set[Coord]:
    inside = set(interval.indices())
    fixed = {c for i, c in enumerate(structure.backbone) if i not in inside}
    if structure.kind is ModelKind.SIDECHAIN:
        fixed.update(c for i, c in enumerate(structure.sidechain) if i not in inside)
    return fixed


def _anchors(
    structure: Structure, interval: MoveInterval
) -> Tuple[Optional[Coord], Optional[Coord]]:
    bb = structure.backbone
    left = bb[interval.start - 2] if interval.start > 1 else None
    right = bb[interval.end] if interval.end < len(bb) else None
    return left, right


def _box_region(structure: Structure, interval: MoveInterval) -> Set[Coord]:
    """Lattice points inside the bounding box of the interval, flooded from its points."""
    points = [structure.backbone[i] for i in interval.indices()]
    if structure.kind is ModelKind.SIDECHAIN:
        points += [structure.sidechain[i] for i in interval.indices()]
    low = tuple(min(p[d] for p in points) for d in range(3))
    high = tuple(max(p[d] for p in points) for d in range(3))

    region = set(points)
    frontier = list(region)
    while frontier:
        p = frontier.pop()
        for q in structure.lattice.neighbors_of(p):
            if q in region or any(not (low[d] <= q[d] <= high[d]) for d in range(3)):
                continue
            region.add(q)
            frontier.append(q)
    return region


def candidate_domain(structure: Structure, interval: MoveInterval) -> Set[Coord]:
    """
    Finite value set shared by all variables of an interval's move problem.

    Points within length + 1 neighbor steps of every existing anchor, minus all
    coordinates fixed outside the interval. Without any anchor (the interval is
    the whole chain) the bounding box of the interval's points is inflated by
    length steps instead.
    """
    interval.check_range(len(structure))
    lattice = structure.lattice
    radius = interval.length + 1
    left, right = _anchors(structure, interval)

    if left is None and right is None:
        domain = lattice_ball(lattice, _box_region(structure, interval), interval.length)
    else:
        domain = None
        for anchor in (left, right):
            if anchor is None:
                continue
            ball = ball_around(lattice, anchor, radius)
            domain = ball if domain is None else domain & ball
    return domain - _fixed_points(structure, interval)


def build_backbone_move_csp(structure: BackboneStructure, interval: MoveInterval) -> Problem:
    """Strict move problem for one interval of a backbone-only structure."""
    interval.check_range(len(structure))
    bb = structure.backbone
    length = interval.length
    first, last = interval.start - 1, interval.end - 1
    domain = frozenset(candidate_domain(structure, interval))
    left, right = _anchors(structure, interval)

    constraints: List[Constraint] = [AllDifferent(tuple(range(length)))]
    constraints += [Neigh(i, i + 1) for i in range(length - 1)]
    if left is not None:
        constraints.append(NeighAnchor(0, left))
    if right is not None:
        constraints.append(NeighAnchor(length - 1, right))
    constraints.append(NotEqualAnchor(0, bb[first]))
    constraints.append(NotEqualAnchor(length - 1, bb[last]))
    return Problem(structure.lattice, (domain,) * length, tuple(constraints))


def build_sidechain_move_csp(structure: SideChainStructure, interval: MoveInterval) -> Problem:
    """
    Strict move problem for one interval of a side chain structure.

    Variables 0..len-1 are backbone positions, len..2len-1 the matching side
    chain positions.
    """
    interval.check_range(len(structure))
    bb, sc = structure.backbone, structure.sidechain
    length = interval.length
    first, last = interval.start - 1, interval.end - 1
    domain = frozenset(candidate_domain(structure, interval))
    left, right = _anchors(structure, interval)

    constraints: List[Constraint] = [AllDifferent(tuple(range(2 * length)))]
    constraints += [Neigh(i, i + 1) for i in range(length - 1)]
    constraints += [Neigh(i, length + i) for i in range(length)]
    if left is not None:
        constraints.append(NeighAnchor(0, left))
    if right is not None:
        constraints.append(NeighAnchor(length - 1, right))
    constraints.append(OrNotEqualAnchors(((0, bb[first]), (length, sc[first]))))
    constraints.append(
        OrNotEqualAnchors(((length - 1, bb[last]), (2 * length - 1, sc[last])))
    )
    return Problem(structure.lattice, (domain,) * (2 * length), tuple(constraints))


def build_move_csp(structure: Structure, interval: MoveInterval) -> Problem:
    """Move problem for either model kind."""
    if structure.kind is ModelKind.SIDECHAIN:
        return build_sidechain_move_csp(structure, interval)
    return build_backbone_move_csp(structure, interval)


def _solution_from(interval: MoveInterval, assignment: Assignment, kind: ModelKind) -> MoveSolution:
    length = interval.length
    values = assignment.values
    if kind is ModelKind.SIDECHAIN:
        return MoveSolution(interval, tuple(values[:length]), tuple(values[length:]))
    return MoveSolution(interval, tuple(values))


def _splice(structure: Structure, move: MoveSolution) -> Structure:
    a, b = move.interval.start - 1, move.interval.end
    backbone = structure.backbone[:a] + tuple(move.backbone) + structure.backbone[b:]
    if structure.kind is ModelKind.SIDECHAIN:
        sidechain = structure.sidechain[:a] + tuple(move.sidechain) + structure.sidechain[b:]
        return SideChainStructure(structure.lattice, backbone, sidechain)
    return BackboneStructure(structure.lattice, backbone)


def enumerate_interval(structure: Structure, interval: MoveInterval) -> Iterator[Neighbor]:
    """All strict moves of a single interval, in solver order."""
    problem = build_move_csp(structure, interval)
    for assignment in solve_all(problem):
        move = _solution_from(interval, assignment, structure.kind)
        yield move, _splice(structure, move)


def enumerate_neighbors(
    structure: Structure, k: int, intervals: Optional[Iterable[MoveInterval]] = None
) -> Iterator[Neighbor]:
    """
    Stream the strict k-local neighborhood of a structure.

    Intervals are visited length-major (k' = 1..k), then by start; within an
    interval solutions come in solver order. The structure itself is never
    emitted and no neighbor is emitted twice.

    Args:
        structure: Valid source structure
        k: Maximal interval length
        intervals: Optional subset of move_intervals(n, k) for partitioned runs

    Raises:
        InvalidStructureError: If the source structure is invalid
    """
    validate_structure(structure).raise_for_violation()
    if intervals is None:
        intervals = move_intervals(len(structure), k)
    count = 0
    for interval in intervals:
        for neighbor in enumerate_interval(structure, interval):
            count += 1
            yield neighbor
    logger.debug(f"Enumerated {count} neighbors (n={len(structure)}, k={k})")


def sample_neighbor(
    structure: Structure, k: int, rng: np.random.Generator
) -> Optional[Neighbor]:
    """
    Draw one random strict neighbor using an existing generator.

    Intervals are tried in a uniformly random order until one is satisfiable.
    """
    intervals = move_intervals(len(structure), k)
    for idx in rng.permutation(len(intervals)):
        interval = intervals[int(idx)]
        assignment = solve_random(build_move_csp(structure, interval), rng)
        if assignment is not None:
            move = _solution_from(interval, assignment, structure.kind)
            return move, _splice(structure, move)
    return None


def random_neighbor(
    structure: Structure, k: int, seed: Union[int, np.random.Generator]
) -> Optional[Neighbor]:
    """
    Random strict k-local neighbor, deterministic given the seed.

    The interval is sampled uniformly, not the neighbor; returns None when every
    interval is unsatisfiable.
    """
    validate_structure(structure).raise_for_violation()
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(validate_seed(seed))
    return sample_neighbor(structure, k, rng)


def apply_move(structure: Structure, move: MoveSolution) -> Structure:
    """
    Replace the interval coordinates of a structure.

    Raises:
        StaleMoveError: If the move does not fit the structure, yields an invalid
            structure or leaves an interval end unchanged
    """
    interval = move.interval
    if interval.end > len(structure):
        raise StaleMoveError(
            f"Move interval s={interval.start} len={interval.length} exceeds chain length "
            f"{len(structure)}"
        )
    has_sidechain = structure.kind is ModelKind.SIDECHAIN
    if (move.sidechain is not None) != has_sidechain:
        raise StaleMoveError("Move model kind does not match the structure")
    if len(move.backbone) != interval.length or (
        has_sidechain and len(move.sidechain) != interval.length
    ):
        raise StaleMoveError("Move coordinate count does not match its interval")

    result = _splice(structure, move)
    check = validate_structure(result)
    if not check.ok:
        raise StaleMoveError(
            f"Move yields an invalid structure: {check.violation.describe()}",
            {"violation": check.violation},
        )
    for i in {interval.start - 1, interval.end - 1}:
        unchanged = result.backbone[i] == structure.backbone[i]
        if has_sidechain:
            unchanged = unchanged and result.sidechain[i] == structure.sidechain[i]
        if unchanged:
            raise StaleMoveError(f"Move leaves interval end {i + 1} unchanged")
    return result


def reverse_move(structure: Structure, move: MoveSolution) -> MoveSolution:
    """The move taking apply_move(structure, move) back to structure."""
    indices = move.interval.indices()
    backbone = tuple(structure.backbone[i] for i in indices)
    sidechain = None
    if structure.kind is ModelKind.SIDECHAIN:
        sidechain = tuple(structure.sidechain[i] for i in indices)
    return MoveSolution(move.interval, backbone, sidechain)


def count_neighbors(structure: Structure, k: int) -> int:
    """Size of the strict k-local neighborhood."""
    log_computation_start("neighbor count", n=len(structure), k=k)
    total = sum(1 for _ in enumerate_neighbors(structure, k))
    log_computation_complete("neighbor count", f"{total} neighbors")
    return total
