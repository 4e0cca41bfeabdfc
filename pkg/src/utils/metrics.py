"""
Structural similarity measures in Å.

Lattice coordinates are scaled so that neighbored points are 3.8 Å apart.
cRMSD compares coordinates after optimal rigid superposition (Kabsch),
dRMSD compares intramolecular distances and needs no superposition.
"""

from dataclasses import dataclass
from typing import Optional, Sequence as SequenceType, Union

import numpy as np
from scipy.spatial.distance import pdist

from ..config.logging_config import get_logger
from .exceptions import InvalidParameterError, InvariantViolationError
from .lattice import coords_to_angstrom
from .protein_model import ModelKind, Structure
from .validation import validate_same_length

logger = get_logger(__name__)

ORTHONORMAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class RigidMotion:
    """Proper rotation followed by a translation: x -> R x + t."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        translation = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(rotation.T @ rotation, np.eye(3), atol=ORTHONORMAL_TOLERANCE):
            raise InvariantViolationError("Rotation matrix is not orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > ORTHONORMAL_TOLERANCE:
            raise InvariantViolationError("Rotation matrix is not proper (det != +1)")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.rotation.T + self.translation


def kabsch(P: np.ndarray, Q: np.ndarray) -> RigidMotion:
    """
    Rigid motion minimizing sum |R P_i + t - Q_i|^2.

    Reflections are excluded: when the optimal orthogonal map has determinant
    -1, the smallest singular direction is flipped.

    Args:
        P: (m, 3) points to move
        Q: (m, 3) target points

    Raises:
        LengthMismatchError: If P and Q have different numbers of points
    """
    P = np.asarray(P, dtype=float).reshape(-1, 3)
    Q = np.asarray(Q, dtype=float).reshape(-1, 3)
    validate_same_length(P, Q, "point sets")
    if len(P) == 0:
        raise InvalidParameterError("Superposition needs at least one point", field="P")

    p_mean = P.mean(axis=0)
    q_mean = Q.mean(axis=0)
    H = (P - p_mean).T @ (Q - q_mean)
    U, _, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T)) or 1.0
    D = np.diag([1.0, 1.0, d])
    R = Vt.T @ D @ U.T
    return RigidMotion(R, q_mean - R @ p_mean)


@dataclass(frozen=True, eq=False)
class StructurePoints:
    """Å coordinates of one structure: backbone (n, 3) and optional side chains (n, 3)."""

    backbone: np.ndarray
    sidechain: Optional[np.ndarray] = None

    def __post_init__(self):
        backbone = np.asarray(self.backbone, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "backbone", backbone)
        if self.sidechain is not None:
            sidechain = np.asarray(self.sidechain, dtype=float).reshape(-1, 3)
            validate_same_length(backbone, sidechain, "backbone and side chain points")
            object.__setattr__(self, "sidechain", sidechain)

    def __len__(self) -> int:
        return len(self.backbone)

    @property
    def has_sidechain(self) -> bool:
        return self.sidechain is not None

    def all_points(self) -> np.ndarray:
        if self.sidechain is None:
            return self.backbone
        return np.vstack([self.backbone, self.sidechain])

    def backbone_only(self) -> "StructurePoints":
        return StructurePoints(self.backbone)


def points_from_structure(structure: Structure) -> StructurePoints:
    """Scale a lattice structure to Å."""
    backbone = coords_to_angstrom(structure.lattice, structure.backbone)
    if structure.kind is ModelKind.SIDECHAIN:
        return StructurePoints(backbone, coords_to_angstrom(structure.lattice, structure.sidechain))
    return StructurePoints(backbone)


def points_from_pdb(residues: SequenceType) -> StructurePoints:
    """Cα trace and side chain centroids of residues read by pdb_utils.read_pdb_points."""
    backbone = np.array([r.ca for r in residues], dtype=float).reshape(-1, 3)
    sidechain = np.array([r.centroid for r in residues], dtype=float).reshape(-1, 3)
    return StructurePoints(backbone, sidechain)


PointsLike = Union[Structure, StructurePoints]


def _as_points(value: PointsLike) -> StructurePoints:
    if isinstance(value, StructurePoints):
        return value
    return points_from_structure(value)


def _paired(a: PointsLike, b: PointsLike):
    pa, pb = _as_points(a), _as_points(b)
    validate_same_length(pa, pb, "structures")
    if pa.has_sidechain != pb.has_sidechain:
        raise InvalidParameterError(
            "Cannot compare a side chain model with a backbone-only model", field="model"
        )
    if len(pa) == 0:
        raise InvalidParameterError("Cannot compare empty structures", field="structures")
    return pa, pb


def crmsd(a: PointsLike, b: PointsLike) -> float:
    """
    Coordinate RMSD after superposing ``a`` onto ``b``.

    All represented points (backbone and side chains jointly) anchor the
    superposition; the mean runs over n points in the backbone-only model and
    over 2n points in the side chain model.
    """
    pa, pb = _paired(a, b)
    P, Q = pa.all_points(), pb.all_points()
    moved = kabsch(P, Q).apply(P)
    return float(np.sqrt(np.sum((moved - Q) ** 2) / len(P)))


def drmsd(a: PointsLike, b: PointsLike) -> float:
    """
    Distance RMSD normalized by n^2.

    Sums squared differences of all pairwise backbone distances, and in the side
    chain model additionally of all pairwise side chain distances and of the
    intra-residue backbone/side chain distances.
    """
    pa, pb = _paired(a, b)
    n = len(pa)
    total = float(np.sum((pdist(pa.backbone) - pdist(pb.backbone)) ** 2))
    if pa.has_sidechain:
        total += float(np.sum((pdist(pa.sidechain) - pdist(pb.sidechain)) ** 2))
        intra_a = np.linalg.norm(pa.backbone - pa.sidechain, axis=1)
        intra_b = np.linalg.norm(pb.backbone - pb.sidechain, axis=1)
        total += float(np.sum((intra_a - intra_b) ** 2))
    return float(np.sqrt(total / (n * n)))
