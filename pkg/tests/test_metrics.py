"""
Tests for Kabsch superposition, cRMSD and dRMSD.
"""

import unittest

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.transform import Rotation

from src.utils.exceptions import InvalidParameterError, InvariantViolationError, LengthMismatchError
from src.utils.lattice import lattice_from_name
from src.utils.metrics import (
    RigidMotion,
    StructurePoints,
    crmsd,
    drmsd,
    kabsch,
    points_from_pdb,
    points_from_structure,
)
from src.utils.pdb_utils import PdbResiduePoints
from src.utils.protein_model import BackboneStructure
from src.utils.search import random_valid_structure

CUB = lattice_from_name("CUB")
FCC = lattice_from_name("FCC")

# no mirror symmetry: edge lengths 1, 2 and 3 along the axes
CHIRAL = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]])

point_sets = arrays(
    np.float64,
    st.tuples(st.integers(1, 12), st.just(3)),
    elements=st.floats(-50, 50, allow_nan=False, allow_infinity=False),
)


def _moved(points: StructurePoints, rotation: np.ndarray, shift: np.ndarray) -> StructurePoints:
    backbone = points.backbone @ rotation.T + shift
    if points.sidechain is None:
        return StructurePoints(backbone)
    return StructurePoints(backbone, points.sidechain @ rotation.T + shift)


def _direct_crmsd(a: StructurePoints, b: StructurePoints) -> float:
    """Superpose with scipy's vector alignment, then average over all points."""
    P, Q = a.all_points(), b.all_points()
    Pc, Qc = P - P.mean(axis=0), Q - Q.mean(axis=0)
    rotation, _ = Rotation.align_vectors(Qc, Pc)
    moved = rotation.apply(Pc)
    return float(np.sqrt(np.sum((moved - Qc) ** 2) / len(P)))


def _direct_drmsd(a: StructurePoints, b: StructurePoints) -> float:
    n = len(a)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += (
                np.linalg.norm(a.backbone[i] - a.backbone[j])
                - np.linalg.norm(b.backbone[i] - b.backbone[j])
            ) ** 2
            if a.has_sidechain:
                total += (
                    np.linalg.norm(a.sidechain[i] - a.sidechain[j])
                    - np.linalg.norm(b.sidechain[i] - b.sidechain[j])
                ) ** 2
        if a.has_sidechain:
            total += (
                np.linalg.norm(a.backbone[i] - a.sidechain[i])
                - np.linalg.norm(b.backbone[i] - b.sidechain[i])
            ) ** 2
    return float(np.sqrt(total / (n * n)))


class TestKabsch(unittest.TestCase):
    def test_identity(self):
        """Test superposition of identical points."""
        motion = kabsch(CHIRAL, CHIRAL)
        np.testing.assert_allclose(motion.rotation, np.eye(3), atol=1e-9)
        np.testing.assert_allclose(motion.translation, np.zeros(3), atol=1e-9)

    def test_recovers_quarter_turn(self):
        """Test recovery of a quarter turn."""
        rz = Rotation.from_euler("z", 90, degrees=True).as_matrix()
        Q = CHIRAL @ rz.T + np.array([1.0, 2.0, 3.0])
        motion = kabsch(CHIRAL, Q)
        np.testing.assert_allclose(motion.apply(CHIRAL), Q, atol=1e-9)

    def test_reflection_is_not_reproduced(self):
        """Test that a mirror image is not superposed."""
        mirrored = CHIRAL * np.array([1.0, 1.0, -1.0])
        motion = kabsch(CHIRAL, mirrored)
        self.assertAlmostEqual(np.linalg.det(motion.rotation), 1.0, places=9)
        residual = np.sum((motion.apply(CHIRAL) - mirrored) ** 2)
        self.assertGreater(residual, 1e-6)

    def test_length_mismatch(self):
        """Test point sets of different sizes."""
        with self.assertRaises(LengthMismatchError):
            kabsch(CHIRAL, CHIRAL[:3])

    def test_empty_input(self):
        """Test empty point sets."""
        with self.assertRaises(InvalidParameterError):
            kabsch(np.zeros((0, 3)), np.zeros((0, 3)))

    def test_improper_rotation_rejected(self):
        """Test rejection of an improper rotation."""
        with self.assertRaises(InvariantViolationError):
            RigidMotion(np.diag([1.0, 1.0, -1.0]), np.zeros(3))


@settings(max_examples=200, deadline=None)
@given(P=point_sets, seed=st.integers(0, 2**32 - 1))
def test_kabsch_rotation_is_proper_and_optimal(P, seed):
    """Test that the rotation is proper and minimal."""
    rng = np.random.default_rng(seed)
    Q = P + rng.normal(scale=5.0, size=P.shape)
    motion = kabsch(P, Q)
    R = motion.rotation
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-9)
    assert abs(np.linalg.det(R) - 1.0) < 1e-9
    # no worse than just matching the centroids
    residual = np.sum((motion.apply(P) - Q) ** 2)
    centered = np.sum(((P - P.mean(axis=0)) - (Q - Q.mean(axis=0))) ** 2)
    assert residual <= centered + 1e-6 * max(1.0, centered)


@pytest.mark.parametrize("seed", range(20))
def test_kabsch_recovers_random_motion(seed):
    """Test recovery of random rigid motions."""
    rng = np.random.default_rng(seed)
    P = rng.normal(scale=10.0, size=(8, 3))
    R = Rotation.from_rotvec(rng.normal(size=3)).as_matrix()
    t = rng.normal(scale=20.0, size=3)
    Q = P @ R.T + t
    motion = kabsch(P, Q)
    np.testing.assert_allclose(motion.rotation, R, atol=1e-8)
    np.testing.assert_allclose(motion.apply(P), Q, atol=1e-8)


class TestRmsd:
    @pytest.mark.parametrize("lattice", [CUB, FCC])
    @pytest.mark.parametrize("model", ["backbone", "sidechain"])
    def test_zero_for_identical(self, lattice, model):
        """Test zero RMSD for identical structures."""
        structure = random_valid_structure(12, lattice, model, seed=3)
        assert crmsd(structure, structure) == pytest.approx(0.0, abs=1e-9)
        assert drmsd(structure, structure) == 0.0

    @pytest.mark.parametrize("model", ["backbone", "sidechain"])
    def test_rigid_motion_invariance(self, model):
        """Test RMSD invariance under rigid motion."""
        points = points_from_structure(random_valid_structure(10, FCC, model, seed=1))
        rng = np.random.default_rng(0)
        for seed in range(100):
            rotation = Rotation.from_rotvec(rng.normal(size=3)).as_matrix()
            if seed % 2:
                rotation = rotation @ np.diag([1.0, 1.0, -1.0])
            moved = _moved(points, rotation, rng.normal(scale=30.0, size=3))
            assert drmsd(points, moved) == pytest.approx(0.0, abs=1e-9)
            if seed % 2 == 0:
                assert crmsd(points, moved) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("model", ["backbone", "sidechain"])
    def test_matches_direct_evaluation(self, model):
        """Test dRMSD against a direct evaluation."""
        for seed in range(10):
            a = points_from_structure(random_valid_structure(7, CUB, model, seed=seed))
            b = points_from_structure(random_valid_structure(7, CUB, model, seed=seed + 100))
            assert crmsd(a, b) == pytest.approx(_direct_crmsd(a, b), abs=1e-9)
            assert drmsd(a, b) == pytest.approx(_direct_drmsd(a, b), abs=1e-9)

    def test_symmetry(self):
        """Test that RMSD is symmetric."""
        a = random_valid_structure(9, FCC, "sidechain", seed=4)
        b = random_valid_structure(9, FCC, "sidechain", seed=5)
        assert drmsd(a, b) == drmsd(b, a)
        assert crmsd(a, b) == pytest.approx(crmsd(b, a), abs=1e-9)
        assert crmsd(a, b) > 0

    def test_lattice_scaling(self):
        """Test lattice units scaled to angstrom."""
        a = BackboneStructure(CUB, ((0, 0, 0), (1, 0, 0)))
        b = BackboneStructure(CUB, ((0, 0, 0), (1, 0, 0)))
        points = points_from_structure(a)
        np.testing.assert_allclose(points.backbone[1], [3.8, 0.0, 0.0])
        assert crmsd(a, b) == pytest.approx(0.0, abs=1e-9)

    def test_length_mismatch(self):
        """Test structures of different lengths."""
        a = random_valid_structure(5, CUB, "backbone", seed=0)
        b = random_valid_structure(6, CUB, "backbone", seed=0)
        with pytest.raises(LengthMismatchError):
            drmsd(a, b)

    def test_model_mismatch(self):
        """Test structures of different model kinds."""
        a = random_valid_structure(5, CUB, "backbone", seed=0)
        b = random_valid_structure(5, CUB, "sidechain", seed=0)
        with pytest.raises(InvalidParameterError):
            crmsd(a, b)

    def test_pdb_points(self):
        """Test RMSD between structure and PDB points."""
        residues = [
            PdbResiduePoints("A", 1, np.array([0.0, 0.0, 0.0]), np.array([0.0, 1.5, 0.0])),
            PdbResiduePoints("G", 2, np.array([3.8, 0.0, 0.0]), np.array([3.8, 0.0, 0.0])),
        ]
        points = points_from_pdb(residues)
        assert points.has_sidechain
        assert points.all_points().shape == (4, 3)
        assert drmsd(points, points) == 0.0
