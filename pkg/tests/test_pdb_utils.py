"""
Unit tests for the PDB point reader, on synthetic fixed-column PDB text.
"""

import io
import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.utils.exceptions import ChainNotFoundError, NoAtomRecordsError
from src.utils.pdb_utils import load_pdb_points, pdb_sequence, read_pdb_points


def atom_line(serial, name, res, num, xyz, element, chain="A", altloc=" ", record="ATOM"):
    padded = name if len(name) == 4 else f" {name:<3}"
    x, y, z = xyz
    return (
        f"{record:<6}{serial:>5} {padded}{altloc}{res:>3} {chain}{num:>4}    "
        f"{x:>8.3f}{y:>8.3f}{z:>8.3f}{1.0:>6.2f}{0.0:>6.2f}          {element:>2}"
    )


def backbone(start, res, num, origin, chain="A"):
    ox, oy, oz = origin
    return [
        atom_line(start, "N", res, num, (ox - 1.0, oy, oz), "N", chain),
        atom_line(start + 1, "CA", res, num, (ox, oy, oz), "C", chain),
        atom_line(start + 2, "C", res, num, (ox + 1.0, oy, oz), "C", chain),
        atom_line(start + 3, "O", res, num, (ox + 1.0, oy + 1.0, oz), "O", chain),
    ]


def ala_gly():
    lines = backbone(1, "ALA", 1, (0.0, 0.0, 0.0))
    lines.append(atom_line(5, "CB", "ALA", 1, (1.0, 2.0, 3.0), "C"))
    lines += backbone(6, "GLY", 2, (3.8, 0.0, 0.0))
    return lines


def pdb_text(lines):
    return "\n".join(lines + ["END"]) + "\n"


class TestReadPdbPoints(unittest.TestCase):
    def test_alanine_and_glycine(self):
        """Test alanine and glycine points."""
        residues = read_pdb_points(io.StringIO(pdb_text(ala_gly())))
        self.assertEqual(len(residues), 2)
        np.testing.assert_allclose(residues[0].ca, [0.0, 0.0, 0.0])
        np.testing.assert_allclose(residues[0].centroid, [1.0, 2.0, 3.0])
        np.testing.assert_allclose(residues[1].centroid, residues[1].ca)
        self.assertEqual(pdb_sequence(residues), "AG")
        self.assertEqual([r.number for r in residues], [1, 2])

    def test_centroid_is_mean_of_heavy_atoms(self):
        """Test side-chain centroids of heavy atoms."""
        lines = backbone(1, "SER", 1, (0.0, 0.0, 0.0))
        lines.append(atom_line(5, "CB", "SER", 1, (0.0, 2.0, 0.0), "C"))
        lines.append(atom_line(6, "OG", "SER", 1, (0.0, 4.0, 2.0), "O"))
        lines.append(atom_line(7, "HG", "SER", 1, (9.0, 9.0, 9.0), "H"))
        residues = read_pdb_points(io.StringIO(pdb_text(lines)))
        np.testing.assert_allclose(residues[0].centroid, [0.0, 3.0, 1.0])

    def test_alternate_locations(self):
        """Test alternate atom locations."""
        lines = backbone(1, "ALA", 1, (0.0, 0.0, 0.0))
        lines.append(atom_line(5, "CB", "ALA", 1, (1.0, 2.0, 3.0), "C", altloc="A"))
        lines.append(atom_line(6, "CB", "ALA", 1, (9.0, 9.0, 9.0), "C", altloc="B"))
        residues = read_pdb_points(io.StringIO(pdb_text(lines)))
        np.testing.assert_allclose(residues[0].centroid, [1.0, 2.0, 3.0])

    def test_hetero_residues_skipped(self):
        """Test that hetero residues are skipped."""
        lines = ala_gly()
        lines.append(atom_line(11, "O", "HOH", 101, (5.0, 5.0, 5.0), "O", record="HETATM"))
        residues = read_pdb_points(io.StringIO(pdb_text(lines)))
        self.assertEqual(pdb_sequence(residues), "AG")

    def test_residue_without_ca_skipped(self):
        """Test that residues without CA are skipped."""
        lines = ala_gly()
        lines += [
            atom_line(11, "N", "LYS", 3, (7.0, 0.0, 0.0), "N"),
            atom_line(12, "C", "LYS", 3, (8.0, 0.0, 0.0), "C"),
        ]
        residues = read_pdb_points(io.StringIO(pdb_text(lines)))
        self.assertEqual(len(residues), 2)

    def test_first_model_only(self):
        """Test that only the first model is read."""
        second = [
            line.replace("   0.000   0.000   0.000", "  50.000  50.000  50.000")
            for line in ala_gly()
        ]
        lines = ["MODEL        1", *ala_gly(), "ENDMDL", "MODEL        2", *second, "ENDMDL"]
        residues = read_pdb_points(io.StringIO(pdb_text(lines)))
        self.assertEqual(len(residues), 2)
        np.testing.assert_allclose(residues[0].ca, [0.0, 0.0, 0.0])

    def test_chain_selection(self):
        """Test chain selection."""
        lines = ala_gly() + backbone(20, "GLY", 1, (0.0, 10.0, 0.0), chain="B")
        residues = read_pdb_points(io.StringIO(pdb_text(lines)), chain_id="B")
        self.assertEqual(pdb_sequence(residues), "G")
        np.testing.assert_allclose(residues[0].ca, [0.0, 10.0, 0.0])

    def test_missing_chain(self):
        """Test a missing chain."""
        with self.assertRaises(ChainNotFoundError):
            read_pdb_points(io.StringIO(pdb_text(ala_gly())), chain_id="Z")

    def test_no_atom_records(self):
        """Test a file without atom records."""
        with self.assertRaises(NoAtomRecordsError):
            read_pdb_points(io.StringIO("HEADER    EMPTY\nEND\n"))

    def test_load_from_disk(self):
        """Test loading a PDB file from disk."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "two.pdb"
            path.write_text(pdb_text(ala_gly()), encoding="utf-8")
            self.assertEqual(len(load_pdb_points(str(path))), 2)
