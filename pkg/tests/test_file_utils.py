"""
Unit tests for structure, potential, H/P mapping and trace files.
"""

import io
import unittest

import numpy as np
import pytest

from src.utils.exceptions import (
    HPMappingFormatError,
    InvalidParameterError,
    InvalidStructureError,
    StructureFormatError,
    UnmappedSymbolError,
)
from src.utils.file_utils import (
    format_structure,
    get_sample_data_path,
    load_hp_mapping,
    load_structure,
    output_path,
    read_hp_mapping,
    read_potential_file,
    read_structure,
    read_trace,
    save_structure,
    save_trace,
    write_structure,
    write_trace,
)
from src.utils.lattice import lattice_from_name
from src.utils.protein_model import AMINO_ACIDS, BackboneStructure, Sequence, SideChainStructure
from src.utils.search import FoldTrace, TraceStep, random_valid_structure

STRAIGHT_TEXT = """\
# straight chain
lattice SQ
model backbone
sequence HPH
1 0 0 0
2 1 0 0
3 2 0 0
"""


def _roundtrip(structure, sequence):
    buffer = io.StringIO()
    write_structure(buffer, structure, sequence)
    buffer.seek(0)
    return read_structure(buffer)


class TestStructureFiles(unittest.TestCase):
    def test_read_straight_chain(self):
        """Test reading a backbone structure file."""
        structure, sequence = read_structure(io.StringIO(STRAIGHT_TEXT))
        self.assertEqual(structure.lattice.name, "SQ")
        self.assertEqual(structure.backbone[2], (2, 0, 0))
        self.assertEqual(str(sequence), "HPH")
        self.assertTrue(sequence.is_hp)

    def test_format_matches_reader_input(self):
        """Test that formatting reproduces the file records."""
        structure, sequence = read_structure(io.StringIO(STRAIGHT_TEXT))
        expected = "".join(line + "\n" for line in STRAIGHT_TEXT.splitlines()[1:])
        self.assertEqual(format_structure(structure, sequence), expected)

    def test_sidechain_roundtrip(self):
        """Test writing and reading a side-chain structure."""
        cub = lattice_from_name("CUB")
        structure = SideChainStructure(cub, ((0, 0, 0), (1, 0, 0)), ((0, 1, 0), (1, 1, 0)))
        sequence = Sequence.parse("MK")
        self.assertEqual(_roundtrip(structure, sequence), (structure, sequence))

    def test_amino_acid_sequence_of_h_and_p_letters(self):
        """Test that an explicit alphabet keeps H and P as amino acids."""
        # histidine and proline only: must not be read back as an H/P sequence
        sq = lattice_from_name("SQ")
        structure = BackboneStructure(sq, ((0, 0, 0), (1, 0, 0)))
        sequence = Sequence.parse("HP", alphabet="AA")
        text = format_structure(structure, sequence)
        self.assertIn("alphabet AA", text)
        _, parsed = read_structure(io.StringIO(text))
        self.assertFalse(parsed.is_hp)

    def test_broken_chain_rejected(self):
        """Test rejection of a disconnected backbone."""
        text = STRAIGHT_TEXT.replace("3 2 0 0", "3 3 0 0")
        with self.assertRaises(InvalidStructureError) as ctx:
            read_structure(io.StringIO(text))
        self.assertIn("broken-chain(2)", str(ctx.exception))

    def test_missing_sidechain_columns(self):
        """Test side-chain records without side-chain coordinates."""
        text = "lattice CUB\nmodel sidechain\nsequence HH\n1 0 0 0 0 1 0\n2 1 0 0\n"
        with self.assertRaises(StructureFormatError) as ctx:
            read_structure(io.StringIO(text))
        self.assertEqual(ctx.exception.line, 5)

    def test_header_order(self):
        """Test header line ordering."""
        text = "model backbone\nlattice SQ\nsequence H\n1 0 0 0\n"
        with self.assertRaises(StructureFormatError) as ctx:
            read_structure(io.StringIO(text))
        self.assertEqual(ctx.exception.line, 1)

    def test_record_count_mismatch(self):
        """Test record count against the sequence length."""
        text = STRAIGHT_TEXT.replace("3 2 0 0\n", "")
        with self.assertRaises(StructureFormatError):
            read_structure(io.StringIO(text))

    def test_out_of_order_index(self):
        """Test residue indices out of order."""
        text = STRAIGHT_TEXT.replace("2 1 0 0", "4 1 0 0")
        with self.assertRaises(StructureFormatError):
            read_structure(io.StringIO(text))

    def test_non_integer_coordinate(self):
        """Test non-integer coordinates."""
        text = STRAIGHT_TEXT.replace("2 1 0 0", "2 1.5 0 0")
        with self.assertRaises(StructureFormatError):
            read_structure(io.StringIO(text))


@pytest.mark.parametrize("lattice_name", ["SQ", "CUB", "FCC"])
@pytest.mark.parametrize("model", ["backbone", "sidechain"])
def test_structure_roundtrip_random(lattice_name, model):
    """Test random structures written and read back."""
    lattice = lattice_from_name(lattice_name)
    rng = np.random.default_rng(0)
    for seed in range(100):
        n = int(rng.integers(1, 15))
        structure = random_valid_structure(n, lattice, model, seed=seed)
        sequence = Sequence(tuple(str(c) for c in rng.choice(list(AMINO_ACIDS), size=n)))
        assert _roundtrip(structure, sequence) == (structure, sequence)


class TestPathHelpers:
    def test_save_and_load(self, tmp_path, hpph_u):
        """Test saving and loading a structure file."""
        structure, sequence = hpph_u
        path = save_structure(tmp_path / "out" / "u.structure", structure, sequence)
        assert load_structure(str(path)) == (structure, sequence)

    def test_missing_file(self):
        """Test loading a missing file."""
        with pytest.raises(InvalidParameterError):
            load_structure("/nonexistent/file.structure")

    def test_sample_data(self):
        """Test the bundled sample structures."""
        structure, sequence = load_structure(get_sample_data_path("hpph_u.structure"))
        assert str(sequence) == "HPPH"
        assert get_sample_data_path("missing.txt") is None

    def test_sample_potential(self):
        """Test the bundled H/P potential."""
        potential = read_potential_file(get_sample_data_path("hp_matrix.txt"))
        assert potential("H", "H") == -1.0

    def test_output_path(self, tmp_path):
        """Test result file names in the output directory."""
        assert output_path(str(tmp_path), "hp") == tmp_path / "c_hp.structure"
        with pytest.raises(KeyError):
            output_path(str(tmp_path), "unknown")


class TestHPMappingFile:
    def test_hydrophobic_group(self):
        """Test a hydrophobic group line."""
        mapping = read_hp_mapping(io.StringIO("hydrophobic = A C F I L M V W Y\n"))
        assert mapping["A"] == "H"
        assert mapping["K"] == "P"

    def test_polar_group_and_overrides(self):
        """Test a polar group with single-letter overrides."""
        text = "# polar residues\npolar = DEKR\nG = P\n"
        mapping = read_hp_mapping(io.StringIO(text))
        assert mapping["D"] == "P"
        assert mapping["G"] == "P"
        assert mapping["A"] == "H"

    def test_single_entries_must_be_complete(self):
        """Test that single entries must assign every code."""
        with pytest.raises(UnmappedSymbolError):
            read_hp_mapping(io.StringIO("A = H\nK = P\n"))

    def test_conflict(self):
        """Test conflicting H/P assignments."""
        with pytest.raises(HPMappingFormatError) as excinfo:
            read_hp_mapping(io.StringIO("hydrophobic = A\npolar = A\n"))
        assert excinfo.value.line == 2

    def test_unknown_code(self):
        """Test an unknown amino acid code."""
        with pytest.raises(HPMappingFormatError):
            read_hp_mapping(io.StringIO("hydrophobic = AZ\n"))

    def test_sample_file(self):
        """Test the bundled H/P mapping."""
        mapping = load_hp_mapping(get_sample_data_path("hpmap.txt"))
        assert mapping["W"] == "H"


class TestTraceFiles:
    def _trace(self):
        trace = FoldTrace(0.0, None, 0.0)
        trace.record(TraceStep(1, -1.0, True, 2.0), None)
        trace.record(TraceStep(2, 0.5, False, 1.6), None)
        return trace

    def test_write_layout(self):
        """Test trace file columns."""
        buffer = io.StringIO()
        write_trace(buffer, self._trace())
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "step energy accepted T"
        assert lines[1] == "1 -1.000000 1 2.000000"
        assert "# best_energy -1.000000" in lines
        assert "# accepted 1" in lines
        assert "# frozen no" in lines

    def test_read_back(self, tmp_path):
        """Test reading a trace file back."""
        path = save_trace(tmp_path / "run.trace", self._trace())
        with open(path, encoding="utf-8") as f:
            frame = read_trace(f)
        assert list(frame["step"]) == [1, 2]
        assert list(frame["accepted"]) == [1, 0]
        assert frame["energy"].iloc[1] == pytest.approx(0.5)
