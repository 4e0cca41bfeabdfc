"""
Pytest configuration and fixtures for the lattice protein move explorer tests.
"""

from pathlib import Path

import pytest

from src.utils.lattice import lattice_from_name
from src.utils.protein_model import BackboneStructure, Sequence, SideChainStructure

SAMPLE_DATA = Path(__file__).parent.parent / "sample_data"


@pytest.fixture
def sq():
    return lattice_from_name("SQ")


@pytest.fixture
def cub():
    return lattice_from_name("CUB")


@pytest.fixture
def fcc():
    return lattice_from_name("FCC")


@pytest.fixture
def straight_chain(sq):
    """Three residues in a straight line on the square lattice."""
    return BackboneStructure(sq, ((0, 0, 0), (1, 0, 0), (2, 0, 0)))


@pytest.fixture
def hpph_u(sq):
    """HPPH folded into a U: residues 1 and 4 are in contact."""
    structure = BackboneStructure(sq, ((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)))
    return structure, Sequence.parse("HPPH")


@pytest.fixture
def cub_dipeptide(cub):
    """Two residues on the cubic lattice with parallel side chains."""
    return SideChainStructure(cub, ((0, 0, 0), (1, 0, 0)), ((0, 1, 0), (1, 1, 0)))


@pytest.fixture
def sample_data_dir():
    return SAMPLE_DATA


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file below tmp_path and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
