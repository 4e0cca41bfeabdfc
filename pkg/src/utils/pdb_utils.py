"""
Minimal PDB reader for comparing lattice structures with real proteins.

Per residue of one chain it extracts the Cα coordinate and the centroid of the
heavy side chain atoms. Only the first model and the first conformer are used;
HETATM records, waters and residues with insertion codes are skipped.
"""

import io
from dataclasses import dataclass
from typing import List, TextIO

import numpy as np
from Bio.PDB import PDBParser
from Bio.SeqUtils import seq1

from ..config.logging_config import get_logger
from .exceptions import ChainNotFoundError, NoAtomRecordsError, PdbError
from .validation import validate_file_path

logger = get_logger(__name__)

BACKBONE_ATOMS = frozenset({"N", "CA", "C", "O", "OXT"})
HYDROGEN_ELEMENTS = frozenset({"H", "D"})
ALLOWED_ALTLOCS = (" ", "A")

# heavy side chain atoms of a complete residue
SIDECHAIN_HEAVY_ATOMS = {
    "ALA": 1, "ARG": 7, "ASN": 4, "ASP": 4, "CYS": 1,
    "GLN": 5, "GLU": 5, "GLY": 0, "HIS": 6, "ILE": 4,
    "LEU": 4, "LYS": 5, "MET": 4, "PHE": 7, "PRO": 3,
    "SER": 1, "THR": 3, "TRP": 10, "TYR": 8, "VAL": 3,
}


@dataclass(frozen=True, eq=False)
class PdbResiduePoints:
    """One residue: one-letter code, residue number, Cα and side chain centroid (Å)."""

    code: str
    number: int
    ca: np.ndarray
    centroid: np.ndarray


def _first_conformer(residue):
    if residue.is_disordered() == 2:
        return residue.disordered_get(residue.disordered_get_id_list()[0])
    return residue


def _usable_atoms(residue):
    for atom in residue.get_unpacked_list():
        if atom.get_altloc() not in ALLOWED_ALTLOCS:
            continue
        if (atom.element or "").upper() in HYDROGEN_ELEMENTS:
            continue
        yield atom


def read_pdb_points(stream: TextIO, chain_id: str = "A") -> List[PdbResiduePoints]:
    """
    Read Cα and side chain centroid points of one chain.

    Glycine's centroid is its Cα. Residues without a Cα are skipped; a side
    chain with missing atoms yields the centroid of the atoms present. Both
    cases are logged as warnings.

    Raises:
        ChainNotFoundError: If the first model has no chain ``chain_id``
        NoAtomRecordsError: If there are no ATOM records (in the chain)
    """
    text = stream.read()
    if not any(line.startswith("ATOM") for line in text.splitlines()):
        raise NoAtomRecordsError("PDB data contains no ATOM records")
    parser = PDBParser(QUIET=True)
    try:
        structure = parser.get_structure("query", io.StringIO(text))
    except Exception as e:
        raise PdbError(f"Failed to parse PDB data: {e}") from e
    models = list(structure)
    if not models:
        raise NoAtomRecordsError("PDB data contains no ATOM records")
    model = models[0]
    if chain_id not in model:
        available = ", ".join(sorted(c.id for c in model)) or "none"
        raise ChainNotFoundError(
            f"Chain '{chain_id}' not found (available: {available})",
            {"chain": chain_id},
        )

    residues: List[PdbResiduePoints] = []
    seen_atom_records = False
    missing_ca = 0
    partial = 0
    for residue in model[chain_id]:
        hetero, number, icode = residue.id
        if hetero.strip() or icode.strip():
            continue
        seen_atom_records = True
        residue = _first_conformer(residue)
        name = residue.get_resname().upper()
        atoms = {atom.get_id(): atom for atom in _usable_atoms(residue)}
        if "CA" not in atoms:
            missing_ca += 1
            continue

        ca = np.asarray(atoms["CA"].get_coord(), dtype=float)
        side = [a.get_coord() for atom_id, a in atoms.items() if atom_id not in BACKBONE_ATOMS]
        expected = SIDECHAIN_HEAVY_ATOMS.get(name)
        if name == "GLY" or not side:
            centroid = ca.copy()
            if name != "GLY":
                partial += 1
        else:
            centroid = np.mean(np.asarray(side, dtype=float), axis=0)
            if expected is not None and len(side) < expected:
                partial += 1
        residues.append(PdbResiduePoints(seq1(name), int(number), ca, centroid))

    if not seen_atom_records:
        raise NoAtomRecordsError(
            f"Chain '{chain_id}' contains no ATOM records", {"chain": chain_id}
        )
    if missing_ca:
        logger.warning(f"Skipped {missing_ca} residue(s) of chain {chain_id} without a CA atom")
    if partial:
        logger.warning(
            f"{partial} residue(s) of chain {chain_id} have incomplete side chains; "
            "centroids use the atoms present"
        )
    return residues


def load_pdb_points(path: str, chain_id: str = "A") -> List[PdbResiduePoints]:
    """Read a PDB file from disk."""
    file_path = validate_file_path(path)
    with open(file_path, "r", encoding="utf-8", errors="replace") as f:
        return read_pdb_points(f, chain_id)


def pdb_sequence(residues: List[PdbResiduePoints]) -> str:
    return "".join(r.code for r in residues)
