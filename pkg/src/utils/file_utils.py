"""
File handling utilities for the lattice protein move explorer.

This module provides readers and writers for:
- Structure files (lattice, model kind, sequence and one record per residue)
- Contact potential matrices and H/P mapping files
- Search traces (whitespace separated table plus a ``#`` summary block)
- Output and sample data paths
"""

from pathlib import Path
from typing import Dict, List, Optional, TextIO, Tuple

import pandas as pd

from ..config.settings import OUTPUT_FILES, SAMPLE_DATA_DIR
from .exceptions import (
    FileFormatError,
    HPMappingFormatError,
    LatticeProteinError,
    StructureFormatError,
)
from .lattice import lattice_from_name
from .protein_model import (
    AMINO_ACIDS,
    HP_ALPHABET,
    BackboneStructure,
    ContactPotential,
    HPMapping,
    ModelKind,
    Sequence,
    SideChainStructure,
    Structure,
    load_potential,
    validate_structure,
)
from .search import FoldTrace
from .validation import validate_file_path

_HEADER_KEYS = ("lattice", "model", "sequence")


def _content_lines(stream: TextIO):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def format_structure(structure: Structure, sequence: Sequence) -> str:
    """Render a structure file as text."""
    if len(sequence) != len(structure):
        raise StructureFormatError(
            f"Sequence length {len(sequence)} != structure length {len(structure)}"
        )
    lines = [
        f"lattice {structure.lattice.name}",
        f"model {structure.kind.value}",
        f"sequence {sequence}",
    ]
    if not sequence.is_hp and set(sequence.residues) <= set(HP_ALPHABET):
        lines.append("alphabet AA")
    for i, b in enumerate(structure.backbone):
        record = f"{i + 1} {b.x} {b.y} {b.z}"
        if structure.kind is ModelKind.SIDECHAIN:
            s = structure.sidechain[i]
            record += f" {s.x} {s.y} {s.z}"
        lines.append(record)
    return "\n".join(lines) + "\n"


def write_structure(stream: TextIO, structure: Structure, sequence: Sequence) -> None:
    stream.write(format_structure(structure, sequence))


def read_structure(stream: TextIO) -> Tuple[Structure, Sequence]:
    """
    Parse a structure file.

    The first three content lines are ``lattice <NAME>``, ``model
    backbone|sidechain`` and ``sequence <letters>``; an optional ``alphabet
    HP|AA`` line may follow. Then one record ``i bx by bz`` (plus ``sx sy sz``
    for side chain models) per residue, 1-based and in order.

    Returns:
        The validated structure and its sequence

    Raises:
        StructureFormatError: Malformed content, with line number
        InvalidStructureError: If the coordinates do not form a valid structure
    """
    header: Dict[str, str] = {}
    alphabet = "auto"
    records: List[Tuple[int, List[int]]] = []
    last_line = 0

    for lineno, line in _content_lines(stream):
        last_line = lineno
        tokens = line.split()
        if len(header) < len(_HEADER_KEYS):
            expected = _HEADER_KEYS[len(header)]
            if tokens[0].lower() != expected or len(tokens) != 2:
                raise StructureFormatError(f"Expected '{expected} <value>'", line=lineno)
            header[expected] = tokens[1]
            continue
        if tokens[0].lower() == "alphabet" and not records:
            if len(tokens) != 2 or tokens[1].upper() not in ("HP", "AA"):
                raise StructureFormatError("Expected 'alphabet HP|AA'", line=lineno)
            alphabet = tokens[1].upper()
            continue
        try:
            values = [int(t) for t in tokens]
        except ValueError as e:
            raise StructureFormatError(f"Non-integer coordinate record: {e}", line=lineno) from e
        records.append((lineno, values))

    if len(header) < len(_HEADER_KEYS):
        raise StructureFormatError(
            f"Missing '{_HEADER_KEYS[len(header)]}' header", line=last_line or None
        )

    try:
        lattice = lattice_from_name(header["lattice"])
        model = ModelKind(header["model"].lower())
    except ValueError as e:
        raise StructureFormatError(f"Unknown model kind '{header['model']}'") from e
    sequence = Sequence.parse(header["sequence"], alphabet)

    width = 7 if model is ModelKind.SIDECHAIN else 4
    backbone, sidechain = [], []
    for expected_index, (lineno, values) in enumerate(records, start=1):
        if len(values) != width:
            raise StructureFormatError(
                f"Expected {width} fields for a {model.value} record, got {len(values)}",
                line=lineno,
            )
        if values[0] != expected_index:
            raise StructureFormatError(
                f"Expected residue index {expected_index}, got {values[0]}", line=lineno
            )
        backbone.append(tuple(values[1:4]))
        if model is ModelKind.SIDECHAIN:
            sidechain.append(tuple(values[4:7]))

    if len(records) != len(sequence):
        raise StructureFormatError(
            f"Found {len(records)} coordinate records for a sequence of length {len(sequence)}",
            line=last_line or None,
        )

    if model is ModelKind.SIDECHAIN:
        structure: Structure = SideChainStructure(lattice, tuple(backbone), tuple(sidechain))
    else:
        structure = BackboneStructure(lattice, tuple(backbone))
    validate_structure(structure).raise_for_violation()
    return structure, sequence


def load_structure(path: str) -> Tuple[Structure, Sequence]:
    """Read a structure file from disk."""
    file_path = validate_file_path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return read_structure(f)
    except LatticeProteinError:
        raise
    except (OSError, UnicodeDecodeError) as e:
        raise FileFormatError(f"Failed to read structure file: {e}", path=str(path)) from e


def save_structure(path: Path, structure: Structure, sequence: Sequence) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_structure(f, structure, sequence)
    return path


def read_potential_file(path: str) -> ContactPotential:
    """Load a contact potential matrix from disk."""
    file_path = validate_file_path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return load_potential(f)
    except LatticeProteinError:
        raise
    except (OSError, UnicodeDecodeError) as e:
        raise FileFormatError(f"Failed to read potential file: {e}", path=str(path)) from e


def read_hp_mapping(stream: TextIO) -> HPMapping:
    """
    Parse an H/P mapping file.

    Accepted lines: ``hydrophobic = <letters>``, ``polar = <letters>`` and
    single-letter entries ``<aa> = H|P``. Codes not listed take the class
    opposite to the listed group when only one group is given.

    Raises:
        HPMappingFormatError: Malformed lines or conflicting assignments
        UnmappedSymbolError: If codes remain unassigned
    """
    assigned: Dict[str, str] = {}
    groups = set()

    def assign(symbol: str, target: str, lineno: int) -> None:
        if symbol not in AMINO_ACIDS:
            raise HPMappingFormatError(f"Unknown amino acid code '{symbol}'", line=lineno)
        if assigned.get(symbol, target) != target:
            raise HPMappingFormatError(f"Conflicting class for '{symbol}'", line=lineno)
        assigned[symbol] = target

    for lineno, line in _content_lines(stream):
        if "=" not in line:
            raise HPMappingFormatError("Expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        letters = "".join(value.split()).upper()
        if key in ("hydrophobic", "polar"):
            target = "H" if key == "hydrophobic" else "P"
            groups.add(target)
            for symbol in letters:
                assign(symbol, target, lineno)
        elif len(key) == 1 and letters in ("H", "P"):
            assign(key.upper(), letters, lineno)
        else:
            raise HPMappingFormatError(f"Unexpected entry '{line}'", line=lineno)

    if len(groups) == 1:
        fill = "P" if groups == {"H"} else "H"
        for symbol in AMINO_ACIDS:
            assigned.setdefault(symbol, fill)
    return HPMapping(tuple(assigned.items()))


def load_hp_mapping(path: str) -> HPMapping:
    file_path = validate_file_path(path)
    with open(file_path, "r", encoding="utf-8") as f:
        return read_hp_mapping(f)


def write_trace(stream: TextIO, trace: FoldTrace) -> None:
    """
    Write a trace as a ``step energy accepted T`` table followed by a summary block.
    """
    frame = trace.to_frame()
    frame.to_csv(stream, sep=" ", index=False, float_format="%.6f", lineterminator="\n")
    stream.write(f"# start_energy {trace.start_energy:.6f}\n")
    stream.write(f"# best_energy {trace.best_energy:.6f}\n")
    stream.write(f"# steps {len(trace)}\n")
    stream.write(f"# accepted {trace.accepted_count}\n")
    stream.write(f"# frozen {'yes' if trace.frozen else 'no'}\n")


def read_trace(stream: TextIO) -> pd.DataFrame:
    """Read the table part of a trace file."""
    return pd.read_csv(stream, sep=" ", comment="#")


def save_trace(path: Path, trace: FoldTrace) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_trace(f, trace)
    return path


def output_path(out_dir: str, key: str) -> Path:
    """Path of a named output file (see OUTPUT_FILES) inside out_dir."""
    if key not in OUTPUT_FILES:
        raise KeyError(f"Unknown output file key '{key}'")
    return Path(out_dir) / OUTPUT_FILES[key]


def get_sample_data_path(filename: str) -> Optional[str]:
    """
    Path of a bundled sample data file.

    Returns:
        Path to the file if it exists, None otherwise
    """
    path = SAMPLE_DATA_DIR / filename
    if path.exists():
        return str(path.resolve())
    return None
