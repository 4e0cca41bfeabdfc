"""
Lattice protein sequences, structures and contact energies.

This module provides:
- Sequences over the 20 amino acid codes or the H/P alphabet
- Backbone-only and side chain structures with their validity conditions
- Symmetric contact potentials (e^HP built in, e^20 loaded from files)
- The contact energies E^b (all neighbored monomers) and E^s (side chains only)
- Translation of amino acid sequences to H/P sequences
"""

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence as SequenceType, TextIO, Tuple, Union

import numpy as np

from .exceptions import (
    AsymmetricPotentialError,
    InvalidSequenceError,
    InvalidStructureError,
    LengthMismatchError,
    PotentialFormatError,
    UnknownSymbolError,
    UnmappedSymbolError,
)
from .lattice import Coord, LatticeDescriptor

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"
HP_ALPHABET = "HP"
DEFAULT_HYDROPHOBIC = "ACFILMVWY"
SYMMETRY_TOLERANCE = 1e-9


class ModelKind(str, enum.Enum):
    BACKBONE = "backbone"
    SIDECHAIN = "sidechain"


@dataclass(frozen=True)
class Sequence:
    """Residue sequence over a declared alphabet."""

    residues: Tuple[str, ...]
    alphabet: Tuple[str, ...] = tuple(AMINO_ACIDS)

    def __post_init__(self):
        residues = tuple(self.residues)
        alphabet = tuple(self.alphabet)
        if not residues:
            raise InvalidSequenceError("Sequence must contain at least one residue")
        allowed = set(alphabet)
        for i, symbol in enumerate(residues, start=1):
            if symbol not in allowed:
                raise InvalidSequenceError(
                    f"Symbol '{symbol}' at position {i} is not in the alphabet",
                    symbol=symbol,
                    position=i,
                )
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "alphabet", alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: str = "auto") -> "Sequence":
        """
        Build a sequence from a string of one-letter symbols.

        Args:
            text: Residue letters (case-insensitive, surrounding whitespace ignored)
            alphabet: "HP", "AA" or "auto" (HP when every symbol is H or P)
        """
        letters = tuple(str(text).strip().upper())
        key = alphabet.upper()
        if key == "AUTO":
            key = "HP" if letters and set(letters) <= set(HP_ALPHABET) else "AA"
        if key == "HP":
            return cls(letters, tuple(HP_ALPHABET))
        if key == "AA":
            return cls(letters, tuple(AMINO_ACIDS))
        raise InvalidSequenceError(f"Unknown alphabet '{alphabet}'")

    def __len__(self) -> int:
        return len(self.residues)

    def __str__(self) -> str:
        return "".join(self.residues)

    @property
    def is_hp(self) -> bool:
        return self.alphabet == tuple(HP_ALPHABET)


@dataclass(frozen=True)
class BackboneStructure:
    """Backbone-only lattice protein structure (one point per residue)."""

    lattice: LatticeDescriptor
    coords: Tuple[Coord, ...]

    kind = ModelKind.BACKBONE

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Coord(*c) for c in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def backbone(self) -> Tuple[Coord, ...]:
        return self.coords

    def points(self) -> Tuple[Coord, ...]:
        """All monomer positions."""
        return self.coords


@dataclass(frozen=True)
class SideChainStructure:
    """Side chain lattice protein structure (backbone and side chain point per residue)."""

    lattice: LatticeDescriptor
    backbone: Tuple[Coord, ...]
    sidechain: Tuple[Coord, ...]

    kind = ModelKind.SIDECHAIN

    def __post_init__(self):
        object.__setattr__(self, "backbone", tuple(Coord(*c) for c in self.backbone))
        object.__setattr__(self, "sidechain", tuple(Coord(*c) for c in self.sidechain))

    def __len__(self) -> int:
        return len(self.backbone)

    def points(self) -> Tuple[Coord, ...]:
        """All 2n monomer positions, backbone first."""
        return self.backbone + self.sidechain


Structure = Union[BackboneStructure, SideChainStructure]


@dataclass(frozen=True)
class StructureViolation:
    """
    First violated validity condition of a structure.

    ``indices`` are 1-based residue indices; for clashes ``monomers`` names the
    monomer type ("backbone" or "sidechain") of each index.
    """

    kind: str
    indices: Tuple[int, ...]
    monomers: Tuple[str, ...] = ()

    def describe(self) -> str:
        if self.kind == "broken-chain":
            i = self.indices[0]
            return f"broken-chain({i}): residues {i} and {i + 1} are not lattice neighbors"
        if self.kind == "detached-sidechain":
            return f"detached-sidechain({self.indices[0]}): side chain not adjacent to backbone"
        if self.kind == "clash":
            if self.monomers:
                a, b = (f"{m} {i}" for m, i in zip(self.monomers, self.indices))
                return f"clash({self.indices[0]},{self.indices[1]}): {a} = {b}"
            return f"clash({self.indices[0]},{self.indices[1]})"
        return f"{self.kind}{self.indices}"


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a structure validation."""

    violation: Optional[StructureViolation] = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok

    def raise_for_violation(self) -> None:
        """Raise InvalidStructureError if the structure was invalid."""
        if self.violation is not None:
            raise InvalidStructureError(self.violation.describe(), violation=self.violation)


def _first_clash(points: SequenceType[Tuple[Coord, int, str]]) -> Optional[StructureViolation]:
    """Lexicographically smallest clashing pair of (point, residue, monomer) entries."""
    if len({p for p, _, _ in points}) == len(points):
        return None
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if points[a][0] == points[b][0]:
                return StructureViolation(
                    "clash", (points[a][1], points[b][1]), (points[a][2], points[b][2])
                )
    return None


def validate_backbone(structure: BackboneStructure) -> ValidationResult:
    """
    Check connectivity and self-avoidance of a backbone-only structure.

    Returns:
        ValidationResult naming the first violation: broken-chain(i) for the
        smallest i with C_i not ~ C_i+1, otherwise clash(i, j) for the smallest pair
    """
    lattice = structure.lattice
    coords = structure.coords
    for i in range(len(coords) - 1):
        if not lattice.are_neighbors(coords[i], coords[i + 1]):
            return ValidationResult(StructureViolation("broken-chain", (i + 1,)))
    clash = _first_clash([(c, i + 1, "backbone") for i, c in enumerate(coords)])
    if clash is not None:
        return ValidationResult(StructureViolation("clash", clash.indices))
    return ValidationResult()


def validate_sidechain(structure: SideChainStructure) -> ValidationResult:
    """
    Check a side chain structure: backbone connectivity, side chain attachment
    and self-avoidance of all 2n monomers, reported in that order.
    """
    lattice = structure.lattice
    bb, sc = structure.backbone, structure.sidechain
    if len(bb) != len(sc):
        return ValidationResult(StructureViolation("length-mismatch", (len(bb), len(sc))))
    for i in range(len(bb) - 1):
        if not lattice.are_neighbors(bb[i], bb[i + 1]):
            return ValidationResult(StructureViolation("broken-chain", (i + 1,)))
    for i in range(len(bb)):
        if not lattice.are_neighbors(bb[i], sc[i]):
            return ValidationResult(StructureViolation("detached-sidechain", (i + 1,)))
    monomers = []
    for i in range(len(bb)):
        monomers.append((bb[i], i + 1, "backbone"))
        monomers.append((sc[i], i + 1, "sidechain"))
    clash = _first_clash(monomers)
    if clash is not None:
        return ValidationResult(clash)
    return ValidationResult()


def validate_structure(structure: Structure) -> ValidationResult:
    """Validate either model kind."""
    if structure.kind is ModelKind.SIDECHAIN:
        return validate_sidechain(structure)
    return validate_backbone(structure)


@dataclass(frozen=True, eq=False)
class ContactPotential:
    """Symmetric pairwise contact energy table e(a, b) over an alphabet."""

    alphabet: Tuple[str, ...]
    table: np.ndarray
    _pairs: Dict[Tuple[str, str], float] = field(init=False, repr=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        table = np.array(self.table, dtype=float)
        if table.shape != (len(alphabet), len(alphabet)):
            raise PotentialFormatError(
                f"Table shape {table.shape} does not match alphabet size {len(alphabet)}"
            )
        if len(set(alphabet)) != len(alphabet):
            raise PotentialFormatError("Duplicate alphabet symbol")
        asym = np.argwhere(np.abs(table - table.T) > SYMMETRY_TOLERANCE)
        if len(asym):
            i, j = (int(x) for x in asym[0])
            raise AsymmetricPotentialError(
                f"e({alphabet[i]},{alphabet[j]}) != e({alphabet[j]},{alphabet[i]})",
                pair=(alphabet[i], alphabet[j]),
            )
        table = (table + table.T) / 2.0
        table.setflags(write=False)
        pairs = {
            (a, b): float(table[i, j])
            for i, a in enumerate(alphabet)
            for j, b in enumerate(alphabet)
        }
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_pairs", pairs)

    def __call__(self, a: str, b: str) -> float:
        try:
            return self._pairs[(a, b)]
        except KeyError:
            missing = a if a not in self.alphabet else b
            raise UnknownSymbolError(
                f"Symbol '{missing}' is not in the potential alphabet", symbol=missing
            ) from None

    def covers(self, sequence: Sequence) -> bool:
        return set(sequence.residues) <= set(self.alphabet)

    def require_cover(self, sequence: Sequence) -> None:
        for symbol in sequence.residues:
            if symbol not in self.alphabet:
                raise UnknownSymbolError(
                    f"Symbol '{symbol}' is not in the potential alphabet", symbol=symbol
                )


def hp_potential() -> ContactPotential:
    """The HP model: e(H,H) = -1, all other pairs 0."""
    return ContactPotential(tuple(HP_ALPHABET), np.array([[-1.0, 0.0], [0.0, 0.0]]))


def zero_potential(alphabet: Iterable[str] = AMINO_ACIDS) -> ContactPotential:
    alphabet = tuple(alphabet)
    return ContactPotential(alphabet, np.zeros((len(alphabet), len(alphabet))))


def load_potential(source: TextIO) -> ContactPotential:
    """
    Read a contact potential matrix.

    Format: first non-comment line lists the k alphabet symbols, followed by k
    rows of k reals. Lines starting with ``#`` and blank lines are skipped.

    Raises:
        PotentialFormatError: Malformed content (with line number), duplicate or
            unknown header symbols
        AsymmetricPotentialError: If e(a,b) and e(b,a) differ by more than 1e-9
    """
    header: Optional[Tuple[str, ...]] = None
    rows: List[List[float]] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            symbols = tuple(t.upper() for t in tokens)
            for symbol in symbols:
                if len(symbol) != 1 or symbol not in AMINO_ACIDS:
                    raise PotentialFormatError(f"Unknown header symbol '{symbol}'", line=lineno)
            duplicates = sorted({s for s in symbols if symbols.count(s) > 1})
            if duplicates:
                raise PotentialFormatError(
                    f"Duplicate header symbol '{duplicates[0]}'", line=lineno
                )
            header = symbols
            continue
        if len(rows) == len(header):
            raise PotentialFormatError("Unexpected extra row", line=lineno)
        if len(tokens) != len(header):
            raise PotentialFormatError(
                f"Expected {len(header)} values, got {len(tokens)}", line=lineno
            )
        try:
            values = [float(t.replace("−", "-")) for t in tokens]
        except ValueError as e:
            raise PotentialFormatError(f"Invalid number: {e}", line=lineno) from e
        if not all(np.isfinite(values)):
            raise PotentialFormatError("Non-finite energy value", line=lineno)
        rows.append(values)

    if header is None:
        raise PotentialFormatError("Missing alphabet header")
    if len(rows) != len(header):
        raise PotentialFormatError(f"Expected {len(header)} rows, got {len(rows)}")
    return ContactPotential(header, np.array(rows))


def _contact_sum(
    lattice: LatticeDescriptor,
    points: SequenceType[Coord],
    residues: SequenceType[str],
    potential: ContactPotential,
    skip_chain_adjacent: bool,
) -> float:
    index = {p: i for i, p in enumerate(points)}
    total = 0.0
    for i, p in enumerate(points):
        for q in lattice.neighbors_of(p):
            j = index.get(q)
            if j is None or j <= i:
                continue
            if skip_chain_adjacent and j == i + 1:
                continue
            total += potential(residues[i], residues[j])
    return total


def _check_inputs(sequence: Sequence, structure: Structure, potential: ContactPotential) -> None:
    if len(sequence) != len(structure):
        raise LengthMismatchError(
            f"Sequence length {len(sequence)} != structure length {len(structure)}",
            field="sequence",
            value=(len(sequence), len(structure)),
        )
    potential.require_cover(sequence)


def energy_backbone(
    sequence: Sequence,
    structure: BackboneStructure,
    potential: ContactPotential,
    exclude_chain_adjacent: bool = False,
) -> float:
    """
    E^b: sum of e(S_i, S_j) over all pairs i < j with C_i ~ C_j.

    Args:
        exclude_chain_adjacent: Skip the pairs (i, i+1) that connectivity forces
    """
    _check_inputs(sequence, structure, potential)
    return _contact_sum(
        structure.lattice, structure.coords, sequence.residues, potential, exclude_chain_adjacent
    )


def energy_sidechain(
    sequence: Sequence, structure: SideChainStructure, potential: ContactPotential
) -> float:
    """E^s: sum of e(S_i, S_j) over all pairs i < j with neighbored side chains."""
    _check_inputs(sequence, structure, potential)
    return _contact_sum(
        structure.lattice, structure.sidechain, sequence.residues, potential, False
    )


def energy(sequence: Sequence, structure: Structure, potential: ContactPotential) -> float:
    """Contact energy of either model kind (E^s for side chain models, E^b otherwise)."""
    if structure.kind is ModelKind.SIDECHAIN:
        return energy_sidechain(sequence, structure, potential)
    return energy_backbone(sequence, structure, potential)


@dataclass(frozen=True)
class HPMapping:
    """Total map from the 20 amino acid codes to H or P."""

    mapping: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        mapping = {str(k).upper(): str(v).upper() for k, v in dict(self.mapping).items()}
        missing = [aa for aa in AMINO_ACIDS if aa not in mapping]
        if missing:
            raise UnmappedSymbolError(
                f"H/P mapping has no entry for {', '.join(missing)}", symbol=missing[0]
            )
        bad = sorted(v for v in set(mapping.values()) if v not in HP_ALPHABET)
        if bad:
            raise InvalidSequenceError(f"H/P mapping targets must be H or P, got '{bad[0]}'")
        # stored as sorted pairs so the mapping stays hashable
        object.__setattr__(self, "mapping", tuple(sorted(mapping.items())))

    def __getitem__(self, symbol: str) -> str:
        table = self.as_dict()
        if symbol not in table:
            raise UnmappedSymbolError(f"Symbol '{symbol}' is not mapped to H or P", symbol=symbol)
        return table[symbol]

    def as_dict(self) -> Dict[str, str]:
        return dict(self.mapping)

    @classmethod
    def from_hydrophobic(cls, hydrophobic: Iterable[str]) -> "HPMapping":
        hydrophobic = {h.upper() for h in hydrophobic}
        return cls({aa: "H" if aa in hydrophobic else "P" for aa in AMINO_ACIDS})


def default_hp_mapping() -> HPMapping:
    """Hydrophobic: A C F I L M V W Y; polar: the remaining 11 codes."""
    return HPMapping.from_hydrophobic(DEFAULT_HYDROPHOBIC)


def translate_to_hp(sequence: Sequence, mapping: HPMapping) -> Sequence:
    """
    Map an amino acid sequence positionwise to an H/P sequence.

    Raises:
        UnmappedSymbolError: If a residue has no mapping entry
    """
    table = mapping.as_dict()
    letters = []
    for i, symbol in enumerate(sequence.residues, start=1):
        if symbol not in table:
            raise UnmappedSymbolError(
                f"Symbol '{symbol}' at position {i} has no H/P mapping", symbol=symbol
            )
        letters.append(table[symbol])
    return Sequence(tuple(letters), tuple(HP_ALPHABET))
