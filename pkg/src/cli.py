"""
Command line front end of the lattice protein move explorer.

Subcommands: neighbors, energy, walk, fold, compare, randstruct. Results go to
stdout as line-oriented text, log records and error messages to stderr.
Exit codes: 0 success, 2 usage or input error, 3 internal invariant violation.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence as SequenceType, TextIO, Tuple

from .config.logging_config import get_logger, setup_logging
from .config.settings import ERROR_MESSAGES, RunConfig, build_run_config, load_config_file, settings
from .utils.exceptions import (
    ConfigurationError,
    InvariantViolationError,
    LatticeProteinError,
    UnknownSymbolError,
)
from .utils.file_utils import (
    load_hp_mapping,
    load_structure,
    output_path,
    read_potential_file,
    save_structure,
    save_trace,
    write_structure,
)
from .utils.lattice import lattice_from_name
from .utils.metrics import StructurePoints, crmsd, drmsd, points_from_pdb, points_from_structure
from .utils.moves import enumerate_neighbors
from .utils.pdb_utils import load_pdb_points
from .utils.protein_model import (
    HP_ALPHABET,
    ContactPotential,
    HPMapping,
    Sequence,
    Structure,
    default_hp_mapping,
    energy,
    energy_backbone,
    hp_potential,
    translate_to_hp,
)
from .utils.search import (
    AnnealSchedule,
    fold_restarts,
    gradient_walk,
    random_valid_structure,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

PDB_SUFFIXES = (".pdb", ".ent")

# flags that map onto RunConfig fields
CONFIG_FLAGS = (
    "lattice",
    "model",
    "k",
    "potential",
    "hpmap",
    "t_start",
    "t_end",
    "cooling",
    "sweeps",
    "steps_per_residue",
    "seed",
    "restarts",
    "workers",
    "out_dir",
)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--log-level", help="Log level (DEBUG, INFO, WARNING, ERROR)")
    common.add_argument("--log-file", help="Also write logs to this rotating file")
    common.add_argument("--lattice", help="Lattice: SQ, CUB or FCC")
    common.add_argument("--model", help="Model kind: backbone or sidechain")
    common.add_argument("--k", type=int, help="Maximal move interval length (default 3)")
    common.add_argument("--potential", help="Contact potential file, or 'hp' for the H/P model")
    common.add_argument("--hpmap", help="H/P mapping file")
    common.add_argument("--seed", type=int, help="Random seed (64-bit integer)")
    common.add_argument("--out-dir", dest="out_dir", help="Directory for result files")
    common.add_argument("--restarts", type=int, help="Independent seeded folding runs")
    common.add_argument("--workers", type=int, help="Worker processes for restarts")
    common.add_argument("--t-start", dest="t_start", type=float, help="Initial temperature")
    common.add_argument("--t-end", dest="t_end", type=float, help="Temperature floor")
    common.add_argument("--cooling", type=float, help="Geometric cooling factor per sweep")
    common.add_argument("--sweeps", type=int, help="Number of annealing sweeps")
    common.add_argument(
        "--steps-per-residue",
        dest="steps_per_residue",
        type=int,
        help="Steps per sweep and residue",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="latmove",
        description="Strict k-local move neighborhoods, energies and folding of lattice proteins",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("neighbors", parents=[common], help="List the strict k-local neighborhood")
    p.add_argument("structure", help="Structure file")
    p.add_argument("--count-only", action="store_true", help="Print only the number of neighbors")
    p.set_defaults(handler=cmd_neighbors)

    p = sub.add_parser("energy", parents=[common], help="Contact energy of a structure")
    p.add_argument("structure", help="Structure file")
    p.add_argument(
        "--exclude-chain-adjacent",
        action="store_true",
        help="Skip chain-adjacent backbone pairs (backbone model)",
    )
    p.set_defaults(handler=cmd_energy)

    p = sub.add_parser("walk", parents=[common], help="Gradient walk to a local minimum")
    p.add_argument("structure", help="Start structure file")
    p.set_defaults(handler=cmd_walk)

    p = sub.add_parser("fold", parents=[common], help="Two-stage H/P then full-potential folding")
    p.add_argument("sequence", help="One-letter sequence (20 amino acids or H/P)")
    p.add_argument("--reference", help="Structure file to compare the folded structures with")
    p.set_defaults(handler=cmd_fold)

    p = sub.add_parser("compare", parents=[common], help="dRMSD and cRMSD of two structures")
    p.add_argument("first", help="Structure file")
    p.add_argument("second", help="Structure file or PDB file")
    p.add_argument("--chain", default="A", help="PDB chain identifier (default A)")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("randstruct", parents=[common], help="Seeded random valid structure")
    p.add_argument("sequence", help="One-letter sequence")
    p.add_argument("--output", help="Output file (stdout if omitted)")
    p.set_defaults(handler=cmd_randstruct)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults < --config file < explicit flags."""
    file_values: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                file_values = load_config_file(f)
        except OSError as e:
            raise ConfigurationError(
                ERROR_MESSAGES["file_not_found"].format(path=args.config)
            ) from e
    overrides = {name: getattr(args, name, None) for name in CONFIG_FLAGS}
    return build_run_config(file_values, overrides)


def _check_structure_flags(args: argparse.Namespace, structure: Structure) -> None:
    if args.lattice and args.lattice.upper() != structure.lattice.name:
        raise ConfigurationError(
            ERROR_MESSAGES["lattice_mismatch"].format(
                found=structure.lattice.name, expected=args.lattice.upper()
            )
        )
    if args.model and args.model.lower() != structure.kind.value:
        raise ConfigurationError(
            ERROR_MESSAGES["model_mismatch"].format(
                found=structure.kind.value, expected=args.model.lower()
            )
        )


def _hp_mapping(config: RunConfig) -> HPMapping:
    if config.hpmap:
        return load_hp_mapping(config.hpmap)
    return default_hp_mapping()


def resolve_potential(config: RunConfig, sequence: Sequence) -> Tuple[ContactPotential, Sequence]:
    """
    Load the configured potential and the sequence it is evaluated on.

    A potential over {H, P} is applied to the H/P translation of an amino acid
    sequence.
    """
    if config.potential is None or config.potential.lower() == "hp":
        potential = hp_potential()
    else:
        potential = read_potential_file(config.potential)
    effective = sequence
    if set(potential.alphabet) <= set(HP_ALPHABET) and not sequence.is_hp:
        effective = translate_to_hp(sequence, _hp_mapping(config))
    if not potential.covers(effective):
        symbol = next(s for s in effective.residues if s not in potential.alphabet)
        raise UnknownSymbolError(
            ERROR_MESSAGES["potential_alphabet"].format(
                alphabet="".join(potential.alphabet), symbol=symbol
            ),
            symbol=symbol,
        )
    return potential, effective


def _coords_text(structure: Structure) -> str:
    return " ".join(f"{c.x},{c.y},{c.z}" for c in structure.backbone)


def cmd_neighbors(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    structure, sequence = load_structure(args.structure)
    _check_structure_flags(args, structure)
    potential, effective = resolve_potential(config, sequence)
    count = 0
    for move, neighbor in enumerate_neighbors(structure, config.k):
        count += 1
        if args.count_only:
            continue
        e = energy(effective, neighbor, potential)
        out.write(
            f"k'={move.interval.length} s={move.interval.start} E={e:.4f} {move.describe()}\n"
        )
    if args.count_only:
        out.write(f"{count}\n")
    logger.info(f"{count} strict {config.k}-local neighbors")
    return EXIT_OK


def cmd_energy(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    structure, sequence = load_structure(args.structure)
    _check_structure_flags(args, structure)
    potential, effective = resolve_potential(config, sequence)
    if args.exclude_chain_adjacent:
        if structure.kind.value != "backbone":
            raise ConfigurationError(
                "--exclude-chain-adjacent applies to the backbone model only",
                config_key="exclude_chain_adjacent",
            )
        value = energy_backbone(effective, structure, potential, exclude_chain_adjacent=True)
    else:
        value = energy(effective, structure, potential)
    out.write(f"E {value:.4f}\n")
    return EXIT_OK


def _write_summary(out: TextIO, rows: List[Tuple[str, float, int]]) -> None:
    out.write("stage best_energy steps\n")
    for stage, best, steps in rows:
        out.write(f"{stage} {best:.4f} {steps}\n")


def cmd_walk(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    structure, sequence = load_structure(args.structure)
    _check_structure_flags(args, structure)
    potential, effective = resolve_potential(config, sequence)
    minimum, trace = gradient_walk(structure, config.k, effective, potential)
    save_structure(output_path(config.out_dir, "walk"), minimum, sequence)
    save_trace(output_path(config.out_dir, "walk_trace"), trace)
    _write_summary(out, [("walk", trace.best_energy, len(trace))])
    return EXIT_OK


def _schedule(config: RunConfig) -> AnnealSchedule:
    return AnnealSchedule(
        t_start=config.t_start,
        t_end=config.t_end,
        cooling=config.cooling,
        sweeps=config.sweeps,
        steps_per_residue=config.steps_per_residue,
    )


def cmd_fold(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    sequence = Sequence.parse(args.sequence)
    lattice = lattice_from_name(config.lattice)
    mapping = _hp_mapping(config)
    potential, _ = resolve_potential(config, sequence)
    schedule = _schedule(config)

    summary = fold_restarts(
        sequence,
        lattice,
        config.model,
        mapping,
        potential,
        schedule,
        schedule,
        config.k,
        config.seed,
        restarts=config.restarts,
        workers=config.workers,
    )
    best = summary.best
    save_structure(output_path(config.out_dir, "hp"), best.c_hp, sequence)
    save_structure(output_path(config.out_dir, "gradient"), best.g_result, sequence)
    save_structure(output_path(config.out_dir, "refine"), best.r_result, sequence)
    save_trace(output_path(config.out_dir, "hp_trace"), best.hp_trace)
    save_trace(output_path(config.out_dir, "gradient_trace"), best.gradient_trace)
    save_trace(output_path(config.out_dir, "refine_trace"), best.refine_trace)

    _write_summary(out, [tuple(row) for row in best.summary().itertuples(index=False)])
    if config.restarts > 1:
        for key, value in summary.aggregates().items():
            out.write(f"# {key} {value:.4f}\n")
        out.write(f"# best_seed {best.seed}\n")

    if args.reference:
        reference, ref_sequence = load_structure(args.reference)
        if reference.kind is not best.g_result.kind or len(reference) != len(sequence):
            raise ConfigurationError(
                "Reference structure must match the folded sequence length and model",
                config_key="reference",
            )
        _, ref_effective = resolve_potential(config, ref_sequence)
        g_reference, _ = gradient_walk(reference, config.k, ref_effective, potential)
        for label, folded in (("g", best.g_result), ("r", best.r_result)):
            out.write(
                f"{label} dRMSD {drmsd(folded, g_reference):.4f} A "
                f"cRMSD {crmsd(folded, g_reference):.4f} A\n"
            )
    return EXIT_OK


def _second_points(path: str, chain: str, first: StructurePoints) -> StructurePoints:
    if Path(path).suffix.lower() in PDB_SUFFIXES:
        points = points_from_pdb(load_pdb_points(path, chain))
        return points if first.has_sidechain else points.backbone_only()
    structure, _ = load_structure(path)
    return points_from_structure(structure)


def cmd_compare(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    first, _ = load_structure(args.first)
    a = points_from_structure(first)
    b = _second_points(args.second, args.chain, a)
    out.write(f"dRMSD {drmsd(a, b):.4f} A\n")
    out.write(f"cRMSD {crmsd(a, b):.4f} A\n")
    return EXIT_OK


def cmd_randstruct(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    sequence = Sequence.parse(args.sequence)
    structure = random_valid_structure(
        len(sequence), lattice_from_name(config.lattice), config.model, config.seed
    )
    if args.output:
        save_structure(Path(args.output), structure, sequence)
    else:
        write_structure(out, structure, sequence)
    return EXIT_OK


def main(argv: Optional[SequenceType[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run the command line interface.

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    setup_logging(log_level=args.log_level, log_file=args.log_file)

    try:
        config = resolve_config(args)
        return args.handler(args, config, out)
    except InvariantViolationError as e:
        logger.debug("Invariant violation", exc_info=True)
        print(f"latmove: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    except LatticeProteinError as e:
        logger.debug("Input error", exc_info=True)
        print(f"latmove: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as e:
        print(
            f"latmove: error: {ERROR_MESSAGES['processing_error'].format(error=e)}",
            file=sys.stderr,
        )
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        print(f"latmove: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
