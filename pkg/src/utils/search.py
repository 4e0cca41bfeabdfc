"""
Energy-directed exploration of the strict k-local move set.

This module provides:
- Gradient walks (steepest descent to a local minimum)
- Metropolis simulated annealing with geometric cooling
- Seeded random growth of valid start structures
- The two-stage folding scheme (H/P collapse, then refinement under the full
  potential) and independent seeded restarts of it
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..config.logging_config import (
    get_logger,
    log_computation_complete,
    log_computation_progress,
    log_computation_start,
)
from ..config.settings import (
    DEFAULT_COOLING,
    DEFAULT_STEPS_PER_RESIDUE,
    DEFAULT_SWEEPS,
    DEFAULT_T_END,
    DEFAULT_T_START,
    MAX_GROWTH_RESTARTS,
)
from .exceptions import GrowthFailureError, InvalidParameterError
from .lattice import ORIGIN, Coord, LatticeDescriptor
from .moves import enumerate_neighbors, sample_neighbor
from .protein_model import (
    HP_ALPHABET,
    BackboneStructure,
    ContactPotential,
    HPMapping,
    ModelKind,
    Sequence,
    SideChainStructure,
    Structure,
    energy,
    hp_potential,
    translate_to_hp,
    validate_structure,
)
from .validation import (
    SEED_MASK,
    validate_cooling,
    validate_move_length,
    validate_positive_int,
    validate_seed,
    validate_temperature,
)

logger = get_logger(__name__)

ENERGY_TOLERANCE = 1e-9

SeedLike = Union[int, np.random.Generator]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(validate_seed(seed))


@dataclass(frozen=True)
class AnnealSchedule:
    """
    Geometric cooling schedule.

    The temperature starts at ``t_start`` and is multiplied by ``cooling`` after
    every sweep, never dropping below ``t_end``. A sweep has ``steps_per_sweep``
    proposals, or ``steps_per_residue`` times the chain length when unset.
    """

    t_start: float = DEFAULT_T_START
    t_end: float = DEFAULT_T_END
    cooling: float = DEFAULT_COOLING
    sweeps: int = DEFAULT_SWEEPS
    steps_per_sweep: Optional[int] = None
    steps_per_residue: int = DEFAULT_STEPS_PER_RESIDUE

    def __post_init__(self):
        validate_temperature(self.t_start, "t_start")
        validate_temperature(self.t_end, "t_end")
        validate_cooling(self.cooling)
        validate_positive_int(self.sweeps, "sweeps")
        validate_positive_int(self.steps_per_residue, "steps_per_residue")
        if self.steps_per_sweep is not None:
            validate_positive_int(self.steps_per_sweep, "steps_per_sweep")
        if self.t_end > self.t_start:
            raise InvalidParameterError(
                "t_end must not exceed t_start", field="t_end", value=self.t_end
            )

    def steps_for(self, n: int) -> int:
        if self.steps_per_sweep is not None:
            return self.steps_per_sweep
        return self.steps_per_residue * n

    def temperature(self, sweep: int) -> float:
        """Temperature of a 0-based sweep."""
        return max(self.t_start * self.cooling**sweep, self.t_end)


class TraceStep(NamedTuple):
    step: int
    energy: float
    accepted: bool
    temperature: float


@dataclass
class FoldTrace:
    """
    Record of one search run.

    ``steps`` holds one entry per proposal (energy of the proposed structure);
    the start structure is not a step. ``best_energy`` is the minimum of the
    start energy and all accepted energies, attained by ``best_structure``.
    """

    start_energy: float
    best_structure: Structure
    best_energy: float
    steps: List[TraceStep] = field(default_factory=list)
    frozen: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def accepted_count(self) -> int:
        return sum(1 for s in self.steps if s.accepted)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted_count / len(self.steps) if self.steps else 0.0

    def record(self, step: TraceStep, structure: Structure) -> None:
        self.steps.append(step)
        if step.accepted and step.energy < self.best_energy:
            self.best_energy = step.energy
            self.best_structure = structure

    def to_frame(self) -> pd.DataFrame:
        """Trace as a table with columns step, energy, accepted, T."""
        frame = pd.DataFrame(
            [(s.step, s.energy, int(s.accepted), s.temperature) for s in self.steps],
            columns=["step", "energy", "accepted", "T"],
        )
        return frame.astype({"step": int, "energy": float, "accepted": int, "T": float})


def gradient_walk(
    structure: Structure, k: int, sequence: Sequence, potential: ContactPotential
) -> Tuple[Structure, FoldTrace]:
    """
    Steepest descent through the strict k-local neighborhood.

    Each step moves to the lowest-energy neighbor if it is strictly lower than
    the current energy; among equal candidates the first enumerated wins.

    Returns:
        The local minimum g(C) and the trace of its strictly decreasing energies
    """
    k = validate_move_length(k)
    validate_structure(structure).raise_for_violation()
    current = structure
    current_energy = energy(sequence, structure, potential)
    trace = FoldTrace(current_energy, structure, current_energy)

    while True:
        best: Optional[Structure] = None
        best_energy = current_energy - ENERGY_TOLERANCE
        for _, neighbor in enumerate_neighbors(current, k):
            e = energy(sequence, neighbor, potential)
            if e < best_energy:
                best, best_energy = neighbor, e
        if best is None:
            break
        current, current_energy = best, best_energy
        trace.record(TraceStep(len(trace) + 1, current_energy, True, 0.0), current)
        log_computation_progress("gradient walk", f"step {len(trace)}", energy=current_energy)

    return current, trace


def metropolis_accept(delta: float, temperature: float, rng: np.random.Generator) -> bool:
    """Accept if delta <= 0, otherwise with probability exp(-delta / T)."""
    if delta <= 0:
        return True
    return bool(rng.random() < math.exp(-delta / temperature))


def metropolis_run(
    structure: Structure,
    k: int,
    sequence: Sequence,
    potential: ContactPotential,
    schedule: AnnealSchedule,
    seed: SeedLike,
) -> FoldTrace:
    """
    Simulated annealing over random strict k-local moves.

    The run stops early with ``frozen`` set when the current structure has no
    neighbor at all. Deterministic given the seed.
    """
    k = validate_move_length(k)
    validate_structure(structure).raise_for_violation()
    rng = _rng(seed)
    current = structure
    current_energy = energy(sequence, structure, potential)
    trace = FoldTrace(current_energy, structure, current_energy)
    steps_per_sweep = schedule.steps_for(len(structure))

    for sweep in range(schedule.sweeps):
        temperature = schedule.temperature(sweep)
        accepted = 0
        for _ in range(steps_per_sweep):
            proposal = sample_neighbor(current, k, rng)
            if proposal is None:
                trace.frozen = True
                logger.info(f"No neighbor to propose at step {len(trace)}; run frozen")
                return trace
            candidate = proposal[1]
            candidate_energy = energy(sequence, candidate, potential)
            ok = metropolis_accept(candidate_energy - current_energy, temperature, rng)
            if ok:
                current, current_energy = candidate, candidate_energy
                accepted += 1
            trace.record(TraceStep(len(trace) + 1, candidate_energy, ok, temperature), candidate)
        log_computation_progress(
            "annealing",
            f"sweep {sweep + 1}/{schedule.sweeps}",
            T=f"{temperature:.4f}",
            acceptance=f"{accepted / steps_per_sweep:.3f}",
            best=trace.best_energy,
        )
    return trace


def _growth_options(
    lattice: LatticeDescriptor,
    placed: List[Tuple[Coord, Optional[Coord]]],
    occupied: set,
    with_sidechain: bool,
    rng: np.random.Generator,
) -> List[Tuple[Coord, Optional[Coord]]]:
    if placed:
        heads = [q for q in lattice.neighbors_of(placed[-1][0]) if q not in occupied]
    else:
        heads = [ORIGIN]
    if with_sidechain:
        options = [
            (b, s) for b in heads for s in lattice.neighbors_of(b) if s not in occupied
        ]
    else:
        options = [(b, None) for b in heads]
    # popped from the end, so the permutation fixes the trial order
    return [options[int(i)] for i in rng.permutation(len(options))]


def _grow_chain(
    n: int,
    lattice: LatticeDescriptor,
    with_sidechain: bool,
    rng: np.random.Generator,
    max_backtracks: int,
) -> Optional[List[Tuple[Coord, Optional[Coord]]]]:
    placed: List[Tuple[Coord, Optional[Coord]]] = []
    occupied: set = set()
    stack = [_growth_options(lattice, placed, occupied, with_sidechain, rng)]
    while len(placed) < n:
        options = stack[-1]
        if not options:
            stack.pop()
            if not stack or max_backtracks <= 0:
                return None
            max_backtracks -= 1
            b, s = placed.pop()
            occupied.discard(b)
            occupied.discard(s)
            continue
        b, s = options.pop()
        placed.append((b, s))
        occupied.add(b)
        if s is not None:
            occupied.add(s)
        if len(placed) < n:
            stack.append(_growth_options(lattice, placed, occupied, with_sidechain, rng))
    return placed


def random_valid_structure(
    n: int,
    lattice: LatticeDescriptor,
    model: Union[ModelKind, str],
    seed: SeedLike,
    max_restarts: int = MAX_GROWTH_RESTARTS,
) -> Structure:
    """
    Grow a random self-avoiding structure of n residues from the origin.

    Growth backtracks on dead ends a bounded number of times and restarts from
    scratch when that limit is reached.

    Raises:
        GrowthFailureError: If no structure was found within max_restarts attempts
    """
    n = validate_positive_int(n, "n")
    model = ModelKind(model)
    rng = _rng(seed)
    with_sidechain = model is ModelKind.SIDECHAIN
    for attempt in range(max_restarts):
        placed = _grow_chain(n, lattice, with_sidechain, rng, max_backtracks=50 * n)
        if placed is None:
            logger.debug(f"Growth attempt {attempt + 1} hit the backtracking limit")
            continue
        backbone = tuple(b for b, _ in placed)
        if with_sidechain:
            structure = SideChainStructure(lattice, backbone, tuple(s for _, s in placed))
        else:
            structure = BackboneStructure(lattice, backbone)
        validate_structure(structure).raise_for_violation()
        return structure
    raise GrowthFailureError(
        f"Could not grow a valid {model.value} structure of length {n} on {lattice.name}",
        {"restarts": max_restarts},
    )


def _stage_two_sequence(
    sequence: Sequence, hp_sequence: Sequence, potential: ContactPotential
) -> Sequence:
    if set(potential.alphabet) <= set(HP_ALPHABET):
        return hp_sequence
    return sequence


@dataclass
class FoldResult:
    """Artifacts of one two-stage folding run."""

    seed: int
    sequence: Sequence
    hp_sequence: Sequence
    stage_two_sequence: Sequence
    c_hp: Structure
    g_result: Structure
    r_result: Structure
    hp_trace: FoldTrace
    gradient_trace: FoldTrace
    refine_trace: FoldTrace
    c_hp_energy: float
    g_energy: float
    r_energy: float

    @property
    def hp_energy(self) -> float:
        """H/P energy of C_HP."""
        return self.hp_trace.best_energy

    def summary(self) -> pd.DataFrame:
        """One row per stage: stage, best_energy, steps."""
        return pd.DataFrame(
            [
                ("hp", self.hp_energy, len(self.hp_trace)),
                ("gradient", self.g_energy, len(self.gradient_trace)),
                ("refine", self.r_energy, len(self.refine_trace)),
            ],
            columns=["stage", "best_energy", "steps"],
        )


def two_stage_fold(
    sequence: Sequence,
    lattice: LatticeDescriptor,
    model: Union[ModelKind, str],
    mapping: HPMapping,
    potential: ContactPotential,
    schedule_hp: AnnealSchedule,
    schedule_refine: AnnealSchedule,
    k: int,
    seed: int,
) -> FoldResult:
    """
    Fold a sequence in two stages.

    Stage 1 anneals a random start structure under the H/P model (hydrophobic
    collapse) and keeps the best structure C_HP. Stage 2 evaluates C_HP under
    ``potential``: g(C_HP) is the gradient walk from C_HP, r(C_HP) is an
    annealing run from C_HP followed by a gradient walk. An H/P sequence is used
    as-is; a potential over {H, P} makes stage 2 use the translated sequence.
    """
    k = validate_move_length(k)
    seed = validate_seed(seed)
    model = ModelKind(model)
    growth_seq, hp_seq, refine_seq = np.random.SeedSequence(seed).spawn(3)

    hp_sequence = sequence if sequence.is_hp else translate_to_hp(sequence, mapping)
    stage_two = _stage_two_sequence(sequence, hp_sequence, potential)
    potential.require_cover(stage_two)
    log_computation_start(
        "two-stage fold", n=len(sequence), lattice=lattice.name, model=model.value, k=k, seed=seed
    )

    start = random_valid_structure(
        len(sequence), lattice, model, np.random.default_rng(growth_seq)
    )
    hp_trace = metropolis_run(
        start, k, hp_sequence, hp_potential(), schedule_hp, np.random.default_rng(hp_seq)
    )
    c_hp = hp_trace.best_structure
    c_hp_energy = energy(stage_two, c_hp, potential)

    g_result, gradient_trace = gradient_walk(c_hp, k, stage_two, potential)

    anneal = metropolis_run(
        c_hp, k, stage_two, potential, schedule_refine, np.random.default_rng(refine_seq)
    )
    r_result, polish = gradient_walk(anneal.best_structure, k, stage_two, potential)
    refine_trace = FoldTrace(anneal.start_energy, anneal.best_structure, anneal.best_energy)
    refine_trace.steps = list(anneal.steps)
    refine_trace.frozen = anneal.frozen
    offset = len(anneal)
    for step in polish.steps:
        refine_trace.record(step._replace(step=offset + step.step), r_result)

    result = FoldResult(
        seed=seed,
        sequence=sequence,
        hp_sequence=hp_sequence,
        stage_two_sequence=stage_two,
        c_hp=c_hp,
        g_result=g_result,
        r_result=r_result,
        hp_trace=hp_trace,
        gradient_trace=gradient_trace,
        refine_trace=refine_trace,
        c_hp_energy=c_hp_energy,
        g_energy=gradient_trace.best_energy,
        r_energy=refine_trace.best_energy,
    )
    log_computation_complete(
        "two-stage fold",
        f"E_HP={result.hp_energy:.4f} E(g)={result.g_energy:.4f} E(r)={result.r_energy:.4f}",
        seed=seed,
    )
    return result


@dataclass
class RestartSummary:
    """Independent restarts merged by best refined energy."""

    results: List[FoldResult]
    best: FoldResult

    @property
    def mean_hp_energy(self) -> float:
        """Mean E(C_HP) under the stage-two potential."""
        return float(np.mean([r.c_hp_energy for r in self.results]))

    @property
    def min_g_energy(self) -> float:
        return min(r.g_energy for r in self.results)

    @property
    def min_r_energy(self) -> float:
        return min(r.r_energy for r in self.results)

    def aggregates(self) -> Dict[str, float]:
        return {
            "mean_E_C_HP": self.mean_hp_energy,
            "min_E_g": self.min_g_energy,
            "min_E_r": self.min_r_energy,
        }


def restart_seeds(seed: int, restarts: int) -> List[int]:
    """Seeds of the independent runs: seed, seed + 1, ... modulo 2**64."""
    base = validate_seed(seed)
    return [(base + i) & SEED_MASK for i in range(validate_positive_int(restarts, "restarts"))]


def _fold_job(args: tuple) -> FoldResult:
    return two_stage_fold(*args)


def fold_restarts(
    sequence: Sequence,
    lattice: LatticeDescriptor,
    model: Union[ModelKind, str],
    mapping: HPMapping,
    potential: ContactPotential,
    schedule_hp: AnnealSchedule,
    schedule_refine: AnnealSchedule,
    k: int,
    seed: int,
    restarts: int = 1,
    workers: int = 1,
) -> RestartSummary:
    """
    Run independent seeded two-stage folds and keep the one with the lowest
    refined energy (earliest seed on ties). Runs share no state, so they are
    distributed over a process pool when ``workers`` > 1.
    """
    workers = validate_positive_int(workers, "workers")
    jobs = [
        (sequence, lattice, model, mapping, potential, schedule_hp, schedule_refine, k, s)
        for s in restart_seeds(seed, restarts)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fold_job, jobs))
    else:
        results = [_fold_job(job) for job in jobs]

    best_index = min(range(len(results)), key=lambda i: (results[i].r_energy, i))
    summary = RestartSummary(results, results[best_index])
    logger.info(f"Restarts finished: {summary.aggregates()} (best seed {summary.best.seed})")
    return summary
