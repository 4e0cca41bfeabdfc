"""
Finite-domain constraint solver over lattice coordinate variables.

This module provides a small CSP engine sized for move intervals:
- Constraint variants: all-different, neighboring (variable/variable and
  variable/anchor), disequality to an anchor and a disjunction of anchor
  disequalities
- Propagation to a fixpoint (arc consistency for the neighboring constraints)
- Complete, deterministic enumeration of all solutions
- Seeded randomized search for a single solution

Domains are immutable frozensets; propagators replace the entry of a changed
variable, so copying the domain list is enough to branch.
"""

import abc
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidParameterError, InvariantViolationError
from .lattice import Coord, LatticeDescriptor
from .validation import validate_seed

VarId = int
Domain = FrozenSet[Coord]


class Constraint(abc.ABC):
    """Base class of the closed set of constraint variants."""

    @property
    @abc.abstractmethod
    def variables(self) -> Tuple[VarId, ...]:
        """Variables the constraint refers to."""

    @abc.abstractmethod
    def propagate(
        self, domains: List[Domain], lattice: LatticeDescriptor
    ) -> Optional[List[VarId]]:
        """
        Prune ``domains`` in place.

        Returns:
            Variables whose domain changed, or None if the constraint cannot be
            satisfied any more
        """

    @abc.abstractmethod
    def is_satisfied(self, values: Sequence[Coord], lattice: LatticeDescriptor) -> bool:
        """Check the constraint on a total assignment."""


@dataclass(frozen=True)
class AllDifferent(Constraint):
    """Pairwise distinct values. Pruning uses assigned (singleton) domains only."""

    vars: Tuple[VarId, ...]

    @property
    def variables(self) -> Tuple[VarId, ...]:
        return self.vars

    def propagate(self, domains, lattice):
        changed = set()
        done = set()
        progress = True
        while progress:
            progress = False
            for v in self.vars:
                if v in done or len(domains[v]) != 1:
                    continue
                done.add(v)
                (value,) = domains[v]
                for u in self.vars:
                    if u == v or value not in domains[u]:
                        continue
                    domains[u] = domains[u] - {value}
                    if not domains[u]:
                        return None
                    changed.add(u)
                    progress = True
        return sorted(changed)

    def is_satisfied(self, values, lattice):
        picked = [values[v] for v in self.vars]
        return len(set(picked)) == len(picked)


def _supported(domain: Domain, other: Domain, lattice: LatticeDescriptor) -> Domain:
    vectors = lattice.neighbor_vectors
    return frozenset(
        d
        for d in domain
        if any((d[0] + v[0], d[1] + v[1], d[2] + v[2]) in other for v in vectors)
    )


@dataclass(frozen=True)
class Neigh(Constraint):
    """a ~ b. Propagation enforces arc consistency in both directions."""

    a: VarId
    b: VarId

    @property
    def variables(self):
        return (self.a, self.b)

    def propagate(self, domains, lattice):
        if self.a == self.b:
            return None
        changed = []
        for x, y in ((self.a, self.b), (self.b, self.a)):
            pruned = _supported(domains[x], domains[y], lattice)
            if len(pruned) != len(domains[x]):
                if not pruned:
                    return None
                domains[x] = pruned
                changed.append(x)
        return changed

    def is_satisfied(self, values, lattice):
        return lattice.are_neighbors(values[self.a], values[self.b])


@dataclass(frozen=True)
class NeighAnchor(Constraint):
    """a ~ c for a fixed coordinate c."""

    a: VarId
    c: Coord

    @property
    def variables(self):
        return (self.a,)

    def propagate(self, domains, lattice):
        pruned = domains[self.a] & frozenset(lattice.neighbors_of(self.c))
        if not pruned:
            return None
        if len(pruned) == len(domains[self.a]):
            return []
        domains[self.a] = pruned
        return [self.a]

    def is_satisfied(self, values, lattice):
        return lattice.are_neighbors(values[self.a], self.c)


@dataclass(frozen=True)
class NotEqualAnchor(Constraint):
    """a != c for a fixed coordinate c."""

    a: VarId
    c: Coord

    @property
    def variables(self):
        return (self.a,)

    def propagate(self, domains, lattice):
        if self.c not in domains[self.a]:
            return []
        pruned = domains[self.a] - {self.c}
        if not pruned:
            return None
        domains[self.a] = pruned
        return [self.a]

    def is_satisfied(self, values, lattice):
        return values[self.a] != self.c


@dataclass(frozen=True)
class OrNotEqualAnchors(Constraint):
    """At least one listed variable differs from its paired coordinate (unit propagation)."""

    pairs: Tuple[Tuple[VarId, Coord], ...]

    @property
    def variables(self):
        return tuple(dict.fromkeys(v for v, _ in self.pairs))

    def propagate(self, domains, lattice):
        open_literals = []
        for v, c in self.pairs:
            if c not in domains[v]:
                return []  # already entailed
            if domains[v] != {c}:
                open_literals.append((v, c))
        if not open_literals:
            return None
        if len(open_literals) > 1:
            return []
        v, c = open_literals[0]
        domains[v] = domains[v] - {c}
        return [v]

    def is_satisfied(self, values, lattice):
        return any(values[v] != c for v, c in self.pairs)


@dataclass(frozen=True)
class Problem:
    """Variables 0..n-1 with their domains and the constraints over them."""

    lattice: LatticeDescriptor
    domains: Tuple[Domain, ...]
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        domains = tuple(frozenset(Coord(*c) for c in d) for d in self.domains)
        constraints = tuple(self.constraints)
        for constraint in constraints:
            for v in constraint.variables:
                if not (0 <= v < len(domains)):
                    raise InvalidParameterError(
                        f"Constraint {constraint!r} refers to unknown variable {v}",
                        field="constraints",
                        value=v,
                    )
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "constraints", constraints)

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    def watchers(self) -> Dict[VarId, List[int]]:
        """Constraint indices per variable."""
        table: Dict[VarId, List[int]] = {v: [] for v in range(self.num_vars)}
        for ci, constraint in enumerate(self.constraints):
            for v in constraint.variables:
                table[v].append(ci)
        return table


@dataclass(frozen=True)
class Assignment:
    """Total assignment, one coordinate per variable."""

    values: Tuple[Coord, ...]

    def __getitem__(self, var: VarId) -> Coord:
        return self.values[var]

    def __len__(self) -> int:
        return len(self.values)


def is_solution(problem: Problem, assignment: Assignment) -> bool:
    """Naive verifier: domain membership plus every constraint on the assignment."""
    values = assignment.values
    if len(values) != problem.num_vars:
        return False
    if any(value not in domain for value, domain in zip(values, problem.domains)):
        return False
    return all(c.is_satisfied(values, problem.lattice) for c in problem.constraints)


def _fixpoint(
    domains: List[Domain],
    problem: Problem,
    watchers: Dict[VarId, List[int]],
    start: Iterable[int],
) -> bool:
    if any(not d for d in domains):
        return False
    queue = deque(start)
    queued = set(queue)
    constraints = problem.constraints
    while queue:
        ci = queue.popleft()
        queued.discard(ci)
        changed = constraints[ci].propagate(domains, problem.lattice)
        if changed is None:
            return False
        for v in changed:
            for cj in watchers[v]:
                if cj != ci and cj not in queued:
                    queue.append(cj)
                    queued.add(cj)
    return True


def propagate(problem: Problem) -> Optional[Problem]:
    """
    Reduce all domains to the propagation fixpoint.

    Returns:
        The reduced problem, or None when a domain becomes empty
    """
    domains = list(problem.domains)
    if not _fixpoint(domains, problem, problem.watchers(), range(len(problem.constraints))):
        return None
    return Problem(problem.lattice, tuple(domains), problem.constraints)


def _search(
    domains: List[Domain],
    problem: Problem,
    watchers: Dict[VarId, List[int]],
    rng: Optional[np.random.Generator],
) -> Iterator[Assignment]:
    open_vars = [v for v, d in enumerate(domains) if len(d) > 1]
    if not open_vars:
        assignment = Assignment(tuple(next(iter(d)) for d in domains))
        if not is_solution(problem, assignment):
            raise InvariantViolationError(
                "Propagation fixpoint with singleton domains violates a constraint",
                details={"assignment": assignment.values},
            )
        yield assignment
        return

    smallest = min(len(domains[v]) for v in open_vars)
    candidates = [v for v in open_vars if len(domains[v]) == smallest]
    values = sorted(domains[candidates[0]])
    var = candidates[0]
    if rng is not None:
        var = candidates[int(rng.integers(len(candidates)))]
        values = sorted(domains[var])
        values = [values[i] for i in rng.permutation(len(values))]

    for value in values:
        child = list(domains)
        child[var] = frozenset((value,))
        if _fixpoint(child, problem, watchers, watchers[var]):
            yield from _search(child, problem, watchers, rng)


def solve_all(problem: Problem) -> Iterator[Assignment]:
    """
    Enumerate every solution exactly once.

    Backtracking interleaved with propagation; the variable with the smallest
    domain is branched on first (lowest VarId on ties) and values are tried in
    lexicographic order, so the output order is deterministic.
    """
    domains = list(problem.domains)
    watchers = problem.watchers()
    if not _fixpoint(domains, problem, watchers, range(len(problem.constraints))):
        return
    yield from _search(domains, problem, watchers, None)


def solve_random(
    problem: Problem, seed: Union[int, np.random.Generator]
) -> Optional[Assignment]:
    """
    Find one solution with seeded random variable tie-breaking and value order.

    ``seed`` may also be a numpy Generator, which is then advanced in place.

    The search is complete, so None means the problem is unsatisfiable. The
    returned solution is deterministic given the seed but not uniformly
    distributed over the solution set.
    """
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(validate_seed(seed))
    domains = list(problem.domains)
    watchers = problem.watchers()
    if not _fixpoint(domains, problem, watchers, range(len(problem.constraints))):
        return None
    return next(_search(domains, problem, watchers, rng), None)
