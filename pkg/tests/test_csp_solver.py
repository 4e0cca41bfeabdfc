"""
Tests for the finite-domain constraint solver.

Solver output is checked against brute force over the cross product of the
domains on many small random problems.
"""

import itertools
import unittest

import numpy as np
import pytest

from src.utils.csp_solver import (
    AllDifferent,
    Assignment,
    Neigh,
    NeighAnchor,
    NotEqualAnchor,
    OrNotEqualAnchors,
    Problem,
    is_solution,
    propagate,
    solve_all,
    solve_random,
)
from src.utils.exceptions import InvalidParameterError
from src.utils.lattice import Coord, lattice_from_name

SQ = lattice_from_name("SQ")
GRID = [Coord(x, y, 0) for x in range(3) for y in range(3)]


def _random_domain(rng):
    size = int(rng.integers(1, len(GRID) + 1))
    picks = rng.choice(len(GRID), size=size, replace=False)
    return frozenset(GRID[i] for i in picks)


def _random_constraint(rng, num_vars):
    kind = int(rng.integers(5))
    anchor = GRID[int(rng.integers(len(GRID)))]
    if kind == 0:
        size = int(rng.integers(2, num_vars + 1))
        return AllDifferent(tuple(int(v) for v in rng.choice(num_vars, size=size, replace=False)))
    if kind == 1:
        a, b = (int(v) for v in rng.choice(num_vars, size=2, replace=False))
        return Neigh(a, b)
    if kind == 2:
        return NeighAnchor(int(rng.integers(num_vars)), anchor)
    if kind == 3:
        return NotEqualAnchor(int(rng.integers(num_vars)), anchor)
    size = int(rng.integers(1, num_vars + 1))
    return OrNotEqualAnchors(
        tuple(
            (int(v), GRID[int(rng.integers(len(GRID)))])
            for v in rng.choice(num_vars, size=size, replace=False)
        )
    )


def _random_problem(rng):
    num_vars = int(rng.integers(2, 5))
    domains = tuple(_random_domain(rng) for _ in range(num_vars))
    constraints = tuple(
        _random_constraint(rng, num_vars) for _ in range(int(rng.integers(1, 5)))
    )
    return Problem(SQ, domains, constraints)


def _brute_force(problem):
    found = set()
    for values in itertools.product(*(sorted(d) for d in problem.domains)):
        if all(c.is_satisfied(values, problem.lattice) for c in problem.constraints):
            found.add(tuple(values))
    return found


@pytest.mark.parametrize("seed", range(200))
def test_solvers_match_brute_force(seed):
    """Test solver enumeration against brute force."""
    rng = np.random.default_rng(seed)
    problem = _random_problem(rng)
    expected = _brute_force(problem)

    solutions = [a.values for a in solve_all(problem)]
    assert len(solutions) == len(set(solutions))
    assert set(solutions) == expected

    single = solve_random(problem, seed)
    if expected:
        assert single is not None
        assert single.values in expected
    else:
        assert single is None

    reduced = propagate(problem)
    if reduced is None:
        assert not expected
    else:
        # values used by some solution survive propagation
        for values in expected:
            for v, value in enumerate(values):
                assert value in reduced.domains[v]


class TestConstraints(unittest.TestCase):
    def test_neigh_with_itself_is_inconsistent(self):
        """Test a neighbor constraint of a variable with itself."""
        problem = Problem(SQ, (frozenset(GRID),), (Neigh(0, 0),))
        self.assertIsNone(propagate(problem))
        self.assertEqual(list(solve_all(problem)), [])

    def test_empty_disjunction_is_false(self):
        """Test an empty disjunction."""
        problem = Problem(SQ, (frozenset(GRID),), (OrNotEqualAnchors(()),))
        self.assertEqual(list(solve_all(problem)), [])

    def test_neigh_anchor_restricts_domain(self):
        """Test anchor constraints pruning the domain."""
        problem = Problem(SQ, (frozenset(GRID),), (NeighAnchor(0, Coord(1, 1, 0)),))
        reduced = propagate(problem)
        self.assertEqual(
            reduced.domains[0],
            {Coord(0, 1, 0), Coord(2, 1, 0), Coord(1, 0, 0), Coord(1, 2, 0)},
        )

    def test_or_not_equal_unit_propagation(self):
        """Test unit propagation of disequality disjunctions."""
        c = Coord(0, 0, 0)
        d = Coord(1, 0, 0)
        problem = Problem(
            SQ,
            (frozenset({c}), frozenset({d, Coord(2, 0, 0)})),
            (OrNotEqualAnchors(((0, c), (1, d))),),
        )
        reduced = propagate(problem)
        self.assertEqual(reduced.domains[1], {Coord(2, 0, 0)})

    def test_unknown_variable_rejected(self):
        """Test constraints over unknown variables."""
        with self.assertRaises(InvalidParameterError):
            Problem(SQ, (frozenset(GRID),), (Neigh(0, 1),))

    def test_is_solution(self):
        """Test full assignment checking."""
        problem = Problem(
            SQ,
            (frozenset(GRID), frozenset(GRID)),
            (Neigh(0, 1), AllDifferent((0, 1))),
        )
        self.assertTrue(is_solution(problem, Assignment((Coord(0, 0, 0), Coord(0, 1, 0)))))
        self.assertFalse(is_solution(problem, Assignment((Coord(0, 0, 0), Coord(2, 2, 0)))))
        self.assertFalse(is_solution(problem, Assignment((Coord(0, 0, 0),))))


class TestSearchOrder(unittest.TestCase):
    def setUp(self):
        self.problem = Problem(
            SQ,
            (frozenset(GRID), frozenset(GRID), frozenset(GRID)),
            (Neigh(0, 1), Neigh(1, 2), AllDifferent((0, 1, 2))),
        )

    def test_enumeration_is_deterministic(self):
        """Test repeatable solution order."""
        first = [a.values for a in solve_all(self.problem)]
        second = [a.values for a in solve_all(self.problem)]
        self.assertEqual(first, second)

    def test_random_solution_depends_only_on_seed(self):
        """Test seeded random solutions."""
        self.assertEqual(solve_random(self.problem, 11), solve_random(self.problem, 11))
        results = {solve_random(self.problem, s).values for s in range(20)}
        self.assertGreater(len(results), 1)

    def test_generator_seed_is_advanced(self):
        """Test that a shared generator advances between draws."""
        rng = np.random.default_rng(5)
        solution = solve_random(self.problem, rng)
        self.assertTrue(is_solution(self.problem, solution))
