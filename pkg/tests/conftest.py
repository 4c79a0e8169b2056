import itertools
import random

import pytest

from icasm import InputStructure, default_universe


@pytest.fixture
def u():
    return default_universe()


def naked(n):
    return InputStructure.naked(n)


def coloured(n, red):
    return InputStructure(n, {"Red": frozenset((a,) for a in red)}, {"Red": 1})


def bipartite(boys, girls, edges):
    n = len(boys) + len(girls)
    return InputStructure(
        n,
        {"Boys": frozenset((b,) for b in boys), "Girls": frozenset((g,) for g in girls),
         "E": frozenset(edges)},
        {"Boys": 1, "Girls": 1, "E": 2},
    )


def has_perfect_matching(boys, girls, edges):
    """Enumerate every bijection boys -> girls."""
    if len(boys) != len(girls):
        return False
    adj = {(b, g) for b, g in edges} | {(g, b) for b, g in edges}
    return any(all((b, g) in adj for b, g in zip(boys, perm)) for perm in itertools.permutations(girls))


def saturates_boys(boys, girls, edges):
    """Some matching covers every boy (what the rule's examine step tests)."""
    if len(boys) > len(girls):
        return False
    adj = {(b, g) for b, g in edges} | {(g, b) for b, g in edges}
    return any(all((b, g) in adj for b, g in zip(boys, perm))
               for perm in itertools.permutations(girls, len(boys)))


def random_bipartite(rng: random.Random, max_side=4, balanced=True):
    b = rng.randint(0, max_side)
    g = b if balanced else rng.randint(0, max_side)
    atoms = list(range(b + g))
    rng.shuffle(atoms)
    boys, girls = atoms[:b], atoms[b:]
    p = rng.choice([0.3, 0.6, 0.9])
    edges = {(x, y) for x in boys for y in girls if rng.random() < p}
    return boys, girls, edges


# one line per acceptance criterion, shown at the end of every run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
