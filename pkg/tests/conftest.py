import pytest

from jaglab.groups import abelian_group, cayley_graph, grid_group

GRID_CASES = [(1, 2), (1, 5), (2, 2), (2, 3), (3, 2)]

# presentations: (moduli, generators or None for the standard ones)
ABELIAN_PRESENTATIONS = [
    ((4, 2), None),
    ((4, 2), [(1, 1), (0, 1)]),
    ((4, 2), [(2, 1), (1, 0)]),
    ((8,), None),
    ((8,), [(3,)]),
    ((3, 3), None),
    ((3, 3), [(1, 1), (0, 1), (1, 0)]),
    ((2, 2, 2), None),
    ((6,), [(5,)]),
    ((4, 4), None),
    ((2, 4, 2), None),
    ((64,), None),
    ((8, 8), None),
]


@pytest.fixture(scope="session")
def grid_cayleys():
    out = {}
    for d, l in GRID_CASES:
        group, gens = grid_group(d, l)
        out[(d, l)] = cayley_graph(group, gens)
    return out


@pytest.fixture(scope="session")
def abelian_corpus():
    out = []
    for moduli, gens in ABELIAN_PRESENTATIONS:
        group, gg = abelian_group(moduli, gens)
        out.append((moduli, gens, group, gg, cayley_graph(group, gg)))
    return out
