import random

import pytest

from plabic_workbench.cluster import (
    Seed,
    compare_arrows,
    exchange_ratio,
    match_variables,
    mutate,
    mutate_sequence,
    quiver_isomorphic,
    random_points,
    rectangles_seed,
    seed_values,
    sign_between,
)
from plabic_workbench.errors import FrozenVertex, WorkbenchError
from plabic_workbench.gca import br, evaluate_scalar, to_string
from plabic_workbench.scalar import Mat


@pytest.fixture
def gr25() -> Seed:
    return rectangles_seed(2, range(1, 6))


@pytest.mark.parametrize("m, n", [(2, 5), (3, 6), (4, 9)])
def test_rectangles_seed_size(m, n):
    seed = rectangles_seed(m, range(1, n + 1))
    assert len(seed.vertices) == m * (n - m) + 1
    assert len(seed.frozen) == n
    assert len(seed.mutable) == (m - 1) * (n - m - 1)


def test_rectangles_seed_variables(gr25):
    assert seed_values(gr25, Mat([[1, 0, -1, 2, 3], [0, 1, 4, 5, -2]]))["T"] == 1
    assert to_string(gr25.variables["1:3"]) == "<13>"
    assert to_string(gr25.variables["2:4"]) == "<34>"
    assert gr25.b("T", "1:3") == 1
    assert gr25.b("1:3", "T") == -1


def test_mutation_gives_the_exchanged_plucker(gr25, rng):
    z = Mat.random(rng, 2, 5, 100)
    mutated = mutate(gr25, "1:3")
    assert seed_values(mutated, z)["1:3"] == z.plucker([1, 3])
    assert mutated.b("1:3", "T") == 1


def test_mutation_is_an_involution(gr25, rng):
    z = Mat.random(rng, 2, 5, 100)
    twice = mutate_sequence(gr25, ["1:4", "1:4"])
    assert twice.arrows == gr25.arrows
    assert seed_values(twice, z) == seed_values(gr25, z)
    assert quiver_isomorphic(twice, gr25)


def test_frozen_vertices_do_not_mutate(gr25):
    with pytest.raises(FrozenVertex):
        mutate(gr25, "T")
    with pytest.raises(WorkbenchError):
        mutate(gr25, "9:9")


def test_seed_rejects_two_cycles():
    variables = {"a": br([1, 2]), "b": br([1, 3])}
    with pytest.raises(WorkbenchError):
        Seed(variables=variables, arrows={("a", "b"): 1, ("b", "a"): 1})
    built = Seed.build(variables, [], [("a", "b"), ("b", "a"), ("a", "b")])
    assert built.arrows == {("a", "b"): 1}


def test_exchange_ratio(gr25, rng):
    z = Mat.random(rng, 2, 5, 100)
    value = evaluate_scalar(exchange_ratio(gr25, "1:3"), z)
    p = z.plucker
    assert value == p([0, 3]) * p([1, 2]) / (p([0, 1]) * p([2, 3]))


def test_match_after_one_mutation(gr25):
    points = random_points(random.Random(1), 2, 5, 3, bound=100)
    mutated = mutate(gr25, "1:3")
    match = match_variables(gr25, mutated, points)
    assert match.missing == ["1:3"]
    assert match.matched["T"] == "T"
    orientation, compared, disagreements = compare_arrows(gr25, gr25, {v: v for v in gr25.vertices}, gr25.mutable)
    assert orientation == 1
    assert compared > 0
    assert disagreements == []


def test_sign_between():
    assert sign_between(3, 3) == 1
    assert sign_between(-3, 3) == -1
    assert sign_between(2, 3) == 0
    assert sign_between(1, 0) == 0
