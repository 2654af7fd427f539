import random

import pytest

from extdiv.division import depth
from extdiv.koszul import (
    DegenerateIdealError,
    boundary_matrix,
    cohomology_vanishes,
    is_regular_sequence,
    koszul_depth,
)
from extdiv.ring import FreeVector, Ideal, RingCtx

from generators import R3, random_poly

X, Y, Z = R3.gens()


def vec(*texts):
    return FreeVector([R3.parse(t) for t in texts])


def matmul(A, B):
    return [[sum((A[i][t] * B[t][j] for t in range(len(B))), R3.zero()) for j in range(len(B[0]))] for i in range(len(A))]


def test_boundary_matrices():
    assert boundary_matrix(vec("x", "y"), 0) == [[X, Y]]
    assert boundary_matrix(vec("x", "y"), 1) == [[-Y], [X]]
    # (x e1 + y e2 + z e3) ^ e_I for I = 12, 13, 23
    assert boundary_matrix(vec("x", "y", "z"), 2) == [[Z], [-Y], [X]]


def test_boundary_index_range():
    with pytest.raises(ValueError):
        boundary_matrix(vec("x", "y"), 2)


@pytest.mark.parametrize("seed", range(10))
def test_boundary_squares_to_zero(seed):
    rng = random.Random(seed)
    r = rng.randint(2, 4)
    omega = FreeVector([random_poly(rng, R3, 2, 2) for _ in range(r)])
    for i in range(r - 1):
        prod = matmul(boundary_matrix(omega, i), boundary_matrix(omega, i + 1))
        assert all(c.is_zero() for row in prod for c in row)


@pytest.mark.parametrize("i", [0, 1, 2])
def test_cohomology_of_maximal_ideal_vanishes(i):
    assert cohomology_vanishes(vec("x", "y", "z"), i)


def test_cohomology_detects_repeated_entry():
    assert cohomology_vanishes(vec("x", "x"), 0)
    assert not cohomology_vanishes(vec("x", "x"), 1)


@pytest.mark.parametrize("entries, expected", [(("x", "y", "z"), 3), (("x", "x*y"), 1), (("x",), 1), (("x*y", "x*z"), 1)])
def test_koszul_depth(entries, expected):
    assert koszul_depth(vec(*entries)) == expected


def test_koszul_depth_cap():
    assert koszul_depth(vec("x", "y", "z"), cap=2) == 2


@pytest.mark.parametrize("entries, code", [(("0", "0"), "zero_ideal"), (("x", "1 - x"), "unit_ideal")])
def test_koszul_depth_degenerate(entries, code):
    with pytest.raises(DegenerateIdealError) as info:
        koszul_depth(vec(*entries))
    assert info.value.code == code


def test_regular_sequence_examples():
    assert is_regular_sequence([X, Y, Z])
    assert not is_regular_sequence([X, X * Y])
    assert is_regular_sequence([X * Y, Z])
    assert is_regular_sequence([Z, X * Y])
    assert is_regular_sequence([Y, Z], Ideal(R3, [X]))
    assert not is_regular_sequence([X, 1 - X])


def test_order_matters_outside_local_rings():
    # y * z(1-x) lies in (y(1-x)) while y does not, so the permuted order fails
    a, b, c = X, Y * (1 - X), Z * (1 - X)
    assert is_regular_sequence([a, b, c])
    assert not is_regular_sequence([b, c, a])


def random_monomial(rng, ring):
    e = [rng.randint(0, 2) for _ in range(ring.nvars)]
    if sum(e) == 0:
        e[rng.randrange(ring.nvars)] = 1
    return ring.monomial(tuple(e))


@pytest.mark.parametrize("seed", range(15))
def test_koszul_depth_matches_codim_on_monomial_ideals(seed):
    rng = random.Random(seed)
    entries = [random_monomial(rng, R3) for _ in range(rng.randint(1, 3))]
    assert koszul_depth(FreeVector(entries)) == depth(Ideal(R3, entries)).depth_value
