from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clusterbasis.cluster import (
    RankError,
    SeedError,
    SeparationMismatch,
    assert_distinct_leading_terms,
    initial_seed,
    integer_rank,
    mutate_matrix,
    mutate_path,
    mutate_seed,
    principal_seed,
    random_paths,
    separation_specialize,
    solve_exact,
    variable_by_mutation_path,
)
from clusterbasis.expansion import expand_loop
from clusterbasis.families import Annulus
from clusterbasis.laurent import LaurentPoly, VarContext
from clusterbasis.surface import extend_principal

CTX = VarContext.principal(2)
x1, x2, y1, y2 = (LaurentPoly.var(CTX, n) for n in ("x1", "x2", "y1", "y2"))


def skew_matrices(max_n=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        B = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                v = draw(st.integers(-3, 3))
                B[i, j], B[j, i] = v, -v
        extra = draw(st.integers(0, 3))
        C = np.array(draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=extra, max_size=extra)), dtype=np.int64).reshape(extra, n)
        return np.vstack([B, C])

    return build()


def test_matrix_mutation_values():
    B = np.array([[0, 1], [-1, 0], [1, 0], [0, 1]])
    assert mutate_matrix(B, 1).tolist() == [[0, -1], [1, 0], [-1, 1], [0, 1]]
    A2 = np.array([[0, 2], [-2, 0]])
    assert mutate_matrix(A2, 2).tolist() == [[0, -2], [2, 0]]
    with pytest.raises(IndexError):
        mutate_matrix(B, 3)


@given(skew_matrices(), st.data())
def test_matrix_mutation_is_an_involution(B, data):
    k = data.draw(st.integers(1, B.shape[1]))
    assert np.array_equal(mutate_matrix(mutate_matrix(B, k), k), B)


def test_pentagon_exchange_relations():
    seed = initial_seed(extend_principal([[0, 1], [-1, 0]]))
    s1 = mutate_seed(seed, 1)
    assert s1.cluster[0] == (x2 + y1) * x1 ** -1
    assert s1.cluster[1] == x2
    assert variable_by_mutation_path(seed, [1, 2], 2) == (x2 + y1 + x1 * y1 * y2) * x1 ** -1 * x2 ** -1
    # the pentagon relation: five mutations return the initial cluster (swapped)
    s5 = mutate_path(seed, [1, 2, 1, 2, 1])[-1]
    assert set(s5.cluster) == {x1, x2}


@given(st.lists(st.integers(1, 2), max_size=6), st.integers(1, 2))
def test_seed_mutation_is_an_involution(path, k):
    seed = initial_seed(extend_principal([[0, 2], [-2, 0]]))
    s = mutate_path(seed, path)[-1]
    back = mutate_seed(mutate_seed(s, k), k)
    assert back.cluster == s.cluster and back.matrix == s.matrix


def test_seed_validation():
    with pytest.raises(SeedError):
        initial_seed([[0, 1], [1, 0]])
    with pytest.raises(SeedError):
        initial_seed([[0, 1, 0]])
    with pytest.raises(IndexError):
        variable_by_mutation_path(initial_seed([[0]]), [], 2)


def test_random_paths_are_reproducible():
    a = random_paths(3, 20, 8, seed=4)
    assert a == random_paths(3, 20, 8, seed=4)
    assert all(len(p) <= 8 and all(1 <= k <= 3 for k in p) for p in a)
    assert all(p[i] != p[i + 1] for p in a for i in range(len(p) - 1))


def test_exact_linear_algebra():
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert integer_rank([[0, -2], [2, 0], [1, 0], [0, 1]]) == 2
    assert integer_rank([[0]]) == 0
    assert solve_exact([[2, 0], [0, 3]], [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    assert solve_exact([[1], [1]], [1, 2]) is None


def test_separation_on_the_kronecker_loop():
    T = Annulus(1, 1).triangulation()
    r = expand_loop(T, Annulus(1, 1).loop_word())
    free = separation_specialize(r.laurent, r.f_poly, r.g, [[0, -2], [2, 0]])
    ctx = free.ctx
    a, b = LaurentPoly.var(ctx, "x1"), LaurentPoly.var(ctx, "x2")
    assert free == (1 + a**2 + b**2) * a ** -1 * b ** -1
    with pytest.raises(RankError):
        separation_specialize(r.laurent, r.f_poly, r.g, [[0, 0], [0, 0]])
    with pytest.raises(SeparationMismatch):
        separation_specialize(r.laurent, r.f_poly, (0, 0), [[0, -2], [2, 0]])


def test_leading_term_certificate():
    Bt = extend_principal([[0, 1], [-1, 0]])
    good = [x1, (x2 + y1) * x1 ** -1]
    assert assert_distinct_leading_terms(good, Bt).ok
    rep = assert_distinct_leading_terms([x1, x1 + x1 * y1 * y2], Bt)
    assert not rep.ok and rep.failures
    assert not assert_distinct_leading_terms([x1 + x2], Bt).ok


def test_principal_seed_of_a_surface():
    seed = principal_seed(Annulus(1, 1).triangulation())
    assert seed.n == 2 and seed.m == 4
    assert seed.coefficient(1) == y1
