from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from toricpc.lattice import (
    LatticeError,
    complete_to_basis,
    determinant,
    hermite_normal_form,
    is_unimodular_extension,
    matmul,
    solve_nonneg_rational,
)

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_unimodular_extension_examples():
    assert is_unimodular_extension([(1, 0)])
    assert not is_unimodular_extension([(2, 0)])
    assert is_unimodular_extension([(1, 1)])
    assert is_unimodular_extension([], n=3)
    assert not is_unimodular_extension([(1, 0), (2, 0)])
    with pytest.raises(LatticeError):
        is_unimodular_extension([(1, 0), (1, 0, 0)])


def test_complete_to_basis_examples():
    assert complete_to_basis([], n=2) == [(1, 0), (0, 1)]
    (w,) = complete_to_basis([(1, 1)])
    assert abs(determinant([(1, 1), w])) == 1
    with pytest.raises(LatticeError):
        complete_to_basis([(2, 0)])


def test_solve_examples():
    assert solve_nonneg_rational([(1, 0), (0, 1)], (1, 2)) == (Fraction(1), Fraction(2))
    assert solve_nonneg_rational([(1, 0), (0, 1)], (-1, 2)) is None
    assert solve_nonneg_rational([(1, 1)], (1, 0)) is None
    assert solve_nonneg_rational([(2, 0)], (1, 0)) == (Fraction(1, 2),)


@given(matrices(3, 3))
def test_determinant_matches_sympy(m):
    assert determinant(m) == sympy.Matrix(m).det()


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_hnf_shape_and_transform(a):
    h, u = hermite_normal_form(a)
    assert matmul(u, a) == h
    assert abs(determinant(u)) == 1
    # echelon form with positive pivots and reduced entries above them
    last = -1
    zero_seen = False
    for r, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            zero_seen = True
            continue
        assert not zero_seen
        p = nz[0]
        assert p > last and row[p] > 0
        last = p
        for above in h[:r]:
            assert 0 <= above[p] < row[p]


@given(matrices(3, 3))
def test_hnf_agrees_with_sympy_rank(a):
    h, _ = hermite_normal_form(a)
    assert sum(1 for row in h if any(row)) == sympy.Matrix(a).rank()


@given(st.integers(2, 5).flatmap(lambda n: st.integers(0, n).flatmap(
    lambda k: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=k, max_size=k).map(lambda vs: (n, vs)))))
def test_completion_gives_basis(data):
    n, vs = data
    if is_unimodular_extension(vs, n):
        basis = [tuple(v) for v in vs] + complete_to_basis(vs, n)
        assert len(basis) == n
        assert abs(determinant(basis)) == 1
    else:
        # cross-check with the gcd of maximal minors
        m = sympy.Matrix(vs) if vs else None
        if m is not None and m.rank() == len(vs):
            import itertools
            minors = [m.extract(list(range(len(vs))), list(c)).det()
                      for c in itertools.combinations(range(n), len(vs))]
            assert sympy.gcd(minors) != 1
        with pytest.raises(LatticeError):
            complete_to_basis(vs, n)


@given(matrices(3, 3), st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_solve_recovers_nonneg_combination(cols, x):
    if determinant(cols) == 0:
        return
    b = [sum(x[j] * cols[j][i] for j in range(3)) for i in range(3)]
    assert solve_nonneg_rational(cols, b) == tuple(Fraction(v) for v in x)
