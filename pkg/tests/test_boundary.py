import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import CACHE_SIZE, DimensionError, SizeError
from boundary import (
    BoundaryBasis,
    build_transform,
    build_unitary_transform,
    extended_grid,
    transform_apply,
    transform_apply_inverse,
)
from trig import TrigKind, get_plan
import oracle

BASES = list(BoundaryBasis)


def _random(n, seed, complex_=False):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    return v + 1j * rng.standard_normal(n) if complex_ else v


def _relative_error(actual, expected):
    return np.linalg.norm(actual - expected) / np.linalg.norm(expected)


def test_hoc_cosine_grid():
    (a, b), points = extended_grid(BoundaryBasis.HOC_COSINE, 6)
    assert a == pytest.approx(-np.pi / 8)
    assert b == pytest.approx(9 * np.pi / 8)
    np.testing.assert_allclose(points, (2 * np.arange(6) - 1) * np.pi / 8)


def test_hoc_fourier_grid():
    (a, b), points = extended_grid(BoundaryBasis.HOC_FOURIER, 6)
    assert a == pytest.approx(-np.pi / 2)
    assert b == 2 * np.pi
    assert points[-1] == b


def test_antireflective_grid():
    (a, b), points = extended_grid(BoundaryBasis.ANTIREFLECTIVE, 7)
    assert (a, b) == (0.0, np.pi)
    np.testing.assert_allclose(points, np.arange(7) * np.pi / 6)


def test_hoc_cosine_boundary_column():
    t = build_transform(BoundaryBasis.HOC_COSINE, 6)
    q = np.array([25 / 16, 1, 9 / 16, 1 / 4, 1 / 16, 0])
    np.testing.assert_allclose(t.column, q / np.linalg.norm(q), atol=1e-15)


def test_antireflective_column_below_fast_size():
    p = oracle.dense_boundary_column(BoundaryBasis.ANTIREFLECTIVE, 3)
    np.testing.assert_allclose(p, [2 / np.sqrt(5), 1 / np.sqrt(5), 0], atol=1e-15)


@pytest.mark.parametrize("basis", BASES)
@pytest.mark.parametrize("n", [5, 6, 8, 33, 100, 257])
def test_boundary_column_unit_norm_zero_tail(basis, n):
    t = build_transform(basis, n)
    assert np.linalg.norm(t.column) == pytest.approx(1.0, abs=1e-12)
    assert t.column[-1] == 0.0
    np.testing.assert_allclose(t.column, oracle.dense_boundary_column(basis, n), atol=1e-13)


@pytest.mark.parametrize("n", [5, 16, 31])
def test_hoc_cosine_rows_alternate(n):
    t = build_transform(BoundaryBasis.HOC_COSINE, n)
    signs = np.where(np.arange(n - 2) % 2 == 0, 1.0, -1.0)
    np.testing.assert_array_equal(t.c_b, signs * t.c_a)


@pytest.mark.parametrize("basis", BASES)
def test_first_and_last_columns(basis):
    n = 11
    t = build_transform(basis, n)
    e = np.eye(n)
    np.testing.assert_allclose(transform_apply(t, e[0]), t.column, atol=1e-14)
    np.testing.assert_allclose(transform_apply(t, e[-1]), t.column[::-1], atol=1e-14)


@pytest.mark.parametrize("basis", BASES)
def test_apply_matches_dense(basis):
    n = 64
    v = _random(n, 5)
    dense = oracle.dense_transform(basis, n)
    assert _relative_error(transform_apply(build_transform(basis, n), v), dense @ v) <= 1e-12


@pytest.mark.parametrize("basis", BASES)
def test_inverse_round_trip(basis):
    n = 128
    t = build_transform(basis, n)
    v = _random(n, 6, complex_=t.is_complex)
    assert _relative_error(transform_apply_inverse(t, transform_apply(t, v)), v) <= 1e-10


@pytest.mark.parametrize("basis", BASES)
def test_inverse_maps_column_to_e1(basis):
    t = build_transform(basis, 40)
    expected = np.zeros(40)
    expected[0] = 1.0
    np.testing.assert_allclose(transform_apply_inverse(t, t.column), expected, atol=1e-10)


@pytest.mark.parametrize("basis", BASES)
def test_inverse_matches_dense_lu(basis):
    n = 32
    t = build_transform(basis, n)
    dense_inverse = np.linalg.inv(oracle.dense_transform(basis, n))
    rng = np.random.default_rng(7)
    for _ in range(20):
        y = rng.standard_normal(n)
        assert _relative_error(transform_apply_inverse(t, y), dense_inverse @ y) <= 1e-9


@pytest.mark.parametrize("basis", BASES)
@pytest.mark.parametrize("n", [8, 33, 100])
def test_dense_times_fast_inverse_is_identity(basis, n):
    t = build_transform(basis, n)
    fast_inverse = t.apply_inverse(np.eye(n), axis=0)
    residual = np.eye(n) - oracle.dense_transform(basis, n) @ fast_inverse
    assert np.linalg.norm(residual, 2) <= 1e-9


def test_hoc_cosine_interior_columns_are_sampled_cosines():
    n = 16
    k = n - 2
    t = build_transform(BoundaryBasis.HOC_COSINE, n)
    for j in range(k):
        e = np.zeros(n)
        e[j + 1] = 1.0
        scale = np.sqrt((1.0 if j == 0 else 2.0) / k)
        np.testing.assert_allclose(t.apply(e), scale * np.cos(j * t.grid), atol=1e-13)


@pytest.mark.parametrize("basis", BASES)
def test_apply_along_axis(basis):
    t = build_transform(basis, 9)
    a = np.random.default_rng(8).standard_normal((9, 4))
    by_columns = t.apply(a, axis=0)
    back = t.apply_inverse(by_columns, axis=0)
    for j in range(4):
        np.testing.assert_allclose(by_columns[:, j], t.apply(a[:, j]))
    np.testing.assert_allclose(back, a, atol=1e-12)


def test_real_basis_accepts_complex_input():
    t = build_transform(BoundaryBasis.ANTIREFLECTIVE, 12)
    re, im = np.random.default_rng(9).standard_normal((2, 12))
    np.testing.assert_allclose(t.apply(re + 1j * im), t.apply(re) + 1j * t.apply(im))


@pytest.mark.parametrize("basis", BASES)
def test_minimum_order(basis):
    with pytest.raises(SizeError):
        build_transform(basis, 4)
    with pytest.raises(SizeError):
        extended_grid(basis, 3)


def test_length_mismatch():
    t = build_transform(BoundaryBasis.HOC_FOURIER, 10)
    with pytest.raises(DimensionError):
        t.apply(np.ones(9))
    with pytest.raises(DimensionError):
        t.apply_inverse(np.ones(11))


def test_transforms_are_cached():
    assert build_transform(BoundaryBasis.HOC_COSINE, 20) is build_transform(BoundaryBasis.HOC_COSINE, 20)


def test_transform_caches_are_bounded():
    for cached in (build_transform, build_unitary_transform, get_plan):
        assert cached.cache_info().maxsize == CACHE_SIZE


def test_evicted_transform_is_rebuilt_equal():
    build_transform.cache_clear()
    first = build_transform(BoundaryBasis.HOC_COSINE, 21)
    for n in range(22, 22 + CACHE_SIZE + 1):
        build_transform(BoundaryBasis.HOC_COSINE, n)
    again = build_transform(BoundaryBasis.HOC_COSINE, 21)
    assert again is not first
    np.testing.assert_array_equal(again.v, first.v)


def test_unitary_transforms():
    n = 10
    v = _random(n, 10)
    periodic = build_unitary_transform(TrigKind.FOURIER, n)
    reflective = build_unitary_transform(TrigKind.COSINE, n)
    np.testing.assert_allclose(periodic.apply(v), oracle.dense_fourier(n).conj().T @ v, atol=1e-13)
    np.testing.assert_allclose(reflective.apply_inverse(v), oracle.dense_cosine(n) @ v, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BASES), st.integers(5, 200), st.integers(0, 2**32 - 1))
def test_round_trip_any_order(basis, n, seed):
    t = build_transform(basis, n)
    v = _random(n, seed)
    assert _relative_error(t.apply_inverse(t.apply(v)), v) <= 1e-9
