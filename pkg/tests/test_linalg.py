import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evdrange import (InsufficientRows, NotSymmetric, SymMatrix, ZeroMatrix, covariance,
                      norm_inf, norm_one, random_data, random_spsd, scale_matrix, spectral_bound)


def test_norms_match_numpy(mat_z):
    A = mat_z.entries
    assert norm_one(mat_z) == pytest.approx(np.linalg.norm(A, 1), rel=1e-15)
    assert norm_inf(mat_z) == pytest.approx(np.linalg.norm(A, np.inf), rel=1e-15)


def test_spectral_bound_of_d_is_row_sum(mat_d):
    assert spectral_bound(mat_d) == pytest.approx(55.6888, abs=1e-12)


def test_identity_scaling():
    res = scale_matrix(SymMatrix(np.eye(4)))
    assert res.factor_m == 1.0
    assert res.scaled == SymMatrix(np.eye(4))


def test_zero_matrix_cannot_be_scaled():
    with pytest.raises(ZeroMatrix):
        scale_matrix(SymMatrix(np.zeros((3, 3))))


def test_constructor_rejects_asymmetry():
    with pytest.raises(NotSymmetric):
        SymMatrix([[1.0, 2.0], [2.0 + 1e-15, 1.0]])
    assert SymMatrix.symmetrized([[1.0, 2.0], [2.5, 1.0]])[0, 1] == 2.25


def test_constructor_rejects_non_square_and_nan():
    with pytest.raises(ValueError):
        SymMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        SymMatrix([[np.nan]])


def test_entries_are_read_only(mat_c):
    with pytest.raises(ValueError):
        mat_c.entries[0, 0] = 1.0


def test_random_spsd_is_deterministic_and_psd():
    a, b = random_spsd(7, 42), random_spsd(7, 42)
    assert a == b
    assert a != random_spsd(7, 43)
    assert np.linalg.eigvalsh(a.entries).min() > -1e-12


def test_covariance_matches_numpy():
    data = random_data(5, 3)
    np.testing.assert_allclose(covariance(data).entries, np.cov(data, rowvar=False), rtol=1e-12)


def test_covariance_needs_two_rows():
    with pytest.raises(InsufficientRows):
        covariance(np.ones((1, 3)))


@st.composite
def sym_matrices(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    vals = draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=n * n, max_size=n * n))
    arr = np.array(vals).reshape(n, n)
    return SymMatrix.symmetrized(arr)


@given(sym_matrices())
@settings(max_examples=200, deadline=None)
def test_spectral_bound_dominates_spectral_norm(M):
    assert np.linalg.norm(M.entries, 2) <= spectral_bound(M) * (1 + 1e-12) + 1e-300


@given(sym_matrices())
@settings(max_examples=200, deadline=None)
def test_scaled_entries_and_spectrum_in_unit_range(M):
    if not np.any(M.entries):
        return
    res = scale_matrix(M)
    assert np.max(np.abs(res.scaled.entries)) <= 1.0
    lam = np.linalg.eigvalsh(res.scaled.entries)
    assert np.max(np.abs(lam)) <= 1.0 + 1e-12
    np.testing.assert_allclose(lam * res.factor_m, np.linalg.eigvalsh(M.entries),
                               atol=1e-9 * res.factor_m)
