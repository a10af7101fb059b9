import numpy as np
import pytest

from helpers import psd_corpus, random_psd
from lebdecomp import AtomSpace, InputError, Measure
from lebdecomp.forms import (
    PsdForm,
    ando_limit,
    decompose_forms,
    kernel_basis,
    parallel_sum,
    psd_sqrt,
)
from lebdecomp.measure import decompose


def mx(m):
    return float(np.max(np.abs(m)))


# -- PsdForm ---------------------------------------------------------------

def test_psd_form_validation():
    with pytest.raises(InputError):
        PsdForm(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InputError):
        PsdForm(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(InputError):
        PsdForm(np.ones((2, 3)))
    f = PsdForm(np.diag([2.0, 0.0]))
    assert f.n == 2
    assert not f.matrix.flags.writeable


def test_psd_form_clamps_tiny_negative_eigenvalues():
    m = np.diag([1.0, -1e-14])
    f = PsdForm(m)
    assert np.linalg.eigvalsh(f.matrix)[0] >= 0


# -- psd_sqrt --------------------------------------------------------------

def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(psd_sqrt(np.diag([4.0, 0.0])), np.diag([2.0, 0.0]))


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(0)
    for _ in range(50):
        b = random_psd(rng, int(rng.integers(2, 9)))
        r = psd_sqrt(b)
        assert mx(r - r.T) == 0
        assert mx(r @ r - b) <= 1e-10 * max(mx(b), 1.0)


def test_psd_sqrt_rejects_asymmetric():
    with pytest.raises(InputError):
        psd_sqrt(np.array([[1.0, 1.0], [0.0, 1.0]]))


# -- parallel_sum ----------------------------------------------------------

def test_parallel_sum_examples():
    assert np.allclose(parallel_sum(np.eye(3), np.eye(3)), 0.5 * np.eye(3))
    assert np.allclose(parallel_sum(np.zeros((2, 2)), np.eye(2)), 0)


def test_parallel_sum_symmetric_in_arguments():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        a, b = random_psd(rng, n), random_psd(rng, n)
        ab, ba = parallel_sum(a, b), parallel_sum(b, a)
        scale = mx(a) + mx(b)
        if mx(ab) > 1e-8 * scale:
            assert mx(ab - ba) <= 1e-10 * mx(ab)
        else:
            # ran A and ran B meet only in 0, so A:B = 0 and both orders are rounding noise
            assert mx(ab) <= 1e-10 * scale and mx(ba) <= 1e-10 * scale


def test_parallel_sum_scalar_formula():
    # 1x1 case: ab / (a + b)
    assert parallel_sum(np.array([[2.0]]), np.array([[3.0]]))[0, 0] == pytest.approx(6 / 5)


# -- ando_limit ------------------------------------------------------------

def test_ando_limit_examples():
    b = random_psd(np.random.default_rng(2), 4, 4)
    assert mx(ando_limit(np.eye(4), b).limit - b) <= 1e-9
    res = ando_limit(np.diag([1.0, 0.0]), np.eye(2))
    assert np.allclose(res.limit, np.diag([1.0, 0.0]), atol=1e-9)
    assert res.converged
    assert mx(ando_limit(np.zeros((3, 3)), b[:3, :3]).limit) == 0


def test_ando_limit_reports_nonconvergence():
    res = ando_limit(np.diag([1.0, 0.0]), np.array([[2.0, 1.0], [1.0, 1.0]]), tol=1e-30, max_k=5)
    assert not res.converged and res.k == 5


# -- decompose_forms -------------------------------------------------------

def test_decompose_forms_examples():
    b = random_psd(np.random.default_rng(3), 3, 3)
    d = decompose_forms(np.eye(3), b)
    assert mx(d.b_a.matrix - b) <= 1e-12 and mx(d.b_s.matrix) <= 1e-12

    d = decompose_forms(np.diag([1.0, 0.0]), np.eye(2))
    assert np.allclose(d.b_a.matrix, np.diag([1.0, 0.0]))
    assert np.allclose(d.b_s.matrix, np.diag([0.0, 1.0]))
    assert np.allclose(d.projector, np.diag([0.0, 1.0]))
    assert d.ok

    d = decompose_forms(np.diag([1.0, 0.0]), np.zeros((2, 2)))
    assert mx(d.b_a.matrix) == 0 and mx(d.b_s.matrix) == 0


def test_decompose_forms_schur_complement():
    # independent hand computation: A = diag(1, 0), B = [[2, 1], [1, 1]];
    # the A-absolutely continuous part is the Schur complement on e1.
    b = np.array([[2.0, 1.0], [1.0, 1.0]])
    d = decompose_forms(np.diag([1.0, 0.0]), b)
    assert np.allclose(d.b_a.matrix, [[1.0, 0.0], [0.0, 0.0]], atol=1e-12)
    assert np.allclose(d.b_s.matrix, [[1.0, 1.0], [1.0, 1.0]], atol=1e-12)


def test_decompose_forms_dimension_mismatch():
    with pytest.raises(InputError):
        decompose_forms(np.eye(2), np.eye(3))


def test_decompose_forms_invariants(seed):
    for a, b in psd_corpus(seed, 60):
        d = decompose_forms(a, b)
        nb = max(mx(b), 1e-300)
        p = d.projector
        assert mx(d.b_a.matrix + d.b_s.matrix - b) <= 1e-10 * nb
        assert d.diagnostics["min_eigenvalue_a"] >= -1e-10 * nb
        assert d.diagnostics["min_eigenvalue_s"] >= -1e-10 * nb
        assert mx(p @ p - p) <= 1e-10 and mx(p - p.T) <= 1e-10
        ker = kernel_basis(a)
        for j in range(ker.shape[1]):
            assert np.linalg.norm(d.b_a.matrix @ ker[:, j]) <= 1e-10 * nb
        assert d.diagnostics["ando_distance"] <= 1e-6 * nb


def test_diagonal_forms_agree_with_measures():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        mu = np.where(rng.random(n) < 0.4, 0.0, rng.uniform(0.1, 10, n))
        nu = np.where(rng.random(n) < 0.3, 0.0, rng.uniform(0.1, 10, n))
        d = decompose_forms(np.diag(mu), np.diag(nu))
        space = AtomSpace(tuple(f"t{i}" for i in range(n)))
        m = decompose(Measure(space, tuple(mu)), Measure(space, tuple(nu)))
        assert np.allclose(np.diag(d.b_s.matrix), m.nu_s.weights, atol=1e-10)
        assert np.allclose(np.diag(d.b_a.matrix), m.nu_a.weights, atol=1e-10)
