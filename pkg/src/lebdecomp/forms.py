"""Lebesgue decomposition of a positive semidefinite form relative to another.

For PSD matrices ``A`` and ``B`` the subspace ``M = B^{1/2} ker(A)`` of the
space carried by ``B`` plays the role of the singular subspace. With ``P`` the
orthogonal projector onto ``M``::

    b_s = B^{1/2} P B^{1/2},    b_a = B - b_s.

``ando_limit`` computes the absolutely continuous part independently as the
limit of the parallel sums ``(t A) : B`` for ``t = 2**k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .hilbert import InputError

__all__ = [
    "FORMS_TOL",
    "PsdForm",
    "FormDecomposition",
    "AndoResult",
    "psd_sqrt",
    "kernel_basis",
    "decompose_forms",
    "parallel_sum",
    "ando_limit",
]

FORMS_TOL = 1e-10
ANDO_MAX_K = 60
ANDO_STALL = 1e-6
CHECKS = ("additive", "psd", "kernel_contained", "projector_valid", "ando_agrees")


def _max_norm(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


@dataclass(frozen=True, eq=False)
class PsdForm:
    """Real symmetric positive semidefinite matrix.

    The upper triangle is authoritative. Eigenvalues down to
    ``-tol * max(|lambda|)`` are accepted and clamped to zero; anything more
    negative is rejected.
    """

    matrix: np.ndarray
    tol: float = FORMS_TOL

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InputError(f"expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("matrix has non-finite entries")
        scale = max(_max_norm(m), 1e-300)
        if _max_norm(m - m.T) > self.tol * scale:
            raise InputError("matrix is not symmetric")
        m = np.triu(m) + np.triu(m, 1).T
        if m.any():
            lam, vec = np.linalg.eigh(m)
            top = float(np.max(np.abs(lam)))
            if lam[0] < -self.tol * top:
                raise InputError(f"matrix is not positive semidefinite (eigenvalue {lam[0]:.3e})")
            if lam[0] < 0:
                m = (vec * np.clip(lam, 0, None)) @ vec.T
                m = (m + m.T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _as_form(x, tol=FORMS_TOL) -> PsdForm:
    return x if isinstance(x, PsdForm) else PsdForm(np.asarray(x, dtype=float), tol)


def psd_sqrt(B, tol=FORMS_TOL) -> np.ndarray:
    """Symmetric PSD square root; eigenvalues below ``tol * lambda_max`` become 0."""
    m = _as_form(B, tol).matrix
    lam, vec = np.linalg.eigh(m)
    top = float(lam[-1]) if lam.size else 0.0
    root = np.where(lam > tol * top, np.sqrt(np.clip(lam, 0, None)), 0.0)
    r = (vec * root) @ vec.T
    return (r + r.T) / 2


def kernel_basis(A, tol=FORMS_TOL) -> np.ndarray:
    """Orthonormal columns spanning the eigenvectors of ``A`` with eigenvalue <= tol * lambda_max."""
    m = _as_form(A, tol).matrix
    lam, vec = np.linalg.eigh(m)
    top = float(lam[-1])
    if top <= 0:
        return np.eye(m.shape[0])
    return vec[:, lam <= tol * top]


@dataclass(frozen=True, eq=False)
class FormDecomposition:
    b_a: PsdForm
    b_s: PsdForm
    projector: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.diagnostics.get(k, True) for k in CHECKS)


def _clamped(m: np.ndarray, tol: float, scale: float) -> tuple[PsdForm, float]:
    m = (m + m.T) / 2
    lam_min = float(np.linalg.eigvalsh(m)[0])
    if lam_min < 0:
        lam, vec = np.linalg.eigh(m)
        m = (vec * np.clip(lam, 0, None)) @ vec.T
        m = (m + m.T) / 2
    return PsdForm(m, tol=max(tol, 1e-8)), lam_min


def decompose_forms(A, B, tol=FORMS_TOL, with_oracle: bool = True) -> FormDecomposition:
    """Split ``B`` into an ``A``-absolutely continuous and an ``A``-singular part.

    ``diagnostics`` holds the residuals of the defining identities and, when
    ``with_oracle`` is set, the max-norm distance of ``b_a`` to ``ando_limit``.
    """
    A, B = _as_form(A, tol), _as_form(B, tol)
    if A.n != B.n:
        raise InputError(f"dimension mismatch: {A.n} vs {B.n}")
    b = B.matrix
    n = B.n
    root = psd_sqrt(B, tol)
    ker = kernel_basis(A, tol)
    image = root @ ker
    proj = np.zeros((n, n))
    if image.size:
        u, s, _ = np.linalg.svd(image, full_matrices=False)
        ref = float(np.linalg.norm(root, 2))
        rank = int(np.sum(s > tol * ref)) if ref > 0 else 0
        u = u[:, :rank]
        proj = u @ u.T
        proj = (proj + proj.T) / 2
    raw_s = root @ proj @ root
    raw_s = (raw_s + raw_s.T) / 2
    raw_a = b - raw_s
    b_norm = _max_norm(b)
    check = 1e-10 * max(b_norm, 1e-300)
    b_s, min_s = _clamped(raw_s, tol, b_norm)
    b_a, min_a = _clamped(raw_a, tol, b_norm)

    diag = {
        "additivity_residual": _max_norm(b_a.matrix + b_s.matrix - b),
        "min_eigenvalue_a": min_a,
        "min_eigenvalue_s": min_s,
        "kernel_residual": max(
            (float(np.linalg.norm(b_a.matrix @ ker[:, j])) for j in range(ker.shape[1])),
            default=0.0,
        ),
        "projector_residual": max(_max_norm(proj @ proj - proj), _max_norm(proj - proj.T)),
    }
    diag["additive"] = diag["additivity_residual"] <= check
    diag["psd"] = min(min_a, min_s) >= -check
    diag["kernel_contained"] = diag["kernel_residual"] <= check
    diag["projector_valid"] = diag["projector_residual"] <= 1e-10
    if with_oracle:
        ando = ando_limit(A, B, tol)
        diag["ando_distance"] = _max_norm(b_a.matrix - ando.limit)
        diag["ando_converged"] = ando.converged
        diag["ando_stalled"] = ando.stalled
        diag["ando_agrees"] = diag["ando_distance"] <= 1e-6 * max(b_norm, 1e-300)
    return FormDecomposition(b_a, b_s, proj, diag)


def parallel_sum(A, B, tol=FORMS_TOL) -> np.ndarray:
    """``A : B = A (A + B)^+ B``, symmetrized."""
    a, b = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    s = a + b
    if not s.any():
        return np.zeros_like(a)
    out = a @ linalg.pinvh(s) @ b
    return (out + out.T) / 2


@dataclass(frozen=True, eq=False)
class AndoResult:
    """``converged``: the increment fell below the stopping tolerance.
    ``stalled``: the increments started growing again (rounding noise of the
    pseudoinverse at large ``t``) and the last iterate before that is returned."""

    limit: np.ndarray
    k: int
    increment: float
    converged: bool
    stalled: bool = False


def ando_limit(A, B, tol=FORMS_TOL, max_k: int = ANDO_MAX_K) -> AndoResult:
    """Limit of ``(2**k A) : B`` as ``k`` grows.

    Stops once successive iterates differ by at most ``tol * ||B||_max`` in max
    norm, or at ``k = max_k`` (``converged`` is then False). Once the increments
    are below ``ANDO_STALL * ||B||_max`` they shrink geometrically; an increase
    past that point is rounding noise, so the previous iterate is returned.
    """
    A, B = _as_form(A, tol), _as_form(B, tol)
    if A.n != B.n:
        raise InputError(f"dimension mismatch: {A.n} vs {B.n}")
    a, b = A.matrix, B.matrix
    scale = max(_max_norm(b), 1e-300)
    prev = parallel_sum(a, b, tol)
    prev_inc = np.inf
    for k in range(1, max_k + 1):
        cur = parallel_sum(2.0**k * a, b, tol)
        inc = _max_norm(cur - prev)
        if inc <= tol * scale:
            return AndoResult(cur, k, inc, True)
        if inc > prev_inc and prev_inc <= ANDO_STALL * scale:
            return AndoResult(prev, k - 1, prev_inc, False, True)
        prev, prev_inc = cur, inc
    return AndoResult(prev, max_k, prev_inc, False)
