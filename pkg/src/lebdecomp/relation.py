"""Linear relations between weighted spaces and their multivalued part.

A relation is given by a finite list of generator pairs ``(h, k)``. Its
multivalued part is ``{k : (0, k) in span(generators)}``; in finite dimension
every subspace is closed, so no limiting procedure is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .hilbert import (
    DEFAULT_TOL,
    AtomSpace,
    InputError,
    SimpleFunction,
    Subspace,
    WeightedSpace,
    gram_schmidt,
    project,
)

__all__ = [
    "LinearRelation",
    "nullspace_exact",
    "mval_part",
    "closure_note",
    "contains_pair",
    "product_space",
]


@dataclass(frozen=True)
class LinearRelation:
    """Span of generator pairs ``(h, k)`` inside ``domain_space x codomain_space``."""

    domain_space: WeightedSpace
    codomain_space: WeightedSpace
    generators: tuple[tuple[SimpleFunction, SimpleFunction], ...] = ()

    def __post_init__(self):
        gens = tuple((h, k) for h, k in self.generators)
        for h, k in gens:
            if h.space != self.domain_space.space:
                raise InputError("generator h is not on the domain atom space")
            if k.space != self.codomain_space.space:
                raise InputError("generator k is not on the codomain atom space")
        object.__setattr__(self, "generators", gens)

    @property
    def exact(self) -> bool:
        return (
            self.domain_space.exact
            and self.codomain_space.exact
            and all(h.exact and k.exact for h, k in self.generators)
        )


def nullspace_exact(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{c : rows @ c = 0}`` by Gauss-Jordan elimination over Q."""
    m = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def _nullspace_float(mat: np.ndarray, ncols: int, tol: float) -> np.ndarray:
    """Columns span the numerical kernel; singular values <= tol * largest count as zero."""
    if mat.size == 0 or not np.any(mat):
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    return vt[rank:].T


def mval_part(L: LinearRelation, tol=DEFAULT_TOL) -> Subspace:
    """Orthogonal basis of the multivalued part of ``L`` in the codomain space.

    The coefficient vectors that send the h-components to zero (a.e. in the
    domain space) are pushed through the k-components and orthogonalized.
    """
    H, K = L.domain_space, L.codomain_space
    m = len(L.generators)
    if m == 0:
        return Subspace(K)
    if L.exact:
        rows = [[h[i] for h, _ in L.generators] for i in H.support]
        kernel = nullspace_exact(rows, m)
        ks = [k for _, k in L.generators]
        images = []
        for c in kernel:
            vals = [Fraction(0)] * len(K.space)
            for cj, k in zip(c, ks):
                if cj:
                    vals = [a + cj * b for a, b in zip(vals, k.values)]
            images.append(SimpleFunction(K.space, vals))
        return gram_schmidt(images, K)
    sw = np.sqrt(np.array([float(H.weights[i]) for i in H.support]))
    hmat = np.array(
        [[float(h[i]) for h, _ in L.generators] for i in H.support], dtype=float
    ).reshape(len(H.support), m)
    kernel = _nullspace_float(hmat * sw[:, None], m, tol)
    # Rank of the pushed-forward kernel is judged against the whole k-map, so
    # rounding leakage in the kernel basis cannot survive as a direction.
    ks = np.array(K.support, dtype=int)
    swk = np.sqrt(np.array([float(K.weights[i]) for i in K.support]))
    kmat = np.array(
        [[float(k[i]) for _, k in L.generators] for i in K.support], dtype=float
    ).reshape(len(K.support), m) * swk[:, None]
    if kernel.shape[1] == 0 or kmat.size == 0:
        return Subspace(K)
    ref = np.linalg.norm(kmat, 2)
    u, s, _ = np.linalg.svd(kmat @ kernel, full_matrices=False)
    rank = int(np.sum(s > tol * ref)) if ref > 0 else 0
    images = []
    for r in range(rank):
        vals = np.zeros(len(K.space))
        vals[ks] = u[:, r] / swk
        images.append(SimpleFunction(K.space, tuple(float(x) for x in vals)))
    return gram_schmidt(images, K, tol)


def product_space(H: WeightedSpace, K: WeightedSpace) -> WeightedSpace:
    """``H x K`` as one weighted space; atoms are prefixed ``H:`` and ``K:``."""
    atoms = tuple(f"H:{a}" for a in H.space.atoms) + tuple(f"K:{a}" for a in K.space.atoms)
    return WeightedSpace(AtomSpace(atoms), H.weights + K.weights)


def _pair(P: WeightedSpace, h: SimpleFunction, k: SimpleFunction) -> SimpleFunction:
    return SimpleFunction(P.space, h.values + k.values)


def _generator_span(L: LinearRelation, tol) -> tuple[WeightedSpace, Subspace, list[int]]:
    P = product_space(L.domain_space, L.codomain_space)
    kept: list[int] = []
    sub = Subspace(P)
    for j, (h, k) in enumerate(L.generators):
        grown = gram_schmidt(list(sub.basis) + [_pair(P, h, k)], P, tol)
        if grown.dim > sub.dim:
            kept.append(j)
            sub = grown
    return P, sub, kept


def closure_note(L: LinearRelation, tol=DEFAULT_TOL) -> LinearRelation:
    """Closure of ``L``; in finite dimension this is ``L`` itself.

    Generators that are dependent on earlier ones (in the product inner
    product) are pruned, so the result spans the same subspace.
    """
    _, _, kept = _generator_span(L, tol)
    return LinearRelation(
        L.domain_space, L.codomain_space, tuple(L.generators[j] for j in kept)
    )


def contains_pair(
    L: LinearRelation, h: SimpleFunction, k: SimpleFunction, tol=DEFAULT_TOL
) -> bool:
    """Whether ``(h, k)`` lies in the span of the generators (modulo a.e. equality)."""
    if h.space != L.domain_space.space or k.space != L.codomain_space.space:
        raise InputError("pair does not match the relation's spaces")
    P, sub, _ = _generator_span(L, tol)
    v = _pair(P, h, k)
    r = v - project(sub, v)
    if sub.exact and v.exact:
        return P.norm_sq(r) == 0
    return P.norm(r) <= tol * max(P.norm(v), 1.0)
