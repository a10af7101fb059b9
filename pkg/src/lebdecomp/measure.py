"""Lebesgue decomposition of a finite measure on a finite atom space.

``decompose(mu, nu)`` runs the Hilbert-space construction: the subspace
``M`` of L^2(nu) reachable by simple functions that vanish in L^2(mu) is
computed as the multivalued part of ``{(phi, phi)}``, the constant function 1
is projected onto it, and the projection ``p1`` splits ``nu`` into

    nu_s = p1 * nu,   nu_a = (1 - p1) * nu.

``oracle_decompose`` produces the same answer by classifying atoms directly and
is kept free of any Hilbert-space code so that the two can check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .hilbert import (
    DEFAULT_TOL,
    AtomSpace,
    InputError,
    SimpleFunction,
    Subspace,
    WeightedSpace,
    is_exact,
    level_set,
    project,
    to_scalar,
)
from .relation import LinearRelation, mval_part

__all__ = [
    "PreconditionError",
    "Measure",
    "Diagnostics",
    "Decomposition",
    "build_relation",
    "compute_M",
    "decompose",
    "oracle_decompose",
    "check_absolutely_continuous",
    "check_singular",
    "verify_indicator",
    "standard_form_check",
    "radon_nikodym",
    "witness_sequence",
]

EXHAUSTIVE_MAX_ATOMS = 12
RANDOM_SUBSETS = 256


class PreconditionError(ValueError):
    """An operation was called on an argument outside its domain."""


@dataclass(frozen=True)
class Measure:
    """Nonnegative mass on each atom of ``space``."""

    space: AtomSpace
    weights: tuple

    def __post_init__(self):
        weights = tuple(self.weights)
        if len(weights) != len(self.space):
            raise InputError(f"expected {len(self.space)} weights, got {len(weights)}")
        exact = is_exact(weights)
        weights = tuple(to_scalar(w, exact) for w in weights)
        for a, w in zip(self.space.atoms, weights):
            if w < 0:
                raise InputError(f"negative weight {w} on atom {a!r}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_mapping(cls, weights: Mapping[str, object], atoms: Sequence[str] | None = None,
                     backend: str | None = None) -> "Measure":
        """Build from ``{label: weight}``; weights may be ``"p/q"`` or decimal strings."""
        atoms = tuple(weights) if atoms is None else tuple(atoms)
        if set(atoms) != set(weights):
            raise InputError("weight labels do not match the atom list")
        exact = backend != "float"
        return cls(AtomSpace(atoms), tuple(to_scalar(weights[a], exact) for a in atoms))

    @property
    def exact(self) -> bool:
        return is_exact(self.weights)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    @property
    def null_atoms(self) -> frozenset[int]:
        return frozenset(i for i, w in enumerate(self.weights) if w == 0)

    @property
    def l2(self) -> WeightedSpace:
        return WeightedSpace(self.space, self.weights)

    def total(self):
        return self.measure_of(range(len(self.space)))

    def measure_of(self, atoms: Iterable[int]):
        return sum((self.weights[i] for i in set(atoms)), 0 if self.exact else 0.0)

    def to_float(self) -> "Measure":
        return Measure(self.space, tuple(float(w) for w in self.weights))

    def scaled(self, c) -> "Measure":
        return Measure(self.space, tuple(c * w for w in self.weights))

    def __add__(self, other: "Measure") -> "Measure":
        _same_space(self, other)
        return Measure(self.space, tuple(a + b for a, b in zip(self.weights, other.weights)))

    def as_dict(self) -> dict:
        return dict(zip(self.space.atoms, self.weights))


def _same_space(*measures: Measure):
    first = measures[0].space
    for m in measures[1:]:
        if m.space != first:
            raise InputError("measures are defined on different atom spaces")


def _common_backend(mu: Measure, nu: Measure) -> tuple[Measure, Measure, bool]:
    _same_space(mu, nu)
    if mu.exact and nu.exact:
        return mu, nu, True
    return mu.to_float(), nu.to_float(), False


@dataclass(frozen=True)
class Diagnostics:
    absolutely_continuous: bool
    singular: bool
    indicator: bool
    standard_form: bool
    positivity: bool
    additivity_residual: object = 0
    indicator_integral: object = 0
    clamped_atoms: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.absolutely_continuous
            and self.singular
            and self.indicator
            and self.standard_form
            and self.positivity
        )


@dataclass(frozen=True)
class Decomposition:
    """Result of a decomposition of ``nu`` relative to ``mu``.

    ``density`` maps each mu-support atom label to ``nu_a(t) / mu(t)``.
    ``tol`` is 0 for exact results.
    """

    nu_a: Measure
    nu_s: Measure
    p1: SimpleFunction
    singular_set: frozenset[int]
    density: dict
    exact: bool
    tol: float = 0.0
    diagnostics: Diagnostics | None = field(default=None, compare=False)

    @property
    def singular_labels(self) -> tuple[str, ...]:
        atoms = self.nu_a.space.atoms
        return tuple(atoms[i] for i in sorted(self.singular_set))


def build_relation(mu: Measure, nu: Measure) -> LinearRelation:
    """Generators ``(chi_t, chi_t)`` for every atom, reduced a.e. in each slot."""
    mu, nu, exact = _common_backend(mu, nu)
    H, K = mu.l2, nu.l2
    gens = []
    for t in range(len(mu.space)):
        chi = mu.space.indicator([t], exact)
        gens.append((H.canonical(chi), K.canonical(chi)))
    return LinearRelation(H, K, tuple(gens))


def compute_M(mu: Measure, nu: Measure, tol=DEFAULT_TOL) -> Subspace:
    """The subspace of L^2(nu) of limits of simple functions tending to 0 in L^2(mu)."""
    return mval_part(build_relation(mu, nu), tol)


def check_absolutely_continuous(candidate: Measure, mu: Measure, tol=0) -> bool:
    """Every mu-null atom carries no candidate mass (up to ``tol``)."""
    _same_space(candidate, mu)
    return all(abs(candidate.weights[i]) <= tol for i in mu.null_atoms)


def check_singular(candidate: Measure, mu: Measure, tol=0) -> bool:
    """The candidate vanishes off the set of mu-null atoms (up to ``tol`` per atom)."""
    _same_space(candidate, mu)
    null = mu.null_atoms
    return all(
        abs(w) <= tol for i, w in enumerate(candidate.weights) if i not in null
    )


def verify_indicator(d: Decomposition, nu: Measure) -> bool:
    """``p1`` is an indicator: the nu-integral of ``p1 - p1**2`` vanishes and
    ``p1`` agrees nu-a.e. with the indicator of the singular set."""
    return _indicator_check(d.p1, d.singular_set, nu, d.exact, d.tol)[0]


def _indicator_check(p1, S, nu: Measure, exact: bool, tol):
    w = nu.l2
    if not exact:
        nu = nu.to_float()
        w = nu.l2
    integral = sum((p1[i] * (1 - p1[i]) * nu.weights[i] for i in w.support),
                   Fraction(0) if exact else 0.0)
    if exact:
        ok = integral == 0 and all(p1[i] == (1 if i in S else 0) for i in w.support)
    else:
        scale = tol * float(nu.total())
        ok = abs(integral) <= scale and all(
            abs(p1[i] - (1.0 if i in S else 0.0)) <= tol * 10 for i in w.support
        )
    return ok, integral


@lru_cache(maxsize=None)
def _all_subsets(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)


def _subset_family(n: int, seed: int) -> np.ndarray:
    if n <= EXHAUSTIVE_MAX_ATOMS:
        return _all_subsets(n)
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(RANDOM_SUBSETS, n), dtype=np.int64)


def _exact_subset_sums(family: np.ndarray, vectors: Sequence[Sequence[Fraction]]) -> list[np.ndarray]:
    """Subset sums of several rational vectors, scaled to a common integer grid."""
    den = 1
    for vec in vectors:
        for q in vec:
            den = math.lcm(den, q.denominator)
    ints = [[int(q * den) for q in vec] for vec in vectors]
    bound = max((abs(x) for vec in ints for x in vec), default=0) * family.shape[1]
    if bound < 2**62:
        return [family @ np.array(v, dtype=np.int64) for v in ints]
    fam = family.astype(object)
    return [fam @ np.array(v, dtype=object) for v in ints]


def standard_form_check(d: Decomposition, nu: Measure, seed: int = 0) -> bool:
    """``nu_a(E) == nu(E \\ S)`` and ``nu_s(E) == nu(E & S)`` over a family of sets E.

    The family is every subset when there are at most 12 atoms, otherwise 256
    random subsets drawn with ``seed``.
    """
    n = len(nu.space)
    family = _subset_family(n, seed)
    S = d.singular_set
    outside = [w if i not in S else 0 * w for i, w in enumerate(nu.weights)]
    inside = [w if i in S else 0 * w for i, w in enumerate(nu.weights)]
    if d.exact and nu.exact:
        a, s, o, ins = _exact_subset_sums(
            family, [d.nu_a.weights, d.nu_s.weights, outside, inside]
        )
        return bool(np.all(a == o) and np.all(s == ins))
    f = family.astype(float)
    a = f @ np.array(d.nu_a.weights, dtype=float)
    s = f @ np.array(d.nu_s.weights, dtype=float)
    o = f @ np.array(outside, dtype=float)
    ins = f @ np.array(inside, dtype=float)
    tol = max(d.tol, DEFAULT_TOL) * float(nu.total()) * 10
    return bool(np.all(np.abs(a - o) <= tol) and np.all(np.abs(s - ins) <= tol))


def radon_nikodym(d: Decomposition, mu: Measure) -> dict:
    """Density of ``nu_a`` with respect to ``mu`` on the mu-support atoms."""
    _same_space(d.nu_a, mu)
    atoms = mu.space.atoms
    return {atoms[i]: d.nu_a.weights[i] / mu.weights[i] for i in mu.support}


def decompose(mu: Measure, nu: Measure, tol=DEFAULT_TOL) -> Decomposition:
    """Lebesgue decomposition of ``nu`` with respect to ``mu``.

    Exact when both measures are exact; otherwise everything is done in floats
    and ``tol`` governs rank decisions and the verification diagnostics. Tiny
    negative masses produced by rounding are clamped to zero and the clamped
    atoms are listed in the diagnostics.
    """
    mu, nu, exact = _common_backend(mu, nu)
    tol = 0 if exact else float(tol)
    M = compute_M(mu, nu, tol or DEFAULT_TOL)
    one = nu.space.constant(1, exact)
    p1 = project(M, one)

    raw_s = [p * w for p, w in zip(p1.values, nu.weights)]
    raw_a = [(1 - p) * w for p, w in zip(p1.values, nu.weights)]
    clamped = []
    if not exact:
        for i in range(len(raw_s)):
            if raw_s[i] < 0 or raw_a[i] < 0:
                clamped.append(nu.space.atoms[i])
                raw_s[i] = max(raw_s[i], 0.0)
                raw_a[i] = max(raw_a[i], 0.0)
    nu_s = Measure(nu.space, raw_s)
    nu_a = Measure(nu.space, raw_a)
    S = level_set(p1, "!=", 0) if exact else level_set(p1, ">=", 0.5)
    density = {
        mu.space.atoms[i]: nu_a.weights[i] / mu.weights[i] for i in mu.support
    }
    d = Decomposition(nu_a, nu_s, p1, S, density, exact, tol)
    return Decomposition(
        nu_a, nu_s, p1, S, density, exact, tol, _diagnose(d, mu, nu, tuple(clamped))
    )


def _diagnose(d: Decomposition, mu: Measure, nu: Measure, clamped) -> Diagnostics:
    total = nu.total()
    atom_tol = 0 if d.exact else d.tol * float(total)
    additivity = max(
        (abs(a + s - w) for a, s, w in zip(d.nu_a.weights, d.nu_s.weights, nu.weights)),
        default=0,
    )
    sup = nu.l2.support
    if d.exact:
        positivity = all(0 <= d.p1[i] <= 1 for i in sup)
    else:
        positivity = all(-d.tol <= d.p1[i] <= 1 + d.tol for i in sup)
    indicator, integral = _indicator_check(d.p1, d.singular_set, nu, d.exact, d.tol)
    singular = (
        check_singular(d.nu_s, mu, atom_tol)
        and mu.measure_of(d.singular_set) == 0
    )
    return Diagnostics(
        absolutely_continuous=check_absolutely_continuous(d.nu_a, mu, atom_tol)
        and additivity <= atom_tol,
        singular=singular,
        indicator=indicator,
        standard_form=standard_form_check(d, nu),
        positivity=positivity,
        additivity_residual=additivity,
        indicator_integral=integral,
        clamped_atoms=clamped,
    )


def oracle_decompose(mu: Measure, nu: Measure) -> Decomposition:
    """Decomposition by atom classification alone.

    The singular carrier is the set of mu-null atoms of positive nu-mass
    (atoms null for both measures are left out, as everywhere else).
    """
    _same_space(mu, nu)
    exact = mu.exact and nu.exact
    if not exact:
        mu, nu = mu.to_float(), nu.to_float()
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    S = frozenset(
        i for i in range(len(nu.space)) if mu.weights[i] == 0 and nu.weights[i] > 0
    )
    nu_s = Measure(nu.space, tuple(w if i in S else zero for i, w in enumerate(nu.weights)))
    nu_a = Measure(nu.space, tuple(zero if i in S else w for i, w in enumerate(nu.weights)))
    p1 = SimpleFunction(nu.space, tuple(one if i in S else zero for i in range(len(nu.space))))
    density = {
        mu.space.atoms[i]: nu_a.weights[i] / mu.weights[i]
        for i in range(len(mu.space))
        if mu.weights[i] > 0
    }
    return Decomposition(nu_a, nu_s, p1, S, density, exact, 0.0 if not exact else 0)


def witness_sequence(
    f: SimpleFunction, mu: Measure, nu: Measure, tol=DEFAULT_TOL
) -> list[SimpleFunction]:
    """A simple-function sequence tending to 0 in L^2(mu) and to ``f`` in L^2(nu).

    On a finite space one term suffices: ``f`` restricted to the nu-support.
    Raises :class:`PreconditionError` if ``f`` is not in ``M``.
    """
    mu, nu, exact = _common_backend(mu, nu)
    if not exact:
        f = f.to_float()
    M = compute_M(mu, nu, tol)
    if not M.contains(f, tol):
        raise PreconditionError("function does not belong to M")
    phi = nu.l2.canonical(f)
    if exact:
        ok = mu.l2.norm_sq(phi) == 0 and nu.l2.norm_sq(phi - f) == 0
    else:
        scale = max(nu.l2.norm(f), 1.0)
        ok = mu.l2.norm(phi) <= tol * scale * 10 and nu.l2.norm(phi - f) <= tol * scale
    if not ok:
        raise PreconditionError("witness verification failed")
    return [phi]
