"""Weighted inner-product spaces over finite atom sets.

Every object here carries one of two scalar backends:

- exact: values are :class:`fractions.Fraction`; all identities hold exactly.
- float: values are Python floats; rank and membership decisions use a
  relative tolerance (default ``DEFAULT_TOL``).

The backend of a value tuple is inferred from its entries: a tuple made only of
``int``/``Fraction`` is exact, anything containing a float is float.

Orthogonal bases in the exact backend cannot be normalized without leaving the
rationals, so a :class:`Subspace` stores orthogonal vectors together with their
squared norms. In the float backend the stored vectors are unit vectors and the
squared norms are 1.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

DEFAULT_TOL = 1e-12

__all__ = [
    "DEFAULT_TOL",
    "InputError",
    "AtomSpace",
    "SimpleFunction",
    "WeightedSpace",
    "Subspace",
    "to_scalar",
    "is_exact",
    "inner_product",
    "gram_schmidt",
    "project",
    "level_set",
]


class InputError(ValueError):
    """Raised on malformed or mismatched inputs."""


def to_scalar(x, exact: bool):
    """Convert ``x`` (int, Fraction, float, or a decimal / ``"p/q"`` string)."""
    if exact:
        if isinstance(x, float):
            if not math.isfinite(x):
                raise InputError(f"non-finite value {x!r}")
            return Fraction(x)
        try:
            return Fraction(x.strip() if isinstance(x, str) else x)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse scalar {x!r}") from exc
    try:
        v = float(Fraction(x.strip())) if isinstance(x, str) else float(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse scalar {x!r}") from exc
    if not math.isfinite(v):
        raise InputError(f"non-finite value {x!r}")
    return v


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _coerce(values: Sequence, exact: bool) -> tuple:
    return tuple(to_scalar(v, exact) for v in values)


@dataclass(frozen=True)
class AtomSpace:
    """Ordered, distinct atom labels; the order fixes coordinates everywhere."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(str(a) for a in self.atoms)
        if not atoms:
            raise InputError("an atom space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise InputError(f"duplicate atom labels in {atoms}")
        object.__setattr__(self, "atoms", atoms)

    def __len__(self):
        return len(self.atoms)

    def index(self, label: str) -> int:
        try:
            return self.atoms.index(label)
        except ValueError:
            raise InputError(f"unknown atom {label!r}") from None

    def indicator(self, atoms: Iterable, exact: bool = True) -> "SimpleFunction":
        """Characteristic function of a set of atoms (given by index or label)."""
        idx = {a if isinstance(a, int) else self.index(a) for a in atoms}
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return SimpleFunction(self, tuple(one if i in idx else zero for i in range(len(self))))

    def constant(self, c, exact: bool = True) -> "SimpleFunction":
        c = to_scalar(c, exact)
        return SimpleFunction(self, (c,) * len(self))

    def zero(self, exact: bool = True) -> "SimpleFunction":
        return self.constant(0, exact)


@dataclass(frozen=True)
class SimpleFunction:
    """One scalar per atom of ``space``."""

    space: AtomSpace
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.space):
            raise InputError(
                f"expected {len(self.space)} values, got {len(values)}"
            )
        object.__setattr__(self, "values", _coerce(values, is_exact(values)))

    @property
    def exact(self) -> bool:
        return is_exact(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def _check(self, other: "SimpleFunction"):
        if not isinstance(other, SimpleFunction):
            return NotImplemented
        if other.space != self.space:
            raise InputError("simple functions live on different atom spaces")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SimpleFunction(self.space, tuple(map(operator.add, self.values, other.values)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SimpleFunction(self.space, tuple(map(operator.sub, self.values, other.values)))

    def __mul__(self, c):
        if isinstance(c, SimpleFunction):
            self._check(c)
            return SimpleFunction(self.space, tuple(map(operator.mul, self.values, c.values)))
        return SimpleFunction(self.space, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    def __neg__(self):
        return SimpleFunction(self.space, tuple(-v for v in self.values))

    def to_float(self) -> "SimpleFunction":
        return SimpleFunction(self.space, tuple(float(v) for v in self.values))


@dataclass(frozen=True)
class WeightedSpace:
    """An atom space with nonnegative weights, viewed as L^2 of that measure.

    Functions that agree on the support atoms are the same element; the
    canonical representative is zero off the support.
    """

    space: AtomSpace
    weights: tuple

    def __post_init__(self):
        weights = tuple(self.weights)
        if len(weights) != len(self.space):
            raise InputError(
                f"expected {len(self.space)} weights, got {len(weights)}"
            )
        weights = _coerce(weights, is_exact(weights))
        if any(w < 0 for w in weights):
            raise InputError(f"negative weight in {weights}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self, "support", tuple(i for i, w in enumerate(weights) if w > 0)
        )

    @property
    def exact(self) -> bool:
        return is_exact(self.weights)

    def canonical(self, f: SimpleFunction) -> SimpleFunction:
        """Representative of the a.e.-class of ``f`` that vanishes off the support."""
        self._check(f)
        supp = set(self.support)
        zero = 0 if f.exact else 0.0
        return SimpleFunction(
            self.space, tuple(v if i in supp else zero * v for i, v in enumerate(f.values))
        )

    def norm_sq(self, f: SimpleFunction):
        return inner_product(f, f, self)

    def norm(self, f: SimpleFunction) -> float:
        return math.sqrt(self.norm_sq(f))

    def ae_equal(self, f: SimpleFunction, g: SimpleFunction, tol=0) -> bool:
        self._check(f)
        self._check(g)
        return all(abs(f[i] - g[i]) <= tol for i in self.support)

    def _check(self, f: SimpleFunction):
        if f.space != self.space:
            raise InputError("function and weighted space use different atom spaces")


def inner_product(f: SimpleFunction, g: SimpleFunction, w: WeightedSpace):
    """Sum over support atoms of ``f * g * weight``."""
    if f.space != w.space or g.space != w.space:
        raise InputError("inner product arguments use different atom spaces")
    fv, gv, wv = f.values, g.values, w.weights
    return sum((fv[i] * gv[i] * wv[i] for i in w.support), 0 if f.exact and g.exact and w.exact else 0.0)


def _exact_sqrt(q: Fraction):
    """Square root of a rational if it is rational, else a float."""
    if q < 0:
        raise ValueError("negative square")
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return math.sqrt(q)


@dataclass(frozen=True)
class Subspace:
    """Span of mutually orthogonal vectors in a weighted space.

    ``norms_sq[j]`` is ``<basis[j], basis[j]>``; the float backend stores unit
    vectors so every entry is 1.0. The normalized basis
    ``basis[j] / sqrt(norms_sq[j])`` is orthonormal.
    """

    ambient: WeightedSpace
    basis: tuple[SimpleFunction, ...] = ()
    norms_sq: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "norms_sq", tuple(self.norms_sq))
        if len(self.basis) != len(self.norms_sq):
            raise InputError("basis and norms_sq differ in length")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def exact(self) -> bool:
        return self.ambient.exact and all(b.exact for b in self.basis)

    def gram(self) -> list[list]:
        """Gram matrix of the normalized basis (the identity, exactly when exact)."""
        w = self.ambient
        out = []
        for i, bi in enumerate(self.basis):
            row = []
            for j, bj in enumerate(self.basis):
                g = inner_product(bi, bj, w)
                nn = self.norms_sq[i] * self.norms_sq[j]
                if isinstance(g, Fraction) and isinstance(nn, Fraction):
                    row.append(g / _exact_sqrt(nn) if g else Fraction(0))
                else:
                    row.append(g / math.sqrt(nn))
            out.append(row)
        return out

    def contains(self, f: SimpleFunction, tol=DEFAULT_TOL) -> bool:
        """Whether ``f`` lies in the subspace (a.e.); exact test in the exact backend."""
        r = f - project(self, f)
        if self.exact and f.exact:
            return self.ambient.norm_sq(r) == 0
        scale = max(self.ambient.norm(f), 1.0)
        return self.ambient.norm(r) <= tol * scale


def gram_schmidt(
    vectors: Sequence[SimpleFunction], w: WeightedSpace, tol=DEFAULT_TOL
) -> Subspace:
    """Orthogonalize ``vectors`` in the order given.

    Exact backend: classical elimination; a vector whose residual is exactly
    zero in ``w`` is dropped. Float backend: modified Gram-Schmidt with one
    re-orthogonalization pass; a vector whose residual norm is at most
    ``tol * ||v||`` is dropped, the rest are normalized.
    """
    exact = w.exact and all(v.exact for v in vectors)
    basis: list[SimpleFunction] = []
    norms: list = []
    for v in vectors:
        if v.space != w.space:
            raise InputError("vector and weighted space use different atom spaces")
        r = w.canonical(v if exact else v.to_float())
        if exact:
            for b, nb in zip(basis, norms):
                c = inner_product(r, b, w)
                if c:
                    r = r - (c / nb) * b
            nr = w.norm_sq(r)
            if nr == 0:
                continue
            basis.append(r)
            norms.append(nr)
        else:
            n0 = w.norm(r)
            if n0 == 0.0:
                continue
            for _ in range(2):
                for b in basis:
                    r = r - inner_product(r, b, w) * b
            nr = w.norm(r)
            if nr <= tol * n0:
                continue
            basis.append((1.0 / nr) * r)
            norms.append(1.0)
    if not exact:
        basis = [b.to_float() for b in basis]
    return Subspace(w, tuple(basis), tuple(norms))


def project(sub: Subspace, f: SimpleFunction) -> SimpleFunction:
    """Orthogonal projection of ``f`` onto ``sub``, zero off the ambient support."""
    w = sub.ambient
    if f.space != w.space:
        raise InputError("function and subspace use different atom spaces")
    exact = sub.exact and f.exact
    if not exact:
        f = f.to_float()
    out = w.space.zero(exact)
    for b, nb in zip(sub.basis, sub.norms_sq):
        c = inner_product(f, b, w)
        if c:
            out = out + (c / nb) * b
    return w.canonical(out)


_PREDICATES = {
    "<=": operator.le,
    ">=": operator.ge,
    "<": operator.lt,
    ">": operator.gt,
    "==": operator.eq,
    "!=": operator.ne,
}


def level_set(f: SimpleFunction, op: str, c=0) -> frozenset[int]:
    """Indices ``i`` with ``f[i] <op> c``, compared on the stored values as is."""
    try:
        pred = _PREDICATES[op]
    except KeyError:
        raise InputError(f"unknown predicate {op!r}; use one of {sorted(_PREDICATES)}") from None
    return frozenset(i for i, v in enumerate(f.values) if pred(v, c))
