from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lebdecomp.hilbert import (
    AtomSpace,
    InputError,
    SimpleFunction,
    Subspace,
    WeightedSpace,
    gram_schmidt,
    inner_product,
    level_set,
    project,
    to_scalar,
)

T2 = AtomSpace(("a", "b"))
T3 = AtomSpace(("a", "b", "c"))


def sf(space, *vals):
    return SimpleFunction(space, vals)


# -- inner_product ---------------------------------------------------------

def test_inner_product_of_ones_is_total_mass():
    w = WeightedSpace(T3, (1, 1, 0))
    one = T3.constant(1)
    assert inner_product(one, one, w) == 2


def test_inner_product_disjoint_indicators():
    w = WeightedSpace(T3, (3, Fraction(1, 2), 7))
    assert inner_product(T3.indicator(["a"]), T3.indicator(["b"]), w) == 0


def test_inner_product_ignores_null_atoms():
    w = WeightedSpace(T3, (1, 1, 0))
    f, g = sf(T3, 2, 0, 5), sf(T3, 1, 1, 1)
    # independent summation over the support only
    expected = sum(fi * gi * wi for fi, gi, wi in zip(f, g, w.weights) if wi > 0)
    assert expected == 2
    assert inner_product(f, g, w) == expected


def test_inner_product_space_mismatch():
    w = WeightedSpace(T3, (1, 1, 1))
    with pytest.raises(InputError):
        inner_product(T2.constant(1), T3.constant(1), w)


def test_negative_weight_rejected():
    with pytest.raises(InputError):
        WeightedSpace(T2, (1, -1))


def test_duplicate_atoms_rejected():
    with pytest.raises(InputError):
        AtomSpace(("a", "a"))


def test_to_scalar_parses_rationals_and_decimals():
    assert to_scalar("3/4", True) == Fraction(3, 4)
    assert to_scalar("0.1", True) == Fraction(1, 10)
    assert to_scalar("1/3", False) == pytest.approx(1 / 3)
    with pytest.raises(InputError):
        to_scalar("x", True)


# -- gram_schmidt ----------------------------------------------------------

def test_gram_schmidt_drops_duplicates():
    w = WeightedSpace(T2, (1, 1))
    chi = T2.indicator(["a"])
    sub = gram_schmidt([chi, chi], w)
    assert sub.dim == 1
    assert sub.basis[0] == chi


def test_gram_schmidt_empty():
    w = WeightedSpace(T2, (1, 1))
    assert gram_schmidt([], w).dim == 0


@pytest.mark.parametrize("weights", [(1, 1), (1.0, 1.0)])
def test_gram_schmidt_orthonormal(weights):
    w = WeightedSpace(T2, weights)
    sub = gram_schmidt([sf(T2, 1, 1), sf(T2, 1, 0)], w)
    assert sub.dim == 2
    g = sub.gram()
    if sub.exact:
        assert g == [[1, 0], [0, 1]]
    else:
        for i in range(2):
            for j in range(2):
                assert g[i][j] == pytest.approx(float(i == j), abs=1e-12)


def test_gram_schmidt_float_drops_near_dependent():
    w = WeightedSpace(T2, (1.0, 1.0))
    sub = gram_schmidt([sf(T2, 1.0, 1.0), sf(T2, 1.0, 1.0 + 1e-15)], w, tol=1e-12)
    assert sub.dim == 1


def test_gram_schmidt_treats_null_atoms_as_zero():
    w = WeightedSpace(T2, (1, 0))
    sub = gram_schmidt([T2.indicator(["b"])], w)
    assert sub.dim == 0


# -- project ---------------------------------------------------------------

def test_project_onto_coordinate():
    w = WeightedSpace(T2, (1, 1))
    sub = gram_schmidt([T2.indicator(["a"])], w)
    assert project(sub, T2.constant(1)) == sf(T2, 1, 0)


def test_project_onto_empty_is_zero():
    w = WeightedSpace(T2, (1, 1))
    assert project(Subspace(w), sf(T2, 3, 4)) == T2.zero()


def test_project_onto_whole_support():
    w = WeightedSpace(T3, (2, 0, 5))
    sub = gram_schmidt([T3.indicator([i]) for i in range(3)], w)
    f = sf(T3, 7, 9, Fraction(-1, 3))
    pf = project(sub, f)
    assert pf == sf(T3, 7, 0, Fraction(-1, 3))
    assert w.norm_sq(f - pf) == 0


# -- level_set -------------------------------------------------------------

def test_level_set_examples():
    assert level_set(sf(T3, 0, 1, 0), "!=", 0) == {1}
    assert level_set(sf(T3, 0, 0, 0), "!=", 0) == frozenset()
    assert level_set(sf(T2, 0.2, 0.9), ">=", 0.5) == {1}
    assert level_set(sf(T3, -1, 0, 1), "<", 0) == {0}
    with pytest.raises(InputError):
        level_set(sf(T2, 0, 0), "~", 0)


# -- properties ------------------------------------------------------------

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)
weights = st.fractions(min_value=0, max_value=10, max_denominator=7)


@st.composite
def space_and_vectors(draw, k=3):
    n = draw(st.integers(1, 6))
    space = AtomSpace(tuple(f"x{i}" for i in range(n)))
    w = WeightedSpace(space, tuple(draw(st.lists(weights, min_size=n, max_size=n))))
    vecs = [
        SimpleFunction(space, tuple(draw(st.lists(rationals, min_size=n, max_size=n))))
        for _ in range(k)
    ]
    return w, vecs


@settings(max_examples=200, deadline=None)
@given(space_and_vectors(), rationals)
def test_inner_product_axioms(data, alpha):
    w, (f, g, h) = data
    assert inner_product(alpha * f + g, h, w) == alpha * inner_product(f, h, w) + inner_product(g, h, w)
    assert inner_product(f, g, w) == inner_product(g, f, w)
    nf = inner_product(f, f, w)
    assert nf >= 0
    assert (nf == 0) == all(f[i] == 0 for i in w.support)


@st.composite
def subspace_and_vectors(draw):
    w, vecs = draw(space_and_vectors(k=draw(st.integers(0, 4))))
    n = len(w.space)
    f = SimpleFunction(w.space, tuple(draw(st.lists(rationals, min_size=n, max_size=n))))
    g = SimpleFunction(w.space, tuple(draw(st.lists(rationals, min_size=n, max_size=n))))
    return w, vecs, f, g


@settings(max_examples=200, deadline=None)
@given(subspace_and_vectors())
def test_projection_properties_exact(data):
    w, vecs, f, g = data
    sub = gram_schmidt(vecs, w)
    assert sub.gram() == [[int(i == j) for j in range(sub.dim)] for i in range(sub.dim)]
    pf, pg = project(sub, f), project(sub, g)
    assert project(sub, pf) == pf
    assert inner_product(pf, g, w) == inner_product(f, pg, w)
    r = f - pf
    assert w.norm_sq(f) == w.norm_sq(pf) + w.norm_sq(r)
    for b in sub.basis:
        assert inner_product(r, b, w) == 0
    for v in vecs:
        assert w.ae_equal(project(sub, v), v)


@settings(max_examples=200, deadline=None)
@given(subspace_and_vectors())
def test_projection_properties_float(data):
    w, vecs, f, g = data
    wf = WeightedSpace(w.space, tuple(float(x) for x in w.weights))
    vf = [v.to_float() for v in vecs]
    f, g = f.to_float(), g.to_float()
    sub = gram_schmidt(vf, wf)
    tau = 1e-12
    scale = max(1.0, wf.norm(f), wf.norm(g)) ** 2
    pf, pg = project(sub, f), project(sub, g)
    assert wf.norm(project(sub, pf) - pf) <= 10 * tau * max(1.0, wf.norm(f))
    assert abs(inner_product(pf, g, wf) - inner_product(f, pg, wf)) <= 1e-9 * scale
    r = f - pf
    assert abs(wf.norm_sq(f) - wf.norm_sq(pf) - wf.norm_sq(r)) <= 1e-9 * scale
