"""Seeded corpora and independent oracles shared by the test modules."""
import random
from fractions import Fraction

import numpy as np
import sympy

from lebdecomp import AtomSpace, Measure
from lebdecomp.hilbert import SimpleFunction, WeightedSpace, gram_schmidt, project
from lebdecomp.relation import LinearRelation


# Filled by the acceptance suite and echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def random_weight(rng: random.Random, p_zero=0.35) -> Fraction:
    if rng.random() < p_zero:
        return Fraction(0)
    return Fraction(rng.randint(1, 40), rng.randint(1, 12))


def random_pair(rng: random.Random, n_min=2, n_max=12):
    n = rng.randint(n_min, n_max)
    space = AtomSpace(tuple(f"t{i}" for i in range(n)))
    mu = Measure(space, tuple(random_weight(rng) for _ in range(n)))
    nu = Measure(space, tuple(random_weight(rng) for _ in range(n)))
    return mu, nu


def measure_corpus(seed: int, count: int, n_min=2, n_max=12):
    rng = random.Random(seed)
    return [random_pair(rng, n_min, n_max) for _ in range(count)]


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    """Random PSD matrix with eigenvalues log-uniform in [0.1, 10] on a random-rank range."""
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.zeros(n)
    lam[:rank] = 10.0 ** rng.uniform(-1, 1, rank)
    m = (q * lam) @ q.T
    return (m + m.T) / 2


def psd_corpus(seed: int, count: int, n_min=2, n_max=8):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        out.append((random_psd(rng, n), random_psd(rng, n)))
    return out


def rref_mval_oracle(L: LinearRelation) -> list[SimpleFunction]:
    """Span of the multivalued part by reduced row echelon form (sympy).

    Rows are the generators written as (h on H-support | k on K-support); in
    the RREF the rows without an h-pivot span {(0, k)} inside the row space.
    """
    H, K = L.domain_space, L.codomain_space
    hs, ks = H.support, K.support
    if not L.generators:
        return []
    rows = [[h[i] for i in hs] + [k[i] for i in ks] for h, k in L.generators]
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    red, _ = m.rref()
    out = []
    for r in range(red.rows):
        row = [Fraction(int(x.p), int(x.q)) for x in red.row(r)]
        if any(row[len(hs):]) and not any(row[: len(hs)]):
            vals = [Fraction(0)] * len(K.space)
            for pos, i in enumerate(ks):
                vals[i] = row[len(hs) + pos]
            out.append(SimpleFunction(K.space, vals))
    return out


def same_span(sub, vectors) -> bool:
    """Mutual projection: every oracle vector lies in sub and vice versa."""
    w = sub.ambient
    other = gram_schmidt(vectors, w)
    if other.dim != sub.dim:
        return False
    return all(w.norm_sq(v - project(sub, v)) == 0 for v in vectors) and all(
        w.norm_sq(b - project(other, b)) == 0 for b in sub.basis
    )


def random_relation(rng: random.Random, max_gens=4, max_atoms=3) -> LinearRelation:
    def space(tag):
        n = rng.randint(1, max_atoms)
        s = AtomSpace(tuple(f"{tag}{i}" for i in range(n)))
        return WeightedSpace(s, tuple(Fraction(rng.choice([0, 1, 2, 3]), rng.randint(1, 4)) for _ in range(n)))

    def vec(w):
        return SimpleFunction(w.space, tuple(Fraction(rng.randint(-3, 3)) for _ in range(len(w.space))))

    H, K = space("h"), space("k")
    gens = []
    for _ in range(rng.randint(0, max_gens)):
        h, k = vec(H), vec(K)
        if rng.random() < 0.3:
            h = H.space.zero()
        gens.append((h, k))
    return LinearRelation(H, K, tuple(gens))
