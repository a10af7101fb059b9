# The same split for positive semidefinite forms
#
# b is split against a. The part b_s lives on the kernel of a; b_a is the
# largest piece of b that a can dominate. An independent check comes from the
# limit of the parallel sums (n a) : b as n grows.

# %%
import numpy as np

from lebdecomp import ando_limit, decompose_forms, parallel_sum

a = np.diag([1.0, 0.0])
b = np.array([[2.0, 1.0], [1.0, 1.0]])

d = decompose_forms(a, b)
print("b_a =\n", d.b_a.matrix.round(12))
print("b_s =\n", d.b_s.matrix.round(12))
print("checks:", {k: d.diagnostics[k] for k in ("additive", "psd", "kernel_contained", "ando_agrees")})

# %%
# By hand: b_a is the Schur complement 2 - 1*1/1 = 1 on the first coordinate.
# The parallel-sum sequence climbs towards it.
for k in (0, 4, 8, 16, 32):
    print(f"n = 2^{k:<2d}", parallel_sum(2.0 ** k * a, b).round(8).tolist())
res = ando_limit(a, b)
print("limit after", res.k, "doublings:", res.limit.round(10).tolist(), "converged:", res.converged)

# %%
# Diagonal forms reproduce the measure decomposition atom by atom.
mu = np.array([1.0, 1.0, 0.0])
nu = np.array([2.0, 0.0, 3.0])
dd = decompose_forms(np.diag(mu), np.diag(nu))
print("diag b_a", np.diag(dd.b_a.matrix).round(12), " diag b_s", np.diag(dd.b_s.matrix).round(12))

# %%
# A random pair, rank-deficient a.
rng = np.random.default_rng(0)
x = rng.normal(size=(5, 2))
y = rng.normal(size=(5, 5))
a, b = x @ x.T, y @ y.T
d = decompose_forms(a, b)
print("rank a", np.linalg.matrix_rank(a), " rank b_a", np.linalg.matrix_rank(d.b_a.matrix, tol=1e-9))
print("ando distance", d.diagnostics["ando_distance"])
