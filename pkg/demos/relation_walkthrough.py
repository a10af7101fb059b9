# The multivalued part of a linear relation
#
# A relation is spanned by pairs (h, k). Its multivalued part collects every k
# that can be paired with h = 0. For the diagonal relation {(phi, phi)} between
# L^2(mu) and L^2(nu), a function that is 0 mu-a.e. but not nu-a.e. is exactly
# such a k.

# %%
from lebdecomp import (
    AtomSpace,
    LinearRelation,
    Measure,
    SimpleFunction,
    WeightedSpace,
    compute_M,
    contains_pair,
    mval_part,
)
from lebdecomp.measure import build_relation

T = AtomSpace(("a", "b", "c"))
mu = Measure(T, (1, 1, 0))
nu = Measure(T, (2, 0, 3))

L = build_relation(mu, nu)


def vals(f):
    return [str(x) for x in f.values]


for h, k in L.generators:
    print("h", vals(h), " k", vals(k))

# %%
# The generator through c has h = 0 in L^2(mu), so its k survives.
M = mval_part(L)
print("dim M =", M.dim, " basis", [vals(b) for b in M.basis])
print("same as compute_M:", compute_M(mu, nu).dim == M.dim)

# %%
# A hand-built relation on two atoms: (e1, e1) and (e1, e2). Their difference is
# (0, e1 - e2), so the multivalued part is the line through e1 - e2.
S2 = AtomSpace(("x", "y"))
W = WeightedSpace(S2, (1, 1))
e1 = SimpleFunction(S2, (1, 0))
e2 = SimpleFunction(S2, (0, 1))
R = LinearRelation(W, W, ((e1, e1), (e1, e2)))
print("basis:", [vals(b) for b in mval_part(R).basis])
print("(0, e1 - e2) in R:", contains_pair(R, S2.zero(), e1 - e2))
print("(0, e1) in R:     ", contains_pair(R, S2.zero(), e1))
