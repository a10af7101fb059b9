# Splitting a measure into absolutely continuous and singular parts
#
# Three atoms. mu charges a and b, nu charges a and c. The mass nu puts on c
# is invisible to mu, so it should end up in the singular part.

# %%
from fractions import Fraction

from lebdecomp import AtomSpace, Measure, decompose, oracle_decompose, radon_nikodym

T = AtomSpace(("a", "b", "c"))
mu = Measure(T, (1, 1, 0))
nu = Measure(T, (2, 0, 3))



def show(mapping):
    return {k: str(v) for k, v in mapping.items()}


d = decompose(mu, nu)
print("p1      ", [str(p) for p in d.p1.values])
print("nu_a    ", show(d.nu_a.as_dict()))
print("nu_s    ", show(d.nu_s.as_dict()))
print("S       ", d.singular_labels)

# %%
# p1 is the projection of the constant 1 onto the closed span of simple
# functions that vanish mu-a.e. Here it is exactly the indicator of S, and the
# exact backend never rounds, so the check below is an equality.
print("integral of p1 - p1^2 dnu:",
      sum((p - p * p) * w for p, w in zip(d.p1.values, nu.weights)))
print("diagnostics ok:", d.diagnostics.ok)

# %%
# The answer agrees with the direct classification of atoms.
print("oracle agrees:", d == oracle_decompose(mu, nu))

# %%
# Densities live on the mu-support. Re-integrating them against mu gives nu_a.
dens = radon_nikodym(d, mu)
print("d nu_a / d mu:", show(dens))

# %%
# Rational weights stay rational.
mu2 = Measure(T, (Fraction(1, 3), 0, Fraction(5, 7)))
nu2 = Measure(T, (Fraction(2, 9), Fraction(4, 5), Fraction(1, 7)))
d2 = decompose(mu2, nu2)
print("density  ", show(radon_nikodym(d2, mu2)))
print("singular ", show(d2.nu_s.as_dict()))

# %%
# The float backend gives the same split up to rounding.
df = decompose(mu2.to_float(), nu2.to_float())
print("float nu_a", df.nu_a.weights)
print("exact nu_a", tuple(float(x) for x in d2.nu_a.weights))
