"""Tensor Kronecker product basics: the index map and the mixed-product rules.

Everything downstream (spectra, decompositions, hypergraphs, dynamics) leans
on two facts shown here: entry (B ⊗ C)[i⊗j] = B[i]·C[j] under the blockwise
index map, and mode products / norms factor across the ⊗.
"""

import numpy as np

import kronten as kt

rng = np.random.default_rng(7)

b = rng.standard_normal((2, 3, 2))
c = rng.standard_normal((3, 2, 2))
a = kt.kron(b, c)
print("B shape", b.shape, "  C shape", c.shape, "  B⊗C shape", a.shape)

# one entry, by hand: pick multi-indices i into B and j into C
i, j = (1, 2, 0), (2, 1, 1)
flat = kt.kron_index(i, j, c.shape)
print(f"A[{flat}] = {a[flat]: .6f}   B[i]*C[j] = {b[i] * c[j]: .6f}")

# and back again
i2, j2 = kt.kron_inverse_index(flat, c.shape)
print("inverse map recovers", i2, j2)

# mixed product: (X ⊗ Y) applied mode-wise equals kron of the mode products
x = rng.standard_normal((4, 3))
y = rng.standard_normal((2, 2))
lhs = kt.mode_product(a, np.kron(x, y), 1)
rhs = kt.kron(kt.mode_product(b, x, 1), kt.mode_product(c, y, 1))
print("mixed-product identity max err:", np.max(np.abs(lhs - rhs)))

# norms multiply
fb, fc, fa = kt.frobenius_norm(b), kt.frobenius_norm(c), kt.frobenius_norm(a)
print(f"‖B‖·‖C‖ = {fb * fc:.10f}   ‖B⊗C‖ = {fa:.10f}")

# structure survives the product: supersymmetric ⊗ supersymmetric
s1 = kt.symmetrize(rng.standard_normal((3, 3, 3)))
s2 = kt.symmetrize(rng.standard_normal((2, 2, 2)))
print("product still supersymmetric:",
      kt.structure_check(kt.kron(s1, s2), kt.StructureKind.SUPERSYMMETRIC))

# a factored operand never needs materializing: at a separable point the
# polynomial map splits into per-factor applications
fac = kt.KronFactored([s1, s2])
v1, v2 = rng.standard_normal(3), rng.standard_normal(2)
direct = kt.apply_polynomial(kt.kron(s1, s2), np.kron(v1, v2))
split = kt.factored_polynomial(fac, [v1, v2]).materialize()
print("factored polynomial max err:", np.max(np.abs(split - direct)))
