"""Serre duality and the dualizing pair, verified by dimension tables.

Over each built-in algebra: the inverse dualizing module contracts against
the linear-dual bimodule to something with the cohomology of the algebra,
and Hom(Y, X) has the dimension of Hom(X, S(Y)) for projectives X, Y.
"""

from dgtrace import catalog_entry
from dgtrace.duality import (DualBimodule, hom_into_serre,
                             omega_contraction_dims, omega_inverse_module,
                             serre_module_data)
from dgtrace.modules import hom_over_algebra, projective_module

for name in ("A2", "M2", "Kronecker"):
    entry = catalog_entry(name)
    a = entry.algebra
    omega_inv = omega_inverse_module(a, entry.resolution.module)
    dims = omega_contraction_dims(a, omega_inv, "dual_first")
    print(f"{name}: A^* (x)_A omega^(-1) has dims {dict(dims.dims)}"
          f"  (algebra: {dict(a.cohomology_dims().dims)})")

    dual = DualBimodule(a)
    projs = [projective_module(a, a.basis_element(i))
             for i in entry.idempotents]
    for yi, y in enumerate(projs):
        data = serre_module_data(a, y, dual)
        for xi, x in enumerate(projs):
            lhs = hom_over_algebra(y, x).cohomology_dims().dim(0)
            rhs = hom_into_serre(x, data).cohomology_dims().dim(0)
            print(f"    dim Hom(P{yi}, P{xi}) = {lhs}"
                  f" = dim Hom(P{xi}, S(P{yi})) = {rhs}")
    print()
