"""Pairing tables over path algebras.

The scalar pairing of Hochschild classes over a path algebra recovers the
Cartan matrix: pairing the class of the idempotent at vertex i (taken in the
opposite algebra) against the class at vertex j counts the paths i -> j,
exactly, as a rational number.
"""

from dgtrace import catalog_entry, hh0_space, pair_scalar
from dgtrace.algebras import opposite

for name in ("A2", "A3", "Kronecker"):
    entry = catalog_entry(name)
    a = entry.algebra
    aop = opposite(a)
    sp, spo = hh0_space(a), hh0_space(aop)
    print(f"{name}  (dim {a.dim}, HH_0 dim {sp.dim})")
    for i in entry.idempotents:
        row = []
        for j in entry.idempotents:
            lam = spo.class_of(aop.basis_element(i))
            mu = sp.class_of(a.basis_element(j))
            row.append(pair_scalar(lam, mu))
        labels = a.labels[i]
        print("   ", labels, [str(v) for v in row])
    print()
