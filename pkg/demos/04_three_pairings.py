"""Three roads to the same pairing.

The scalar pairing of classes can be computed (1) as the closed-form trace
of x -> b x a, (2) as the transfer along the diagonal bimodule applied to
the Kunneth class, (3) as the diagonal class contracted against the Kunneth
class over the enveloping algebra.  All three agree exactly on a full basis
of classes, algebra by algebra.
"""

from dgtrace import catalog_entry, hh0_space
from dgtrace.algebras import opposite
from dgtrace.pairing import pairing_three_ways

for name in ("kxk", "M2", "A2"):
    entry = catalog_entry(name)
    a = entry.algebra
    aop = opposite(a)
    sp, spo = hh0_space(a), hh0_space(aop)
    env_res = entry.enveloping_resolution()
    cache = {}
    print(name)
    for lam in spo.basis_classes():
        for mu in sp.basis_classes():
            s1, s2, s3 = pairing_three_ways(a, entry.resolution, lam, mu,
                                            env_res, cache)
            print(f"    <{lam.coords}, {mu.coords}>"
                  f" = {s1} = {s2} = {s3}   agree: {s1 == s2 == s3}")
    print()
