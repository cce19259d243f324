"""The trace formula on a hand-built instance, step by step.

Take the two-vertex path algebra, M = the cone of right multiplication by
the arrow on the rank-1 free module, N = the projective at the first vertex
of the opposite algebra, and f = multiplication by 3.  The class of g (x) f
on the balanced tensor equals the pairing of the classes, both exact.
"""

from dgtrace import catalog_entry, hh0_space, verify_rr
from dgtrace.algebras import opposite
from dgtrace.hochschild import hh_class
from dgtrace.modules import ModuleMap, cone_module, free_module, projective_module

entry = catalog_entry("A2")
a = entry.algebra
aop = opposite(a)

n = projective_module(aop, aop.by_label("e1"))
g = n.identity_map()

# a projective with a scalar endomorphism: the answer is 3 paths worth
m = projective_module(a, a.by_label("e2"))
f = m.identity_map().scale(3)
print("hh(M, f) =", [str(c) for c in hh_class(m, f).coords])
print("hh(N, g) =", [str(c) for c in hh_class(n, g).coords])
report = verify_rr(m, f, n, g, instance="projective, f = 3")
print("left side  (trace of g (x) f on N (x)_A M):", report.lhs)
print("right side (pairing of the classes):       ", report.rhs)
print("equal:", report.equal)
print()

# a cone: the Euler characteristic of the two-term complex cancels, and the
# formula sees it on both sides
free = free_module(a, [0])
arrow = ModuleMap(free.module, free.module, 0, [[a.by_label("a")]])
cn = cone_module(arrow)
f3 = ModuleMap.identity(cn.module).scale(3)
report = verify_rr(cn, f3, n, g, instance="cone, f = 3")
print("cone instance: lhs =", report.lhs, " rhs =", report.rhs,
      " equal:", report.equal)
