"""Diagonal bimodule resolutions: shipped data and combinators.

A diagonal resolution of a degree-0 algebra A is a perfect module P over
A^e = A (x) A^op together with an augmentation onto the diagonal bimodule A
(one element of A per generator) whose cone is acyclic.  Resolutions are
shipped, not searched for: length 0 with a separability idempotent for
separable algebras, the two-term arrow resolution for path algebras of
acyclic quivers, and tensor/opposite combinators for everything else.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence, Tuple

from .algebras import AlgebraElement, AlgebraIso, DgAlgebra, opposite, tensor_algebras
from .complexes import ChainMap, SplitComplex, cone, is_acyclic
from .duality import diagonal_explicit, transport_module
from .errors import AugmentationNotQuasiIso, NotDegreeZeroConcentrated
from .linalg import ONE, ZERO, RationalMatrix
from .modules import ModuleMap, PerfectModule, SemiFreeModule, outer_tensor_modules

Builder = Callable[[], Tuple[PerfectModule, Tuple[AlgebraElement, ...]]]


class DiagonalResolution:
    """Perfect A^e-module quasi-isomorphic to the diagonal bimodule.

    `augmentation[i]` is the image in A of the i-th generator.  The module
    may be built lazily (large enveloping algebras are only materialized
    when an operation genuinely needs the chain-level data).
    """

    def __init__(self, algebra: DgAlgebra, builder: Builder,
                 separable: bool = False,
                 separability_idempotent: Optional[AlgebraElement] = None,
                 name: str = ""):
        if not algebra.is_degree_zero():
            raise NotDegreeZeroConcentrated("resolutions are degree-0 data")
        self.algebra = algebra
        self.name = name
        self.separable = separable
        self._sep_idem = separability_idempotent
        self._builder = builder
        self._module: Optional[PerfectModule] = None
        self._augmentation: Optional[Tuple[AlgebraElement, ...]] = None

    @property
    def module(self) -> PerfectModule:
        if self._module is None:
            self._module, self._augmentation = self._builder()
        return self._module

    @property
    def augmentation(self) -> Tuple[AlgebraElement, ...]:
        if self._augmentation is None:
            self._module, self._augmentation = self._builder()
        return self._augmentation

    @property
    def enveloping_algebra(self) -> DgAlgebra:
        return self.module.module.algebra

    def separability_idempotent(self) -> AlgebraElement:
        if not self.separable or self._sep_idem is None:
            raise AugmentationNotQuasiIso("no separability idempotent available")
        return self._sep_idem

    def augmentation_chain_map(self) -> ChainMap:
        """The augmentation as a chain map P -> A at the ground level."""
        a = self.algebra
        env = self.enveloping_algebra
        p = self.module
        ex = p.module.to_explicit()
        diag = diagonal_explicit(a, env)
        blocks = {}
        for deg, keys in ex.basis.items():
            if diag.complex.dim(deg) == 0:
                continue
            rows = [[ZERO] * len(keys) for _ in range(a.dim)]
            for c, (i, b) in enumerate(keys):
                target = self.augmentation[i]
                if target.is_zero():
                    continue
                eb = tuple(ONE if t == b else ZERO for t in range(env.dim))
                for x, cx in enumerate(target.coords):
                    if cx:
                        for y, cy in diag.act(eb, x):
                            rows[y][c] += cx * cy
            blocks[deg] = RationalMatrix(a.dim, len(keys), rows)
        return ChainMap(ex.complex, diag.complex, 0, blocks)

    def validate(self) -> "DiagonalResolution":
        """Closedness of the augmentation and acyclicity of its cone, on the
        idempotent image when one is present."""
        aug = self.augmentation_chain_map()
        p = self.module
        if p.idempotent is not None:
            sc = SplitComplex(p.module.to_explicit().complex,
                              p.idempotent.restrict())
            img, incl, _ = sc._split()
            aug = aug.compose(incl)
        if not aug.is_closed():
            raise AugmentationNotQuasiIso("augmentation is not a chain map")
        cn, _, _ = cone(aug)
        if not is_acyclic(cn):
            raise AugmentationNotQuasiIso("augmentation cone has cohomology")
        return self


def separable_resolution(a: DgAlgebra, sep_idem: AlgebraElement,
                         name: str = "") -> DiagonalResolution:
    """Length-0 resolution of a separable algebra: the image of right
    multiplication by the separability idempotent E on the free rank-1
    A^e-module; the augmentation is the multiplication map."""
    env = tensor_algebras(a, opposite(a))
    e_env = env.element(sep_idem.coords)

    def build():
        mod = SemiFreeModule(env, [0], labels=["diag"])
        idem = ModuleMap(mod, mod, 0, [[e_env]])
        return PerfectModule(mod, idem), (a.one(),)

    return DiagonalResolution(a, build, separable=True,
                              separability_idempotent=e_env, name=name)


def quiver_resolution(a: DgAlgebra, vertex_idems: Sequence[int],
                      arrows: Sequence[Tuple[int, int, int]],
                      name: str = "") -> DiagonalResolution:
    """Two-term arrow resolution of the path algebra of an acyclic quiver.

    vertex_idems: basis indices of the primitive idempotents e_v.
    arrows: (basis index of the arrow x, source vertex position, target
    vertex position) with the convention e_src x = x = x e_tgt, i.e. the
    arrow spans e_src A e_tgt.

    Generators: one per arrow in degree -1 (shift 1) mapping to
    (x (x) e_tgt) G_src - (e_src (x) x) G_tgt, then one per vertex in degree
    0 with idempotent e_v (x) e_v and augmentation e_v.
    """
    env = tensor_algebras(a, opposite(a))
    n = a.dim

    def pair(x_coords, y_coords) -> AlgebraElement:
        out = [ZERO] * env.dim
        for p, cp in enumerate(x_coords):
            if cp:
                for q, cq in enumerate(y_coords):
                    if cq:
                        out[p * n + q] += cp * cq
        return env.element(out)

    def basis_vec(i):
        return tuple(ONE if t == i else ZERO for t in range(n))

    def build():
        na, nv = len(arrows), len(vertex_idems)
        shifts = [1] * na + [0] * nv
        labels = [f"arr{t}" for t in range(na)] + [f"vtx{t}" for t in range(nv)]
        tw = [[env.zero() for _ in range(na + nv)] for _ in range(na + nv)]
        for t, (x, src, tgt) in enumerate(arrows):
            # d(H_x) = (x (x) e_tgt) G_tgt - (e_src (x) x) G_src, the
            # bimodule map e_src (x) e_tgt -> x (x) e_tgt - e_src (x) x.
            xv = basis_vec(x)
            tw[na + tgt][t] = pair(xv, basis_vec(vertex_idems[tgt]))
            tw[na + src][t] = -pair(basis_vec(vertex_idems[src]), xv)
        mod = SemiFreeModule(env, shifts, tw, labels)
        rows = [[env.zero() for _ in range(na + nv)] for _ in range(na + nv)]
        for t, (x, src, tgt) in enumerate(arrows):
            rows[t][t] = pair(basis_vec(vertex_idems[src]),
                              basis_vec(vertex_idems[tgt]))
        for t, v in enumerate(vertex_idems):
            rows[na + t][na + t] = pair(basis_vec(v), basis_vec(v))
        idem = ModuleMap(mod, mod, 0, rows)
        aug = tuple([a.zero()] * na
                    + [a.basis_element(v) for v in vertex_idems])
        return PerfectModule(mod, idem), aug

    return DiagonalResolution(a, build, name=name)


def opposite_resolution(r: DiagonalResolution,
                        name: str = "") -> DiagonalResolution:
    """Resolution of A^op from one of A, transported along
    (A^op)^e = A^op (x) A -> A (x) A^op, x (x) y -> y (x) x."""
    a = r.algebra
    aop = opposite(a)

    def build():
        p = r.module
        env = p.module.algebra
        env_op = tensor_algebras(aop, a)
        n = a.dim
        perm = [0] * (n * n)
        for i in range(n):
            for j in range(n):
                perm[i * n + j] = j * n + i
        iso = AlgebraIso(env_op, env, perm)
        transported = transport_module(p, iso)
        aug = tuple(aop.element(x.coords) for x in r.augmentation)
        return transported, aug

    sep = None
    if r.separable:
        e = r.separability_idempotent()
        n = a.dim
        out = [ZERO] * (n * n)
        for flat, c in enumerate(e.coords):
            if c:
                i, j = divmod(flat, n)
                out[j * n + i] += c
        env_op = tensor_algebras(aop, a)
        sep = env_op.element(out)
    return DiagonalResolution(aop, build, separable=r.separable,
                              separability_idempotent=sep,
                              name=name or f"op({r.name})")


def tensor_resolution(r1: DiagonalResolution, r2: DiagonalResolution,
                      product: Optional[DgAlgebra] = None,
                      name: str = "") -> DiagonalResolution:
    """Resolution of A (x) B from resolutions of A and B: the outer tensor
    of the modules, transported along
    (A (x) B)^e  =  A^e (x) B^e,
    (a (x) b) (x) (a' (x) b')  ->  (a (x) a') (x) (b (x) b')."""
    a, b = r1.algebra, r2.algebra
    ab = product if product is not None else tensor_algebras(a, b)

    def build():
        p1, p2 = r1.module, r2.module
        env1 = p1.module.algebra
        env2 = p2.module.algebra
        big, prod_env, index = outer_tensor_modules(p1, p2)
        # reindex (A^e (x) B^e) -> (A (x) B)^e
        na, nb = a.dim, b.dim
        env_ab = tensor_algebras(ab, opposite(ab))
        perm = [0] * (na * na * nb * nb)
        # flat index in A^e (x) B^e: ((i, j), (k, l)) with i,j over A and
        # k,l over B; target index in (A(x)B)^e: ((i, k), (j, l))
        for i in range(na):
            for j in range(na):
                for k in range(nb):
                    for l in range(nb):
                        src = (i * na + j) * (nb * nb) + (k * nb + l)
                        dst = (i * nb + k) * (na * nb) + (j * nb + l)
                        perm[src] = dst
        iso = AlgebraIso(prod_env, env_ab, perm)
        inv = iso.inverse()
        transported = transport_module(big, inv)
        aug = []
        for (i, j) in sorted(index, key=lambda t: index[t]):
            x = r1.augmentation[i]
            y = r2.augmentation[j]
            out = [ZERO] * ab.dim
            for p, cp in enumerate(x.coords):
                if cp:
                    for q, cq in enumerate(y.coords):
                        if cq:
                            out[p * nb + q] += cp * cq
            aug.append(ab.element(out))
        return transported, tuple(aug)

    sep = None
    separable = r1.separable and r2.separable
    if separable:
        e1 = r1.separability_idempotent()
        e2 = r2.separability_idempotent()
        na, nb = a.dim, b.dim
        env_ab = tensor_algebras(ab, opposite(ab))
        out = [ZERO] * (na * nb * na * nb)
        for f1, c1 in enumerate(e1.coords):
            if c1:
                i, j = divmod(f1, na)
                for f2, c2 in enumerate(e2.coords):
                    if c2:
                        k, l = divmod(f2, nb)
                        out[(i * nb + k) * (na * nb) + (j * nb + l)] += c1 * c2
        sep = env_ab.element(out)
    return DiagonalResolution(ab, build, separable=separable,
                              separability_idempotent=sep,
                              name=name or f"{r1.name}(x){r2.name}")


def enveloping_resolution(r: DiagonalResolution,
                          env: Optional[DgAlgebra] = None,
                          which: str = "eA") -> DiagonalResolution:
    """Resolution of ^eA = A^op (x) A (which="eA") or A^e = A (x) A^op
    (which="Ae") from a resolution of A."""
    rop = opposite_resolution(r)
    if which == "eA":
        return tensor_resolution(rop, r, product=env,
                                 name=f"env({r.name})")
    return tensor_resolution(r, rop, product=env,
                             name=f"env'({r.name})")
