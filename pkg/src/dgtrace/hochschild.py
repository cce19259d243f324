"""Degree-zero Hochschild homology and Hochschild classes.

HH_0 of an ordinary algebra is the commutator quotient A/[A,A]; the
Hochschild class of a closed degree-0 endomorphism f of a perfect module is
the generalized supertrace

    hh(M, f) = [ sum_i (-1)^{s_i} (e f e)[i][i] ]  in  A/[A,A],

with e the module's idempotent (identity when absent).  The dual description
via Hom over the enveloping algebra out of the inverse dualizing module is
computed independently and compared by dimensions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from .algebras import AlgebraElement, DgAlgebra
from .complexes import GradedSpace, SplitComplex
from .duality import diagonal_explicit, omega_inverse_module, _echelon_basis
from .errors import (IdempotentIncompatible, NotClosed,
                     NotDegreeZeroConcentrated, WrongDegree)
from .linalg import (ONE, ZERO, SubspacePresentation, quotient_presentation)
from .modules import HomOverAlgebra, ModuleMap, PerfectModule


class HH0Space:
    """A/[A,A] with a chosen projection and coset representatives."""

    def __init__(self, algebra: DgAlgebra):
        if not algebra.is_degree_zero():
            raise NotDegreeZeroConcentrated("HH_0 computed for degree-0 algebras")
        self.algebra = algebra
        n = algebra.dim
        commutators = []
        for i in range(n):
            ei = tuple(ONE if t == i else ZERO for t in range(n))
            for j in range(n):
                ej = tuple(ONE if t == j else ZERO for t in range(n))
                ab = algebra.multiply(ei, ej)
                ba = algebra.multiply(ej, ei)
                vec = tuple(x - y for x, y in zip(ab, ba))
                if any(vec):
                    commutators.append(vec)
        basis = _echelon_basis(commutators, n)
        self.commutator_dim = len(basis)
        self.projection, self.section = quotient_presentation(
            n, SubspacePresentation(n, tuple(basis)))

    @property
    def dim(self) -> int:
        return self.projection.rows

    def project(self, elem: AlgebraElement) -> Tuple[Fraction, ...]:
        return self.projection.apply(elem.coords)

    def representative(self, coords) -> AlgebraElement:
        return self.algebra.element(self.section.apply(tuple(coords)))

    def class_of(self, elem: AlgebraElement) -> "HochschildClass":
        return HochschildClass(self, self.project(elem), elem)

    def basis_classes(self):
        """Classes of the chosen coset representatives."""
        out = []
        for t in range(self.dim):
            coords = tuple(ONE if r == t else ZERO for r in range(self.dim))
            out.append(HochschildClass(self, coords, self.representative(coords)))
        return out


class HochschildClass:
    """Element of HH_0(A): coordinates plus a chosen representative."""

    def __init__(self, space: HH0Space, coords, representative: AlgebraElement):
        self.space = space
        self.coords = tuple(coords)
        self.representative = representative
        if space.project(representative) != self.coords:
            raise IdempotentIncompatible("representative does not match coordinates")

    @property
    def algebra(self) -> DgAlgebra:
        return self.space.algebra

    def __add__(self, other: "HochschildClass") -> "HochschildClass":
        return HochschildClass(self.space,
                               tuple(a + b for a, b in zip(self.coords, other.coords)),
                               self.representative + other.representative)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "HochschildClass":
        return HochschildClass(self.space, tuple(Fraction(c) * x for x in self.coords),
                               self.representative.scale(c))

    def __eq__(self, other):
        return (isinstance(other, HochschildClass)
                and self.space.algebra.same_structure(other.space.algebra)
                and self.coords == other.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return f"HochschildClass({self.coords})"


_HH0_CACHE = {}


def hh0_space(a: DgAlgebra) -> HH0Space:
    """A/[A,A]; cached per algebra object."""
    key = id(a)
    hit = _HH0_CACHE.get(key)
    if hit is None or hit[0] is not a:
        hit = (a, HH0Space(a))
        _HH0_CACHE[key] = hit
    return hit[1]


def generalized_supertrace(m: PerfectModule, f: ModuleMap) -> AlgebraElement:
    """sum_i (-1)^{s_i} f[i][i] in A (no projection)."""
    a = m.algebra
    total = a.zero()
    for i in range(m.rank):
        entry = f.entries[i][i]
        if m.shifts[i] % 2 == 0:
            total = total + entry
        else:
            total = total - entry
    return total


def compressed_supertrace(m: PerfectModule, f: ModuleMap) -> AlgebraElement:
    """sum_i (-1)^{s_i} (e f e)[i][i] without forming e f e: the diagonal of
    the double compression is accumulated over the nonzero entries only,
    (e f e)[i][i] = sum_{j,l} e[j][i] f[l][j] e[i][l] (left-to-right products
    in the order the maps apply).  Degree-0 entries assumed."""
    a = m.algebra
    if m.idempotent is None:
        return generalized_supertrace(m, f)
    e = m.idempotent.entries
    fe = f.entries
    total = a.zero()
    n = m.rank
    for i in range(n):
        acc = a.zero()
        for j in range(n):
            eji = e[j][i]
            if eji.is_zero():
                continue
            for l in range(n):
                flj = fe[l][j]
                if flj.is_zero():
                    continue
                eil = e[i][l]
                if eil.is_zero():
                    continue
                acc = acc + (eji * flj) * eil
        if m.shifts[i] % 2 == 0:
            total = total + acc
        else:
            total = total - acc
    return total


def hh_class_via_transfer(m: PerfectModule, f: ModuleMap,
                          space: Optional[HH0Space] = None) -> HochschildClass:
    """Hochschild class of a map closed by construction (restrictions of
    algebra-element actions), compressed sparsely against the idempotent.
    Skips the O(rank^3) closedness and compatibility checks; callers must
    guarantee them structurally."""
    if space is None:
        space = hh0_space(m.algebra)
    return space.class_of(compressed_supertrace(m, f))


def hh_class(m: PerfectModule, f: ModuleMap,
             space: Optional[HH0Space] = None) -> HochschildClass:
    """Hochschild class of a closed degree-0 endomorphism compatible with
    the module's idempotent (e f e = f exactly when e is present)."""
    a = m.algebra
    if not a.is_degree_zero():
        raise NotDegreeZeroConcentrated("Hochschild classes need a degree-0 algebra")
    if f.degree != 0:
        raise WrongDegree("Hochschild class of a degree-0 map only")
    if f.source is not m.module and f.source != m.module:
        raise WrongDegree("map is not an endomorphism of the module")
    if not f.is_closed():
        raise NotClosed("Hochschild class of a closed map only")
    if m.idempotent is not None:
        if m.compress(f) != f:
            raise IdempotentIncompatible("endomorphism does not factor through e")
    if space is None:
        space = hh0_space(a)
    return space.class_of(generalized_supertrace(m, f))


def euler_class(m: PerfectModule, space: Optional[HH0Space] = None) -> HochschildClass:
    """hh of the identity; the idempotent is the chain representative of the
    identity on a homotopy summand."""
    return hh_class(m, m.identity_map(), space)


def hh_via_dualizing(a: DgAlgebra, resolution) -> GradedSpace:
    """Cohomology dims of Hom_{A^e}(omega^{-1}, A); degree 0 must equal
    dim HH_0 and the whole table is the Hochschild homology of A
    (HH_n in cohomological degree -n)."""
    resolution.validate()
    omega_inv = omega_inverse_module(a, resolution.module)
    env = omega_inv.module.algebra
    target = diagonal_explicit(a, env)
    h = HomOverAlgebra(omega_inv.module, target)
    projector = None
    if omega_inv.idempotent is not None:
        projector = h.precompose(omega_inv.idempotent)
    return SplitComplex(h.complex, projector).cohomology_dims()
