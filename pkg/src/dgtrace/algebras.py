"""Finite-dimensional dg algebras given by validated structure constants.

An algebra is a flat basis with degrees, a sparse multiplication table
c[i][j] = list of (k, coefficient), a unit vector and a sparse differential.
Validation is exhaustive over basis tuples: associativity on all triples,
two-sided unit, degree additivity, the Leibniz rule d(ab) = d(a)b +
(-1)^{|a|} a d(b) and d^2 = 0.

The opposite algebra multiplies by a .op b = (-1)^{|a||b|} b a; tensor
algebras multiply with the Koszul sign (a (x) b)(a' (x) b') =
(-1)^{|b||a'|} aa' (x) bb'.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import Complex, GradedSpace, cohomology_dims
from .errors import (AssociativityViolation, DegreeViolation, DimensionMismatch,
                     DifferentialSquareViolation, LeibnizViolation, UnitViolation)
from .linalg import ONE, ZERO, RationalMatrix

Coords = Tuple[Fraction, ...]
SparseVec = Tuple[Tuple[int, Fraction], ...]


def _sparse(coords: Sequence[Fraction]) -> SparseVec:
    return tuple((i, c) for i, c in enumerate(coords) if c)


class DgAlgebra:
    """Immutable dg algebra on an ordered basis.

    `mult[(i, j)]` lists the nonzero coordinates of e_i * e_j; pairs with
    zero product are absent.  `diff[i]` lists the coordinates of d(e_i).
    """

    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 mult: Dict[Tuple[int, int], SparseVec], unit: Sequence[Fraction],
                 diff: Optional[Dict[int, SparseVec]] = None):
        n = len(labels)
        if len(degrees) != n or len(unit) != n:
            raise DimensionMismatch("basis data lengths disagree")
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self.mult = {k: tuple((i, Fraction(c)) for i, c in v if c)
                     for k, v in mult.items()}
        self.mult = {k: v for k, v in self.mult.items() if v}
        self.unit = tuple(Fraction(c) for c in unit)
        self.diff = {i: tuple((j, Fraction(c)) for j, c in v if c)
                     for i, v in (diff or {}).items()}
        self.diff = {i: v for i, v in self.diff.items() if v}
        self._check_degrees()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _check_degrees(self):
        for (i, j), vec in self.mult.items():
            d = self.degrees[i] + self.degrees[j]
            for k, _ in vec:
                if self.degrees[k] != d:
                    raise DegreeViolation(
                        f"product {self.labels[i]}*{self.labels[j]} not degree-additive")
        for i, vec in self.diff.items():
            for j, _ in vec:
                if self.degrees[j] != self.degrees[i] + 1:
                    raise DegreeViolation(f"d({self.labels[i]}) has wrong degree")

    # -- elements ---------------------------------------------------------

    def element(self, coords: Sequence[Fraction]) -> "AlgebraElement":
        return AlgebraElement(self, tuple(Fraction(c) for c in coords))

    def basis_element(self, i: int) -> "AlgebraElement":
        coords = [ZERO] * self.dim
        coords[i] = ONE
        return AlgebraElement(self, tuple(coords))

    def by_label(self, label: str) -> "AlgebraElement":
        return self.basis_element(self.labels.index(label))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (ZERO,) * self.dim)

    def multiply(self, a: Coords, b: Coords) -> Coords:
        out = [ZERO] * self.dim
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        vec = self.mult.get((i, j))
                        if vec:
                            cab = ca * cb
                            for k, c in vec:
                                out[k] += cab * c
        return tuple(out)

    def differential(self, a: Coords) -> Coords:
        out = [ZERO] * self.dim
        for i, ca in enumerate(a):
            if ca:
                for j, c in self.diff.get(i, ()):
                    out[j] += ca * c
        return tuple(out)

    # -- structure --------------------------------------------------------

    def is_degree_zero(self) -> bool:
        """True when concentrated in degree 0 (then d = 0 automatically)."""
        return all(d == 0 for d in self.degrees)

    def carrier(self) -> Complex:
        """Underlying complex; basis per degree in flat-index order."""
        by_degree: Dict[int, List[int]] = {}
        for i, d in enumerate(self.degrees):
            by_degree.setdefault(d, []).append(i)
        space = GradedSpace({d: len(ix) for d, ix in by_degree.items()})
        pos = {}
        for d, ix in by_degree.items():
            for r, i in enumerate(ix):
                pos[i] = (d, r)
        diff = {}
        for d in sorted(by_degree):
            tgt = by_degree.get(d + 1)
            if not tgt:
                continue
            rows = [[ZERO] * len(by_degree[d]) for _ in tgt]
            for c, i in enumerate(by_degree[d]):
                for j, coeff in self.diff.get(i, ()):
                    rows[pos[j][1]][c] += coeff
            diff[d] = RationalMatrix(len(tgt), len(by_degree[d]), rows)
        return Complex(space, diff)

    def flat_to_graded(self):
        """index i -> (degree, position) in the carrier basis."""
        by_degree: Dict[int, List[int]] = {}
        for i, d in enumerate(self.degrees):
            by_degree.setdefault(d, []).append(i)
        pos = {}
        for d, ix in by_degree.items():
            for r, i in enumerate(ix):
                pos[i] = (d, r)
        return pos

    def cohomology_dims(self) -> GradedSpace:
        return cohomology_dims(self.carrier())

    def is_proper(self) -> bool:
        """Total cohomology finite-dimensional; automatic at this size."""
        return self.cohomology_dims().total_dim() < float("inf")

    def validate(self) -> "DgAlgebra":
        """Exhaustive invariant check; raises on the first offending tuple."""
        n = self.dim
        one = self.unit
        for i in range(n):
            e = tuple(ONE if k == i else ZERO for k in range(n))
            if self.multiply(one, e) != e:
                raise UnitViolation(i, "left")
            if self.multiply(e, one) != e:
                raise UnitViolation(i, "right")
        basis = [tuple(ONE if k == i else ZERO for k in range(n)) for i in range(n)]
        prod: Dict[Tuple[int, int], Coords] = {}
        for i in range(n):
            for j in range(n):
                prod[(i, j)] = self.multiply(basis[i], basis[j])
        for i in range(n):
            for j in range(n):
                pij = prod[(i, j)]
                for k in range(n):
                    left = self.multiply(pij, basis[k])
                    right_inner = prod[(j, k)]
                    right = self.multiply(basis[i], right_inner)
                    if left != right:
                        raise AssociativityViolation(i, j, k)
        for i in range(n):
            for j in range(n):
                dab = self.differential(prod[(i, j)])
                da_b = self.multiply(self.differential(basis[i]), basis[j])
                sgn = ONE if self.degrees[i] % 2 == 0 else -ONE
                a_db = self.multiply(basis[i], self.differential(basis[j]))
                expected = tuple(x + sgn * y for x, y in zip(da_b, a_db))
                if dab != expected:
                    raise LeibnizViolation(i, j)
        for i in range(n):
            if any(c for c in self.differential(self.differential(basis[i]))):
                raise DifferentialSquareViolation(f"on {self.labels[i]}")
        return self

    # -- comparisons ------------------------------------------------------

    def same_structure(self, other: "DgAlgebra") -> bool:
        """Structural equality ignoring labels."""
        return (self.degrees == other.degrees
                and self.unit == other.unit
                and _normalized(self.mult) == _normalized(other.mult)
                and {i: tuple(sorted(v)) for i, v in self.diff.items()}
                    == {i: tuple(sorted(v)) for i, v in other.diff.items()})

    def __eq__(self, other):
        return isinstance(other, DgAlgebra) and self.same_structure(other)

    __hash__ = object.__hash__  # identity hash; caches key on object identity

    def __repr__(self):
        return f"DgAlgebra(dim={self.dim})"


def _normalized(mult):
    return {k: tuple(sorted(v)) for k, v in mult.items()}


class AlgebraElement:
    """Element of a DgAlgebra as a coordinate vector over the basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: DgAlgebra, coords: Coords):
        if len(coords) != algebra.dim:
            raise DimensionMismatch("coordinate vector of wrong length")
        self.algebra = algebra
        self.coords = tuple(coords)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra,
                              tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra,
                              tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.algebra, tuple(c * x for x in self.coords))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra,
                              self.algebra.multiply(self.coords, other.coords))

    def d(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.differential(self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def degree(self) -> Optional[int]:
        """Degree when homogeneous, None for 0 or mixed."""
        degs = {self.algebra.degrees[i] for i, c in enumerate(self.coords) if c}
        if len(degs) == 1:
            return degs.pop()
        return None

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.coords == other.coords
                and self.algebra.same_structure(other.algebra))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}*{self.algebra.labels[i]}" if c != 1
                             else self.algebra.labels[i])
        return " + ".join(terms) if terms else "0"


def validate_algebra(labels, degrees, mult, unit, diff=None) -> DgAlgebra:
    """Build and exhaustively validate an algebra from raw data."""
    return DgAlgebra(labels, degrees, mult, unit, diff).validate()


def opposite(a: DgAlgebra) -> DgAlgebra:
    """Same carrier, multiplication x .op y = (-1)^{|x||y|} y x."""
    mult: Dict[Tuple[int, int], SparseVec] = {}
    for (i, j), vec in a.mult.items():
        sgn = ONE if (a.degrees[i] * a.degrees[j]) % 2 == 0 else -ONE
        mult[(j, i)] = tuple((k, sgn * c) for k, c in vec)
    return DgAlgebra(a.labels, a.degrees, mult, a.unit, dict(a.diff))


def tensor_algebras(a: DgAlgebra, b: DgAlgebra,
                    label_sep: str = "(x)") -> DgAlgebra:
    """a (x) b with basis (i, j) at flat index i*dim(b)+j and Koszul sign
    (x (x) y)(x' (x) y') = (-1)^{|y||x'|} xx' (x) yy'."""
    nb = b.dim
    labels = [f"{la}{label_sep}{lb}" for la in a.labels for lb in b.labels]
    degrees = [da + db for da in a.degrees for db in b.degrees]
    mult: Dict[Tuple[int, int], SparseVec] = {}
    for (i, ip), veca in a.mult.items():
        for (j, jp), vecb in b.mult.items():
            sgn = ONE if (b.degrees[j] * a.degrees[ip]) % 2 == 0 else -ONE
            entries = []
            for k, ca in veca:
                for l, cb in vecb:
                    entries.append((k * nb + l, sgn * ca * cb))
            key = (i * nb + j, ip * nb + jp)
            if key in mult:
                entries = list(mult[key]) + entries
            merged: Dict[int, Fraction] = {}
            for idx, c in entries:
                merged[idx] = merged.get(idx, ZERO) + c
            mult[key] = tuple(sorted((k, c) for k, c in merged.items() if c))
    unit = [ZERO] * (a.dim * nb)
    for i, ca in enumerate(a.unit):
        if ca:
            for j, cb in enumerate(b.unit):
                if cb:
                    unit[i * nb + j] = ca * cb
    diff: Dict[int, SparseVec] = {}
    for i in range(a.dim):
        for j in range(nb):
            entries = []
            for k, c in a.diff.get(i, ()):
                entries.append((k * nb + j, c))
            sgn = ONE if a.degrees[i] % 2 == 0 else -ONE
            for l, c in b.diff.get(j, ()):
                entries.append((i * nb + l, sgn * c))
            if entries:
                diff[i * nb + j] = tuple(entries)
    return DgAlgebra(labels, degrees, mult, unit, diff)


def enveloping(a: DgAlgebra) -> Tuple[DgAlgebra, DgAlgebra]:
    """(A^e, eA) = (A (x) A^op, A^op (x) A)."""
    aop = opposite(a)
    return tensor_algebras(a, aop), tensor_algebras(aop, a)


class AlgebraIso:
    """Isomorphism of algebras sending basis element i of the source to
    scalar[i] times basis element perm[i] of the target.

    Covers every identification this package needs (swaps of tensor factors,
    (R (x) S)^op = R^op (x) S^op, unit absorption), all of which permute the
    basis up to sign in degree 0.
    """

    def __init__(self, source: DgAlgebra, target: DgAlgebra,
                 perm: Sequence[int], scalars: Optional[Sequence[Fraction]] = None):
        if len(perm) != source.dim or source.dim != target.dim:
            raise DimensionMismatch("iso needs equal dimensions")
        if sorted(perm) != list(range(source.dim)):
            raise DimensionMismatch("perm is not a permutation")
        self.source = source
        self.target = target
        self.perm = tuple(perm)
        self.scalars = tuple(scalars) if scalars else (ONE,) * source.dim

    def apply(self, coords: Coords) -> Coords:
        out = [ZERO] * len(coords)
        for i, c in enumerate(coords):
            if c:
                out[self.perm[i]] += c * self.scalars[i]
        return tuple(out)

    def inverse(self) -> "AlgebraIso":
        inv_perm = [0] * len(self.perm)
        inv_scal = [ONE] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv_perm[p] = i
            inv_scal[p] = ONE / self.scalars[i]
        return AlgebraIso(self.target, self.source, inv_perm, inv_scal)

    def check(self) -> "AlgebraIso":
        """Verify multiplicativity, unit and differential on all pairs."""
        n = self.source.dim
        if self.apply(self.source.unit) != self.target.unit:
            raise UnitViolation(-1, "iso")
        for i in range(n):
            ei = tuple(ONE if k == i else ZERO for k in range(n))
            fi = self.apply(ei)
            if self.apply(self.source.differential(ei)) != self.target.differential(fi):
                raise DifferentialSquareViolation("iso does not commute with d")
            for j in range(n):
                ej = tuple(ONE if k == j else ZERO for k in range(n))
                lhs = self.apply(self.source.multiply(ei, ej))
                rhs = self.target.multiply(fi, self.apply(ej))
                if lhs != rhs:
                    raise AssociativityViolation(i, j, -1)
        return self


def swap_iso(a: DgAlgebra, b: DgAlgebra, ab: DgAlgebra, ba: DgAlgebra) -> AlgebraIso:
    """a (x) b -> b (x) a, x (x) y -> (-1)^{|x||y|} y (x) x."""
    nb, na = b.dim, a.dim
    perm = [0] * (na * nb)
    scal = [ONE] * (na * nb)
    for i in range(na):
        for j in range(nb):
            perm[i * nb + j] = j * na + i
            if (a.degrees[i] * b.degrees[j]) % 2:
                scal[i * nb + j] = -ONE
    return AlgebraIso(ab, ba, perm, scal)


def env_op_iso(a: DgAlgebra) -> AlgebraIso:
    """A^e -> (A^e)^op, x (x) y -> y (x) x.

    Both sides share the same underlying basis; the swap is multiplicative
    because (x (x) y)(x' (x) y') in A^e flips to x'x (x) yy' under .op.
    Degree-0 algebras only (no signs tracked here).
    """
    ae = tensor_algebras(a, opposite(a))
    n = a.dim
    perm = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            perm[i * n + j] = j * n + i
    return AlgebraIso(ae, opposite(ae), perm)
