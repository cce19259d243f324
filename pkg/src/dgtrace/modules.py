"""Finitely generated semi-free dg modules and their explicit realizations.

A semi-free module over A is a list of generators g_i with shifts s_i (the
summand A[s_i], so g_i sits in degree -s_i) plus a twisting matrix delta with
entries in A:

    D(g_i) = sum_{j > i} delta[j][i] g_j,      |delta[j][i]| = 1 + s_j - s_i.

Strict triangularity in the declared generator order (entries only below the
diagonal) is the iterated-cone filtration.  Module maps are matrices over A,
phi(g_i) = sum_j phi[j][i] h_j with |phi[j][i]| = deg(phi) + t_j - s_i, and
compose by (psi . phi)[l][i] = sum_j +- phi[j][i] * psi[l][j] (entries of the
first-applied map multiply on the left).

Everything is reduced on demand to explicit complexes of rational matrices
("restriction to the ground field"); derived tensor and Hom are computed on
the given semi-free presentations, no resolution search.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebras import AlgebraElement, DgAlgebra, tensor_algebras
from .complexes import (ChainMap, Complex, GradedSpace, SplitComplex)
from .errors import (AlgebraMismatch, DegreeViolation, DimensionMismatch,
                     DifferentialSquareViolation, IdempotentIncompatible,
                     NotClosed, NotDegreeZeroConcentrated, TriangularityViolation,
                     WrongDegree)
from .linalg import ONE, ZERO, RationalMatrix

Entry = AlgebraElement


def _zero_entry(a: DgAlgebra) -> Entry:
    return a.zero()


class SemiFreeModule:
    """Semi-free left module: shifted free generators plus a strict twist."""

    def __init__(self, algebra: DgAlgebra, shifts: Sequence[int],
                 twist: Optional[Sequence[Sequence[Entry]]] = None,
                 labels: Optional[Sequence[str]] = None, check: bool = True):
        self.algebra = algebra
        self.shifts = tuple(int(s) for s in shifts)
        n = len(self.shifts)
        self.labels = tuple(labels) if labels else tuple(f"g{i}" for i in range(n))
        if len(self.labels) != n:
            raise DimensionMismatch("one label per generator")
        if twist is None:
            twist = [[_zero_entry(algebra) for _ in range(n)] for _ in range(n)]
        self.twist = tuple(tuple(row) for row in twist)
        if len(self.twist) != n or any(len(r) != n for r in self.twist):
            raise DimensionMismatch("twist must be a square generator matrix")
        self._explicit: Optional[ExplicitModule] = None
        if check:
            self._validate()

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def _validate(self):
        n = self.rank
        for i in range(n):
            for j in range(n):
                entry = self.twist[j][i]
                if entry.is_zero():
                    continue
                if j <= i:
                    raise TriangularityViolation(
                        f"twist entry at ({j},{i}) breaks the generator filtration")
                want = 1 + self.shifts[j] - self.shifts[i]
                if entry.degree() != want:
                    raise DegreeViolation(
                        f"twist entry ({j},{i}) must be homogeneous of degree {want}")
        try:
            self.to_explicit().complex.check_d_squared()
        except DifferentialSquareViolation:
            raise DifferentialSquareViolation("module twist does not square to zero")

    def twist_entry(self, j: int, i: int) -> Entry:
        return self.twist[j][i]

    def generator_degree(self, i: int) -> int:
        return -self.shifts[i]

    def to_explicit(self) -> "ExplicitModule":
        if self._explicit is None:
            self._explicit = ExplicitModule.from_semifree(self)
        return self._explicit

    def __eq__(self, other):
        return (isinstance(other, SemiFreeModule)
                and self.algebra.same_structure(other.algebra)
                and self.shifts == other.shifts
                and self.labels == other.labels
                and all(self.twist[j][i].coords == other.twist[j][i].coords
                        for i in range(self.rank) for j in range(self.rank)))

    def __repr__(self):
        return f"SemiFreeModule(rank={self.rank}, shifts={self.shifts})"


class ExplicitModule:
    """k-level realization: a complex whose basis keys carry the action.

    `basis[p]` lists opaque keys in order; `act(coords, key)` returns the
    sparse left action of an algebra element on a basis key, as a list of
    (key, coefficient).  The module layer only ever needs this one hook.
    """

    def __init__(self, algebra: DgAlgebra, complex_: Complex,
                 basis: Dict[int, List], act):
        self.algebra = algebra
        self.complex = complex_
        self.basis = {p: list(ks) for p, ks in basis.items() if ks}
        self.pos = {}
        for p, ks in self.basis.items():
            for r, k in enumerate(ks):
                self.pos[k] = (p, r)
        self._act = act

    def act(self, coords, key):
        return self._act(coords, key)

    def key_degree(self, key) -> int:
        return self.pos[key][0]

    def action_map(self, elem: AlgebraElement, degree: int) -> ChainMap:
        """Left multiplication by a homogeneous element as a chain map."""
        blocks = {}
        for p, keys in self.basis.items():
            tgt = self.basis.get(p + degree, [])
            if not tgt:
                continue
            rows = [[ZERO] * len(keys) for _ in tgt]
            for c, k in enumerate(keys):
                for k2, coeff in self._act(elem.coords, k):
                    p2, r = self.pos[k2]
                    if p2 != p + degree:
                        raise DegreeViolation("action is not degree-homogeneous")
                    rows[r][c] += coeff
            blocks[p] = RationalMatrix(len(tgt), len(keys), rows)
        return ChainMap(self.complex, self.complex, degree, blocks)

    def vector_of(self, terms) -> Dict[int, list]:
        """Sparse (key, coeff) terms -> per-degree coordinate vectors."""
        out = {p: [ZERO] * len(ks) for p, ks in self.basis.items()}
        for key, coeff in terms:
            p, r = self.pos[key]
            out[p][r] += coeff
        return out

    @classmethod
    def from_semifree(cls, m: SemiFreeModule) -> "ExplicitModule":
        a = m.algebra
        n = m.rank
        basis: Dict[int, List] = {}
        for i in range(n):
            for b in range(a.dim):
                deg = a.degrees[b] - m.shifts[i]
                basis.setdefault(deg, []).append((i, b))
        for p in basis:
            basis[p].sort()
        pos = {}
        for p, ks in basis.items():
            for r, k in enumerate(ks):
                pos[k] = (p, r)
        # differential: D(e_b g_i) = d(e_b) g_i + (-1)^{|e_b|} (e_b delta_ji) g_j
        diff: Dict[int, RationalMatrix] = {}
        space = GradedSpace({p: len(ks) for p, ks in basis.items()})
        for p, keys in basis.items():
            tgt = basis.get(p + 1, [])
            if not tgt:
                continue
            rows = [[ZERO] * len(keys) for _ in tgt]
            for c, (i, b) in enumerate(keys):
                for b2, coeff in a.diff.get(b, ()):
                    rows[pos[(i, b2)][1]][c] += coeff
                sgn = ONE if a.degrees[b] % 2 == 0 else -ONE
                eb = a.basis_element(b)
                for j in range(i + 1, n):
                    entry = m.twist[j][i]
                    if entry.is_zero():
                        continue
                    prod = a.multiply(eb.coords, entry.coords)
                    for b2, coeff in enumerate(prod):
                        if coeff:
                            rows[pos[(j, b2)][1]][c] += sgn * coeff
            diff[p] = RationalMatrix(len(tgt), len(keys), rows)
        cx = Complex(space, diff, check=False)

        def act(coords, key):
            i, b = key
            prod = a.multiply(coords, tuple(ONE if t == b else ZERO
                                            for t in range(a.dim)))
            return [((i, b2), c) for b2, c in enumerate(prod) if c]

        return cls(a, cx, basis, act)


class ModuleMap:
    """Matrix of algebra elements realizing a graded map of semi-free modules."""

    def __init__(self, source: SemiFreeModule, target: SemiFreeModule,
                 degree: int, entries: Sequence[Sequence[Entry]], check: bool = True):
        if not source.algebra.same_structure(target.algebra):
            raise AlgebraMismatch("module map across different algebras")
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.entries = tuple(tuple(row) for row in entries)
        if len(self.entries) != target.rank or any(len(r) != source.rank
                                                   for r in self.entries):
            raise DimensionMismatch("map matrix must be target-rank x source-rank")
        if check:
            for j in range(target.rank):
                for i in range(source.rank):
                    e = self.entries[j][i]
                    if e.is_zero():
                        continue
                    want = self.degree + target.shifts[j] - source.shifts[i]
                    if e.degree() != want:
                        raise DegreeViolation(
                            f"map entry ({j},{i}) must have degree {want}")

    @classmethod
    def identity(cls, m: SemiFreeModule) -> "ModuleMap":
        a = m.algebra
        rows = [[a.one() if i == j else a.zero() for i in range(m.rank)]
                for j in range(m.rank)]
        return cls(m, m, 0, rows, check=False)

    @classmethod
    def zero(cls, source: SemiFreeModule, target: SemiFreeModule,
             degree: int = 0) -> "ModuleMap":
        a = source.algebra
        rows = [[a.zero() for _ in range(source.rank)] for _ in range(target.rank)]
        return cls(source, target, degree, rows, check=False)

    def entry(self, j: int, i: int) -> Entry:
        return self.entries[j][i]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.degree != other.degree:
            raise WrongDegree("adding module maps of different degrees")
        return ModuleMap(self.source, self.target, self.degree,
                         [[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)], check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.degree,
                         [[e.scale(c) for e in row] for row in self.entries],
                         check=False)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self . other, other applied first."""
        if other.target is not self.source and other.target != self.source:
            raise DimensionMismatch("module map composition mismatch")
        a = self.source.algebra
        deg = self.degree + other.degree
        rows = []
        for l in range(self.target.rank):
            row = []
            for i in range(other.source.rank):
                acc = a.zero()
                for j in range(other.target.rank):
                    e1 = other.entries[j][i]
                    if e1.is_zero():
                        continue
                    e2 = self.entries[l][j]
                    if e2.is_zero():
                        continue
                    d1 = e1.degree()
                    sgn = ONE if (self.degree * (d1 or 0)) % 2 == 0 else -ONE
                    acc = acc + (e1 * e2).scale(sgn)
                row.append(acc)
            rows.append(row)
        return ModuleMap(other.source, self.target, deg, rows, check=False)

    def differential(self) -> "ModuleMap":
        """d(phi) = D_N . phi - (-1)^{|phi|} phi . D_M at the matrix level."""
        a = self.source.algebra
        n = self.degree
        src, tgt = self.source, self.target
        rows = []
        sgn_n = ONE if n % 2 == 0 else -ONE
        for l in range(tgt.rank):
            row = []
            for i in range(src.rank):
                acc = self.entries[l][i].d()
                for j in range(tgt.rank):
                    e = self.entries[j][i]
                    if e.is_zero():
                        continue
                    dlt = tgt.twist[l][j]
                    if dlt.is_zero():
                        continue
                    de = e.degree() or 0
                    sgn = ONE if de % 2 == 0 else -ONE
                    acc = acc + (e * dlt).scale(sgn)
                for j in range(src.rank):
                    dlt = src.twist[j][i]
                    if dlt.is_zero():
                        continue
                    e = self.entries[l][j]
                    if e.is_zero():
                        continue
                    dd = dlt.degree() or 0
                    sgn = ONE if (n * dd) % 2 == 0 else -ONE
                    acc = acc - (dlt * e).scale(sgn * sgn_n)
                row.append(acc)
            rows.append(row)
        return ModuleMap(src, tgt, n + 1, rows, check=False)

    def is_closed(self) -> bool:
        return self.differential().is_zero()

    def restrict(self) -> ChainMap:
        """Induced chain map between the explicit realizations."""
        src = self.source.to_explicit()
        tgt = self.target.to_explicit()
        a = self.source.algebra
        n = self.degree
        blocks = {}
        for p, keys in src.basis.items():
            tkeys = tgt.basis.get(p + n, [])
            if not tkeys:
                continue
            rows = [[ZERO] * len(keys) for _ in tkeys]
            for c, (i, b) in enumerate(keys):
                sgn = ONE if (n * a.degrees[b]) % 2 == 0 else -ONE
                eb_coords = tuple(ONE if t == b else ZERO for t in range(a.dim))
                for j in range(self.target.rank):
                    e = self.entries[j][i]
                    if e.is_zero():
                        continue
                    prod = a.multiply(eb_coords, e.coords)
                    for b2, coeff in enumerate(prod):
                        if coeff:
                            rows[tgt.pos[(j, b2)][1]][c] += sgn * coeff
            blocks[p] = RationalMatrix(len(tkeys), len(keys), rows)
        return ChainMap(src.complex, tgt.complex, n, blocks)

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.degree == other.degree
                and self.source == other.source and self.target == other.target
                and all(self.entries[j][i].coords == other.entries[j][i].coords
                        for j in range(self.target.rank)
                        for i in range(self.source.rank)))

    def __repr__(self):
        return f"ModuleMap(degree={self.degree}, {self.source.rank}->{self.target.rank})"


class PerfectModule:
    """Semi-free carrier plus an optional exact chain-level idempotent."""

    def __init__(self, module: SemiFreeModule, idempotent: Optional[ModuleMap] = None,
                 check: bool = True):
        self.module = module
        self.idempotent = idempotent
        if idempotent is not None and check:
            if idempotent.source is not module or idempotent.target is not module:
                if idempotent.source != module or idempotent.target != module:
                    raise DimensionMismatch("idempotent must be an endomorphism")
            if idempotent.degree != 0:
                raise WrongDegree("idempotent must have degree 0")
            if not idempotent.is_closed():
                raise NotClosed("idempotent must be closed")
            if idempotent.compose(idempotent) != idempotent:
                raise IdempotentIncompatible("idempotent is not exact (e.e != e)")

    @property
    def algebra(self) -> DgAlgebra:
        return self.module.algebra

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def shifts(self):
        return self.module.shifts

    def is_plain(self) -> bool:
        return self.idempotent is None

    def identity_map(self) -> ModuleMap:
        """Chain representative of the identity of the summand."""
        if self.idempotent is not None:
            return self.idempotent
        return ModuleMap.identity(self.module)

    def compress(self, f: ModuleMap) -> ModuleMap:
        if self.idempotent is None:
            return f
        return self.idempotent.compose(f).compose(self.idempotent)

    def __eq__(self, other):
        return (isinstance(other, PerfectModule) and self.module == other.module
                and ((self.idempotent is None) == (other.idempotent is None))
                and (self.idempotent is None or self.idempotent == other.idempotent))

    def __repr__(self):
        tag = "+e" if self.idempotent is not None else ""
        return f"PerfectModule(rank={self.rank}{tag})"


def free_module(a: DgAlgebra, shifts: Sequence[int],
                labels: Optional[Sequence[str]] = None) -> PerfectModule:
    """Direct sum of shifted copies of A, zero twist."""
    return PerfectModule(SemiFreeModule(a, shifts, labels=labels))


def projective_module(a: DgAlgebra, idem: AlgebraElement,
                      shift: int = 0) -> PerfectModule:
    """Image of right multiplication by an idempotent on a rank-1 free module
    (e.g. the summand A.e of A)."""
    m = SemiFreeModule(a, [shift])
    e = ModuleMap(m, m, 0, [[idem]])
    return PerfectModule(m, e)


def shift_module(p: PerfectModule, n: int) -> PerfectModule:
    """p[n]: shifts raised by n, twist scaled by (-1)^n."""
    m = p.module
    sgn = ONE if n % 2 == 0 else -ONE
    tw = [[m.twist[j][i].scale(sgn) for i in range(m.rank)] for j in range(m.rank)]
    shifted = SemiFreeModule(m.algebra, [s + n for s in m.shifts], tw, m.labels)
    e = None
    if p.idempotent is not None:
        e = ModuleMap(shifted, shifted, 0, p.idempotent.entries)
    return PerfectModule(shifted, e)


def cone_module(p: ModuleMap) -> PerfectModule:
    """Cone of a closed degree-0 map between plain semi-free modules:
    source generators shifted down one degree, then target generators,
    twist [[-delta_L, 0], [p, delta_M]]."""
    if p.degree != 0:
        raise WrongDegree("cone needs a degree-0 map")
    if not p.is_closed():
        raise NotClosed("cone needs a closed map")
    L, M = p.source, p.target
    a = L.algebra
    shifts = [s + 1 for s in L.shifts] + list(M.shifts)
    labels = [f"{l}'" for l in L.labels] + list(M.labels)
    nl, nm = L.rank, M.rank
    tw = [[a.zero() for _ in range(nl + nm)] for _ in range(nl + nm)]
    for j in range(nl):
        for i in range(nl):
            tw[j][i] = -L.twist[j][i]
    for j in range(nm):
        for i in range(nm):
            tw[nl + j][nl + i] = M.twist[j][i]
        for i in range(nl):
            tw[nl + j][i] = p.entries[j][i]
    return PerfectModule(SemiFreeModule(a, shifts, tw, labels))


def direct_sum_modules(p1: PerfectModule, p2: PerfectModule) -> PerfectModule:
    m1, m2 = p1.module, p2.module
    a = m1.algebra
    if not a.same_structure(m2.algebra):
        raise AlgebraMismatch("direct sum across different algebras")
    n1, n2 = m1.rank, m2.rank
    shifts = list(m1.shifts) + list(m2.shifts)
    labels = [f"{l}.1" for l in m1.labels] + [f"{l}.2" for l in m2.labels]
    tw = [[a.zero() for _ in range(n1 + n2)] for _ in range(n1 + n2)]
    for j in range(n1):
        for i in range(n1):
            tw[j][i] = m1.twist[j][i]
    for j in range(n2):
        for i in range(n2):
            tw[n1 + j][n1 + i] = m2.twist[j][i]
    mod = SemiFreeModule(a, shifts, tw, labels)
    if p1.idempotent is None and p2.idempotent is None:
        return PerfectModule(mod)
    e1 = p1.identity_map()
    e2 = p2.identity_map()
    rows = [[a.zero() for _ in range(n1 + n2)] for _ in range(n1 + n2)]
    for j in range(n1):
        for i in range(n1):
            rows[j][i] = e1.entries[j][i]
    for j in range(n2):
        for i in range(n2):
            rows[n1 + j][n1 + i] = e2.entries[j][i]
    return PerfectModule(mod, ModuleMap(mod, mod, 0, rows))


def direct_sum_maps(p1: PerfectModule, p2: PerfectModule, psum: PerfectModule,
                    f1: ModuleMap, f2: ModuleMap) -> ModuleMap:
    """f1 (+) f2 as an endomorphism of a direct sum built by
    direct_sum_modules (endomorphism case only)."""
    a = psum.algebra
    n1, n2 = p1.rank, p2.rank
    rows = [[a.zero() for _ in range(n1 + n2)] for _ in range(n1 + n2)]
    for j in range(n1):
        for i in range(n1):
            rows[j][i] = f1.entries[j][i]
    for j in range(n2):
        for i in range(n2):
            rows[n1 + j][n1 + i] = f2.entries[j][i]
    return ModuleMap(psum.module, psum.module, 0, rows)


def restrict_to_ground(p: PerfectModule) -> SplitComplex:
    """Underlying complex of k-spaces, idempotent restricted alongside."""
    carrier = p.module.to_explicit().complex
    if p.idempotent is None:
        return SplitComplex(carrier, None)
    return SplitComplex(carrier, p.idempotent.restrict())


# ---------------------------------------------------------------------------
# Restriction of a bimodule to one tensor factor
# ---------------------------------------------------------------------------

def restrict_to_factor(p: PerfectModule, f1: DgAlgebra, f2: DgAlgebra,
                       side: str, check: bool = True) -> Tuple[PerfectModule, Dict]:
    """View a module over f1 (x) f2 as a semi-free module over one factor.

    side="first": generators (i, q) = (1 (x) beta_q) g_i over f1;
    side="second": generators (i, p) = (alpha_p (x) 1) g_i over f2.
    Product algebras concentrated in degree 0 only.  Returns the restricted
    module and the new-generator index map {(i, q): new index}.  Pass
    check=False to skip revalidation (the restriction of valid data is
    valid; at large ranks the O(rank^3) idempotent checks dominate).
    """
    big = p.module.algebra
    if not big.is_degree_zero():
        raise NotDegreeZeroConcentrated("factor restriction needs degree-0 algebras")
    n1, n2 = f1.dim, f2.dim
    if n1 * n2 != big.dim:
        raise AlgebraMismatch("factor dimensions do not multiply up")
    m = p.module
    small = f1 if side == "first" else f2
    nother = n2 if side == "first" else n1
    gens = []
    for i in range(m.rank):
        for q in range(nother):
            gens.append((i, q))
    index = {g: t for t, g in enumerate(gens)}
    shifts = [m.shifts[i] for (i, q) in gens]
    labels = [f"{m.labels[i]}|{q}" for (i, q) in gens]

    def expand(entry: Entry, q: int):
        """(1 (x) beta_q) * entry (side first) or (alpha_q (x) 1) * entry
        (side second), expanded over the small algebra per new generator."""
        out: Dict[int, List[Fraction]] = {}
        for flat, c in enumerate(entry.coords):
            if not c:
                continue
            pa, qb = divmod(flat, n2)
            if side == "first":
                # (1 (x) b_q)(a_pa (x) b_qb) = a_pa (x) (b_q *f2 b_qb)
                prod = f2.multiply(tuple(ONE if t == q else ZERO for t in range(n2)),
                                   tuple(ONE if t == qb else ZERO for t in range(n2)))
                for u, cu in enumerate(prod):
                    if cu:
                        vec = out.setdefault(u, [ZERO] * n1)
                        vec[pa] += c * cu
            else:
                prod = f1.multiply(tuple(ONE if t == q else ZERO for t in range(n1)),
                                   tuple(ONE if t == pa else ZERO for t in range(n1)))
                for u, cu in enumerate(prod):
                    if cu:
                        vec = out.setdefault(u, [ZERO] * n2)
                        vec[qb] += c * cu
        return out

    zero_entry = small.zero()

    def expand_matrix(rows_src) -> List[List[Entry]]:
        rows = [[zero_entry for _ in gens] for _ in gens]
        for (i, q) in gens:
            col = index[(i, q)]
            for j in range(m.rank):
                entry = rows_src[j][i]
                if entry.is_zero():
                    continue
                for u, vec in expand(entry, q).items():
                    rows[index[(j, u)]][col] = (rows[index[(j, u)]][col]
                                                + small.element(vec))
        return rows

    tw = expand_matrix(m.twist)
    mod = SemiFreeModule(small, shifts, tw, labels, check=check)
    idem = None
    if p.idempotent is not None:
        erows = expand_matrix(p.idempotent.entries)
        idem = ModuleMap(mod, mod, 0, erows, check=check)
    return PerfectModule(mod, idem, check=check), index


def right_multiplication_map(p: PerfectModule, restricted: PerfectModule,
                             index: Dict, f1: DgAlgebra, f2: DgAlgebra,
                             elem: AlgebraElement) -> ModuleMap:
    """Right multiplication by elem of f2 on a module over f1 (x) f2^\\op,
    restricted to f1 (side="first" restriction).

    The action of (1 (x) elem) sends (1 (x) b_q) g_i to (1 (x) b_q elem) g_i
    where the product b_q * elem is taken in f2 (the opposite of the second
    tensor slot), i.e. genuine right multiplication.
    """
    small = f1
    mod = restricted.module
    zero = small.zero()
    rows = [[zero for _ in range(mod.rank)] for _ in range(mod.rank)]
    n2 = f2.dim
    for (i, q), col in index.items():
        # Right multiplication is the action of (1 (x) elem); the second slot
        # multiplies in f2 (already the opposite of the user's algebra), so
        # elem *f2 beta_q is genuine right multiplication by elem.
        prod = f2.multiply(elem.coords,
                           tuple(ONE if t == q else ZERO for t in range(n2)))
        for u, cu in enumerate(prod):
            if cu:
                rows[index[(i, u)]][col] = (rows[index[(i, u)]][col]
                                            + small.one().scale(cu))
    return ModuleMap(mod, mod, 0, rows, check=False)


# ---------------------------------------------------------------------------
# Outer tensor of modules over different algebras
# ---------------------------------------------------------------------------

def outer_tensor_modules(p1: PerfectModule, p2: PerfectModule,
                         prod: Optional[DgAlgebra] = None) -> Tuple[PerfectModule, DgAlgebra, Dict]:
    """m1 (x)_k m2 as a module over tensor_algebras(R, S).

    Generators (i, j) ordered i-major, shifts add, twist
    delta1 (x) 1 + (-1)^{s_i} 1 (x) delta2.  Degree-0 algebras only (the sign
    bookkeeping for graded coefficients is not carried here).
    """
    r, s = p1.algebra, p2.algebra
    if not (r.is_degree_zero() and s.is_degree_zero()):
        raise NotDegreeZeroConcentrated("outer tensor needs degree-0 algebras")
    if prod is None:
        prod = tensor_algebras(r, s)
    m1, m2 = p1.module, p2.module
    n1, n2 = m1.rank, m2.rank
    ns = s.dim
    gens = [(i, j) for i in range(n1) for j in range(n2)]
    index = {g: t for t, g in enumerate(gens)}
    shifts = [m1.shifts[i] + m2.shifts[j] for (i, j) in gens]
    labels = [f"{m1.labels[i]}(x){m2.labels[j]}" for (i, j) in gens]

    def embed1(e: Entry):
        out = [ZERO] * prod.dim
        for pidx, c in enumerate(e.coords):
            if c:
                for qidx, cu in enumerate(s.unit):
                    if cu:
                        out[pidx * ns + qidx] += c * cu
        return prod.element(out)

    def embed2(e: Entry):
        out = [ZERO] * prod.dim
        for qidx, c in enumerate(e.coords):
            if c:
                for pidx, cu in enumerate(r.unit):
                    if cu:
                        out[pidx * ns + qidx] += c * cu
        return prod.element(out)

    def assemble(rows1, rows2, koszul: bool):
        rows = [[prod.zero() for _ in gens] for _ in gens]
        for (i, j) in gens:
            col = index[(i, j)]
            for i2 in range(n1):
                e = rows1[i2][i]
                if not e.is_zero():
                    rows[index[(i2, j)]][col] = rows[index[(i2, j)]][col] + embed1(e)
            sgn = ONE
            if koszul and m1.shifts[i] % 2 != 0:
                sgn = -ONE
            for j2 in range(n2):
                e = rows2[j2][j]
                if not e.is_zero():
                    rows[index[(i, j2)]][col] = (rows[index[(i, j2)]][col]
                                                 + embed2(e).scale(sgn))
        return rows

    tw = assemble(m1.twist, m2.twist, koszul=True)
    mod = SemiFreeModule(prod, shifts, tw, labels)
    idem = None
    if p1.idempotent is not None or p2.idempotent is not None:
        e1 = p1.identity_map()
        e2 = p2.identity_map()
        rows = [[prod.zero() for _ in gens] for _ in gens]
        for (i, j) in gens:
            col = index[(i, j)]
            for i2 in range(n1):
                a1 = e1.entries[i2][i]
                if a1.is_zero():
                    continue
                for j2 in range(n2):
                    a2 = e2.entries[j2][j]
                    if a2.is_zero():
                        continue
                    out = [ZERO] * prod.dim
                    for pidx, c1 in enumerate(a1.coords):
                        if c1:
                            for qidx, c2 in enumerate(a2.coords):
                                if c2:
                                    out[pidx * ns + qidx] += c1 * c2
                    rows[index[(i2, j2)]][col] = (rows[index[(i2, j2)]][col]
                                                  + prod.element(out))
        idem = ModuleMap(mod, mod, 0, rows)
    return PerfectModule(mod, idem), prod, index


# ---------------------------------------------------------------------------
# Tensor over the algebra
# ---------------------------------------------------------------------------

class TensorOverAlgebra:
    """N (x)_A M realized by expanding the semi-free right factor M:
    basis (M-generator i, N-basis key u) in degree deg(u) - s_i.

    N enters through its explicit realization over A^op; the right action
    used for the balanced relation is u.a = (-1)^{|a||u|} (a acting in the
    A^op structure), which is genuine right multiplication on restrictions
    of right modules.
    """

    def __init__(self, left: ExplicitModule, m: SemiFreeModule):
        self.left = left
        self.m = m
        a = m.algebra
        basis: Dict[int, List] = {}
        for i in range(m.rank):
            for p, keys in left.basis.items():
                deg = p - m.shifts[i]
                for u in keys:
                    basis.setdefault(deg, []).append((i, u))
        for p in basis:
            basis[p].sort(key=lambda t: (t[0], left.pos[t[1]][1]))
        self.basis = basis
        self.pos = {}
        for p, ks in basis.items():
            for r, k in enumerate(ks):
                self.pos[k] = (p, r)
        space = GradedSpace({p: len(ks) for p, ks in basis.items()})
        diff: Dict[int, RationalMatrix] = {}
        for p, keys in basis.items():
            tgt = basis.get(p + 1, [])
            if not tgt:
                continue
            rows = [[ZERO] * len(keys) for _ in tgt]
            for c, (i, u) in enumerate(keys):
                du, ru = left.pos[u]
                dmat = left.complex.d(du)
                for r2 in range(left.complex.dim(du + 1)):
                    coeff = dmat.entries[r2][ru]
                    if coeff:
                        u2 = left.basis[du + 1][r2]
                        rows[self.pos[(i, u2)][1]][c] += coeff
                sgn = ONE if du % 2 == 0 else -ONE
                for j in range(i + 1, m.rank):
                    entry = m.twist[j][i]
                    if entry.is_zero():
                        continue
                    for u2, coeff in self._right_act(entry, u):
                        rows[self.pos[(j, u2)][1]][c] += sgn * coeff
            diff[p] = RationalMatrix(len(tgt), len(keys), rows)
        self.complex = Complex(space, diff, check=False)

    def _right_act(self, entry: Entry, u):
        """u . entry with the right-module Koszul sign."""
        du = self.left.pos[u][0]
        de = entry.degree() or 0
        sgn = ONE if (du * de) % 2 == 0 else -ONE
        return [(u2, sgn * c) for u2, c in self.left.act(entry.coords, u)]

    def map_left_into(self, other: "TensorOverAlgebra", g: ChainMap) -> ChainMap:
        """Induced map of tensors from a degree-0 chain map g between the
        left realizations (same semi-free right factor)."""
        blocks = {}
        for p, keys in self.basis.items():
            tkeys = other.basis.get(p, [])
            if not tkeys:
                continue
            rows = [[ZERO] * len(keys) for _ in tkeys]
            for c, (i, u) in enumerate(keys):
                du, ru = self.left.pos[u]
                gb = g.block(du)
                for r2 in range(other.left.complex.dim(du)):
                    coeff = gb.entries[r2][ru]
                    if coeff:
                        u2 = other.left.basis[du][r2]
                        rows[other.pos[(i, u2)][1]][c] += coeff
            blocks[p] = RationalMatrix(len(tkeys), len(keys), rows)
        return ChainMap(self.complex, other.complex, 0, blocks)

    def map_tensor(self, g: Optional[ChainMap], f: Optional[ModuleMap]) -> ChainMap:
        """g (x) f with g a chain map on the left realization (None = id)
        and f a module map of M into itself (None = id)."""
        deg_g = g.degree if g is not None else 0
        deg_f = f.degree if f is not None else 0
        deg = deg_g + deg_f
        blocks = {}
        for p, keys in self.basis.items():
            tgt = self.basis.get(p + deg, [])
            if not tgt:
                continue
            rows = [[ZERO] * len(keys) for _ in tgt]
            for c, (i, u) in enumerate(keys):
                du, ru = self.left.pos[u]
                images_u: List[Tuple[object, Fraction]] = []
                if g is None:
                    images_u.append((u, ONE))
                else:
                    gb = g.block(du)
                    for r2 in range(self.left.complex.dim(du + deg_g)):
                        coeff = gb.entries[r2][ru]
                        if coeff:
                            images_u.append((self.left.basis[du + deg_g][r2], coeff))
                sgn = ONE if (deg_f * du) % 2 == 0 else -ONE
                for u2, cu in images_u:
                    if f is None:
                        rows[self.pos[(i, u2)][1]][c] += sgn * cu
                    else:
                        for j in range(f.target.rank):
                            entry = f.entries[j][i]
                            if entry.is_zero():
                                continue
                            for u3, ce in self._right_act(entry, u2):
                                rows[self.pos[(j, u3)][1]][c] += sgn * cu * ce
            blocks[p] = RationalMatrix(len(tgt), len(keys), rows)
        return ChainMap(self.complex, self.complex, deg, blocks)


def explicit_over_opposite(p: PerfectModule) -> Tuple[ExplicitModule, Optional[ChainMap]]:
    """Explicit realization of a right module given as a module over A^op."""
    ex = p.module.to_explicit()
    e = p.idempotent.restrict() if p.idempotent is not None else None
    return ex, e


def tensor_over_algebra(n: PerfectModule, m: PerfectModule,
                        a: Optional[DgAlgebra] = None) -> SplitComplex:
    """Derived tensor N (x)_A M of a right module (over A^op) and a left
    module (over A), both on semi-free presentations.  Idempotents on either
    side induce a closed idempotent on the result."""
    from .algebras import opposite
    if a is None:
        a = m.module.algebra
    if not opposite(n.module.algebra).same_structure(a):
        raise AlgebraMismatch("left factor must live over the opposite algebra")
    if not m.module.algebra.same_structure(a):
        raise AlgebraMismatch("right factor lives over a different algebra")
    left, e_left = explicit_over_opposite(n)
    t = TensorOverAlgebra(left, m.module)
    projector = None
    if e_left is not None or m.idempotent is not None:
        projector = t.map_tensor(e_left, m.idempotent)
    sc = SplitComplex(t.complex, projector)
    sc.realization = t  # downstream map construction
    return sc


# ---------------------------------------------------------------------------
# Hom over the algebra
# ---------------------------------------------------------------------------

class HomOverAlgebra:
    """Hom_A(M, X) for semi-free M and explicit X: basis (generator i, key u)
    with deg = deg(u) + s_i, differential
    d(phi)(g_i) = D_X(phi(g_i)) - (-1)^n sum_j +- delta_ji . phi(g_j)."""

    def __init__(self, m: SemiFreeModule, target: ExplicitModule):
        self.m = m
        self.target = target
        basis: Dict[int, List] = {}
        for i in range(m.rank):
            for p, keys in target.basis.items():
                deg = p + m.shifts[i]
                for u in keys:
                    basis.setdefault(deg, []).append((i, u))
        for p in basis:
            basis[p].sort(key=lambda t: (t[0], target.pos[t[1]][1]))
        self.basis = basis
        self.pos = {}
        for p, ks in basis.items():
            for r, k in enumerate(ks):
                self.pos[k] = (p, r)
        space = GradedSpace({p: len(ks) for p, ks in basis.items()})
        diff: Dict[int, RationalMatrix] = {}
        for n_deg, keys in basis.items():
            tgt = basis.get(n_deg + 1, [])
            if not tgt:
                continue
            rows = [[ZERO] * len(keys) for _ in tgt]
            sgn_n = ONE if n_deg % 2 == 0 else -ONE
            for c, (i, u) in enumerate(keys):
                du, ru = target.pos[u]
                dmat = target.complex.d(du)
                for r2 in range(target.complex.dim(du + 1)):
                    coeff = dmat.entries[r2][ru]
                    if coeff:
                        u2 = target.basis[du + 1][r2]
                        rows[self.pos[(i, u2)][1]][c] += coeff
                # phi = (i, u) sends g_i to u; the twist column entries
                # delta[i][i2] feed g_{i2} for i2 < i.
                for i2 in range(i):
                    entry = self.m.twist[i][i2]
                    if entry.is_zero():
                        continue
                    de = entry.degree() or 0
                    sw = ONE if (n_deg * de) % 2 == 0 else -ONE
                    for u2, coeff in target.act(entry.coords, u):
                        rows[self.pos[(i2, u2)][1]][c] -= sgn_n * sw * coeff
            diff[n_deg] = RationalMatrix(len(tgt), len(keys), rows)
        self.complex = Complex(space, diff, check=False)

    def precompose(self, e: ModuleMap) -> ChainMap:
        """phi -> phi . e for a degree-0 map e of the source; Koszul sign
        (-1)^{n |entry|} with n the Hom degree."""
        blocks = {}
        for p, keys in self.basis.items():
            rows = [[ZERO] * len(keys) for _ in keys]
            for c, (j, u) in enumerate(keys):
                for i in range(self.m.rank):
                    entry = e.entries[j][i]
                    if entry.is_zero():
                        continue
                    de = entry.degree() or 0
                    sw = ONE if (p * de) % 2 == 0 else -ONE
                    for u2, coeff in self.target.act(entry.coords, u):
                        rows[self.pos[(i, u2)][1]][c] += sw * coeff
            blocks[p] = RationalMatrix(len(keys), len(keys), rows)
        return ChainMap(self.complex, self.complex, 0, blocks)

    def postcompose(self, g: ChainMap) -> ChainMap:
        """phi -> g . phi for a degree-0 chain map g on the target."""
        blocks = {}
        for p, keys in self.basis.items():
            rows = [[ZERO] * len(keys) for _ in keys]
            for c, (i, u) in enumerate(keys):
                du, ru = self.target.pos[u]
                gb = g.block(du)
                for r2 in range(self.target.complex.dim(du)):
                    coeff = gb.entries[r2][ru]
                    if coeff:
                        u2 = self.target.basis[du][r2]
                        rows[self.pos[(i, u2)][1]][c] += coeff
            blocks[p] = RationalMatrix(len(keys), len(keys), rows)
        return ChainMap(self.complex, self.complex, 0, blocks)

    def postcompose_into(self, other: "HomOverAlgebra", g: ChainMap) -> ChainMap:
        """phi -> g . phi for a degree-0 chain map g: self.target ->
        other.target (same semi-free source)."""
        blocks = {}
        for p, keys in self.basis.items():
            tkeys = other.basis.get(p, [])
            if not tkeys:
                continue
            rows = [[ZERO] * len(keys) for _ in tkeys]
            for c, (i, u) in enumerate(keys):
                du, ru = self.target.pos[u]
                gb = g.block(du)
                for r2 in range(other.target.complex.dim(du)):
                    coeff = gb.entries[r2][ru]
                    if coeff:
                        u2 = other.target.basis[du][r2]
                        rows[other.pos[(i, u2)][1]][c] += coeff
            blocks[p] = RationalMatrix(len(tkeys), len(keys), rows)
        return ChainMap(self.complex, other.complex, 0, blocks)


def semifree_map_to_explicit(m: SemiFreeModule, target: ExplicitModule,
                             values) -> ChainMap:
    """Module map from a semi-free module to an explicit one, given by the
    images of the generators (sparse (key, coeff) lists); degree 0,
    degree-0 algebras."""
    ex = m.to_explicit()
    a = m.algebra
    blocks = {}
    for p, keys in ex.basis.items():
        tdim = target.complex.dim(p)
        if tdim == 0:
            continue
        rows = [[ZERO] * len(keys) for _ in range(tdim)]
        for c, (i, bidx) in enumerate(keys):
            terms = values[i]
            if not terms:
                continue
            eb = tuple(ONE if t == bidx else ZERO for t in range(a.dim))
            for key, coeff in terms:
                for key2, c2 in target.act(eb, key):
                    p2, r2 = target.pos[key2]
                    if p2 != p:
                        raise DegreeViolation("generator image has wrong degree")
                    rows[r2][c] += coeff * c2
        blocks[p] = RationalMatrix(tdim, len(keys), rows)
    return ChainMap(ex.complex, target.complex, 0, blocks)

    def element_to_map(self, n_deg: int, coords, target_module: SemiFreeModule) -> ModuleMap:
        """Unpack Hom coordinates into a ModuleMap when the explicit target
        came from a semi-free module (keys are (j, b) pairs)."""
        a = self.m.algebra
        rows = [[a.zero() for _ in range(self.m.rank)]
                for _ in range(target_module.rank)]
        for coeff, (i, u) in zip(coords, self.basis.get(n_deg, [])):
            if coeff:
                j, b = u
                vec = [ZERO] * a.dim
                vec[b] = coeff
                rows[j][i] = rows[j][i] + a.element(vec)
        return ModuleMap(self.m, target_module, n_deg, rows)


def hom_over_algebra(m: PerfectModule, n: PerfectModule) -> SplitComplex:
    """Hom_A(M, N) as an explicit complex; idempotents on either side induce
    the compression phi -> e_N . phi . e_M."""
    if not m.module.algebra.same_structure(n.module.algebra):
        raise AlgebraMismatch("Hom across different algebras")
    h = HomOverAlgebra(m.module, n.module.to_explicit())
    projector = None
    if m.idempotent is not None or n.idempotent is not None:
        maps = []
        if m.idempotent is not None:
            maps.append(h.precompose(m.idempotent))
        if n.idempotent is not None:
            maps.append(h.postcompose(n.idempotent.restrict()))
        projector = maps[0]
        for extra in maps[1:]:
            projector = extra.compose(projector)
    sc = SplitComplex(h.complex, projector)
    sc.realization = h
    return sc


def closed_map_space(m: PerfectModule, n: PerfectModule, degree: int = 0):
    """Basis of closed degree-`degree` maps M -> N (chain level, before
    compression), as ModuleMaps.  Used by the randomized samplers."""
    from .linalg import rank_kernel_image
    h = HomOverAlgebra(m.module, n.module.to_explicit())
    if degree not in h.basis:
        return h, []
    d = h.complex.d(degree)
    _, ker, _ = rank_kernel_image(d)
    return h, list(ker.basis)
