"""Finitely supported cochain complexes over Q and their calculus.

Conventions, fixed once for the whole package:

* cohomological grading, differentials raise degree by 1;
* Hom differential  d(f) = d_N . f - (-1)^{|f|} f . d_M;
* shift  M[n]^p = M^{n+p}  with differential (-1)^n d;
* cone(p) = (L[1] (+) M, [[d_{L[1]}, 0], [p, d_M]]), basis L[1]-part first;
* tensor  d(v (x) w) = dv (x) w + (-1)^{|v|} v (x) dw  (Koszul sign on the
  left factor -- the only sign rule compatible with d^2 = 0);
* map tensor  (f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w).

Basis orders are always lexicographic (degree, then left/source index), so
every matrix produced here is reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from .errors import DifferentialSquareViolation, DimensionMismatch, NotClosed, WrongDegree
from .linalg import (ONE, ZERO, RationalMatrix, rank_kernel_image, rank_of, solve,
                     solve_matrix)


class GradedSpace:
    """Finitely supported map degree -> dimension."""

    __slots__ = ("dims",)

    def __init__(self, dims: Mapping[int, int]):
        clean = {}
        for p in sorted(dims):
            d = dims[p]
            if d < 0:
                raise DimensionMismatch("negative dimension")
            if d:
                clean[int(p)] = int(d)
        self.dims = clean

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def degrees(self):
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def shift(self, n: int) -> "GradedSpace":
        return GradedSpace({p - n: d for p, d in self.dims.items()})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __hash__(self):
        return hash(tuple(sorted(self.dims.items())))

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class Complex:
    """Cochain complex: graded space plus degree +1 differential.

    `diff[p]` is the matrix of d^p: C^p -> C^{p+1}; it is stored exactly for
    the degrees where both source and target are nonzero.
    """

    __slots__ = ("space", "diff")

    def __init__(self, space: GradedSpace, diff: Mapping[int, RationalMatrix],
                 check: bool = True):
        self.space = space
        clean: Dict[int, RationalMatrix] = {}
        for p in sorted(space.dims):
            np_, nq = space.dim(p), space.dim(p + 1)
            if nq == 0:
                continue
            m = diff.get(p)
            if m is None:
                m = RationalMatrix.zeros(nq, np_)
            if (m.rows, m.cols) != (nq, np_):
                raise DimensionMismatch(f"d^{p} must be {nq}x{np_}")
            clean[p] = m
        self.diff = clean
        if check:
            self.check_d_squared()

    @classmethod
    def zero(cls) -> "Complex":
        return cls(GradedSpace({}), {})

    @classmethod
    def concentrated(cls, degree: int, dim: int) -> "Complex":
        return cls(GradedSpace({degree: dim}), {})

    @classmethod
    def unit(cls) -> "Complex":
        """The ground field in degree 0."""
        return cls.concentrated(0, 1)

    def d(self, p: int) -> RationalMatrix:
        m = self.diff.get(p)
        if m is None:
            return RationalMatrix.zeros(self.space.dim(p + 1), self.space.dim(p))
        return m

    def check_d_squared(self):
        for p in self.space.degrees():
            if self.space.dim(p + 2) and self.space.dim(p):
                if not (self.d(p + 1) @ self.d(p)).is_zero():
                    raise DifferentialSquareViolation(f"in degree {p}")

    def degrees(self):
        return self.space.degrees()

    def dim(self, p: int) -> int:
        return self.space.dim(p)

    def total_dim(self) -> int:
        return self.space.total_dim()

    def __eq__(self, other):
        if not isinstance(other, Complex) or self.space != other.space:
            return False
        return all(self.d(p) == other.d(p) for p in self.space.degrees())

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"Complex(dims={self.space.dims})"


class ChainMap:
    """Graded map between complexes; `blocks[p]`: source^p -> target^{p+degree}.

    Closedness (commuting with the differentials up to the trace of the Hom
    differential, d_N . f = (-1)^{degree} f . d_M) is testable, not assumed.
    """

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(self, source: Complex, target: Complex, degree: int,
                 blocks: Mapping[int, RationalMatrix]):
        self.source = source
        self.target = target
        self.degree = degree
        clean: Dict[int, RationalMatrix] = {}
        for p in sorted(source.space.dims):
            np_, nq = source.dim(p), target.dim(p + degree)
            if nq == 0:
                continue
            m = blocks.get(p)
            if m is None:
                m = RationalMatrix.zeros(nq, np_)
            if (m.rows, m.cols) != (nq, np_):
                raise DimensionMismatch(f"block {p} must be {nq}x{np_}")
            clean[p] = m
        self.blocks = clean

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, 0, {p: RationalMatrix.identity(c.dim(p))
                             for p in c.degrees()})

    @classmethod
    def zero(cls, source: Complex, target: Complex, degree: int = 0) -> "ChainMap":
        return cls(source, target, degree, {})

    def block(self, p: int) -> RationalMatrix:
        m = self.blocks.get(p)
        if m is None:
            return RationalMatrix.zeros(self.target.dim(p + self.degree),
                                        self.source.dim(p))
        return m

    def is_closed(self) -> bool:
        n = self.degree
        sgn = ONE if n % 2 == 0 else -ONE
        for p in self.source.degrees():
            lhs = self.target.d(p + n) @ self.block(p)
            rhs = (self.block(p + 1) @ self.source.d(p)).scale(sgn)
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self . other (other applied first)."""
        if other.target is not self.source and other.target != self.source:
            raise DimensionMismatch("chain map composition mismatch")
        deg = self.degree + other.degree
        blocks = {}
        for p in other.source.degrees():
            blocks[p] = self.block(p + other.degree) @ other.block(p)
        return ChainMap(other.source, self.target, deg, blocks)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.degree != other.degree:
            raise WrongDegree("adding maps of different degrees")
        return ChainMap(self.source, self.target, self.degree,
                        {p: self.block(p) + other.block(p)
                         for p in self.source.degrees()
                         if self.target.dim(p + self.degree)})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, self.degree,
                        {p: m.scale(c) for p, m in self.blocks.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return False
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            return False
        return all(self.block(p) == other.block(p) for p in self.source.degrees())

    def __repr__(self):
        return f"ChainMap(degree={self.degree})"


def shift(c: Complex, n: int) -> Complex:
    """c[n]: degree p part is c^{n+p}, differential scaled by (-1)^n."""
    space = c.space.shift(n)
    sgn = ONE if n % 2 == 0 else -ONE
    diff = {p - n: c.d(p).scale(sgn) for p in c.space.degrees() if c.dim(p + 1)}
    return Complex(space, diff, check=False)


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n), f.degree,
                    {p - n: f.block(p) for p in f.source.degrees()
                     if f.target.dim(p + f.degree)})


def _direct_sum_space(a: GradedSpace, b: GradedSpace) -> GradedSpace:
    degs = set(a.dims) | set(b.dims)
    return GradedSpace({p: a.dim(p) + b.dim(p) for p in degs})


def cone(p: ChainMap):
    """Mapping cone of a closed degree-0 map p: L -> M.

    Returns (cone complex, r, q) where r: cone -> L[1] is the projection and
    q: M -> cone the inclusion.  Basis in each degree: L[1]-part then M-part.
    """
    if p.degree != 0:
        raise WrongDegree("cone needs a degree-0 map")
    if not p.is_closed():
        raise NotClosed("cone needs a closed map")
    L, M = p.source, p.target
    L1 = shift(L, 1)
    space = _direct_sum_space(L1.space, M.space)
    diff = {}
    for deg in space.degrees():
        if space.dim(deg + 1) == 0:
            continue
        nl, nm = L1.dim(deg), M.dim(deg)
        nl1, nm1 = L1.dim(deg + 1), M.dim(deg + 1)
        rows = []
        dl = L1.d(deg)
        dm = M.d(deg)
        pm = p.block(deg + 1)  # L^{deg+1} = L1^{deg} -> M^{deg+1}
        for i in range(nl1):
            rows.append(list(dl.entries[i]) + [ZERO] * nm)
        for i in range(nm1):
            rows.append([pm.entries[i][j] for j in range(nl)] + list(dm.entries[i]))
        diff[deg] = RationalMatrix(nl1 + nm1, nl + nm, rows)
    cn = Complex(space, diff, check=False)
    r = ChainMap(cn, L1, 0,
                 {deg: RationalMatrix(L1.dim(deg), space.dim(deg),
                                      [[ONE if j == i else ZERO
                                        for j in range(space.dim(deg))]
                                       for i in range(L1.dim(deg))])
                  for deg in space.degrees() if L1.dim(deg)})
    q = ChainMap(M, cn, 0,
                 {deg: RationalMatrix(space.dim(deg), M.dim(deg),
                                      [[ONE if i == L1.dim(deg) + j else ZERO
                                        for j in range(M.dim(deg))]
                                       for i in range(space.dim(deg))])
                  for deg in M.degrees() if space.dim(deg)})
    return cn, r, q


def direct_sum(a: Complex, b: Complex):
    """a (+) b with inclusion maps; basis a-part first in every degree."""
    space = _direct_sum_space(a.space, b.space)
    diff = {}
    for deg in space.degrees():
        if space.dim(deg + 1) == 0:
            continue
        na, nb = a.dim(deg), b.dim(deg)
        na1, nb1 = a.dim(deg + 1), b.dim(deg + 1)
        rows = []
        da, db = a.d(deg), b.d(deg)
        for i in range(na1):
            rows.append(list(da.entries[i]) + [ZERO] * nb)
        for i in range(nb1):
            rows.append([ZERO] * na + list(db.entries[i]))
        diff[deg] = RationalMatrix(na1 + nb1, na + nb, rows)
    return Complex(space, diff, check=False)


def direct_sum_map(f: ChainMap, g: ChainMap) -> ChainMap:
    if f.degree != g.degree:
        raise WrongDegree("direct sum of maps of different degrees")
    src = direct_sum(f.source, g.source)
    tgt = direct_sum(f.target, g.target)
    blocks = {}
    for p in src.degrees():
        if tgt.dim(p + f.degree) == 0:
            continue
        nf, ng = f.source.dim(p), g.source.dim(p)
        mf, mg = f.target.dim(p + f.degree), g.target.dim(p + f.degree)
        fb, gb = f.block(p), g.block(p)
        rows = []
        for i in range(mf):
            rows.append(list(fb.entries[i]) + [ZERO] * ng)
        for i in range(mg):
            rows.append([ZERO] * nf + list(gb.entries[i]))
        blocks[p] = RationalMatrix(mf + mg, nf + ng, rows)
    return ChainMap(src, tgt, f.degree, blocks)


class Cohomology:
    """Cohomology of a complex with deterministic chosen representatives.

    Per degree p we keep the canonical kernel basis K of d^p and the
    first-pivot presentation of ker/im: `project(p)` maps kernel coordinates
    to H^p coordinates and `representatives(p)` returns cycle representatives
    as columns in ambient coordinates.
    """

    def __init__(self, c: Complex):
        from .linalg import SubspacePresentation, quotient_presentation
        self.complex = c
        self._kernel = {}
        self._project = {}
        self._section = {}
        dims = {}
        for p in c.degrees():
            _, ker, _ = rank_kernel_image(c.d(p))
            kmat = RationalMatrix.from_columns(list(ker.basis), nrows=c.dim(p))
            # image of d^{p-1} inside kernel coordinates
            img_cols = []
            dprev = c.d(p - 1)
            if c.dim(p - 1):
                _, _, img = rank_kernel_image(dprev)
                for v in img.basis:
                    coords = solve(kmat, v)
                    if coords is None:
                        raise DifferentialSquareViolation(f"image not in kernel at {p}")
                    img_cols.append(coords)
            sub = SubspacePresentation(kmat.cols, tuple(img_cols))
            proj, section = quotient_presentation(kmat.cols, sub)
            self._kernel[p] = kmat
            self._project[p] = proj
            self._section[p] = section
            if proj.rows:
                dims[p] = proj.rows
        self.dims = GradedSpace(dims)

    def dim(self, p: int) -> int:
        return self.dims.dim(p)

    def representatives(self, p: int) -> RationalMatrix:
        """Columns: chosen cycle representatives of a basis of H^p."""
        return self._kernel[p] @ self._section[p]

    def project_cycles(self, p: int, cycles: RationalMatrix) -> RationalMatrix:
        """Columns must be cycles in degree p; returns their H^p coordinates."""
        if p not in self._kernel:
            return RationalMatrix.zeros(0, cycles.cols)
        coords = solve_matrix(self._kernel[p], cycles)
        if coords is None:
            raise NotClosed("asked to project a non-cycle")
        return self._project[p] @ coords

    def induced_map(self, f: ChainMap) -> Dict[int, RationalMatrix]:
        """H^p(f) for a closed map f (degree n allowed): H^p(src) -> H^{p+n}(tgt)."""
        tgt = Cohomology(f.target) if f.target is not self.complex else self
        out = {}
        for p in self.complex.degrees():
            h = self.dim(p)
            if h == 0:
                continue
            reps = self.representatives(p)
            img = f.block(p) @ reps
            out[p] = tgt.project_cycles(p + f.degree, img)
        return out


def cohomology(c: Complex) -> Cohomology:
    return Cohomology(c)


def cohomology_dims(c: Complex) -> GradedSpace:
    """dim H^p = dim ker d^p - rank d^{p-1}, computed by ranks only."""
    ranks = {p: rank_of(c.d(p)) for p in c.degrees()}
    dims = {}
    for p in c.degrees():
        h = c.dim(p) - ranks.get(p, 0) - ranks.get(p - 1, 0)
        if h:
            dims[p] = h
    return GradedSpace(dims)


def is_acyclic(c: Complex) -> bool:
    return cohomology_dims(c).total_dim() == 0


def is_quasi_iso(f: ChainMap) -> bool:
    """Quasi-isomorphism test by acyclicity of the cone (degree 0 closed f)."""
    cn, _, _ = cone(f)
    return is_acyclic(cn)


def _tensor_basis(a: GradedSpace, b: GradedSpace, n: int):
    """Ordered basis of (a (x) b)^n: (p, i, j) with p ascending, i major."""
    out = []
    for p in a.degrees():
        q = n - p
        if b.dim(q):
            for i in range(a.dim(p)):
                for j in range(b.dim(q)):
                    out.append((p, i, j))
    return out


def tensor(a: Complex, b: Complex) -> Complex:
    """a (x) b with d(v (x) w) = dv (x) w + (-1)^{|v|} v (x) dw."""
    dims = {}
    degs_a, degs_b = a.degrees(), b.degrees()
    for p in degs_a:
        for q in degs_b:
            dims[p + q] = dims.get(p + q, 0) + a.dim(p) * b.dim(q)
    space = GradedSpace(dims)
    index = {}
    bases = {}
    for n in space.degrees():
        basis = _tensor_basis(a.space, b.space, n)
        bases[n] = basis
        index[n] = {t: i for i, t in enumerate(basis)}
    diff = {}
    for n in space.degrees():
        if space.dim(n + 1) == 0:
            continue
        rows = [[ZERO] * space.dim(n) for _ in range(space.dim(n + 1))]
        tgt = index[n + 1]
        for col, (p, i, j) in enumerate(bases[n]):
            q = n - p
            da = a.d(p)
            for i2 in range(a.dim(p + 1)):
                cval = da.entries[i2][i]
                if cval:
                    rows[tgt[(p + 1, i2, j)]][col] += cval
            sgn = ONE if p % 2 == 0 else -ONE
            db = b.d(q)
            for j2 in range(b.dim(q + 1)):
                cval = db.entries[j2][j]
                if cval:
                    rows[tgt[(p, i, j2)]][col] += sgn * cval
        diff[n] = RationalMatrix(space.dim(n + 1), space.dim(n), rows)
    return Complex(space, diff, check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """(f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    deg = f.degree + g.degree
    blocks = {}
    for n in src.degrees():
        if tgt.dim(n + deg) == 0:
            continue
        src_basis = _tensor_basis(f.source.space, g.source.space, n)
        tgt_basis = _tensor_basis(f.target.space, g.target.space, n + deg)
        tidx = {t: i for i, t in enumerate(tgt_basis)}
        rows = [[ZERO] * len(src_basis) for _ in range(len(tgt_basis))]
        for col, (p, i, j) in enumerate(src_basis):
            q = n - p
            sgn = ONE if (g.degree * p) % 2 == 0 else -ONE
            fb = f.block(p)
            gb = g.block(q)
            for i2 in range(f.target.dim(p + f.degree)):
                cf = fb.entries[i2][i]
                if cf:
                    for j2 in range(g.target.dim(q + g.degree)):
                        cg = gb.entries[j2][j]
                        if cg:
                            rows[tidx[(p + f.degree, i2, j2)]][col] += sgn * cf * cg
        blocks[n] = RationalMatrix(len(tgt_basis), len(src_basis), rows)
    return ChainMap(src, tgt, deg, blocks)


def _hom_basis(a: GradedSpace, b: GradedSpace, n: int):
    """Ordered basis of Hom(a, b)^n: (p, j, i) = (source degree, source index,
    target index), source index major within a block."""
    out = []
    for p in a.degrees():
        if b.dim(p + n):
            for j in range(a.dim(p)):
                for i in range(b.dim(p + n)):
                    out.append((p, j, i))
    return out


def hom_complex(a: Complex, b: Complex) -> Complex:
    """Hom(a, b) with d(f) = d_b . f - (-1)^{|f|} f . d_a.

    Degree-n component is the product over p of Hom(a^p, b^{p+n}); its closed
    degree-0 elements are exactly the chain maps a -> b.
    """
    dims = {}
    for p in a.degrees():
        for q in b.degrees():
            n = q - p
            dims[n] = dims.get(n, 0) + a.dim(p) * b.dim(q)
    space = GradedSpace(dims)
    bases = {n: _hom_basis(a.space, b.space, n) for n in space.degrees()}
    diff = {}
    for n in space.degrees():
        if space.dim(n + 1) == 0:
            continue
        src_basis = bases[n]
        tgt_basis = bases[n + 1]
        tidx = {t: k for k, t in enumerate(tgt_basis)}
        rows = [[ZERO] * len(src_basis) for _ in range(len(tgt_basis))]
        sgn = ONE if n % 2 == 0 else -ONE
        for col, (p, j, i) in enumerate(src_basis):
            # d_b . f part: lands in Hom(a^p, b^{p+n+1})
            db = b.d(p + n)
            for i2 in range(b.dim(p + n + 1)):
                c = db.entries[i2][i]
                if c:
                    rows[tidx[(p, j, i2)]][col] += c
            # - (-1)^n f . d_a part: lands in Hom(a^{p-1}, b^{p+n})
            da = a.d(p - 1)
            for j2 in range(a.dim(p - 1)):
                c = da.entries[j][j2]
                if c:
                    rows[tidx[(p - 1, j2, i)]][col] -= sgn * c
        diff[n] = RationalMatrix(len(tgt_basis), len(src_basis), rows)
    return Complex(space, diff, check=False)


def hom_element_to_map(a: Complex, b: Complex, n: int, coords) -> ChainMap:
    """Unpack coordinates in Hom(a,b)^n into a (possibly non-closed) map."""
    basis = _hom_basis(a.space, b.space, n)
    if len(coords) != len(basis):
        raise DimensionMismatch("wrong number of Hom coordinates")
    blocks = {}
    for p in a.degrees():
        if b.dim(p + n):
            blocks[p] = [[ZERO] * a.dim(p) for _ in range(b.dim(p + n))]
    for c, (p, j, i) in zip(coords, basis):
        if c:
            blocks[p][i][j] = c
    return ChainMap(a, b, n, {p: RationalMatrix(b.dim(p + n), a.dim(p), rows)
                              for p, rows in blocks.items()})


def map_to_hom_element(f: ChainMap):
    """Coordinates of a map in the Hom-complex basis."""
    basis = _hom_basis(f.source.space, f.target.space, f.degree)
    out = []
    for (p, j, i) in basis:
        out.append(f.block(p).entries[i][j])
    return tuple(out)


def linear_dual(c: Complex) -> Complex:
    """c^* with (c^*)^p = (c^{-p})^* and differential -(-1)^p (d^{-p-1})^T.

    This is Hom(c, unit) on the nose, including basis order.
    """
    dims = {-p: d for p, d in c.space.dims.items()}
    space = GradedSpace(dims)
    diff = {}
    for p in space.degrees():
        if space.dim(p + 1) == 0:
            continue
        m = c.d(-p - 1).transpose()
        sgn = -ONE if p % 2 == 0 else ONE
        diff[p] = m.scale(sgn)
    return Complex(space, diff, check=False)


def linear_dual_map(f: ChainMap) -> ChainMap:
    """f^*: target^* -> source^*, (f^* phi) = (-1)^{|f||phi|} phi . f."""
    src = linear_dual(f.target)
    tgt = linear_dual(f.source)
    blocks = {}
    for p in src.degrees():
        # src^p = (target^{-p})^*, lands in (source^{-p-degree})^*
        if tgt.dim(p + f.degree) == 0:
            continue
        m = f.block(-p - f.degree).transpose()
        sgn = ONE if (f.degree * p) % 2 == 0 else -ONE
        blocks[p] = m.scale(sgn)
    return ChainMap(src, tgt, f.degree, blocks)


def chain_supertrace(f: ChainMap) -> Fraction:
    """Alternating sum of block traces of a degree-0 endomorphism."""
    if f.source != f.target:
        raise DimensionMismatch("supertrace needs an endomorphism")
    if f.degree != 0:
        raise WrongDegree("supertrace needs degree 0")
    total = ZERO
    for p in f.source.degrees():
        t = f.block(p).trace()
        total += t if p % 2 == 0 else -t
    return total


def euler_trace(f: ChainMap) -> Fraction:
    """Alternating sum of traces of H^p(f), for closed degree-0 endos.

    Agrees exactly with chain_supertrace on every closed map.
    """
    if f.source != f.target:
        raise DimensionMismatch("euler trace needs an endomorphism")
    if f.degree != 0:
        raise WrongDegree("euler trace needs degree 0")
    if not f.is_closed():
        raise NotClosed("euler trace needs a closed map")
    coh = Cohomology(f.source)
    total = ZERO
    for p in coh.dims.degrees():
        reps = coh.representatives(p)
        mat = coh.project_cycles(p, f.block(p) @ reps)
        t = mat.trace()
        total += t if p % 2 == 0 else -t
    return total


def euler_characteristic(c: Complex) -> Fraction:
    return chain_supertrace(ChainMap.identity(c))


def image_complex(e: ChainMap):
    """Split a closed exact idempotent: the image of e as a complex.

    Returns (image, include, project) with project . include = id and
    include . project = e.  Exactness (e . e = e on the nose) makes the
    image a direct summand over the ground field.
    """
    if e.source != e.target or e.degree != 0:
        raise WrongDegree("idempotent must be a degree-0 endomorphism")
    if e.compose(e) != e:
        raise IdempotentNotExact("e . e != e")
    if not e.is_closed():
        raise NotClosed("idempotent must be closed")
    c = e.source
    incl_cols = {}
    dims = {}
    for p in c.degrees():
        _, _, img = rank_kernel_image(e.block(p))
        cols = list(img.basis)
        incl_cols[p] = RationalMatrix.from_columns(cols, nrows=c.dim(p))
        if cols:
            dims[p] = len(cols)
    # projection: coordinates of e(x) in the image basis
    proj = {}
    for p in dims:
        sol = solve_matrix(incl_cols[p], e.block(p))
        if sol is None:
            raise IdempotentNotExact("image basis does not span e")
        proj[p] = sol
    diff = {}
    for p in dims:
        if dims.get(p + 1, 0) == 0:
            continue
        diff[p] = proj[p + 1] @ (c.d(p) @ incl_cols[p])
    img = Complex(GradedSpace(dims), diff, check=False)
    include = ChainMap(img, c, 0, {p: incl_cols[p] for p in dims})
    project = ChainMap(c, img, 0, proj)
    return img, include, project


class IdempotentNotExact(DimensionMismatch):
    pass


class SplitComplex:
    """A complex together with an optional closed exact idempotent; models
    the image summand without always materializing it."""

    def __init__(self, carrier: Complex, projector: Optional[ChainMap] = None):
        self.carrier = carrier
        self.projector = projector
        self._image = None

    def image(self) -> Complex:
        if self.projector is None:
            return self.carrier
        if self._image is None:
            self._image = image_complex(self.projector)
        return self._image[0]

    def compress(self, f: ChainMap) -> ChainMap:
        """e . f . e on the carrier (f itself when there is no idempotent)."""
        if self.projector is None:
            return f
        return self.projector.compose(f).compose(self.projector)

    def supertrace(self, f: ChainMap) -> Fraction:
        """Supertrace of the endomorphism induced on the image summand.

        For a closed exact idempotent e and any f, e.f.e restricted to the
        complement is zero, so the plain supertrace of e.f.e computes it.
        """
        return chain_supertrace(self.compress(f))

    def cohomology_dims(self) -> GradedSpace:
        return cohomology_dims(self.image())

    def euler_trace(self, f: ChainMap) -> Fraction:
        """Euler trace on the image summand of a closed f commuting with e."""
        if self.projector is None:
            return euler_trace(f)
        img, incl, proj = self._split()
        return euler_trace(proj.compose(f).compose(incl))

    def _split(self):
        if self.projector is None:
            raise DimensionMismatch("no idempotent to split")
        if self._image is None:
            self._image = image_complex(self.projector)
        return self._image
