"""Seeded random instances: modules, closed maps, verification batches.

Random perfect modules are built the way semi-free modules are defined:
cones of maps between shifted frees (any degree-compatible matrix between
frees is closed), optionally direct-summed with an idempotent-compressed
free.  Random closed endomorphisms are drawn from the exact kernel of the
entry-level closedness system, so every sample is closed on the nose.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .algebras import DgAlgebra
from .errors import NotClosed
from .linalg import ONE, ZERO, RationalMatrix, rank_kernel_image
from .modules import (ModuleMap, PerfectModule, SemiFreeModule, cone_module,
                      direct_sum_modules, free_module, projective_module)
from .prng import SplitMix64

COEFF_POOL = (-2, -1, 0, 0, 1, 1, 2, 3)


def random_coeff(rng: SplitMix64) -> Fraction:
    return Fraction(COEFF_POOL[rng.below(len(COEFF_POOL))])


def random_element_of_degree(a: DgAlgebra, degree: int, rng: SplitMix64):
    coords = [ZERO] * a.dim
    for i in range(a.dim):
        if a.degrees[i] == degree:
            coords[i] = random_coeff(rng)
    return a.element(coords)


def random_free(a: DgAlgebra, rng: SplitMix64, max_rank: int = 2,
                shift_range: Tuple[int, int] = (-2, 2)) -> PerfectModule:
    rank = 1 + rng.below(max_rank)
    shifts = [rng.int_in(*shift_range) for _ in range(rank)]
    return free_module(a, shifts)


def random_map_between_frees(src: PerfectModule, tgt: PerfectModule,
                             rng: SplitMix64) -> ModuleMap:
    """Any degree-compatible matrix between frees is closed."""
    a = src.algebra
    rows = []
    for j in range(tgt.rank):
        row = []
        for i in range(src.rank):
            want = tgt.shifts[j] - src.shifts[i]
            row.append(random_element_of_degree(a, want, rng))
        rows.append(row)
    return ModuleMap(src.module, tgt.module, 0, rows, check=False)


def random_semifree(a: DgAlgebra, rng: SplitMix64, max_gens: int = 4,
                    shift_range: Tuple[int, int] = (-2, 2)) -> PerfectModule:
    """A free module or the cone of a random map between frees."""
    style = rng.below(3)
    if style == 0:
        return random_free(a, rng, max_rank=min(2, max_gens), shift_range=shift_range)
    half = max(1, max_gens // 2)
    lo, hi = shift_range
    src = random_free(a, rng, max_rank=half, shift_range=(lo, hi - 1))
    tgt = random_free(a, rng, max_rank=max_gens - src.rank,
                      shift_range=shift_range)
    p = random_map_between_frees(src, tgt, rng)
    return cone_module(p)


def random_perfect(a: DgAlgebra, rng: SplitMix64, idempotents=(),
                   max_gens: int = 4,
                   shift_range: Tuple[int, int] = (-2, 2)) -> PerfectModule:
    """Random semi-free, possibly with a projective summand."""
    base = random_semifree(a, rng, max_gens=max_gens, shift_range=shift_range)
    if idempotents and rng.below(2) == 0:
        e = a.basis_element(idempotents[rng.below(len(idempotents))])
        summand = projective_module(a, e, shift=rng.int_in(*shift_range))
        return direct_sum_modules(base, summand)
    return base


def closed_map_basis(src: SemiFreeModule, tgt: SemiFreeModule,
                     degree: int = 0) -> List[ModuleMap]:
    """Basis of the closed degree-`degree` maps src -> tgt, solved at the
    entry level (degree-0 algebras)."""
    a = src.algebra
    n = a.dim
    unknowns = []  # (j, i) pairs with an allowed entry degree
    for j in range(tgt.rank):
        for i in range(src.rank):
            want = degree + tgt.shifts[j] - src.shifts[i]
            if any(d == want for d in a.degrees):
                unknowns.append((j, i))
    coords = {}  # (j, i, w) -> column
    cols = 0
    for (j, i) in unknowns:
        want = degree + tgt.shifts[j] - src.shifts[i]
        for w in range(n):
            if a.degrees[w] == want:
                coords[(j, i, w)] = cols
                cols += 1
    if cols == 0:
        return []
    # equations: coordinates of d(phi)[l][i] = 0
    rows: List[List[Fraction]] = []
    for l in range(tgt.rank):
        for i in range(src.rank):
            want = degree + 1 + tgt.shifts[l] - src.shifts[i]
            if not any(d == want for d in a.degrees):
                continue
            eq = [[ZERO] * cols for _ in range(n)]
            # + sum_j phi[j][i] * deltaN[l][j]
            for j in range(tgt.rank):
                dn = tgt.twist[l][j]
                if dn.is_zero():
                    continue
                for w in range(n):
                    col = coords.get((j, i, w))
                    if col is None:
                        continue
                    ew = tuple(ONE if t == w else ZERO for t in range(n))
                    prod = a.multiply(ew, dn.coords)
                    for x, cx in enumerate(prod):
                        if cx:
                            eq[x][col] += cx
            # - (-1)^degree sum_j deltaM[j][i] * phi[l][j]
            sgn = ONE if degree % 2 == 0 else -ONE
            for j in range(src.rank):
                dm = src.twist[j][i]
                if dm.is_zero():
                    continue
                for w in range(n):
                    col = coords.get((l, j, w))
                    if col is None:
                        continue
                    ew = tuple(ONE if t == w else ZERO for t in range(n))
                    prod = a.multiply(dm.coords, ew)
                    for x, cx in enumerate(prod):
                        if cx:
                            eq[x][col] -= sgn * cx
            for x in range(n):
                if any(eq[x]):
                    rows.append(eq[x])
    if rows:
        mat = RationalMatrix.from_rows(rows)
        _, ker, _ = rank_kernel_image(mat)
        vectors = list(ker.basis)
    else:
        vectors = [tuple(ONE if t == c else ZERO for t in range(cols))
                   for c in range(cols)]
    out = []
    for vec in vectors:
        entries = [[a.zero() for _ in range(src.rank)] for _ in range(tgt.rank)]
        for (j, i, w), col in coords.items():
            cv = vec[col]
            if cv:
                coeffs = [ZERO] * n
                coeffs[w] = cv
                entries[j][i] = entries[j][i] + a.element(coeffs)
        out.append(ModuleMap(src, tgt, degree, entries, check=False))
    return out


def random_combination(maps: List[ModuleMap], rng: SplitMix64) -> Optional[ModuleMap]:
    if not maps:
        return None
    total = None
    for mp in maps:
        c = random_coeff(rng)
        if c:
            scaled = mp.scale(c)
            total = scaled if total is None else total + scaled
    if total is None:
        total = maps[rng.below(len(maps))]
    return total


class EndoSampler:
    """Closed endomorphisms of a fixed perfect module, basis solved once."""

    def __init__(self, p: PerfectModule):
        self.module = p
        self.basis = closed_map_basis(p.module, p.module, 0)

    def draw(self, rng: SplitMix64) -> ModuleMap:
        f = random_combination(self.basis, rng)
        if f is None:
            raise NotClosed("module admits no closed endomorphisms")
        f = self.module.compress(f)
        if not f.is_closed():
            raise NotClosed("sampled endomorphism fails closure")
        return f


def random_module_with_endos(a: DgAlgebra, rng: SplitMix64, idempotents=(),
                             max_gens: int = 4,
                             shift_range=(-2, 2)) -> Tuple[PerfectModule, EndoSampler]:
    p = random_perfect(a, rng, idempotents=idempotents, max_gens=max_gens,
                       shift_range=shift_range)
    return p, EndoSampler(p)


def random_closed_pair(a: DgAlgebra, rng: SplitMix64, max_gens: int = 3,
                       shift_range=(-1, 1)):
    """(M, N, g: M -> N, h: N -> M), both maps closed degree 0."""
    m = random_semifree(a, rng, max_gens=max_gens, shift_range=shift_range)
    n = random_semifree(a, rng, max_gens=max_gens, shift_range=shift_range)
    gs = closed_map_basis(m.module, n.module, 0)
    hs = closed_map_basis(n.module, m.module, 0)
    g = random_combination(gs, rng)
    h = random_combination(hs, rng)
    if g is None:
        g = ModuleMap.zero(m.module, n.module)
    if h is None:
        h = ModuleMap.zero(n.module, m.module)
    return m, n, g, h
