from fractions import Fraction

import pytest

from dgtrace.complexes import (ChainMap, Complex, GradedSpace, chain_supertrace,
                               cohomology_dims, cone, euler_trace, hom_complex,
                               image_complex, is_acyclic, is_quasi_iso,
                               linear_dual, shift, tensor, tensor_maps)
from dgtrace.errors import DifferentialSquareViolation
from dgtrace.linalg import RationalMatrix
from dgtrace.prng import SplitMix64

F = Fraction


def two_term(value=1):
    """k --value--> k in degrees 0, 1."""
    return Complex(GradedSpace({0: 1, 1: 1}),
                   {0: RationalMatrix.from_rows([[value]])})


def random_complex(rng, max_dim=3, degrees=(-1, 0, 1)):
    """Random complex built as the cone of a random map between complexes
    with zero differential (d^2 = 0 by construction)."""
    dims_a = {p: rng.below(max_dim + 1) for p in degrees}
    dims_b = {p: rng.below(max_dim + 1) for p in degrees}
    a = Complex(GradedSpace(dims_a), {})
    b = Complex(GradedSpace(dims_b), {})
    blocks = {}
    for p in a.degrees():
        if b.dim(p):
            blocks[p] = RationalMatrix.from_rows(
                [[F(rng.int_in(-2, 2)) for _ in range(a.dim(p))]
                 for _ in range(b.dim(p))])
    cn, _, _ = cone(ChainMap(a, b, 0, blocks))
    return cn


def test_d_squared_enforced():
    bad = {0: RationalMatrix.from_rows([[1]]), 1: RationalMatrix.from_rows([[1]])}
    with pytest.raises(DifferentialSquareViolation):
        Complex(GradedSpace({0: 1, 1: 1, 2: 1}), bad)


def test_shift_zero_is_identity():
    c = two_term()
    assert shift(c, 0) == c


def test_shift_moves_unit():
    c = Complex.unit()
    assert shift(c, 1).space.dims == {-1: 1}


def test_shift_sign():
    c = two_term()
    assert shift(c, 1).d(-1) == RationalMatrix.from_rows([[-1]])


def test_cone_of_identity_acyclic():
    c = two_term()
    cn, r, q = cone(ChainMap.identity(c))
    assert is_acyclic(cn)
    assert r.is_closed() and q.is_closed()


def test_cone_of_zero_splits():
    k = Complex.unit()
    z = ChainMap.zero(k, k)
    cn, _, _ = cone(z)
    assert cn.space.dims == {-1: 1, 0: 1}
    assert cohomology_dims(cn).dims == {-1: 1, 0: 1}


def test_cone_of_doubling_acyclic():
    k = Complex.unit()
    two = ChainMap(k, k, 0, {0: RationalMatrix.from_rows([[2]])})
    cn, _, _ = cone(two)
    assert cohomology_dims(cn).total_dim() == 0


def test_cohomology_zero_differential():
    c = Complex(GradedSpace({0: 2, 3: 1}), {})
    assert cohomology_dims(c) == c.space


def test_cohomology_rank_count():
    c = Complex(GradedSpace({0: 2, 1: 1}),
                {0: RationalMatrix.from_rows([[1, 0]])})
    assert cohomology_dims(c).dims == {0: 1}


def test_tensor_unit_law():
    c = two_term(3)
    t = tensor(c, Complex.unit())
    assert t.space == c.space
    assert all(t.d(p) == c.d(p) for p in c.degrees())


def test_tensor_dims():
    a = Complex(GradedSpace({0: 1, 1: 1}), {})
    t = tensor(a, a)
    assert t.space.dims == {0: 1, 1: 2, 2: 1}


def test_tensor_d_squared_random():
    rng = SplitMix64(5)
    for _ in range(5):
        a = random_complex(rng)
        b = random_complex(rng)
        tensor(a, b).check_d_squared()


def test_tensor_associative_dims():
    rng = SplitMix64(9)
    a, b, c = (random_complex(rng, max_dim=2, degrees=(0, 1)) for _ in range(3))
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    assert left.space == right.space
    assert cohomology_dims(left) == cohomology_dims(right)


def test_hom_unit_law():
    b = two_term(2)
    h = hom_complex(Complex.unit(), b)
    assert h.space == b.space
    assert all(h.d(p) == b.d(p) for p in b.degrees())


def test_hom_against_dual():
    c = Complex(GradedSpace({0: 1, 1: 2}),
                {0: RationalMatrix.from_rows([[1], [2]])})
    assert hom_complex(c, Complex.unit()) == linear_dual(c)


def test_h0_hom_counts_chain_maps_mod_homotopy():
    # brute-force oracle on a small instance: closed degree-0 elements of
    # Hom(a, b) modulo exact ones
    a = two_term(1)
    b = two_term(1)
    h = hom_complex(a, b)
    from dgtrace.linalg import rank_kernel_image, rank_of
    closed = a.dim(0) * 0  # placeholder to keep names obvious
    _, ker, _ = rank_kernel_image(h.d(0))
    exact = rank_of(h.d(-1))
    oracle = len(ker.basis) - exact
    assert cohomology_dims(h).dim(0) == oracle


def test_dual_reflects_degrees():
    c = Complex(GradedSpace({0: 1, 1: 2}),
                {0: RationalMatrix.from_rows([[1], [0]])})
    d = linear_dual(c)
    assert d.space.dims == {-1: 2, 0: 1}


def test_double_dual_isomorphic():
    rng = SplitMix64(13)
    c = random_complex(rng)
    dd = linear_dual(linear_dual(c))
    assert dd.space == c.space
    # the sign diagonal (-1)^p is a chain isomorphism c -> c**
    blocks = {p: RationalMatrix.identity(c.dim(p)).scale(F(-1) ** (p % 2))
              for p in c.degrees()}
    iso = ChainMap(c, dd, 0, blocks)
    assert iso.is_closed()


def test_dual_cohomology_dims():
    rng = SplitMix64(17)
    c = random_complex(rng)
    hc = cohomology_dims(c)
    hd = cohomology_dims(linear_dual(c))
    assert all(hd.dim(-p) == hc.dim(p) for p in hc.degrees())


def test_euler_trace_cancellation():
    c = Complex(GradedSpace({0: 1, 1: 1}), {})
    assert euler_trace(ChainMap.identity(c)) == 0


def test_euler_trace_scalar():
    k = Complex.unit()
    f = ChainMap(k, k, 0, {0: RationalMatrix.from_rows([[2]])})
    assert euler_trace(f) == 2


def test_supertrace_of_contractible_identity():
    cn, _, _ = cone(ChainMap.identity(Complex.unit()))
    idm = ChainMap.identity(cn)
    assert euler_trace(idm) == 0
    assert chain_supertrace(idm) == 0


def test_euler_equals_supertrace_on_closed_maps():
    rng = SplitMix64(23)
    from dgtrace.linalg import rank_kernel_image
    from dgtrace.complexes import hom_complex, hom_element_to_map
    for _ in range(10):
        c = random_complex(rng, max_dim=2)
        if c.total_dim() == 0:
            continue
        h = hom_complex(c, c)
        if h.dim(0) == 0:
            continue
        _, ker, _ = rank_kernel_image(h.d(0))
        for v in ker.basis[:3]:
            f = hom_element_to_map(c, c, 0, v)
            assert f.is_closed()
            assert euler_trace(f) == chain_supertrace(f)


def test_cone_long_exact_rank_identity():
    # long exact sequence of the cone as a rank identity:
    # dim H^n(cone) = dim H^n(M) + dim H^{n+1}(L)
    #                 - rank H^n(p) - rank H^{n+1}(p)
    rng = SplitMix64(29)
    from dgtrace.complexes import Cohomology
    for _ in range(6):
        a = random_complex(rng, max_dim=2)
        b = random_complex(rng, max_dim=2)
        from dgtrace.complexes import hom_complex, hom_element_to_map
        from dgtrace.linalg import rank_kernel_image, rank_of
        h = hom_complex(a, b)
        if h.dim(0) == 0:
            continue
        _, ker, _ = rank_kernel_image(h.d(0))
        if not ker.basis:
            continue
        p = hom_element_to_map(a, b, 0, ker.basis[0])
        cn, _, _ = cone(p)
        coh_a = Cohomology(a)
        coh_cone = cohomology_dims(cn)
        coh_b = cohomology_dims(b)
        induced = coh_a.induced_map(p)

        def rk(n):
            return rank_of(induced[n]) if n in induced else 0

        degrees = set(coh_cone.degrees()) | set(coh_b.degrees())
        degrees |= {d - 1 for d in coh_a.dims.degrees()}
        for n in degrees:
            assert coh_cone.dim(n) == (coh_b.dim(n) + coh_a.dim(n + 1)
                                       - rk(n) - rk(n + 1))


def test_image_complex_splits_idempotent():
    c = Complex(GradedSpace({0: 2}), {})
    e = ChainMap(c, c, 0, {0: RationalMatrix.from_rows([[1, 0], [0, 0]])})
    img, incl, proj = image_complex(e)
    assert img.space.dims == {0: 1}
    assert proj.compose(incl) == ChainMap.identity(img)
    assert incl.compose(proj) == e


def test_quasi_iso_detects():
    k = Complex.unit()
    two = ChainMap(k, k, 0, {0: RationalMatrix.from_rows([[2]])})
    assert is_quasi_iso(two)
    assert not is_quasi_iso(ChainMap.zero(k, k))


def test_tensor_dims_formula_property():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @settings(max_examples=25, deadline=None)
    @given(st.dictionaries(st.integers(-2, 2), st.integers(0, 3), max_size=3),
           st.dictionaries(st.integers(-2, 2), st.integers(0, 3), max_size=3))
    def check(da, db):
        a = Complex(GradedSpace(da), {})
        b = Complex(GradedSpace(db), {})
        t = tensor(a, b)
        for n in t.space.degrees():
            want = sum(a.dim(p) * b.dim(n - p) for p in a.degrees())
            assert t.dim(n) == want

    check()


def test_shift_round_trip_property():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @settings(max_examples=25, deadline=None)
    @given(st.integers(-3, 3), st.integers(1, 7))
    def check(n, seed):
        c = random_complex(SplitMix64(seed))
        assert shift(shift(c, n), -n) == c

    check()


def test_tensor_maps_koszul_sign():
    # (f (x) g) must be a chain map for closed f, g
    rng = SplitMix64(31)
    a = random_complex(rng, max_dim=2)
    b = random_complex(rng, max_dim=2)
    f = ChainMap.identity(a)
    g = ChainMap.identity(b)
    fg = tensor_maps(f, g)
    assert fg.is_closed()
    assert fg == ChainMap.identity(tensor(a, b))


def test_supertrace_multiplicative_under_tensor():
    # str(f (x) g) = str(f) str(g), exactly; any slip in the Koszul sign of
    # the map tensor breaks this on complexes spread over odd degrees
    from dgtrace.complexes import hom_complex, hom_element_to_map
    from dgtrace.linalg import rank_kernel_image
    rng = SplitMix64(37)
    found = 0
    while found < 6:
        a = random_complex(rng, max_dim=2)
        b = random_complex(rng, max_dim=2)
        ha = hom_complex(a, a)
        hb = hom_complex(b, b)
        if ha.dim(0) == 0 or hb.dim(0) == 0:
            continue
        _, ka, _ = rank_kernel_image(ha.d(0))
        _, kb, _ = rank_kernel_image(hb.d(0))
        if not ka.basis or not kb.basis:
            continue
        f = hom_element_to_map(a, a, 0, ka.basis[rng.below(len(ka.basis))])
        g = hom_element_to_map(b, b, 0, kb.basis[rng.below(len(kb.basis))])
        fg = tensor_maps(f, g)
        assert fg.is_closed()
        assert chain_supertrace(fg) == chain_supertrace(f) * chain_supertrace(g)
        assert euler_trace(fg) == euler_trace(f) * euler_trace(g)
        found += 1
