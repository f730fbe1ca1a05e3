import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcdeform import linalg as la
from mcdeform.errors import (
    DegreeWindowViolation,
    DifferentialNotSquareZero,
    InvalidInput,
    WindowTooSmall,
)
from mcdeform.graded import (
    ChainComplex,
    GradedElement,
    GradedMap,
    GradedSpace,
    basis_element,
    compute_cohomology,
    direct_sum,
    element_from_labels,
    graded_map_to_hom_element,
    hom_complex,
    htp_complex,
    identity_map,
    map_from_basis_images,
    shift,
)

F = Fraction


def two_term_identity():
    """K → K with d the identity."""
    s = GradedSpace(0, 1, {0: ("u",), 1: ("v",)})
    d = map_from_basis_images(s, s, 1, {"u": basis_element(s, 1, 0)})
    return ChainComplex(s, d)


def point_complex():
    s = GradedSpace(0, 0, {0: ("k",)})
    return ChainComplex(s, GradedMap(s, s, 1, {}))


class TestSpaceAndElements:
    def test_duplicate_labels_rejected(self):
        with pytest.raises(InvalidInput):
            GradedSpace(0, 1, {0: ("a",), 1: ("a",)})

    def test_basis_outside_window_rejected(self):
        with pytest.raises(DegreeWindowViolation):
            GradedSpace(0, 1, {2: ("a",)})

    def test_declared_degree_enforced(self):
        s = GradedSpace(0, 1, {0: ("a",), 1: ("b",)})
        with pytest.raises(DegreeWindowViolation):
            GradedElement(s, {(0, 0): F(1)}, degree=1)

    def test_element_arithmetic(self):
        s = GradedSpace(0, 0, {0: ("a", "b")})
        x = element_from_labels(s, {"a": 1, "b": 2})
        y = element_from_labels(s, {"a": "1/2"})
        assert (x - y + y) == x
        assert (2 * y) == element_from_labels(s, {"a": 1})
        assert (x - x).is_zero()


class TestGradedMap:
    def test_block_outside_window_rejected(self):
        s = GradedSpace(0, 1, {0: ("a",), 1: ("b",)})
        # degree +1 block from degree 1 would land at degree 2: no room
        with pytest.raises(DegreeWindowViolation):
            GradedMap(s, s, 1, {1: [[F(1)]]})

    def test_compose_and_apply(self):
        cx = two_term_identity()
        d = cx.d
        assert d.compose(d).is_zero()
        u = basis_element(cx.space, 0, 0)
        assert d.apply(u) == basis_element(cx.space, 1, 0)

    def test_identity_map(self):
        cx = two_term_identity()
        i = identity_map(cx.space)
        assert i.compose(cx.d) == cx.d


class TestCohomology:
    def test_acyclic_identity(self):
        H = compute_cohomology(two_term_identity())
        assert H.dim(0) == 0 and H.dim(1) == 0

    def test_zero_differential(self):
        s = GradedSpace(0, 2, {0: ("a",), 1: ("b", "c"), 2: ("e",)})
        H = compute_cohomology(ChainComplex(s, GradedMap(s, s, 1, {})))
        for i in s.degrees():
            assert H.dim(i) == s.dim(i)

    def test_truncated_line_factor(self):
        # H⁰ one-dimensional (constants), H¹ = 0, for N in {1,2,3}
        from mcdeform.path_object import truncated_line_complex
        for N in (1, 2, 3):
            H = compute_cohomology(truncated_line_complex(N))
            assert H.dim(0) == 1 and H.dim(1) == 0
            rep = H.representatives[0][0]
            assert rep == basis_element(rep.space, 0, 0)  # the constant t^0

    def test_d_squared_error(self):
        s = GradedSpace(0, 2, {0: ("u",), 1: ("v",), 2: ("w",)})
        d = map_from_basis_images(s, s, 1, {
            "u": basis_element(s, 1, 0), "v": basis_element(s, 2, 0)})
        with pytest.raises(DifferentialNotSquareZero):
            compute_cohomology(ChainComplex(s, d))

    def test_projection_kills_boundaries(self):
        rnd = random.Random(3)
        cx = two_term_identity()
        H = compute_cohomology(cx)
        for _ in range(10):
            v = GradedElement(cx.space, {(0, 0): F(rnd.randint(-5, 5))}, 0)
            b = cx.d.apply(v)
            assert all(c == 0 for c in H.project_vector(1, b.component_vector(1)))

    def test_projection_inclusion_identity(self):
        s = GradedSpace(1, 2, {1: ("x1", "x2"), 2: ("y",)})
        H = compute_cohomology(ChainComplex(s, GradedMap(s, s, 1, {})))
        for j, rep in enumerate(H.representatives[1]):
            coords = H.project_vector(1, rep.component_vector(1))
            assert coords == la.unit_vector(H.dim(1), j)


def random_decomposed_complex(rnd: random.Random):
    """Random complex assembled from acyclic pairs and free generators, then
    base-changed; the known cohomology dims are the free-generator counts."""
    dmin, dmax = -1, 2
    free = {i: rnd.randint(0, 2) for i in range(dmin, dmax + 1)}
    pairs = {i: rnd.randint(0, 2) for i in range(dmin, dmax)}
    basis = {}
    for i in range(dmin, dmax + 1):
        labels = [f"f{i}_{k}" for k in range(free[i])]
        labels += [f"a{i}_{k}" for k in range(pairs.get(i, 0))]
        labels += [f"b{i}_{k}" for k in range(pairs.get(i - 1, 0))]
        if labels:
            basis[i] = tuple(labels)
    space = GradedSpace(dmin, dmax, basis)
    images = {}
    for i in range(dmin, dmax):
        for k in range(pairs.get(i, 0)):
            images[f"a{i}_{k}"] = element_from_labels(space, {f"b{i+1}_{k}": 1}, i + 1)
    d = map_from_basis_images(space, space, 1, images)
    cx = ChainComplex(space, d)

    # random integer base change per degree (products of shear matrices)
    blocks = {}
    for i in space.degrees():
        n = space.dim(i)
        if n == 0:
            continue
        m = la.identity(n)
        for _ in range(4):
            r, c = rnd.randrange(n), rnd.randrange(n)
            if r != c:
                add = la.identity(n)
                add[r][c] = F(rnd.randint(-2, 2))
                m = la.mat_mul(add, m)
        blocks[i] = m
    change = GradedMap(space, space, 0, blocks)
    inv_blocks = {i: la.inverse(b) for i, b in blocks.items()}
    inverse = GradedMap(space, space, 0, inv_blocks)
    new_d = change.compose(cx.d).compose(inverse)
    return ChainComplex(space, GradedMap(space, space, 1, new_d.blocks)), free


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_cohomology_of_random_decomposed_complexes(seed):
    rnd = random.Random(seed)
    cx, free = random_decomposed_complex(rnd)
    H = compute_cohomology(cx)
    for i in cx.space.degrees():
        assert H.dim(i) == free.get(i, 0)
        # rank-nullity bookkeeping per degree
        r_i = cx.d.rank(i)
        r_prev = cx.d.rank(i - 1)
        assert r_i + H.dim(i) + r_prev == cx.space.dim(i)
    euler_space = sum((-1) ** i * cx.space.dim(i) for i in cx.space.degrees())
    euler_h = sum((-1) ** i * H.dim(i) for i in cx.space.degrees())
    assert euler_space == euler_h


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_projection_kills_random_boundaries(seed):
    rnd = random.Random(seed)
    cx, _free = random_decomposed_complex(rnd)
    H = compute_cohomology(cx)
    for i in cx.space.degrees():
        coords = {(i, k): F(rnd.randint(-3, 3)) for k in range(cx.space.dim(i))}
        b = cx.d.apply(GradedElement(cx.space, coords, i))
        got = H.project_vector(i + 1, b.component_vector(i + 1))
        assert all(c == 0 for c in got)


class TestHom:
    def test_point_hom(self):
        cx = point_complex()
        hom = hom_complex(cx, cx)
        assert hom.space.dim(0) == 1
        assert hom.d.is_zero()

    def test_hom_acyclic_source(self):
        hom = hom_complex(two_term_identity(), point_complex())
        H = compute_cohomology(hom)
        for i in hom.space.degrees():
            assert H.dim(i) == 0

    def test_hom_differential_squares_to_zero(self):
        acy = two_term_identity()
        hom = hom_complex(acy, acy)
        assert hom.d.compose(hom.d).is_zero()

    def test_chain_map_is_hom_cycle(self):
        acy = two_term_identity()
        hom = hom_complex(acy, acy)
        f = graded_map_to_hom_element(identity_map(acy.space), hom)
        assert hom.d.apply(f).is_zero()

    def test_window_too_small(self):
        cx = point_complex()
        with pytest.raises(WindowTooSmall):
            hom_complex(cx, cx, window=(5, 7))

    def test_clipping_window_rejected(self):
        acy = two_term_identity()
        with pytest.raises(DegreeWindowViolation):
            hom_complex(acy, acy, window=(-1, 0))

    def test_htp_degree_bookkeeping(self):
        acy = two_term_identity()
        htp = htp_complex(acy, acy)
        # Htp^i = Hom^{i−1}: the degree-0 identity now sits in degree 1
        assert htp.space.dim(1) == 2


class TestShift:
    def test_shift_zero_identity(self):
        cx = two_term_identity()
        assert shift(cx, 0) == cx

    def test_shift_round_trip(self):
        cx = two_term_identity()
        assert shift(shift(cx, 3), -3) == cx

    def test_shift_sign(self):
        cx = two_term_identity()
        sh = shift(cx, 1)
        assert sh.space.dim(-1) == 1  # u moved to degree −1
        u = basis_element(sh.space, -1, 0)
        assert sh.d.apply(u) == -basis_element(sh.space, 0, 0)


def test_direct_sum_round_trip():
    acy = two_term_identity()
    s = GradedSpace(0, 0, {0: ("w",)})
    pt = ChainComplex(s, GradedMap(s, s, 1, {}))
    total, inc_v, inc_w, proj_v, proj_w = direct_sum(acy, pt)
    assert total.space.dim(0) == 2 and total.space.dim(1) == 1
    u = basis_element(acy.space, 0, 0)
    assert proj_v.apply(inc_v.apply(u)) == u
    assert proj_w.apply(inc_v.apply(u)).is_zero()
    assert total.d.compose(inc_v) == inc_v.compose(acy.d)
