import pytest
from hypothesis import given, strategies as st

from weilmmp.errors import DimensionMismatchError, HasLinealityError, NotSeparableError, ZeroConeError
from weilmmp.exactla import dot
from weilmmp.polyhedra import (PolyhedralCone, dd_convert, dual_cone, extremal_rays, face_from_generators,
                               faces, intersect, minkowski_sum, relative_interior_point, strict_separator)

QUADRANT = PolyhedralCone(2, generators=[(1, 0), (0, 1)])


def cones(dim):
    vec = st.lists(st.integers(-3, 3), min_size=dim, max_size=dim)
    return st.lists(vec, min_size=0, max_size=5).map(lambda g: PolyhedralCone(dim, generators=g))


any_cone = st.integers(1, 4).flatmap(cones)
cone_pair = st.integers(1, 4).flatmap(lambda d: st.tuples(cones(d), cones(d)))


def test_quadrant():
    assert QUADRANT.facets == ((0, 1), (1, 0))
    assert QUADRANT.rays == ((0, 1), (1, 0))
    assert dual_cone(QUADRANT) == QUADRANT


def test_halfplane_lineality():
    H = PolyhedralCone(2, halfspaces=[(1, 0)])
    assert H.lineality == ((0, 1),)
    assert H.rays == ((1, 0),)
    assert not H.is_pointed
    with pytest.raises(HasLinealityError):
        extremal_rays(H)


def test_square_cone_has_four_facets():
    C = PolyhedralCone(3, generators=[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)])
    assert len(C.facets) == 4
    assert len(C.rays) == 4


def test_zero_cone():
    Z = PolyhedralCone(2, generators=[])
    assert Z.is_zero
    assert dual_cone(Z).is_full_space
    with pytest.raises(ZeroConeError):
        relative_interior_point(Z)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        intersect(QUADRANT, PolyhedralCone(3, generators=[(1, 0, 0)]))
    with pytest.raises(DimensionMismatchError):
        PolyhedralCone(2, generators=[(1, 2, 3)])


def test_face_order_and_covectors():
    fs = faces(QUADRANT)
    assert [f.generators for f in fs] == [(), ((1, 0),), ((0, 1),), ((0, 1), (1, 0))]
    assert fs[1].covector == (0, 1)
    assert fs[2].covector == (1, 0)
    assert face_from_generators(QUADRANT, [(1, 1)]) is None


def test_separators():
    fs = faces(QUADRANT)
    W = PolyhedralCone(2, generators=[(0, 1)])
    assert strict_separator(fs[1], W) == (0, 1)
    assert strict_separator(PolyhedralCone(2, generators=[]), QUADRANT) == (1, 1)
    with pytest.raises(NotSeparableError):
        strict_separator(PolyhedralCone(2, generators=[(1, 1), (-1, -1)]), QUADRANT)


@given(any_cone)
def test_dual_involution(C):
    assert dual_cone(dual_cone(C)) == C
    assert dd_convert(dd_convert(C)).canonical() == C.canonical()


@given(any_cone)
def test_generators_satisfy_halfspaces(C):
    for g in C.generators:
        assert all(dot(h, g) >= 0 for h in C.facets)
        assert all(dot(e, g) == 0 for e in C.equations)
    H = PolyhedralCone(C.dim, halfspaces=C.halfspaces)
    assert H == C


@given(cone_pair)
def test_dual_of_intersection_is_sum_of_duals(pair):
    A, B = pair
    assert dual_cone(intersect(A, B)) == minkowski_sum(dual_cone(A), dual_cone(B))


@given(st.integers(1, 4).flatmap(lambda d: st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d),
                                                     max_size=5)), st.randoms())
def test_rays_independent_of_order(gens, r):
    if not gens:
        return
    dim = len(gens[0])
    shuffled = list(gens)
    r.shuffle(shuffled)
    assert PolyhedralCone(dim, generators=gens).generators == PolyhedralCone(dim, generators=shuffled).generators


@given(any_cone)
def test_face_covectors_support(C):
    if not C.is_pointed:
        return
    for f in faces(C):
        assert all(dot(f.covector, g) >= 0 for g in C.generators)
        for g in C.rays:
            assert (dot(f.covector, g) == 0) == f.cone.contains(g)


@given(cone_pair)
def test_separator_property(pair):
    A, B = pair
    if not A.is_pointed or not B.is_pointed:
        return
    fs = faces(A)
    F = fs[len(fs) // 2]
    W = PolyhedralCone(A.dim, generators=[r for r in A.rays if r not in F.generators])
    try:
        h = strict_separator(F, W)
    except NotSeparableError:
        return
    assert all(dot(h, x) == 0 for x in F.generators)
    assert all(dot(h, r) > 0 for r in W.rays)
