import random

import pytest
from hypothesis import given, strategies as st

from weilmmp.cones_ns import picard_rank
from weilmmp.errors import RaysDegenerateError
from weilmmp.exactla import dot
from weilmmp.fixtures import FAN_AQC, FAN_P1, FAN_P2, FAN_QC, FAN_QC_T1, FAN_QC_T2, FIXTURES
from weilmmp.toric import (Fan, FanMorphism, _linear_extension_rows, _relative_groups, check_refinement,
                           class_group, fan_from_planar_rays, is_complete, is_simplicial,
                           projectivity_certificate, random_complete_fan_2d, small_projective_qfactorializations,
                           star_subdivision, validate_fan)

NON_SIMPLICIAL = [FAN_QC, FAN_AQC]


def kinds(F):
    return {v.kind for v in validate_fan(F)}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_valid(name):
    assert validate_fan(FIXTURES[name]) == []


def test_flags():
    assert is_complete(FAN_QC) and not is_simplicial(FAN_QC)
    assert is_complete(FAN_QC_T1) and is_simplicial(FAN_QC_T1)
    assert is_complete(FAN_P2) and is_simplicial(FAN_P2)
    assert not is_complete(FAN_AQC)


def test_validation_violations():
    assert "NonPrimitiveRay" in kinds(Fan(2, [(2, 0), (0, 1)], [(0, 1)]))
    assert "ZeroRay" in kinds(Fan(2, [(0, 0), (0, 1)], [(1,)]))
    assert "DuplicateRay" in kinds(Fan(2, [(1, 0), (1, 0)], [(0,), (1,)]))
    assert "IndexOutOfRange" in kinds(Fan(2, [(1, 0)], [(0, 3)]))
    assert "NotStronglyConvex" in kinds(Fan(1, [(1,), (-1,)], [(0, 1)]))
    assert "BadIntersection" in kinds(Fan(2, [(1, 0), (0, 1), (1, 1), (-1, 2)], [(0, 3), (1, 2)]))
    assert "DimensionMismatch" in kinds(Fan(2, [(1, 0, 0)], [(0,)]))


def test_class_groups():
    G = class_group(FAN_QC)
    assert G.rank == 2 and G.torsion == ()
    assert G.coords([0, 0, 0, 0, 1]) == (1, 1)
    assert class_group(FAN_P2).rank == 1
    assert class_group(Fan(2, [(1, 0), (1, 2)], [(0, 1)])).torsion == (2,)
    with pytest.raises(RaysDegenerateError):
        class_group(Fan(2, [(1, 0)], [(0,)]))


def test_class_map_kills_characters():
    for F in FIXTURES.values():
        G = class_group(F)
        for u in ((1,) + (0,) * (F.rank - 1), (0,) * (F.rank - 1) + (1,)):
            div = [dot(u, v) for v in F.rays]
            assert all(x == 0 for x in G.coords(div))
        for c in G.basis:
            e = [0] * F.nrays
            e[c] = 1
            assert G.coords(G.lift(G.coords(e))) == G.coords(e)


def test_qc_qfactorializations():
    out, diag = small_projective_qfactorializations(FAN_QC, with_diagnostics=True)
    assert [T for T, _ in out] == [FAN_QC_T1, FAN_QC_T2]
    assert diag == {"not_a_fan": 0, "not_projective": 0}
    assert len(small_projective_qfactorializations(FAN_AQC)) == 2
    assert [T for T, _ in small_projective_qfactorializations(FAN_P2)] == [FAN_P2]


@pytest.mark.parametrize("F", NON_SIMPLICIAL + [FAN_P2], ids=["QC", "AQC", "P2"])
def test_qfactorialization_invariants(F):
    for T, f in small_projective_qfactorializations(F):
        assert validate_fan(T) == []
        assert is_simplicial(T)
        assert T.rays == F.rays
        assert f.is_small and check_refinement(f) == []
        assert class_group(T).rank == class_group(F).rank
        cert = projectivity_certificate(T, _relative_groups(T, F))
        assert cert is not None
        # recheck strict convexity across every interior wall
        for cones, rays in _relative_groups(T, F):
            for tau in cones:
                for rho in rays:
                    if rho in tau:
                        continue
                    c = _linear_extension_rows(T, tau, rho)
                    if c is not None:
                        assert cert[rho] - sum(ci * cert[t] for ci, t in zip(c, tau)) >= 1


@pytest.mark.parametrize("F", list(FIXTURES.values()), ids=list(FIXTURES))
def test_picard_at_most_class_rank(F):
    assert picard_rank(F) <= class_group(F).rank


def test_refinement_checks():
    assert FanMorphism.refinement(FAN_QC_T1, FAN_QC).is_small
    T, f = star_subdivision(FAN_P2, FAN_P2.cones[0])
    assert check_refinement(f) == [] and not f.is_small
    bad = FanMorphism(FAN_P2, FAN_P1, ((1, 0),), "quotient")
    assert "ConeNotMapped" in {v.kind for v in check_refinement(bad)}


def test_planar_fans():
    assert fan_from_planar_rays([(1, 0), (0, 1)]) is None
    F = fan_from_planar_rays([(0, 1), (1, 0), (-1, -1)])
    assert F is not None and is_complete(F)


@given(st.integers(0, 10 ** 6))
def test_random_planar_fans_are_complete(seed):
    F = random_complete_fan_2d(random.Random(seed))
    assert validate_fan(F) == [] and is_complete(F) and is_simplicial(F)
    assert class_group(F).rank == F.nrays - 2
