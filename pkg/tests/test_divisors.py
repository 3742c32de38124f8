import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weilmmp.divisors import (SectionPolyhedron, WeilDivisor, canonical_divisor, cartier_level, class_of,
                              global_sections, is_agg, is_ample, is_big, is_globally_generated, is_nef,
                              is_pseff, is_q_cartier, is_relatively_ample, is_relatively_nef,
                              lattice_points_in_box, local_character, pushforward, q_cartierization)
from weilmmp.errors import NonIntegralLevelError, RequiresCompleteError, SearchLimitExceeded
from weilmmp.fixtures import FAN_AQC, FAN_P2, FAN_QC, FAN_QC_T1, FAN_QC_T2
from weilmmp.toric import FanMorphism, small_projective_qfactorializations

C01 = WeilDivisor(FAN_QC, [0, 0, 1, 0, 0])
C10 = WeilDivisor(FAN_QC, [1, 0, 0, 0, 0])
C11 = C01 + C10
MODELS = small_projective_qfactorializations(FAN_QC)

coeffs3 = st.lists(st.integers(-3, 3), min_size=5, max_size=5)


def test_arithmetic():
    assert (C01 + C10 - C10) == C01
    assert (2 * C01).coeffs == (0, 0, 2, 0, 0)
    assert (-C01).coeffs == (0, 0, -1, 0, 0)
    assert WeilDivisor(FAN_QC, ["1/2", 0, 0, 0, 0]).denominator == 2
    with pytest.raises(ValueError):
        WeilDivisor(FAN_QC, [1, 2])


def test_classes():
    assert class_of(C01) == (0, 1)
    assert class_of(C10) == (1, 0)
    assert class_of(canonical_divisor(FAN_QC)) == (-3, -3)
    assert class_of(WeilDivisor.from_class(FAN_QC, (2, 5))) == (2, 5)


def test_cartier_levels():
    assert cartier_level(C11).kind == "Cartier"
    assert cartier_level(C01).kind == "NotQCartier"
    assert not is_q_cartier(C01)
    assert local_character(C01, FAN_QC.cones[0]) is None
    assert local_character(C11, FAN_QC.cones[0]) is not None
    assert str(cartier_level(WeilDivisor(FAN_QC, [0, 0, 0, 0, 1]))) == "Cartier"


def test_section_polyhedron():
    P = SectionPolyhedron(C11)
    assert P.dimension == 3 and not P.is_empty
    assert all(P.contains(u) for u in P.lattice_points())
    assert sorted(P.lattice_points()) == sorted(global_sections(C11))
    assert SectionPolyhedron(-C11).is_empty


def test_search_radius(monkeypatch):
    monkeypatch.setenv("WEILMMP_MAX_LATTICE_SEARCH", "2")
    with pytest.raises(SearchLimitExceeded):
        lattice_points_in_box([-5], [5], [])


def test_verdict_table():
    assert [str(v(C11)) for v in (is_nef, is_ample, is_big, is_pseff, is_agg)] == ["yes"] * 5
    assert [str(v(C01)) for v in (is_nef, is_ample, is_big, is_pseff, is_agg)] == ["yes", "no", "no", "yes", "yes"]
    m = -C01
    assert is_nef(m).is_no and is_agg(m).is_no and is_pseff(m).is_no
    zero = WeilDivisor.zero(FAN_QC)
    assert is_nef(zero).is_yes and is_ample(zero).is_no and is_agg(zero).is_yes
    assert is_pseff(-C11).is_no


def test_requires_complete():
    with pytest.raises(RequiresCompleteError):
        is_nef(WeilDivisor.zero(FAN_AQC))


def test_global_generation():
    assert is_globally_generated(C01, 1)
    assert not is_globally_generated(-C01, 1)
    assert is_globally_generated(WeilDivisor.prime(FAN_P2, 0), 1)
    with pytest.raises(NonIntegralLevelError):
        is_globally_generated(WeilDivisor(FAN_QC, ["1/2", 0, 0, 0, 0]), 1)


def test_qcartierization_of_c01():
    Y, f, DY = q_cartierization(C01)
    assert Y == FAN_QC_T1
    assert f.is_small
    assert is_q_cartier(DY)
    assert is_relatively_ample(DY, f).is_yes
    assert pushforward(DY, f) == C01


def test_qcartierization_of_cartier_is_identity():
    Y, f, _ = q_cartierization(C11)
    assert Y == FAN_QC


@given(coeffs3)
def test_qcartierization_idempotent(c):
    D = WeilDivisor(FAN_QC, c)
    Y, f, DY = q_cartierization(D)
    assert is_q_cartier(DY)
    Y2, _, _ = q_cartierization(DY)
    assert Y2 == Y


@pytest.mark.parametrize("model", range(len(MODELS)))
@given(c=coeffs3)
def test_nef_decomposition(model, c):
    Y, f = MODELS[model]
    D = WeilDivisor(Y, c)
    down = pushforward(D, f)
    assert is_nef(D).is_yes == (is_relatively_nef(D, f).is_yes and is_nef(down).is_yes)
    assert is_ample(D).is_yes == (is_relatively_ample(D, f).is_yes and is_ample(down).is_yes)
    if is_ample(D).is_yes:
        assert is_nef(down).is_yes


@given(coeffs3, st.sampled_from([FAN_QC, FAN_QC_T1, FAN_P2]))
def test_monotonicity(c, F):
    D = WeilDivisor(F, c[:F.nrays] + [0] * max(0, F.nrays - 5))
    if is_ample(D).is_yes:
        assert is_big(D).is_yes and is_nef(D).is_yes
    if is_big(D).is_yes or is_nef(D).is_yes:
        assert is_pseff(D).is_yes


@given(coeffs3)
def test_ample_plus_anything(c):
    A = WeilDivisor(FAN_QC, [1, 0, 1, 0, 0])
    D = WeilDivisor(FAN_QC, c)
    assert any(is_ample(b * A + D).is_yes for b in range(1, 40))


def test_agg_oracle_agreement():
    for c in itertools.product((-1, 0, 1), repeat=5):
        D = WeilDivisor(FAN_QC, c)
        verdict = is_agg(D)
        if verdict.kind == "unknown":
            continue
        brute = any(is_globally_generated(D, m) for m in range(1, 13))
        assert verdict.is_yes == brute, c


def test_verdict_certificates():
    v = is_nef(-C01)
    assert v.is_no and v.certificate
    assert is_ample(C11).certificate


def test_relative_over_point_matches_absolute():
    for c in itertools.product((-1, 0, 1), repeat=5):
        D = WeilDivisor(FAN_QC_T2, c)
        assert is_nef(D).kind == is_relatively_nef(D, FanMorphism.to_point(FAN_QC_T2)).kind
