import random

import pytest

from weilmmp.cones_ns import is_rational_face, k_negative_extremal_faces, picard_rank
from weilmmp.divisors import is_nef, is_relatively_ample, pushforward
from weilmmp.errors import NotExtremalFaceError
from weilmmp.fixtures import FAN_BL_P2, FAN_F3, FAN_P1, FAN_P2, FAN_QC, FAN_QC_T1, FAN_QC_T2
from weilmmp.mmp import (MmpStep, MmpTrace, contract_face, detect_cycle, fingerprint, run_mmp)
from weilmmp.toric import Fan, point_fan, random_complete_fan_2d

COMPLETE = [FAN_P1, FAN_P2, FAN_QC, FAN_QC_T1, FAN_F3, FAN_BL_P2]


def test_contract_ray_of_quadric_cone():
    G = k_negative_extremal_faces(FAN_QC)[1]
    d = contract_face(FAN_QC, G)
    assert d.kind == "fiber"
    assert d.middle == FAN_QC_T1
    assert fingerprint(d.target) == fingerprint(FAN_P1)
    assert picard_rank(d.middle) == 2 <= picard_rank(FAN_QC) + 1
    assert all(d.assertions.values())


def test_contract_zero_face_is_embedding():
    d = contract_face(FAN_QC, [])
    assert d.kind == "embedding" and d.target == FAN_QC


def test_contract_rejects_non_faces():
    with pytest.raises(NotExtremalFaceError):
        contract_face(FAN_QC, [(1, 1)])


def test_divisorial_contraction():
    faces = k_negative_extremal_faces(FAN_BL_P2)
    divisorial = [contract_face(FAN_BL_P2, G) for G in faces if G.dim == 1]
    kinds = sorted(d.kind for d in divisorial)
    assert "divisorial" in kinds
    d = next(d for d in divisorial if d.kind == "divisorial")
    assert d.target.nrays == 3 and fingerprint(d.target) == fingerprint(FAN_P2)


@pytest.mark.parametrize("F", COMPLETE)
def test_diagram_invariants(F):
    for G in k_negative_extremal_faces(F):
        d = contract_face(F, G)
        assert d.f.is_small
        assert is_relatively_ample(d.divisor_middle, d.f).is_yes
        assert is_nef(d.divisor_middle).is_yes
        assert picard_rank(d.middle) <= picard_rank(F) + 1
        assert pushforward(d.divisor_middle, d.f) == d.divisor
        assert is_rational_face(d.middle, G)
        assert d.fiber_type == (d.target.rank < d.middle.rank)
        if d.kind == "divisorial":
            assert d.target.nrays < d.middle.nrays


def test_runs():
    p2 = run_mmp(FAN_P2)
    assert p2.status == "Mori fiber space" and len(p2.steps) == 1 and p2.final_model.rank == 0
    qc = run_mmp(FAN_QC, "max-face")
    assert len(qc.steps) == 1 and qc.final_model.rank == 0
    rf = run_mmp(FAN_QC, "ray-first", restart=True)
    assert len(rf.steps) == 2 and rf.final_model == point_fan()
    assert fingerprint(rf.steps[0].diagram.target) == fingerprint(FAN_P1)
    assert detect_cycle(rf) is None and detect_cycle(p2) is None
    f3 = run_mmp(FAN_F3)
    assert fingerprint(f3.steps[0].diagram.target) == fingerprint(FAN_P1)


def test_max_face_terminates_on_random_fans():
    rng = random.Random(3)
    for _ in range(6):
        F = random_complete_fan_2d(rng)
        tr = run_mmp(F, "max-face")
        assert tr.status == "Mori fiber space"
        for s in tr.steps:
            d = s.diagram
            assert d.assertions["log_terminal"]
            if d.fiber_type:
                assert d.target.rank < d.middle.rank
                assert d.assertions["log_fano_fiber"]
            elif d.kind == "divisorial":
                assert d.target.nrays < d.middle.nrays


def test_determinism():
    a = run_mmp(FAN_QC, "ray-first", restart=True)
    b = run_mmp(FAN_QC, "ray-first", restart=True)
    assert [s.fingerprint for s in a.steps] == [s.fingerprint for s in b.steps]
    assert a.choices == b.choices and a.status == b.status


def test_abort_and_step_limit():
    assert run_mmp(FAN_QC, lambda F, faces: None).status == "user-abort"
    assert run_mmp(FAN_QC, "ray-first", restart=True, max_steps=1).status == "inconclusive"


def test_fingerprints():
    assert fingerprint(FAN_QC_T1) == fingerprint(FAN_QC_T2)
    assert fingerprint(FAN_QC) != fingerprint(FAN_QC_T1)
    # an automorphic copy of P2
    moved = Fan(2, [(1, 1), (0, 1), (-1, -2)], [(0, 1), (0, 2), (1, 2)])
    assert fingerprint(moved).digest == fingerprint(FAN_P2).digest
    tiny = fingerprint(FAN_QC, bound=3)
    assert not tiny.exhaustive


def test_detect_cycle_on_constructed_trace():
    fp = fingerprint(FAN_QC)
    other = fingerprint(FAN_P2)
    steps = [MmpStep(i, m, None, 0, None, f) for i, (m, f) in enumerate([(FAN_QC, fp), (FAN_P2, other)])]
    tr = MmpTrace("test", False, steps, final_fingerprint=fp)
    assert detect_cycle(tr) == (0, 2)
