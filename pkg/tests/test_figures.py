import pytest

from weilmmp.cones_ns import nef_cone_w, ne_cone_w
from weilmmp.errors import NotPlanarError
from weilmmp.figures import class_label, cone_outline, emit_cone_figure
from weilmmp.fixtures import FAN_QC
from weilmmp.polyhedra import PolyhedralCone


def draw(path):
    nef = nef_cone_w(FAN_QC).nef_w
    diag = PolyhedralCone(2, generators=[(1, 1)])
    emit_cone_figure([nef, diag], [((1, 0), "C_(1,0)"), ((0, 1), "C_(0,1)")], path, names=["nef", "cartier"])


def test_labels():
    assert class_label("C", (1, 0)) == "C_(1,0)"
    assert class_label("γ", (0, 1)) == "γ_(0,1)"


def test_byte_identical(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    draw(a)
    draw(b)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8")
    assert "C_(1,0)" in text and "C_(0,1)" in text


def test_curve_labels(tmp_path):
    p = tmp_path / "ne.svg"
    emit_cone_figure([ne_cone_w(FAN_QC)], [((1, 0), "γ_(1,0)"), ((0, 1), "γ_(0,1)")], p)
    text = p.read_text(encoding="utf-8")
    assert "γ_(1,0)" in text and "γ_(0,1)" in text


def test_not_planar(tmp_path):
    with pytest.raises(NotPlanarError):
        emit_cone_figure([PolyhedralCone(3, generators=[(1, 0, 0)])], [], tmp_path / "x.svg")


@pytest.mark.parametrize("gens", [[], [(1, 0)], [(1, 0), (-1, 0)], [(1, 0), (-1, 0), (0, 1)],
                                  [(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 0)]])
def test_outlines(gens):
    pts = cone_outline(PolyhedralCone(2, generators=gens))
    assert pts and all(abs(x) <= 1.0001 and abs(y) <= 1.0001 for x, y in pts)
