"""Standard small fans used in examples, tests and the command line."""

from .toric import Fan

FAN_P1 = Fan(1, [(1,), (-1,)], [(0,), (1,)])
FAN_P2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])

# Cone over the quadric surface: one non-simplicial cone with v1 + v2 = v3 + v4.
QC_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (-1, -1, 0)]
_QC_REST = [(4, 0, 2), (4, 0, 3), (4, 1, 2), (4, 1, 3)]
FAN_QC = Fan(3, QC_RAYS, [(0, 1, 2, 3)] + _QC_REST)
FAN_QC_T1 = Fan(3, QC_RAYS, [(0, 1, 2), (0, 1, 3)] + _QC_REST)
FAN_QC_T2 = Fan(3, QC_RAYS, [(2, 3, 0), (2, 3, 1)] + _QC_REST)
FAN_AQC = Fan(3, QC_RAYS[:4], [(0, 1, 2, 3)])

# Hirzebruch surface F_3 and the blow-up of the plane at a point.
FAN_F3 = Fan(2, [(1, 0), (0, 1), (-1, 3), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
FAN_BL_P2 = Fan(2, [(1, 0), (1, 1), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])

FIXTURES = {
    "P1": FAN_P1,
    "P2": FAN_P2,
    "QC": FAN_QC,
    "QC_T1": FAN_QC_T1,
    "QC_T2": FAN_QC_T2,
    "AQC": FAN_AQC,
    "F3": FAN_F3,
    "BL_P2": FAN_BL_P2,
}
