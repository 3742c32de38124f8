"""Exact Weil-divisor positivity, cones of Weil curves and a flip-free MMP for toric varieties."""

from .divisors import (PositivityVerdict, WeilDivisor, canonical_divisor, cartier_level, class_of,
                       is_agg, is_ample, is_big, is_globally_generated, is_nef, is_pseff,
                       is_relatively_ample, is_relatively_nef, pushforward, q_cartierization)
from .cones_ns import (is_rational_face, k_negative_extremal_faces, kleiman_ample, ne_cone_w,
                       nef_cone_w, nef_cone_w_relative, ns_w, supporting_divisor)
from .mmp import contract_face, detect_cycle, qfactorialization_with_nef_K, run_mmp
from .polyhedra import PolyhedralCone, dual_cone, faces, strict_separator
from .toric import (Fan, FanMorphism, class_group, is_complete, is_simplicial,
                    small_projective_qfactorializations, validate_fan)

__version__ = "0.1.0"
