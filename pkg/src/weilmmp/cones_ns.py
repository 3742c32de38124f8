"""Weil Neron-Severi space, Weil nef cone and the cone of Weil curves.

Classes are written in the coordinates of :func:`toric.class_group`; curve
classes live in the dual space with the standard pairing.  Nef cones of a
non-Q-factorial fan are assembled from its small projective
Q-factorializations, which share its rays and hence its class coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .divisors import WeilDivisor, canonical_divisor, class_of
from .errors import NotExtremalFaceError, RequiresCompleteError
from .exactla import dot, integral_direction, lp_feasible, nullspace, transpose
from .polyhedra import (Face, PolyhedralCone, _subspace_basis, dual_cone, faces, minkowski_sum,
                        strict_separator)
from .toric import (ClassGroup, Fan, FanMorphism, _linear_extension_rows, class_group, is_complete,
                    small_projective_qfactorializations)


@dataclass(frozen=True)
class NsSpace:
    fan: Fan
    rho_w: int
    classes: ClassGroup = field(repr=False)
    cartier_subspace: tuple[tuple[int, ...], ...]

    @property
    def rho(self) -> int:
        return len(self.cartier_subspace)


@dataclass(frozen=True)
class WeilCones:
    nef_w: PolyhedralCone
    ne_w: PolyhedralCone
    models: tuple[tuple[Fan, PolyhedralCone], ...] = field(repr=False)
    union_convex: bool = True


@dataclass(frozen=True)
class RelativeCones:
    """Relative nef cone and relative cone of curves for a morphism f: Y -> X.

    ``nef`` lives in Cl(Y) coordinates and contains the relatively trivial
    classes as lineality; ``ne`` is its dual, a pointed cone in the
    annihilator of that lineality.  ``quotient_basis`` gives coordinates on
    NS(Y/X)_W = Cl(Y) / lineality, and ``nef_quotient`` is the image there.
    """

    morphism: FanMorphism
    nef: PolyhedralCone
    ne: PolyhedralCone
    quotient_basis: tuple[tuple[int, ...], ...]
    nef_quotient: PolyhedralCone
    models: tuple[tuple[Fan, PolyhedralCone], ...] = field(repr=False)
    union_convex: bool = True

    @property
    def dimension(self) -> int:
        return len(self.quotient_basis)


def _require_complete(F: Fan):
    if not is_complete(F):
        raise RequiresCompleteError("RequiresComplete: this operation needs a complete fan")


def cartier_subspace(F: Fan) -> tuple[tuple[int, ...], ...]:
    """Integer basis of the span of Q-Cartier classes in Cl(F) tensor Q."""
    G = class_group(F)
    rows = []
    for c in F.cones:
        # y V_sigma = 0 constrains the coefficients on sigma
        for y in nullspace(transpose(F.ray_matrix(c), F.rank), len(c)):
            row = [Fraction(0)] * F.nrays
            for yi, i in zip(y, c):
                row[i] += yi
            rows.append(row)
    divs = nullspace(rows, F.nrays) if rows else nullspace([], F.nrays)
    return tuple(_subspace_basis([G.coords(d) for d in divs], G.rank))


def _model_cone(T: Fan, f: FanMorphism) -> PolyhedralCone:
    """Relative nef cone of the simplicial fan T over the target of f, in class coordinates."""
    G = class_group(T)
    g = FanMorphism(T, f.target, f.lattice_map, f.kind)
    hs = set()
    for sigma in f.target.cones:
        cones, rays = g.preimage(sigma)
        for tau in cones:
            for rho in rays:
                if rho in tau:
                    continue
                c = _linear_extension_rows(T, tau, rho)
                if c is None:
                    continue
                row = [Fraction(0)] * T.nrays
                row[rho] += 1
                for ci, t in zip(c, tau):
                    row[t] -= ci
                h = [row[b] for b in G.basis]
                if any(h):
                    hs.add(integral_direction(h))
    return PolyhedralCone(G.rank, halfspaces=sorted(hs))


def _union_is_convex(pieces: list[PolyhedralCone], hull: PolyhedralCone) -> bool:
    """Every interior wall of a piece is matched by an opposite wall of another piece."""
    for i, P in enumerate(pieces):
        for n in P.facets:
            if all(dot(n, g) >= 0 for g in hull.generators):
                continue
            wall = PolyhedralCone(P.dim, generators=[g for g in P.generators if dot(n, g) == 0])
            neg = tuple(-x for x in n)
            match = False
            for j, Q in enumerate(pieces):
                if j == i or neg not in Q.facets:
                    continue
                other = PolyhedralCone(Q.dim, generators=[g for g in Q.generators if dot(neg, g) == 0])
                if other == wall:
                    match = True
                    break
            if not match:
                return False
    return True


def _hull_of_models(F: Fan, f: FanMorphism):
    models = []
    for T, _ in small_projective_qfactorializations(F):
        models.append((T, _model_cone(T, f)))
    dim = class_group(F).rank
    gens = [g for _, C in models for g in C.generators]
    hull = PolyhedralCone(dim, generators=gens)
    return hull, tuple(models), _union_is_convex([C for _, C in models], hull)


@lru_cache(maxsize=256)
def nef_cone_w(F: Fan) -> WeilCones:
    _require_complete(F)
    hull, models, convex = _hull_of_models(F, FanMorphism.to_point(F))
    return WeilCones(hull, dual_cone(hull), models, convex)


def nef_cone_w_relative(f: FanMorphism) -> RelativeCones:
    hull, models, convex = _hull_of_models(f.source, f)
    ne = dual_cone(hull)
    dim = hull.dim
    lin = [list(v) for v in hull.lineality]
    qb = tuple(_subspace_basis(nullspace(lin, dim), dim)) if lin else tuple(
        tuple(int(i == j) for j in range(dim)) for i in range(dim))
    nq = PolyhedralCone(len(qb), generators=[[dot(q, g) for q in qb] for g in hull.generators])
    return RelativeCones(f, hull, ne, qb, nq, models, convex)


def ne_cone_w(F: Fan) -> PolyhedralCone:
    return nef_cone_w(F).ne_w


@lru_cache(maxsize=256)
def ns_w(F: Fan) -> NsSpace:
    _require_complete(F)
    G = class_group(F)
    cones = nef_cone_w(F)
    if cones.nef_w.lineality:
        raise AssertionError("nonzero numerically trivial Weil classes on a complete toric fan")
    return NsSpace(F, G.rank, G, cartier_subspace(F))


def picard_rank(F: Fan) -> int:
    return len(cartier_subspace(F))


def kleiman_ample(F: Fan, D: WeilDivisor) -> bool:
    """D pairs strictly positively with every extremal ray of NE(F)_W."""
    c = class_of(D)
    return all(dot(c, r) > 0 for r in ne_cone_w(F).rays)


def canonical_class(F: Fan):
    return class_of(canonical_divisor(F))


def k_negative_extremal_faces(F: Fan) -> list[Face]:
    """Faces of NE(F)_W on which K is negative off zero; the zero face is included."""
    K = canonical_class(F)
    return [G for G in faces(ne_cone_w(F)) if all(dot(K, g) < 0 for g in G.generators)]


def _as_face(F: Fan, G) -> Face:
    NE = ne_cone_w(F)
    gens = G.generators if isinstance(G, (Face, PolyhedralCone)) else G
    target = PolyhedralCone(NE.dim, generators=list(gens))
    for H in faces(NE):
        if H.cone == target:
            return H
    raise NotExtremalFaceError("NotExtremalFace: not a face of the cone of Weil curves")


def supporting_divisor(F: Fan, G) -> WeilDivisor:
    """An integral nef divisor cutting out exactly the K-negative face G of NE(F)_W.

    W is spanned by the extremal rays off G together with the part of NE
    where K + eps H >= 0, for H ample and eps small enough that K + eps H
    stays negative on G.  The divisor is the separator of G and W.
    """
    G = _as_face(F, G)
    K = canonical_class(F)
    if not all(dot(K, g) < 0 for g in G.generators):
        raise NotExtremalFaceError("NotExtremalFace: the face is not K-negative")
    cones = nef_cone_w(F)
    NE = cones.ne_w
    H = cones.nef_w.relative_interior_point()
    if G.generators:
        eps = min(Fraction(-dot(K, g), dot(H, g)) for g in G.generators) / 2
    else:
        eps = Fraction(1)
    KH = [k + eps * h for k, h in zip(K, H)]
    cut = [integral_direction(KH)] if any(KH) else []
    part = PolyhedralCone(NE.dim, halfspaces=list(NE.halfspaces) + cut)
    off = [r for r in NE.rays if r not in G.generators]
    W = minkowski_sum(part, PolyhedralCone(NE.dim, generators=off))
    h = strict_separator(G, W)
    return WeilDivisor.from_class(F, h)


def is_rational_face(F: Fan, G) -> bool:
    """Whether a Q-Cartier class is nonnegative on NE(F)_W and cuts out exactly G."""
    G = _as_face(F, G)
    NE = ne_cone_w(F)
    basis = cartier_subspace(F)
    k = len(basis)
    ge, rhs, eq = [], [], []
    for r in NE.rays:
        row = [Fraction(dot(b, r)) for b in basis]
        if r in G.generators:
            eq.append(row)
        else:
            ge.append(row)
            rhs.append(1)
    if k == 0:
        return not ge
    return lp_feasible(ge, rhs, eq, [0] * len(eq), nvars=k) is not None


def relative_dimension_bound(Y: Fan, X: Fan) -> tuple[int, int, int]:
    """(rho_W(Y), rho_W(X), rho_W(Y/X)) for a small refinement Y -> X."""
    rel = nef_cone_w_relative(FanMorphism.refinement(Y, X))
    return class_group(Y).rank, class_group(X).rank, rel.dimension

