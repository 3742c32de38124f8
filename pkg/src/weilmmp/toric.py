"""Fans, fan morphisms, class groups and small projective Q-factorializations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import RaysDegenerateError
from .exactla import (dot, gcd_list, identity, inverse, lp_feasible, matvec, rank, smith_normal_form,
                      solve, transpose)
from .polyhedra import PolyhedralCone, cone_from_generators

IntVec = tuple[int, ...]
ConeIdx = tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    """A fan in N = Z^rank given by primitive rays and maximal cones.

    Cones are stored as sorted tuples of ray indices and the cone list is
    sorted, so two fans with the same data compare equal regardless of the
    order in which cones were listed.  Construction does not validate; use
    :func:`validate_fan`.
    """

    rank: int
    rays: tuple[IntVec, ...]
    cones: tuple[ConeIdx, ...]

    def __init__(self, rank: int, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]):
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in rays))
        object.__setattr__(self, "cones", tuple(sorted(tuple(sorted(set(c))) for c in cones)))

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_matrix(self, idx: Sequence[int] | None = None) -> list[list[int]]:
        idx = range(self.nrays) if idx is None else idx
        return [list(self.rays[i]) for i in idx]

    def cone(self, idx: Sequence[int]) -> PolyhedralCone:
        return _cone(self.rays, tuple(idx), self.rank)

    def cone_dim(self, idx: Sequence[int]) -> int:
        return rank(self.ray_matrix(idx)) if idx else 0

    def with_cones(self, cones) -> "Fan":
        return Fan(self.rank, self.rays, cones)

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={list(self.rays)}, cones={list(self.cones)})"


@lru_cache(maxsize=4096)
def _cone(rays, idx, dim) -> PolyhedralCone:
    return PolyhedralCone(dim, generators=[rays[i] for i in idx])


def point_fan() -> Fan:
    return Fan(0, [], [()])


# ---------------------------------------------------------------------------
# Validation

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _is_face(sigma: PolyhedralCone, sub: PolyhedralCone) -> bool:
    """Whether ``sub`` (a subcone of sigma) is a face of sigma."""
    if sub.is_zero:
        return True
    cov = [0] * sigma.dim
    for h in sigma.halfspaces:
        if all(dot(h, g) == 0 for g in sub.generators):
            cov = [a + b for a, b in zip(cov, h)]
    face = [g for g in sigma.generators if dot(cov, g) == 0]
    return cone_from_generators(face, sigma.dim) == sub


def cones_meet_properly(F: Fan, a: ConeIdx, b: ConeIdx) -> bool:
    """sigma_a and sigma_b intersect in the cone over their common rays, a face of both."""
    sa, sb = F.cone(a), F.cone(b)
    common = F.cone(tuple(sorted(set(a) & set(b))))
    inter = PolyhedralCone(F.rank, halfspaces=list(sa.halfspaces) + list(sb.halfspaces))
    return inter == common and _is_face(sa, common) and _is_face(sb, common)


def validate_fan(F: Fan) -> list[Violation]:
    """All violated fan axioms; the empty list means the fan is valid."""
    out: list[Violation] = []
    n = F.rank
    for i, r in enumerate(F.rays):
        if len(r) != n:
            out.append(Violation("DimensionMismatch", f"ray {i} has length {len(r)}"))
        elif not any(r):
            out.append(Violation("ZeroRay", f"ray {i}"))
        elif gcd_list(r) != 1:
            out.append(Violation("NonPrimitiveRay", f"ray {i} = {r}"))
    if out:
        return out
    seen = {}
    for i, r in enumerate(F.rays):
        if r in seen:
            out.append(Violation("DuplicateRay", f"rays {seen[r]} and {i}"))
        seen.setdefault(r, i)
    used = set()
    good = []
    for c in F.cones:
        bad = [i for i in c if not 0 <= i < F.nrays]
        if bad:
            out.append(Violation("IndexOutOfRange", f"cone {list(c)} uses {bad}"))
            continue
        used.update(c)
        C = F.cone(c)
        if C.lineality:
            out.append(Violation("NotStronglyConvex", f"cone {list(c)}"))
            continue
        ext = set(C.rays)
        nonext = [i for i in c if F.rays[i] not in ext]
        if nonext:
            out.append(Violation("NonExtremalRay", f"cone {list(c)}: rays {nonext}"))
            continue
        good.append(c)
    for i in range(F.nrays):
        if i not in used:
            out.append(Violation("UnusedRay", f"ray {i}"))
    for a, b in itertools.combinations(good, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            out.append(Violation("NestedCones", f"cones {list(a)} and {list(b)}"))
        elif not cones_meet_properly(F, a, b):
            out.append(Violation("BadIntersection", f"cones {list(a)} and {list(b)}"))
    return out


def is_simplicial(F: Fan) -> bool:
    return all(F.cone_dim(c) == len(c) for c in F.cones)


def cone_facets(F: Fan, c: ConeIdx) -> list[ConeIdx]:
    """Ray-index sets of the facets of a maximal cone."""
    C = F.cone(c)
    out = []
    for h in C.facets:
        out.append(tuple(i for i in c if dot(h, F.rays[i]) == 0))
    return sorted(out)


def is_complete(F: Fan) -> bool:
    """Full-dimensional maximal cones, and every wall shared by exactly two of them."""
    if F.rank == 0:
        return True
    if any(F.cone_dim(c) != F.rank for c in F.cones):
        return False
    count: dict[ConeIdx, int] = {}
    for c in F.cones:
        for w in cone_facets(F, c):
            count[w] = count.get(w, 0) + 1
    return bool(count) and all(v == 2 for v in count.values())


# ---------------------------------------------------------------------------
# Class group

@dataclass(frozen=True)
class ClassGroup:
    """Cl(X) = Z^rays / M.

    ``basis`` lists the rays whose classes form the chosen Q-basis; the
    remaining rays (``eliminated``) are solved away using characters.
    ``class_map`` is the rank x nrays rational matrix taking coefficient
    vectors to class coordinates.
    """

    rank: int
    torsion: tuple[int, ...]
    class_map: tuple[tuple[Fraction, ...], ...]
    basis: tuple[int, ...]
    eliminated: tuple[int, ...]

    def coords(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((Fraction(a) * b for a, b in zip(row, coeffs)), Fraction(0))
                     for row in self.class_map)

    def lift(self, cls: Sequence) -> tuple[Fraction, ...]:
        """The representative supported on the basis rays."""
        out = [Fraction(0)] * (len(self.basis) + len(self.eliminated))
        for i, x in zip(self.basis, cls):
            out[i] = Fraction(x)
        return tuple(out)


@lru_cache(maxsize=256)
def class_group(F: Fan) -> ClassGroup:
    n = F.rank
    V = F.ray_matrix()
    if (rank(V) if V else 0) != n:
        raise RaysDegenerateError("RaysDegenerate: the rays do not span N_Q")
    S, _, _ = smith_normal_form(V) if V else ([], None, None)
    inv = [S[i][i] for i in range(min(len(S), n))] if V else []
    torsion = tuple(d for d in inv if d > 1)
    # greedy elimination set from the last ray backwards
    elim: list[int] = []
    for i in reversed(range(F.nrays)):
        if rank([F.rays[j] for j in elim + [i]]) == len(elim) + 1:
            elim.append(i)
        if len(elim) == n:
            break
    elim.sort()
    basis = tuple(i for i in range(F.nrays) if i not in elim)
    # coords(a) = a_basis - V_basis . u  where V_elim u = a_elim
    Vinv = inverse([list(F.rays[i]) for i in elim]) if n else []
    rows = []
    for b in basis:
        row = [Fraction(0)] * F.nrays
        row[b] = Fraction(1)
        # u = Vinv a_elim; <u, v_b> = sum_k (v_b Vinv)_k a_{elim_k}
        w = matvec(transpose(Vinv, n), F.rays[b]) if n else []
        for k, e in enumerate(elim):
            row[e] -= w[k]
        rows.append(tuple(row))
    return ClassGroup(F.nrays - n, torsion, tuple(rows), basis, tuple(elim))


def canonical_divisor(F: Fan):
    from .divisors import WeilDivisor
    return WeilDivisor(F, [-1] * F.nrays)


# ---------------------------------------------------------------------------
# Morphisms

@dataclass(frozen=True)
class FanMorphism:
    """A toric morphism given by a lattice map sending cones into cones.

    ``kind`` is "refinement" (identity lattice map, source refines target)
    or "quotient" (surjective lattice map onto a lattice of lower rank).
    """

    source: Fan
    target: Fan
    lattice_map: tuple[tuple[int, ...], ...]
    kind: str = "refinement"

    @staticmethod
    def refinement(source: Fan, target: Fan) -> "FanMorphism":
        return FanMorphism(source, target, tuple(tuple(r) for r in identity(source.rank)), "refinement")

    @staticmethod
    def to_point(source: Fan) -> "FanMorphism":
        return FanMorphism(source, point_fan(), (), "quotient")

    def image(self, v: Sequence[int]) -> IntVec:
        return tuple(int(x) for x in matvec(self.lattice_map, v)) if self.lattice_map else ()

    def target_cone_of(self, v: Sequence[int]) -> ConeIdx | None:
        """The first maximal target cone containing the image of v."""
        w = self.image(v)
        for c in self.target.cones:
            if self.target.rank == 0 or self.target.cone(c).contains(w):
                return c
        return None

    def preimage(self, sigma: ConeIdx) -> tuple[list[ConeIdx], list[int]]:
        """Source maximal cones and rays mapping into the target cone sigma."""
        if self.target.rank == 0:
            return list(self.source.cones), list(range(self.source.nrays))
        C = self.target.cone(sigma)
        rays = [i for i, r in enumerate(self.source.rays) if C.contains(self.image(r))]
        rs = set(rays)
        cones = [c for c in self.source.cones if set(c) <= rs]
        return cones, rays

    @property
    def is_small(self) -> bool:
        return is_small(self)


def is_small(f: FanMorphism) -> bool:
    return f.kind == "refinement" and set(f.source.rays) == set(f.target.rays)


def _covers(F: Fan, subcones: list[ConeIdx], tau: PolyhedralCone) -> bool:
    """Whether full-dimensional subcones of F exactly cover the cone tau."""
    count: dict[ConeIdx, int] = {}
    for c in subcones:
        if F.cone_dim(c) != F.rank:
            return False
        for w in cone_facets(F, c):
            count[w] = count.get(w, 0) + 1
    for w, k in count.items():
        gens = [F.rays[i] for i in w]
        on_boundary = any(all(dot(h, g) == 0 for g in gens) for h in tau.facets)
        if k != (1 if on_boundary else 2):
            return False
    return bool(subcones)


def check_refinement(f: FanMorphism) -> list[Violation]:
    """Violations of the morphism axioms (empty list when f is well defined)."""
    out = []
    S, T = f.source, f.target
    if f.kind == "refinement":
        if S.rank != T.rank or [list(r) for r in f.lattice_map] != identity(S.rank):
            out.append(Violation("NotIdentityMap", "refinement must use the identity lattice map"))
            return out
    elif len(f.lattice_map) != T.rank or any(len(r) != S.rank for r in f.lattice_map):
        out.append(Violation("DimensionMismatch", "lattice map has the wrong shape"))
        return out
    home: dict[ConeIdx, ConeIdx] = {}
    for c in S.cones:
        img = [f.image(S.rays[i]) for i in c]
        tgt = None
        for t in T.cones:
            if T.rank == 0 or all(T.cone(t).contains(w) for w in img):
                tgt = t
                break
        if tgt is None:
            out.append(Violation("ConeNotMapped", f"source cone {list(c)} lies in no target cone"))
        else:
            home[c] = tgt
    if f.kind == "refinement" and not out:
        for t in T.cones:
            Tt = T.cone(t)
            inside = [c for c in S.cones if all(Tt.contains(S.rays[i]) for i in c)]
            if T.cone_dim(t) == T.rank and not _covers(S, inside, Tt):
                out.append(Violation("NotCovered", f"target cone {list(t)} is not subdivided"))
    return out


# ---------------------------------------------------------------------------
# Triangulations and relative projectivity

def _span_coords(F: Fan, idx: Sequence[int], basis_idx: Sequence[int]) -> list[list[Fraction]]:
    """Coordinates of rays idx in the basis given by rays basis_idx (same span)."""
    B = transpose(F.ray_matrix(basis_idx), F.rank)
    return [solve(B, F.rays[i], len(basis_idx)) for i in idx]


def _triangulations(F: Fan, sigma: ConeIdx) -> list[tuple[ConeIdx, ...]]:
    """All triangulations of sigma that use only its rays (hence all of them)."""
    d = F.cone_dim(sigma)
    C = F.cone(sigma)
    simplices = [s for s in itertools.combinations(sigma, d) if F.cone_dim(s) == d
                 and all(not F.cone(s).contains(F.rays[i]) for i in sigma if i not in s)]
    bfan = F.with_cones(simplices)
    facet_normals = C.facets

    def walls(s):
        return [tuple(x for x in s if x != i) for i in s]

    def boundary(w):
        return any(all(dot(h, F.rays[i]) == 0 for i in w) for h in facet_normals)

    @lru_cache(maxsize=None)
    def compatible(a, b):
        return cones_meet_properly(bfan, a, b)

    results = set()

    def extend(chosen: tuple[ConeIdx, ...]):
        count: dict[ConeIdx, int] = {}
        for s in chosen:
            for w in walls(s):
                count[w] = count.get(w, 0) + 1
        open_walls = sorted(w for w, k in count.items() if k == 1 and not boundary(w))
        if not open_walls:
            results.add(tuple(sorted(chosen)))
            return
        w = open_walls[0]
        for s in simplices:
            if s in chosen or not set(w) <= set(s):
                continue
            if all(compatible(*sorted((s, t))) for t in chosen):
                extend(tuple(sorted(chosen + (s,))))

    if simplices:
        first = sorted(s for s in simplices if sigma[0] in s)
        for s in first:
            extend((s,))
    return sorted(results)


def _linear_extension_rows(F: Fan, tau: ConeIdx, rho: int) -> list[Fraction] | None:
    """Coefficients c with v_rho = sum c_i v_{tau_i}, or None if v_rho is outside span(tau)."""
    B = transpose(F.ray_matrix(tau), F.rank)
    return solve(B, F.rays[rho], len(tau))


def projectivity_certificate(T: Fan, groups: Sequence[tuple[Sequence[ConeIdx], Sequence[int]]]
                             ) -> list[Fraction] | None:
    """Heights a_rho making the piecewise-linear function strictly convex on each group.

    Each group is (simplicial cones, rays) describing the subdivision of one
    base cone.  Strictness is encoded as slack >= 1.  Returns None when no
    such function exists.
    """
    A, b = [], []
    for cones, rays in groups:
        for tau in cones:
            for rho in rays:
                if rho in tau:
                    continue
                c = _linear_extension_rows(T, tau, rho)
                row = [Fraction(0)] * T.nrays
                row[rho] += 1
                if c is not None:
                    for ci, t in zip(c, tau):
                        row[t] -= ci
                    A.append(row)
                    b.append(1)
    if not A:
        return [Fraction(0)] * T.nrays
    return lp_feasible(A, b, nvars=T.nrays)


def _relative_groups(T: Fan, base: Fan) -> list[tuple[list[ConeIdx], list[int]]]:
    f = FanMorphism.refinement(T, base)
    return [f.preimage(s) for s in base.cones]


@dataclass
class QFactorialization:
    fan: Fan
    morphism: FanMorphism
    certificate: list[Fraction] = field(repr=False, default_factory=list)


def small_projective_qfactorializations(F: Fan, with_diagnostics: bool = False):
    """Simplicial small projective refinements of F, in canonical order.

    Each entry is a pair (fan, morphism).  With ``with_diagnostics`` a dict
    with the number of rejected (non-fan or non-projective) candidates is
    returned as well.
    """
    options = []
    for c in F.cones:
        if F.cone_dim(c) == len(c):
            options.append([(c,)])
        else:
            options.append(_triangulations(F, c))
    results = []
    rejected = {"not_a_fan": 0, "not_projective": 0}
    for choice in itertools.product(*options):
        cones = [s for part in choice for s in part]
        T = F.with_cones(cones)
        if T != F and validate_fan(T):
            rejected["not_a_fan"] += 1
            continue
        cert = projectivity_certificate(T, _relative_groups(T, F))
        if cert is None:
            rejected["not_projective"] += 1
            continue
        results.append(QFactorialization(T, FanMorphism.refinement(T, F), cert))
    results.sort(key=lambda q: q.fan.cones)
    out = [(q.fan, q.morphism) for q in results]
    if with_diagnostics:
        return out, rejected
    return out


# ---------------------------------------------------------------------------
# Random and star-subdivided fans

def _angle_key(v):
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half


def _ccw_sort(vectors):
    import functools

    def cmp(a, b):
        ha, hb = _angle_key(a), _angle_key(b)
        if ha != hb:
            return ha - hb
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)
    return sorted(vectors, key=functools.cmp_to_key(cmp))


def fan_from_planar_rays(rays: Sequence[Sequence[int]]) -> Fan | None:
    """Complete rank-2 fan with consecutive (counter-clockwise) rays as cones.

    Returns None if two consecutive rays span an angle >= pi.
    """
    rs = _ccw_sort([tuple(r) for r in rays])
    k = len(rs)
    if k < 3:
        return None
    for i in range(k):
        a, b = rs[i], rs[(i + 1) % k]
        if a[0] * b[1] - a[1] * b[0] <= 0:
            return None
    return Fan(2, rs, [(i, (i + 1) % k) for i in range(k)])


def random_complete_fan_2d(rng: random.Random, max_rays: int = 7, bound: int = 4) -> Fan:
    while True:
        k = rng.randint(3, max_rays)
        seen = set()
        for _ in range(k):
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if any(v):
                g = gcd_list(v)
                seen.add((v[0] // g, v[1] // g))
        F = fan_from_planar_rays(seen)
        if F is not None:
            return F


def star_subdivision(F: Fan, sigma: ConeIdx) -> tuple[Fan, FanMorphism]:
    """Star subdivision at the primitive sum of the rays of sigma (not small)."""
    from .exactla import primitive
    s = [0] * F.rank
    for i in sigma:
        s = [a + b for a, b in zip(s, F.rays[i])]
    new = primitive(s)
    rays = list(F.rays) + [new]
    k = len(rays) - 1
    cones = []
    G = Fan(F.rank, rays, F.cones)
    for c in F.cones:
        if not set(sigma) <= set(c):
            cones.append(c)
            continue
        for w in cone_facets(G, c):
            if not set(sigma) <= set(w):
                cones.append(tuple(w) + (k,))
    T = Fan(F.rank, rays, cones)
    return T, FanMorphism.refinement(T, F)
