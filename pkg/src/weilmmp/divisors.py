"""Weil divisors on fans and their positivity.

Convention: D = sum a_rho D_rho, and the sections of O(mD) are the lattice
points u with <u, v_rho> >= -m a_rho.  On a cone sigma, D is Q-Cartier when
some m_sigma satisfies <m_sigma, v_rho> = -a_rho for every ray of sigma.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NonIntegralLevelError, RequiresCompleteError, SearchLimitExceeded
from .exactla import as_fraction, dot, integrality_index, lcm, lcm_list, solve
from .polyhedra import PolyhedralCone
from .toric import ConeIdx, Fan, FanMorphism, class_group, is_complete

DEFAULT_SEARCH_RADIUS = 64


def search_radius() -> int:
    return int(os.environ.get("WEILMMP_MAX_LATTICE_SEARCH", DEFAULT_SEARCH_RADIUS))


@dataclass(frozen=True)
class WeilDivisor:
    fan: Fan
    coeffs: tuple[Fraction, ...]

    def __init__(self, fan: Fan, coeffs: Sequence):
        coeffs = tuple(as_fraction(a) for a in coeffs)
        if len(coeffs) != fan.nrays:
            raise ValueError(f"expected {fan.nrays} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, fan: Fan) -> "WeilDivisor":
        return cls(fan, [0] * fan.nrays)

    @classmethod
    def prime(cls, fan: Fan, i: int) -> "WeilDivisor":
        return cls(fan, [int(j == i) for j in range(fan.nrays)])

    @classmethod
    def from_class(cls, fan: Fan, cls_coords: Sequence) -> "WeilDivisor":
        """The representative of a class supported on the class-basis rays."""
        return cls(fan, class_group(fan).lift(cls_coords))

    def __add__(self, other: "WeilDivisor") -> "WeilDivisor":
        return WeilDivisor(self.fan, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "WeilDivisor") -> "WeilDivisor":
        return WeilDivisor(self.fan, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "WeilDivisor":
        return WeilDivisor(self.fan, [-a for a in self.coeffs])

    def __mul__(self, k) -> "WeilDivisor":
        k = as_fraction(k)
        return WeilDivisor(self.fan, [k * a for a in self.coeffs])

    __rmul__ = __mul__

    def on(self, fan: Fan) -> "WeilDivisor":
        """Strict transform to a fan with the same rays."""
        return WeilDivisor(fan, self.coeffs)

    @property
    def denominator(self) -> int:
        return lcm_list(a.denominator for a in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"WeilDivisor({[str(a) for a in self.coeffs]})"


def canonical_divisor(F: Fan) -> WeilDivisor:
    return WeilDivisor(F, [-1] * F.nrays)


def class_of(D: WeilDivisor) -> tuple[Fraction, ...]:
    return class_group(D.fan).coords(D.coeffs)


# ---------------------------------------------------------------------------
# Local Cartier data

def local_character(D: WeilDivisor, cone: ConeIdx) -> list[Fraction] | None:
    """A rational m with <m, v_rho> = -a_rho on the rays of the cone, or None."""
    F = D.fan
    if not cone:
        return [Fraction(0)] * F.rank
    return solve(F.ray_matrix(cone), [-D.coeffs[i] for i in cone], F.rank)


@dataclass(frozen=True)
class CartierLevel:
    kind: str  # "Cartier", "QCartier" or "NotQCartier"
    index: int | None = None

    def __str__(self):
        return f"QCartier({self.index})" if self.kind == "QCartier" else self.kind


def cartier_level(D: WeilDivisor) -> CartierLevel:
    F = D.fan
    k = 1
    for c in F.cones:
        idx = integrality_index(F.ray_matrix(c), [-D.coeffs[i] for i in c], F.rank)
        if idx is None:
            return CartierLevel("NotQCartier")
        k = lcm(k, idx)
    return CartierLevel("Cartier", 1) if k == 1 else CartierLevel("QCartier", k)


def is_q_cartier(D: WeilDivisor) -> bool:
    return all(local_character(D, c) is not None for c in D.fan.cones)


# ---------------------------------------------------------------------------
# Section polyhedra

@dataclass(frozen=True)
class SectionPolyhedron:
    """{u : <u, v_rho> >= -m a_rho} over all rays, or over the rays of one cone."""

    divisor: WeilDivisor
    level: int = 1
    cone: ConeIdx | None = None

    @property
    def inequalities(self) -> list[tuple[tuple[int, ...], Fraction]]:
        F, D = self.divisor.fan, self.divisor
        rays = range(F.nrays) if self.cone is None else self.cone
        return [(F.rays[i], -self.level * D.coeffs[i]) for i in rays]

    def _homogenized(self) -> PolyhedralCone:
        n = self.divisor.fan.rank
        hs = [tuple(v) + (-c,) for v, c in self.inequalities]
        hs.append(tuple([0] * n) + (1,))
        return PolyhedralCone(n + 1, halfspaces=hs)

    def _split(self):
        return _split_homogenized(self._homogenized())

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        return self._split()[0]

    @property
    def recession_rays(self) -> list[tuple[int, ...]]:
        return self._split()[1]

    @property
    def lineality(self) -> list[tuple[int, ...]]:
        return self._split()[2]

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dimension(self) -> int:
        """Dimension of the polyhedron (-1 when empty)."""
        if self.is_empty:
            return -1
        return self._homogenized().dimension - 1

    def contains(self, u: Sequence) -> bool:
        return all(dot(v, u) >= c for v, c in self.inequalities)

    def lattice_points(self) -> list[tuple[int, ...]]:
        verts, rec, lin = self._split()
        if rec or lin:
            raise ValueError("lattice points requested for an unbounded polyhedron")
        if not verts:
            return []
        n = self.divisor.fan.rank
        lo = [math.ceil(min(v[i] for v in verts)) for i in range(n)]
        hi = [math.floor(max(v[i] for v in verts)) for i in range(n)]
        return lattice_points_in_box(lo, hi, self.inequalities)


@lru_cache(maxsize=8192)
def _split_canonical(canon):
    _, lin, rays = canon
    verts = sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0)
    rec = sorted(tuple(r[:-1]) for r in rays if r[-1] == 0)
    return verts, rec, [tuple(l[:-1]) for l in lin]


def _split_homogenized(C: PolyhedralCone):
    """(vertices, recession rays, lineality) of the polyhedron at height t = 1.

    With lineality present the vertices are representatives modulo it.
    """
    return _split_canonical(C.canonical())


def lattice_points_in_box(lo: Sequence[int], hi: Sequence[int],
                          ineqs: Sequence[tuple[Sequence[int], Fraction]]) -> list[tuple[int, ...]]:
    """Lattice points u in the box lo <= u <= hi with <v, u> >= c for each (v, c).

    The last coordinate is not enumerated: its range is solved from the
    inequalities for each choice of the others.
    """
    n = len(lo)
    R = search_radius()
    if any(l < -R or h > R for l, h in zip(lo, hi)):
        raise SearchLimitExceeded(
            f"SearchLimitExceeded: lattice box exceeds radius {R} (set WEILMMP_MAX_LATTICE_SEARCH)")
    if n == 0:
        return [()] if all(c <= 0 for _, c in ineqs) else []
    out = []
    for head in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n - 1)]):
        zlo, zhi = Fraction(lo[-1]), Fraction(hi[-1])
        ok = True
        for v, c in ineqs:
            rest = c - sum(a * b for a, b in zip(v, head))
            last = v[-1]
            if last > 0:
                zlo = max(zlo, Fraction(rest) / last)
            elif last < 0:
                zhi = min(zhi, Fraction(rest) / last)
            elif rest > 0:
                ok = False
                break
        if not ok:
            continue
        for z in range(math.ceil(zlo), math.floor(zhi) + 1):
            out.append(head + (z,))
    return out


def global_sections(D: WeilDivisor, m: int = 1) -> list[tuple[int, ...]]:
    """Lattice points of P(mD), a basis of H^0(X, O(mD)) for a complete fan."""
    return SectionPolyhedron(D, m).lattice_points()


# ---------------------------------------------------------------------------
# Q-Cartierization and pushforward

@lru_cache(maxsize=4096)
def _qcart(D: WeilDivisor):
    F = D.fan
    cones: list[ConeIdx] = []
    changed = False
    for c in F.cones:
        if local_character(D, c) is not None:
            cones.append(c)
            continue
        changed = True
        P = SectionPolyhedron(D, 1, c)
        verts = P.vertices
        if not verts:  # cannot happen: the local polyhedron contains m + sigma^vee
            raise AssertionError("empty local section polyhedron")
        for w in verts:
            tight = tuple(i for i in c if dot(w, F.rays[i]) == -D.coeffs[i])
            cones.append(tight)
    if not changed:
        return F
    return Fan(F.rank, F.rays, cones)


def q_cartierization(D: WeilDivisor) -> tuple[Fan, FanMorphism, WeilDivisor]:
    """The small model Y on which D is Q-Cartier and relatively ample.

    Each non-Q-Cartier cone sigma is replaced by the normal fan of the local
    section polyhedron P_sigma(D): its vertices correspond to the new
    maximal cones, spanned by the rays tight at the vertex.
    """
    Y = _qcart(D)
    return Y, FanMorphism.refinement(Y, D.fan), D.on(Y)


def pushforward(D: WeilDivisor, f: FanMorphism) -> WeilDivisor:
    """Direct image of D under f.

    For small refinements the coefficients are unchanged.  Otherwise the
    coefficient of a target ray collects the coefficients of source rays whose
    image spans that ray; rays mapping to zero or into higher cones are dropped.
    """
    S, T = f.source, f.target
    if f.kind == "refinement" and S.rays == T.rays:
        return WeilDivisor(T, D.coeffs)
    out = [Fraction(0)] * T.nrays
    tpos = {r: i for i, r in enumerate(T.rays)}
    for i, r in enumerate(S.rays):
        w = f.image(r)
        if not any(w):
            continue
        g = math.gcd(*w)
        w = tuple(x // g for x in w)
        if w in tpos:
            out[tpos[w]] += D.coeffs[i]
    return WeilDivisor(T, out)


# ---------------------------------------------------------------------------
# Verdicts

@dataclass(frozen=True)
class PositivityVerdict:
    kind: str  # "yes", "no" or "unknown"
    certificate: dict = field(default_factory=dict, compare=False)

    @property
    def is_yes(self) -> bool:
        return self.kind == "yes"

    @property
    def is_no(self) -> bool:
        return self.kind == "no"

    def __str__(self):
        return self.kind


def _yes(**cert) -> PositivityVerdict:
    return PositivityVerdict("yes", cert)


def _no(**cert) -> PositivityVerdict:
    return PositivityVerdict("no", cert)


def _require_complete(F: Fan):
    if not is_complete(F):
        raise RequiresCompleteError("RequiresComplete: absolute positivity needs a complete fan")


def _convexity(D: WeilDivisor, f: FanMorphism, strict: bool):
    """First violated wall inequality of the support function of D over f, or None.

    D must be Q-Cartier on f.source.  Returns (base cone, cone, ray, value).
    """
    F = f.source
    for sigma in f.target.cones:
        cones, rays = f.preimage(sigma)
        for tau in cones:
            m = local_character(D, tau)
            for rho in rays:
                if rho in tau:
                    continue
                val = dot(m, F.rays[rho]) + D.coeffs[rho]
                if val < 0 or (strict and val == 0):
                    return sigma, tau, rho, val
    return None


def _lift_morphism(Y: Fan, f: FanMorphism) -> FanMorphism:
    return FanMorphism(Y, f.target, f.lattice_map, f.kind)


def _relative_positivity(D: WeilDivisor, f: FanMorphism, strict: bool) -> PositivityVerdict:
    if D.fan != f.source:
        raise ValueError("divisor does not live on the source of the morphism")
    Y, _, DY = q_cartierization(D)
    bad = _convexity(DY, _lift_morphism(Y, f), strict)
    name = "ample" if strict else "nef"
    if bad is None:
        return _yes(model=Y, test=f"relatively {name} support function")
    sigma, tau, rho, val = bad
    return _no(model=Y, base_cone=sigma, cone=tau, ray=rho, value=val,
               test=f"wall inequality fails for ray {rho} against cone {list(tau)}")


def is_relatively_nef(D: WeilDivisor, f: FanMorphism) -> PositivityVerdict:
    return _relative_positivity(D, f, strict=False)


def is_relatively_ample(D: WeilDivisor, f: FanMorphism) -> PositivityVerdict:
    return _relative_positivity(D, f, strict=True)


def is_nef(D: WeilDivisor) -> PositivityVerdict:
    _require_complete(D.fan)
    return is_relatively_nef(D, FanMorphism.to_point(D.fan))


def is_ample(D: WeilDivisor) -> PositivityVerdict:
    _require_complete(D.fan)
    return is_relatively_ample(D, FanMorphism.to_point(D.fan))


def is_big(D: WeilDivisor) -> PositivityVerdict:
    _require_complete(D.fan)
    dim = SectionPolyhedron(D).dimension
    if dim == D.fan.rank:
        return _yes(section_polytope_dimension=dim)
    return _no(section_polytope_dimension=dim)


def effective_cone(F: Fan) -> PolyhedralCone:
    G = class_group(F)
    return PolyhedralCone(G.rank, generators=[G.coords(WeilDivisor.prime(F, i).coeffs)
                                              for i in range(F.nrays)])


def is_pseff(D: WeilDivisor) -> PositivityVerdict:
    _require_complete(D.fan)
    c = class_of(D)
    if effective_cone(D.fan).contains(c):
        return _yes(cls=c)
    return _no(cls=c)


# ---------------------------------------------------------------------------
# Global generation

@dataclass(frozen=True)
class GenerationResult:
    generated: bool
    level: int
    cone: ConeIdx | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.generated


def is_globally_generated(D: WeilDivisor, m: int = 1) -> GenerationResult:
    """Whether O(mD) is generated by global sections, by lattice enumeration.

    For each maximal cone sigma, every lattice point of P_sigma(mD) equals
    g + s with s in sigma^vee and g in the bounded region conv(vertices) +
    sum [0, 1] w_j (w_j the extremal rays of sigma^vee).  It is enough to check
    that each lattice g in that region dominates some global section on sigma.
    """
    if m < 1:
        raise ValueError("level must be a positive integer")
    if any((m * a).denominator != 1 for a in D.coeffs):
        raise NonIntegralLevelError(f"NonIntegralLevel: {m}D is not integral")
    F = D.fan
    n = F.rank
    glob = global_sections(D, m) if is_complete(F) else None
    if glob is None:
        raise RequiresCompleteError("RequiresComplete: global generation needs a complete fan")
    for c in F.cones:
        P = SectionPolyhedron(D, m, c)
        verts = P.vertices
        if not verts:
            continue
        ws = P.recession_rays
        lo = [math.floor(min(v[i] for v in verts)) + sum(min(0, w[i]) for w in ws) for i in range(n)]
        hi = [math.ceil(max(v[i] for v in verts)) + sum(max(0, w[i]) for w in ws) for i in range(n)]
        rays = [F.rays[i] for i in c]
        gvals = [tuple(dot(u, r) for r in rays) for u in glob]
        gset = set(glob)
        for g in lattice_points_in_box(lo, hi, P.inequalities):
            if g in gset:
                continue
            vals = [dot(g, r) for r in rays]
            if not any(all(a >= b for a, b in zip(vals, gv)) for gv in gvals):
                return GenerationResult(False, m, c, g)
    return GenerationResult(True, m)


def is_agg(D: WeilDivisor, schedule_length: int = 8) -> PositivityVerdict:
    """Asymptotic global generation, as a three-valued verdict.

    "no" comes from a failed nef test; "yes" from a level in the schedule
    m*, 2m*, ..., K m* at which O(mD) is globally generated, or from the
    sufficient condition "D nef and aD - K nef and big" for some tested a.
    """
    _require_complete(D.fan)
    nef = is_nef(D)
    if nef.is_no:
        return _no(reason="not nef", nef=nef.certificate)
    Y, _, DY = q_cartierization(D)
    lvl = cartier_level(DY)
    mstar = D.denominator * (lvl.index or 1)
    limited = False
    for k in range(1, schedule_length + 1):
        try:
            if is_globally_generated(D, k * mstar):
                return _yes(level=k * mstar, route="lattice generation")
        except SearchLimitExceeded:
            limited = True
            break
    K = canonical_divisor(D.fan)
    for a in range(1, schedule_length + 1):
        E = a * D - K
        if is_nef(E).is_yes and is_big(E).is_yes:
            return _yes(a=a, route="aD - K nef and big")
    schedule = [k * mstar for k in range(1, schedule_length + 1)]
    return PositivityVerdict("unknown", {"schedule": schedule, "search_limited": limited})
