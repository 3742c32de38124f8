"""Exact rational polyhedral cones.

A :class:`PolyhedralCone` may be built from generators, from inward
halfspace normals, or both; the other representation is produced on demand
by the double description method and memoized.  All stored vectors are
primitive integer vectors, so two cones are equal exactly when their
canonical forms agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (DimensionMismatchError, HasLinealityError, NotSeparableError,
                     ZeroConeError)
from .exactla import (as_fraction, dot, identity, integral_direction, nullspace, primitive,
                      rank, rref, solve)

IntVec = tuple[int, ...]


def _neg(v):
    return tuple(-x for x in v)


def _subspace_basis(vectors: Sequence[Sequence], dim: int) -> list[IntVec]:
    """Canonical integer basis of a linear span (scaled RREF rows)."""
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return []
    R, _ = rref(vecs, dim)
    return [integral_direction(row) for row in R]


def _reduce_mod(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Orthogonal projection of v onto the complement of span(basis)."""
    v = [as_fraction(x) for x in v]
    if not basis:
        return v
    gram = [[dot(a, b) for b in basis] for a in basis]
    coef = solve(gram, [dot(a, v) for a in basis])
    out = list(v)
    for c, b in zip(coef, basis):
        if c:
            out = [x - c * y for x, y in zip(out, b)]
    return out


def _double_description(constraints: Sequence[IntVec], dim: int) -> tuple[list[IntVec], list[IntVec]]:
    """Lineality basis and extreme rays of {x : <c, x> >= 0 for all c}.

    Constraints are inserted in lexicographic order; ray pairs are combined
    only when adjacent, decided by an exact rank test.
    """
    lin: list[IntVec] = [tuple(r) for r in identity(dim)]
    rays: list[IntVec] = []
    processed: list[IntVec] = []
    for h in sorted(set(constraints)):
        if not any(h):
            continue
        k = next((i for i, l in enumerate(lin) if dot(h, l) != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            a0 = dot(h, l0)
            if a0 < 0:
                l0, a0 = _neg(l0), -a0
            lin = [l if dot(h, l) == 0 else primitive([a0 * x - dot(h, l) * y for x, y in zip(l, l0)])
                   for l in lin]
            rays = [r if dot(h, r) == 0 else primitive([a0 * x - dot(h, r) * y for x, y in zip(r, l0)])
                    for r in rays]
            rays.append(primitive(l0))
            processed.append(h)
            continue
        vals = [dot(h, r) for r in rays]
        pos = [r for r, s in zip(rays, vals) if s > 0]
        neg = [r for r, s in zip(rays, vals) if s < 0]
        new = [r for r, s in zip(rays, vals) if s >= 0]
        if neg and pos:
            need = dim - len(lin) - 2
            tight = {r: frozenset(i for i, c in enumerate(processed) if dot(c, r) == 0)
                     for r in pos + neg}
            for p in pos:
                hp = dot(h, p)
                for n in neg:
                    z = tight[p] & tight[n]
                    if len(z) < need:
                        continue
                    if need > 0 and rank([processed[i] for i in z]) != need:
                        continue
                    hn = dot(h, n)
                    new.append(primitive([hp * b - hn * a for a, b in zip(p, n)]))
        processed.append(h)
        seen = set()
        rays = [r for r in new if not (r in seen or seen.add(r))]
    return lin, rays


class PolyhedralCone:
    """A closed rational polyhedral cone in Q^dim."""

    def __init__(self, dim: int, generators: Iterable[Sequence] | None = None,
                 halfspaces: Iterable[Sequence] | None = None):
        if generators is None and halfspaces is None:
            generators = []
        self.dim = dim
        self._input_gens = None
        self._input_half = None
        if generators is not None:
            gens = [integral_direction(g) for g in generators]
            if any(len(g) != dim for g in gens):
                raise DimensionMismatchError("generator of wrong length")
            self._input_gens = [g for g in gens if any(g)]
        if halfspaces is not None:
            hs = [integral_direction(h) for h in halfspaces]
            if any(len(h) != dim for h in hs):
                raise DimensionMismatchError("halfspace of wrong length")
            self._input_half = [h for h in hs if any(h)]
        self._vrep: tuple[tuple[IntVec, ...], tuple[IntVec, ...]] | None = None
        self._hrep: tuple[tuple[IntVec, ...], tuple[IntVec, ...]] | None = None

    # -- representations -------------------------------------------------
    def _v(self):
        if self._vrep is None:
            if self._input_gens is not None:
                gens = self._input_gens
                dual_lin, dual_rays = _double_description(gens, self.dim)
                lin, rays = _double_description(
                    list(dual_rays) + list(dual_lin) + [_neg(e) for e in dual_lin], self.dim)
            else:
                lin, rays = _double_description(self._input_half, self.dim)
            self._vrep = self._canonical(lin, rays)
        return self._vrep

    def _h(self):
        if self._hrep is None:
            lin, rays = self._v()
            gens = list(rays) + list(lin) + [_neg(l) for l in lin]
            eq, facets = _double_description(gens, self.dim)
            self._hrep = self._canonical(eq, facets)
        return self._hrep

    def _canonical(self, lin, rays):
        lin_b = _subspace_basis(lin, self.dim)
        red = {integral_direction(_reduce_mod(r, lin_b)) for r in rays}
        red.discard(tuple([0] * self.dim))
        return tuple(lin_b), tuple(sorted(red))

    @property
    def rays(self) -> tuple[IntVec, ...]:
        """Extreme rays modulo the lineality space (canonical representatives)."""
        return self._v()[1]

    @property
    def lineality(self) -> tuple[IntVec, ...]:
        return self._v()[0]

    @property
    def generators(self) -> tuple[IntVec, ...]:
        lin, rays = self._v()
        out = list(rays)
        for l in lin:
            out.extend([l, _neg(l)])
        return tuple(out)

    @property
    def facets(self) -> tuple[IntVec, ...]:
        return self._h()[1]

    @property
    def equations(self) -> tuple[IntVec, ...]:
        return self._h()[0]

    @property
    def halfspaces(self) -> tuple[IntVec, ...]:
        eq, facets = self._h()
        out = list(facets)
        for e in eq:
            out.extend([e, _neg(e)])
        return tuple(out)

    # -- basic queries ----------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.dim - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def is_full_space(self) -> bool:
        return len(self.lineality) == self.dim

    def canonical(self):
        return (self.dim,) + self._v()

    def __eq__(self, other):
        if not isinstance(other, PolyhedralCone):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        lin, rays = self._v()
        extra = f", lineality={list(lin)}" if lin else ""
        return f"PolyhedralCone(dim={self.dim}, rays={list(rays)}{extra})"

    def contains(self, x: Sequence) -> bool:
        x = [as_fraction(v) for v in x]
        if len(x) != self.dim:
            raise DimensionMismatchError("point of wrong length")
        return all(dot(h, x) >= 0 for h in self.halfspaces)

    def relative_interior_point(self) -> IntVec:
        if self.is_zero:
            raise ZeroConeError("ZeroCone: the zero cone has no nonzero interior point")
        s = [0] * self.dim
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)


def cone_from_generators(gens: Iterable[Sequence], dim: int | None = None) -> PolyhedralCone:
    gens = [tuple(g) for g in gens]
    if dim is None:
        if not gens:
            raise ValueError("ambient dimension needed for an empty generator list")
        dim = len(gens[0])
    return PolyhedralCone(dim, generators=gens)


def cone_from_halfspaces(halfspaces: Iterable[Sequence], dim: int) -> PolyhedralCone:
    return PolyhedralCone(dim, halfspaces=list(halfspaces))


def dd_convert(C: PolyhedralCone) -> PolyhedralCone:
    out = PolyhedralCone(C.dim, generators=C.generators, halfspaces=C.halfspaces)
    out._vrep, out._hrep = C._v(), C._h()
    return out


def dual_cone(C: PolyhedralCone) -> PolyhedralCone:
    out = PolyhedralCone(C.dim, generators=C.halfspaces)
    lin, rays = C._v()
    out._hrep = (lin, rays)
    eq, facets = C._h()
    out._vrep = (eq, facets)
    return out


def extremal_rays(C: PolyhedralCone) -> list[IntVec]:
    if C.lineality:
        raise HasLinealityError("HasLineality: cone contains a line")
    return list(C.rays)


def contains(C: PolyhedralCone, x: Sequence) -> bool:
    return C.contains(x)


def relative_interior_point(C: PolyhedralCone) -> IntVec:
    return C.relative_interior_point()


def _check_dims(C1, C2):
    if C1.dim != C2.dim:
        raise DimensionMismatchError(f"ambient dimensions differ: {C1.dim} vs {C2.dim}")


def intersect(C1: PolyhedralCone, C2: PolyhedralCone) -> PolyhedralCone:
    _check_dims(C1, C2)
    return PolyhedralCone(C1.dim, halfspaces=list(C1.halfspaces) + list(C2.halfspaces))


def minkowski_sum(C1: PolyhedralCone, C2: PolyhedralCone) -> PolyhedralCone:
    _check_dims(C1, C2)
    return PolyhedralCone(C1.dim, generators=list(C1.generators) + list(C2.generators))


@dataclass(frozen=True)
class Face:
    parent: PolyhedralCone
    covector: IntVec
    generators: tuple[IntVec, ...]
    dim: int

    @property
    def cone(self) -> PolyhedralCone:
        return PolyhedralCone(self.parent.dim, generators=self.generators)

    def __repr__(self):
        return f"Face(dim={self.dim}, generators={list(self.generators)}, covector={self.covector})"


def faces(C: PolyhedralCone) -> list[Face]:
    """All faces of a pointed cone, ordered by dimension then covector."""
    rays = extremal_rays(C)
    facets = C.facets
    incid = [frozenset(i for i, r in enumerate(rays) if dot(f, r) == 0) for f in facets]
    found = {frozenset(range(len(rays)))}
    frontier = set(found)
    while frontier:
        nxt = set()
        for s in frontier:
            for f in incid:
                t = s & f
                if t not in found:
                    found.add(t)
                    nxt.add(t)
        frontier = nxt
    out = []
    zero = tuple([0] * C.dim)
    for s in found:
        gens = tuple(rays[i] for i in sorted(s))
        cov = zero
        for f, inc in zip(facets, incid):
            if s <= inc:
                cov = tuple(a + b for a, b in zip(cov, f))
        out.append(Face(C, integral_direction(cov) if any(cov) else zero, gens,
                        rank([list(g) for g in gens]) if gens else 0))
    out.sort(key=lambda F: (F.dim, F.covector))
    return out


def face_from_generators(C: PolyhedralCone, gens: Iterable[Sequence]) -> Face | None:
    """The face of C spanned by gens, or None if gens do not span a face."""
    gens = [integral_direction(g) for g in gens]
    for F in faces(C):
        if PolyhedralCone(C.dim, generators=F.generators) == PolyhedralCone(C.dim, generators=gens):
            return F
    return None


def strict_separator(F, W: PolyhedralCone) -> IntVec:
    """Integral covector vanishing on F and strictly positive on W minus 0.

    Among the vertices of {h : h = 0 on F, <h, w> >= 1 on rays w of W},
    restricted to span(F + W), the lexicographically smallest one is returned
    after clearing denominators.
    """
    if isinstance(F, Face):
        fgens = list(F.generators)
    elif isinstance(F, PolyhedralCone):
        fgens = list(F.generators)
    else:
        fgens = [tuple(v) for v in F]
    dim = W.dim
    if any(len(f) != dim for f in fgens):
        raise DimensionMismatchError("face and cone live in different spaces")
    if W.lineality:
        raise NotSeparableError("NotSeparable: W contains a line")
    wrays = list(W.rays)
    span = [list(v) for v in fgens + wrays if any(v)]
    perp = [integral_direction(v) for v in nullspace(span, dim)] if span else \
        [tuple(r) for r in identity(dim)]
    # homogenized polyhedron in (h, t)
    cons = []
    for v in list(fgens) + perp:
        row = tuple(v) + (0,)
        cons.extend([row, _neg(row)])
    for w in wrays:
        cons.append(tuple(w) + (-1,))
    cons.append(tuple([0] * dim) + (1,))
    lin, rays = _double_description(cons, dim + 1)
    verts = sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0)
    if lin or not verts:
        raise NotSeparableError("NotSeparable: no covector vanishes on F and is positive on W")
    return integral_direction(verts[0])
