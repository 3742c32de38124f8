"""Contractions of K-negative faces and the flip-free minimal model program."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .cones_ns import (canonical_class, is_rational_face, k_negative_extremal_faces, ne_cone_w,
                       picard_rank, supporting_divisor)
from .divisors import (SectionPolyhedron, WeilDivisor, canonical_divisor, is_nef,
                       is_relatively_ample, is_relatively_nef, local_character, q_cartierization)
from .errors import NotExtremalFaceError
from .exactla import (det, dot, hermite_normal_form, identity, integer_kernel_basis, integral_direction,
                      inverse, matvec, nullspace, rank, transpose)
from .polyhedra import Face, PolyhedralCone, _subspace_basis
from .toric import Fan, FanMorphism, is_complete, point_fan, small_projective_qfactorializations


@dataclass(frozen=True)
class ContractionDiagram:
    """X <- X~ -> Y for a K-negative face, with f small and phi the contraction."""

    source: Fan
    middle: Fan
    target: Fan
    f: FanMorphism = field(repr=False)
    phi: FanMorphism = field(repr=False)
    divisor: WeilDivisor = field(repr=False)
    divisor_middle: WeilDivisor = field(repr=False)
    fiber_type: bool
    assertions: dict = field(default_factory=dict, compare=False)

    @property
    def kind(self) -> str:
        if self.fiber_type:
            return "fiber"
        if self.target.nrays < self.middle.nrays:
            return "divisorial"
        if self.target != self.middle:
            return "small"
        return "embedding"


def _polytope_span(verts: Sequence[Sequence[Fraction]], n: int) -> list[tuple[int, ...]]:
    if not verts:
        return []
    diffs = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    return _subspace_basis(diffs, n)


def _quotient_map(span: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Rows of a surjection N -> Z^k whose kernel is N intersected with span^perp.

    The rows form a lattice basis of M intersected with span.
    """
    if len(span) == n:
        return [tuple(r) for r in identity(n)]
    if not span:
        return []
    perp = [list(integral_direction(v)) for v in nullspace([list(s) for s in span], n)]
    return [tuple(r) for r in integer_kernel_basis(perp, n)]


def contract_face(F: Fan, G) -> ContractionDiagram:
    """The contraction of a K-negative extremal face G of NE(F)_W."""
    faces = k_negative_extremal_faces(F)
    gens = G.generators if isinstance(G, (Face, PolyhedralCone)) else G
    match = [H for H in faces if H.cone == PolyhedralCone(ne_cone_w(F).dim, generators=list(gens))]
    if not match:
        raise NotExtremalFaceError("NotExtremalFace: not a K-negative extremal face")
    G = match[0]
    D = supporting_divisor(F, G)
    Xt, f, Dt = q_cartierization(D)
    n = F.rank
    P = SectionPolyhedron(Dt)
    span = _polytope_span(P.vertices, n)
    A = _quotient_map(span, n)
    k = len(A)
    groups: dict[tuple[Fraction, ...], set[int]] = {}
    for tau in Xt.cones:
        m = tuple(local_character(Dt, tau))
        groups.setdefault(m, set()).update(tau)
    if k == 0:
        Y = point_fan()
        phi = FanMorphism(Xt, Y, (), "quotient")
    else:
        images = []
        for m in sorted(groups):
            pts = [matvec(A, Xt.rays[i]) for i in sorted(groups[m])]
            pts = [p for p in pts if any(p)]
            images.append(PolyhedralCone(k, generators=pts))
        found = {r for C in images for r in C.rays}
        # birational targets keep the ray order of the middle model
        rays = [r for r in Xt.rays if r in found] if k == n else sorted(found)
        pos = {r: i for i, r in enumerate(rays)}
        cones = sorted({tuple(sorted(pos[r] for r in C.rays)) for C in images})
        Y = Fan(k, rays, cones)
        if k == n:
            phi = FanMorphism.refinement(Xt, Y)
        else:
            phi = FanMorphism(Xt, Y, tuple(A), "quotient")
    fiber = k < n
    K_t = canonical_divisor(Xt)
    assertions = {
        "f_small": f.is_small,
        "log_terminal": True,
        "divisor_nef": is_nef(Dt).is_yes,
        "divisor_relatively_ample": is_relatively_ample(Dt, f).is_yes,
        "picard_bound": picard_rank(Xt) <= picard_rank(F) + 1,
        "face_rational_on_middle": _face_rational_on(Xt, G),
    }
    if fiber:
        assertions["log_fano_fiber"] = is_relatively_ample(-K_t, phi).is_yes
    return ContractionDiagram(F, Xt, Y, f, phi, D, Dt, fiber, assertions)


def _face_rational_on(Xt: Fan, G: Face) -> bool:
    """Whether G is a rational face of NE(Xt)_W (same class coordinates as X)."""
    try:
        return is_rational_face(Xt, G.generators)
    except NotExtremalFaceError:
        return False


def qfactorialization_with_nef_K(F: Fan) -> tuple[Fan, FanMorphism]:
    """First small projective Q-factorialization on which K is relatively nef."""
    for T, f in small_projective_qfactorializations(F):
        if is_relatively_nef(canonical_divisor(T), f).is_yes:
            return T, f
    raise AssertionError("no Q-factorialization with relatively nef K found")


# ---------------------------------------------------------------------------
# Fingerprints and cycles

@dataclass(frozen=True)
class Fingerprint:
    digest: str
    exhaustive: bool


def fingerprint(F: Fan, bound: int = 20000) -> Fingerprint:
    """Canonical hash of F up to lattice automorphisms.

    For every ordered tuple B of independent rays, the rays are written in
    the basis B together with the Hermite form of the lattice N in those
    coordinates; the lexicographically least such description is invariant
    under GL(N).  When more than ``bound`` tuples exist only the first
    ``bound`` are examined and the result is flagged non-exhaustive.
    """
    n = F.rank
    if n == 0:
        return Fingerprint(hashlib.sha256(b"point").hexdigest(), True)
    best = None
    count = 0
    exhaustive = True
    for B in itertools.permutations(range(F.nrays), n):
        if rank(F.ray_matrix(B)) < n:
            continue
        count += 1
        if count > bound:
            exhaustive = False
            break
        Binv = inverse(transpose(F.ray_matrix(B), n))
        d = abs(det(F.ray_matrix(B)))
        # lattice N in B-coordinates is Binv Z^n; scale by d to make it integral
        lat = hermite_normal_form([[int(d * Binv[i][j]) for i in range(n)] for j in range(n)])
        coords = [tuple(matvec(Binv, r)) for r in F.rays]
        order = sorted(range(F.nrays), key=lambda i: coords[i])
        pos = {old: new for new, old in enumerate(order)}
        rays = tuple(coords[i] for i in order)
        cones = tuple(sorted(tuple(sorted(pos[i] for i in c)) for c in F.cones))
        key = (tuple(map(tuple, lat)), rays, cones)
        if best is None or key < best:
            best = key
    digest = hashlib.sha256(repr((n, best)).encode()).hexdigest()
    return Fingerprint(digest, exhaustive)


# ---------------------------------------------------------------------------
# The program

@dataclass
class MmpStep:
    index: int
    model: Fan
    face: Face
    face_index: int
    diagram: ContractionDiagram
    fingerprint: Fingerprint
    k_values: tuple[Fraction, ...] = ()

    @property
    def kind(self) -> str:
        return self.diagram.kind


@dataclass
class MmpTrace:
    selector: str
    restart: bool
    steps: list[MmpStep] = field(default_factory=list)
    status: str = "running"
    final_model: Fan | None = None
    final_fingerprint: Fingerprint | None = None
    minimal_model: tuple[Fan, FanMorphism] | None = None
    cycle: tuple[int, int] | None = None
    choices: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def models(self) -> list[Fan]:
        out = [s.model for s in self.steps]
        if self.final_model is not None:
            out.append(self.final_model)
        return out

    def fingerprints(self) -> list[Fingerprint]:
        out = [s.fingerprint for s in self.steps]
        if self.final_fingerprint is not None:
            out.append(self.final_fingerprint)
        return out


def detect_cycle(trace: MmpTrace) -> tuple[int, int] | None:
    """Earliest (i, j), i < j, with equal model fingerprints, or None."""
    fps = trace.fingerprints()
    for j in range(len(fps)):
        for i in range(j):
            if fps[i].digest == fps[j].digest:
                return i, j
    return None


Selector = Callable[[Fan, list[Face]], "int | None"]


def select_max_face(F: Fan, faces: list[Face]) -> int:
    top = max(G.dim for G in faces)
    return next(i for i, G in enumerate(faces) if G.dim == top)


def select_ray_first(F: Fan, faces: list[Face]) -> int:
    for i, G in enumerate(faces):
        if G.dim == 1:
            return i
    return select_max_face(F, faces)


SELECTORS: dict[str, Selector] = {"max-face": select_max_face, "ray-first": select_ray_first}


def run_mmp(F: Fan, selector: str | Selector = "max-face", max_steps: int = 20,
            restart: bool = False, fingerprint_bound: int = 20000,
            selector_name: str = "callback") -> MmpTrace:
    """Run the program from the complete fan F.

    ``selector`` is a name from SELECTORS or a callable (model, faces) ->
    index; a callable returning None aborts the run.
    """
    if not is_complete(F):
        raise ValueError("the program needs a complete fan")
    if isinstance(selector, str):
        name, choose = selector, SELECTORS[selector]
    else:
        name, choose = selector_name, selector
    trace = MmpTrace(name, restart)
    X = F
    while True:
        fp = fingerprint(X, fingerprint_bound)
        if X.rank == 0:
            trace.final_model, trace.final_fingerprint = X, fp
            trace.status = "Mori fiber space" if trace.steps else "minimal model"
            break
        if is_nef(canonical_divisor(X)).is_yes:
            trace.final_model, trace.final_fingerprint = X, fp
            trace.minimal_model = qfactorialization_with_nef_K(X)
            trace.status = "minimal model"
            break
        if len(trace.steps) >= max_steps:
            trace.final_model, trace.final_fingerprint = X, fp
            trace.status = "inconclusive"
            break
        faces = k_negative_extremal_faces(X)
        idx = choose(X, faces)
        if idx is None:
            trace.final_model, trace.final_fingerprint = X, fp
            trace.status = "user-abort"
            break
        G = faces[idx]
        trace.choices.append(idx)
        diagram = contract_face(X, G)
        K = canonical_class(X)
        step = MmpStep(len(trace.steps) + 1, X, G, idx, diagram, fp,
                       tuple(dot(K, g) for g in G.generators))
        trace.steps.append(step)
        Y = diagram.target
        if diagram.fiber_type and not (restart and Y.rank > 0):
            trace.final_model, trace.final_fingerprint = Y, fingerprint(Y, fingerprint_bound)
            trace.status = "Mori fiber space"
            break
        X = Y
        probe = MmpTrace(name, restart, trace.steps, final_fingerprint=fingerprint(X, fingerprint_bound))
        cyc = detect_cycle(probe)
        if cyc is not None:
            trace.final_model, trace.final_fingerprint = X, probe.final_fingerprint
            trace.cycle = cyc
            exhaustive = all(fp.exhaustive for fp in trace.fingerprints())
            trace.status = "cycle-detected" if exhaustive else "possible cycle"
            break
    return trace
