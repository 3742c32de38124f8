"""Command line interface.

Every command builds a tree of trace records.  ``--format machine`` prints
it in the trace grammar; the default text format prints the same tree as
indented ``key: values`` lines.

Exit status: 0 on success, 1 on a mathematical "no" (``validate`` on an
invalid fan; ``mmp`` ending inconclusive, in a cycle or aborted by the
user), 2 on usage, input or internal errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import cones_ns, divisors, mmp, toric
from .errors import InvalidFanError, NotPlanarError, WeilMMPError
from .figures import class_label, emit_cone_figure
from .formats import Record, emit_trace, format_rational, parse_divisor, parse_fan, parse_trace
from .polyhedra import PolyhedralCone, intersect

COMMANDS = ("validate", "clgroup", "class", "positivity", "nef-cone", "curve-cone", "faces",
            "support", "contract", "mmp", "experiment")


class UsageError(WeilMMPError):
    code = "Usage"


# ---------------------------------------------------------------------------
# Record builders

def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def fan_record(F: toric.Fan, key: str = "model", fp: mmp.Fingerprint | None = None) -> Record:
    r = Record(key, "rank", F.rank, "rays", F.nrays, "cones", len(F.cones))
    if fp is not None:
        r.args += ("fingerprint", fp.digest[:16] if fp.exhaustive else fp.digest[:16] + "~")
    for v in F.rays:
        r.add("ray", *_vec(v))
    for c in F.cones:
        r.add("cone", *(c or ["-"]))
    return r


def cone_record(key: str, C: PolyhedralCone) -> Record:
    r = Record(key, "dim", C.dimension, "ambient", C.dim)
    for v in C.rays:
        r.add("ray", *_vec(v))
    for v in C.lineality:
        r.add("line", *_vec(v))
    for h in C.facets:
        r.add("facet", *_vec(h))
    return r


def face_record(i: int, G, F: toric.Fan) -> Record:
    K = cones_ns.canonical_class(F)
    r = Record("face", "index", i, "dim", G.dim, "rational", cones_ns.is_rational_face(F, G))
    for g in G.generators:
        r.add("generator", *_vec(g)).add("k-pairing", format_rational(sum(a * b for a, b in zip(K, g))))
    r.add("covector", *_vec(G.covector))
    return r


def divisor_record(D: divisors.WeilDivisor, key: str = "divisor") -> Record:
    r = Record(key, *_vec(D.coeffs))
    r.add("class", *_vec(divisors.class_of(D)))
    return r


def diagram_record(d: mmp.ContractionDiagram) -> list[Record]:
    out = [divisor_record(d.divisor), fan_record(d.middle, "middle"), fan_record(d.target, "target")]
    if d.phi.lattice_map:
        lm = Record("lattice-map")
        for row in d.phi.lattice_map:
            lm.add("row", *row)
        out.append(lm)
    out.append(Record("kind", d.kind, "fiber-type", d.fiber_type))
    for k, v in d.assertions.items():
        out.append(Record("assert", k.replace("_", "-"), v))
    return out


def trace_records(tr: mmp.MmpTrace, max_steps: int) -> list[Record]:
    out = [Record("run", "selector", tr.selector, "restart", tr.restart, "max-steps", max_steps)]
    for s in tr.steps:
        st = Record("step", s.index)
        st.children.append(fan_record(s.model, "model", s.fingerprint))
        st.children.append(face_record(s.face_index, s.face, s.model))
        st.children.extend(diagram_record(s.diagram))
        out.append(st)
    out.append(Record("status", tr.status.replace(" ", "-")))
    if tr.final_model is not None:
        fin = Record("final")
        fin.children.append(fan_record(tr.final_model, "model", tr.final_fingerprint))
        if tr.minimal_model is not None:
            fin.children.append(fan_record(tr.minimal_model[0], "qfactorialization"))
        out.append(fin)
    if tr.cycle is not None:
        out.append(Record("cycle", *tr.cycle))
    return out


def render_text(records: Sequence[Record]) -> str:
    lines = []

    def walk(r: Record, depth: int):
        lines.append("  " * depth + (f"{r.key}: {' '.join(r.args)}" if r.args else f"{r.key}:"))
        for c in r.children:
            walk(c, depth + 1)

    for r in records:
        walk(r, 0)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Interactive selection

def interactive_face_select(F: toric.Fan, faces, stdin: TextIO, stdout: TextIO) -> int | None:
    """Prompt for a face index; None on end of input."""
    K = cones_ns.canonical_class(F)
    stdout.write(f"K-negative extremal faces (rank {F.rank}, {F.nrays} rays):\n")
    for i, G in enumerate(faces):
        pair = [format_rational(sum(a * b for a, b in zip(K, g))) for g in G.generators]
        gens = " ".join("(" + ",".join(_vec(g)) + ")" for g in G.generators) or "0"
        rat = cones_ns.is_rational_face(F, G)
        stdout.write(f"  [{i}] dim {G.dim}  generators {gens}  K-pairings {pair}  rational {rat}\n")
    while True:
        stdout.write(f"choose face 0..{len(faces) - 1}: ")
        stdout.flush()
        line = stdin.readline()
        if not line:
            stdout.write("\n")
            return None
        tok = line.strip()
        if tok.isdigit() and int(tok) < len(faces):
            return int(tok)
        stdout.write(f"invalid choice {tok!r}\n")


def replay_selector(choices: Sequence[int]):
    it = iter(choices)

    def choose(F, faces):
        return next(it, None)
    return choose


def choices_from_trace(records: Sequence[Record]) -> tuple[list[int], dict]:
    choices = []
    run = {}
    for r in records:
        if r.key == "run":
            a = r.args
            run = {a[i]: a[i + 1] for i in range(0, len(a) - 1, 2)}
        if r.key == "step":
            face = r.find("face")
            choices.append(int(face.args[face.args.index("index") + 1]))
    return choices, run


# ---------------------------------------------------------------------------
# Commands

def _load_fan(args, validate=True) -> toric.Fan:
    if not args.fan:
        raise UsageError("--fan is required")
    return parse_fan(Path(args.fan).read_text(encoding="utf-8"), validate=validate)


def _load_divisor(args, F) -> divisors.WeilDivisor:
    if not args.divisor:
        raise UsageError("--divisor is required")
    return parse_divisor(Path(args.divisor).read_text(encoding="utf-8"), F)


def _face(args, F):
    faces = cones_ns.k_negative_extremal_faces(F)
    if args.face is None:
        raise UsageError("--face is required")
    if not 0 <= args.face < len(faces):
        raise UsageError(f"--face must be in 0..{len(faces) - 1}")
    return faces[args.face]


def cmd_validate(args, out):
    F = _load_fan(args, validate=False)
    bad = toric.validate_fan(F)
    recs = [Record("valid", not bad)]
    for v in bad:
        recs.append(Record("violation", v.kind))
    if not bad:
        recs.append(Record("complete", toric.is_complete(F)))
        recs.append(Record("simplicial", toric.is_simplicial(F)))
    return recs, (1 if bad else 0)


def cmd_clgroup(args, out):
    F = _load_fan(args)
    G = toric.class_group(F)
    recs = [Record("rank", G.rank), Record("torsion", *(G.torsion or ["none"])),
            Record("basis-rays", *(G.basis or ["none"]))]
    return recs, 0


def cmd_class(args, out):
    F = _load_fan(args)
    D = _load_divisor(args, F)
    return [divisor_record(D)], 0


def cmd_positivity(args, out):
    F = _load_fan(args)
    D = _load_divisor(args, F)
    recs = [divisor_record(D)]
    lvl = divisors.cartier_level(D)
    recs.append(Record("qcartier", "no" if lvl.kind == "NotQCartier" else "yes", "level", str(lvl)))
    for name, fn in [("nef", divisors.is_nef), ("ample", divisors.is_ample), ("big", divisors.is_big),
                     ("pseff", divisors.is_pseff), ("agg", divisors.is_agg)]:
        recs.append(Record(name, fn(D).kind))
    Y, _, _ = divisors.q_cartierization(D)
    recs.append(fan_record(Y, "qcartierization"))
    return recs, 0


def _figure(args, cones, labels, names, title):
    if not args.svg:
        return None
    try:
        emit_cone_figure(cones, labels, args.svg, title=title, names=names)
    except NotPlanarError as e:
        print(f"figure skipped: {e}", file=sys.stderr)
        return Record("figure", "skipped", "NotPlanar")
    return Record("figure", args.svg)


def cmd_nef_cone(args, out):
    F = _load_fan(args)
    W = cones_ns.nef_cone_w(F)
    ns = cones_ns.ns_w(F)
    recs = [Record("rho-w", ns.rho_w), Record("rho", ns.rho), cone_record("nef-w", W.nef_w)]
    span = [v for b in ns.cartier_subspace for v in (b, [-x for x in b])]
    cart = intersect(W.nef_w, PolyhedralCone(W.nef_w.dim, generators=span))
    recs.append(cone_record("nef-cartier", cart))
    recs.append(Record("union-convex", W.union_convex))
    for T, C in W.models:
        m = cone_record("model-cone", C)
        m.children.insert(0, fan_record(T, "model"))
        recs.append(m)
    fig = _figure(args, [W.nef_w, cart], [(r, class_label("C", r)) for r in W.nef_w.rays],
                  ["Weil nef cone", "Cartier nef cone"], "nef cones")
    if fig:
        recs.append(fig)
    return recs, 0


def cmd_curve_cone(args, out):
    F = _load_fan(args)
    NE = cones_ns.ne_cone_w(F)
    recs = [cone_record("ne-w", NE)]
    fig = _figure(args, [NE], [(r, class_label("γ", r)) for r in NE.rays], ["cone of Weil curves"],
                  "cone of Weil curves")
    if fig:
        recs.append(fig)
    return recs, 0


def cmd_faces(args, out):
    F = _load_fan(args)
    faces = cones_ns.k_negative_extremal_faces(F)
    recs = [Record("count", len(faces))] + [face_record(i, G, F) for i, G in enumerate(faces)]
    return recs, 0


def cmd_support(args, out):
    F = _load_fan(args)
    G = _face(args, F)
    D = cones_ns.supporting_divisor(F, G)
    return [face_record(args.face, G, F), divisor_record(D)], 0


def cmd_contract(args, out):
    F = _load_fan(args)
    G = _face(args, F)
    d = mmp.contract_face(F, G)
    return [face_record(args.face, G, F)] + diagram_record(d), 0


def cmd_mmp(args, out):
    F = _load_fan(args)
    restart = args.restart
    selector, name = args.selector, args.selector
    if args.replay:
        recs = parse_trace(Path(args.replay).read_text(encoding="utf-8"))
        choices, run = choices_from_trace(recs)
        selector, name = replay_selector(choices), run.get("selector", "replay")
        restart = run.get("restart") == "true" or restart
    elif args.interactive:
        stdin = args.stdin or sys.stdin

        def selector(X, faces):
            return interactive_face_select(X, faces, stdin, sys.stderr)
        name = "interactive"
    elif selector not in mmp.SELECTORS:
        raise UsageError(f"unknown selector {selector!r}; choose from {', '.join(mmp.SELECTORS)}")
    tr = mmp.run_mmp(F, selector, max_steps=args.max_steps, restart=restart, selector_name=name)
    ok = tr.status in ("Mori fiber space", "minimal model")
    return trace_records(tr, args.max_steps), (0 if ok else 1)


def cmd_experiment(args, out):
    """Star subdivisions: does f_*A stay nef, and does the nef decomposition hold, for non-small f?"""
    F = _load_fan(args)
    rng = random.Random(args.seed)
    recs = [Record("experiment", "non-small-refinements", "seed", args.seed)]
    for sigma in F.cones:
        if len(sigma) < 2:
            continue
        Y, f = toric.star_subdivision(F, sigma)
        ample_total = ample_push_nef = 0
        agree = total = 0
        first_counter = None
        for _ in range(args.samples):
            D = divisors.WeilDivisor(Y, [rng.randint(-3, 3) for _ in range(Y.nrays)])
            push = divisors.pushforward(D, f)
            nef = divisors.is_nef(D).is_yes
            split = divisors.is_relatively_nef(D, f).is_yes and divisors.is_nef(push).is_yes
            total += 1
            agree += nef == split
            if nef != split and first_counter is None:
                first_counter = D
            if divisors.is_ample(D).is_yes:
                ample_total += 1
                ample_push_nef += divisors.is_nef(push).is_yes
        r = Record("subdivision", "cone", *sigma)
        r.add("pushforward-of-ample-nef", ample_push_nef, "of", ample_total)
        r.add("nef-decomposition-agrees", agree, "of", total)
        if first_counter is not None:
            r.add("disagreement", *_vec(first_counter.coeffs))
        recs.append(r)
    return recs, 0


HANDLERS = {
    "validate": cmd_validate, "clgroup": cmd_clgroup, "class": cmd_class, "positivity": cmd_positivity,
    "nef-cone": cmd_nef_cone, "curve-cone": cmd_curve_cone, "faces": cmd_faces, "support": cmd_support,
    "contract": cmd_contract, "mmp": cmd_mmp, "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weilmmp", description="Weil divisor positivity and the flip-free MMP "
                                "for toric varieties.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--fan", help="fan file (fan v1)")
    p.add_argument("--divisor", help="divisor file (divisor v1)")
    p.add_argument("--face", type=int, help="index into the K-negative face list")
    p.add_argument("--selector", default="max-face", help="max-face or ray-first")
    p.add_argument("--max-steps", type=int, default=20)
    p.add_argument("--interactive", action="store_true", help="choose faces at a prompt")
    p.add_argument("--restart", action="store_true", help="continue on the base of a fiber space")
    p.add_argument("--replay", help="replay the face choices of a machine trace")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--svg", help="write a figure of the cone(s) here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=40, help="random divisors per experiment")
    return p


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.stdin = stdin
    try:
        recs, status = HANDLERS[args.command](args, out)
    except InvalidFanError as e:
        print("invalid fan:", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return 2
    except (WeilMMPError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    header = Record("command", args.command)
    recs = [header] + recs
    out.write(emit_trace(recs) if args.format == "machine" else render_text(recs))
    return status


if __name__ == "__main__":
    sys.exit(main())
