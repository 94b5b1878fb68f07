"""Command line interface: ``fibgeom <subcommand> [options]``.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from fibgeom import formats, kernels
from fibgeom.errors import FibGeomError
from fibgeom.fibonacci import fib_table, pisano_period
from fibgeom.frames import atoms_from_scene, compute_frame, erasure_test, synthesize
from fibgeom.golden import (
    build_fibonacci_tiling,
    fibonacci_spacing_score,
    fit_exponential_decay,
    log_spiral_points,
    phi_guides,
    spiral_from_tiling,
)
from fibgeom.ifs import IfsSystem, chaos_game, invariance_residual, moran_dimension, rasterize_measure
from fibgeom.layout import (
    Document,
    LayoutParams,
    compose_layout,
    guides_payload,
    spiral_payload,
    tiling_payload,
)
from fibgeom.projection import Viewpoint, build_scene, cubist_superpose, hypercube_mesh, load_views, rasterize_scene
from fibgeom.substitution import build_chain, inflation_residual, iterate_substitution
from fibgeom.svg import render_svg

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


class _IOFailure(Exception):
    pass


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path, data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _floats(text):
    return formats.parse_number_list(text)


def _ints(text):
    out = []
    for v in formats.parse_number_list(text):
        if v != int(v):
            raise FibGeomError(f"expected an integer, got {v}")
        out.append(int(v))
    return out


def _extent_document(segment_sets, margin=0.05):
    """Canvas enclosing every segment, with segments shifted to positive coordinates."""
    pts = np.concatenate([np.asarray(s).reshape(-1, 2) for s in segment_sets if len(s)])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = margin * float(max(hi - lo))
    shift = pad - lo
    size = hi - lo + 2 * pad
    return Document(canvas=(float(size[0]), float(size[1]))), shift


# ---- subcommands ---------------------------------------------------------


def cmd_fib(a):
    rows = fib_table(a.n, mod=a.mod, lucas=a.lucas)
    _write(a.csv, formats.rows_to_csv(rows))
    if a.mod is not None:
        print(json.dumps({"mod": a.mod, "pisano_period": pisano_period(a.mod)}), file=sys.stderr)


def cmd_tiling(a):
    t = build_fibonacci_tiling(a.squares, a.unit)
    t = t.translated(-t.bounds[0], -t.bounds[1])
    payload = tiling_payload(t)
    if a.svg:
        doc = Document(canvas=(t.width, t.height))
        doc.add("tiling", payload, name="fibonacci-tiling")
        _write(a.svg, render_svg(doc))
    if a.json:
        _write(a.json, json.dumps(payload, indent=2, sort_keys=True))
    if not (a.svg or a.json):
        _print_json(payload)


def cmd_spiral(a):
    if a.log is not None:
        amp, t0, t1 = a.log
        pts = log_spiral_points(amp, t0, t1, a.steps)
        segs = np.stack((pts[:-1], pts[1:]), axis=1)
        if a.svg:
            doc, shift = _extent_document([segs])
            doc.add(
                "figure",
                {"layers": [{"segments": (segs + shift).tolist(), "weight": 1.0, "label": "log spiral"}]},
                name="log-spiral",
            )
            _write(a.svg, render_svg(doc))
        else:
            _print_json({"a": amp, "theta0": t0, "theta1": t1, "points": pts.tolist()})
        return
    t = build_fibonacci_tiling(a.squares, a.unit)
    t = t.translated(-t.bounds[0], -t.bounds[1])
    chain = spiral_from_tiling(t)
    if a.svg:
        doc = Document(canvas=(t.width, t.height))
        doc.add("tiling", tiling_payload(t), name="fibonacci-tiling", opacity=0.3)
        doc.add("spiral", spiral_payload(chain), name="golden-spiral")
        _write(a.svg, render_svg(doc))
    else:
        _print_json(spiral_payload(chain))


def cmd_guides(a):
    g = phi_guides(a.width, a.height, a.depth)
    payload = guides_payload(g)
    if a.svg:
        doc = Document(canvas=(a.width, a.height))
        doc.add("guides", payload, name="phi-guides")
        _write(a.svg, render_svg(doc))
    if a.json:
        _write(a.json, json.dumps(payload, indent=2, sort_keys=True))
    if not (a.svg or a.json):
        _print_json(payload)


def cmd_decay_fit(a):
    model = fit_exponential_decay(formats.read_xy_csv(_read_text(a.input)))
    _print_json({"i0": model.i0, "k": model.k})


def cmd_spacing(a):
    text = _read_text(a.coords) if os.path.isfile(a.coords) else a.coords
    coords = _floats(text)
    terms = a.terms if a.terms is not None else len(coords) - 1
    _print_json({"terms": terms, "score": fibonacci_spacing_score(coords, terms)})


def cmd_word(a):
    if a.chain:
        c = build_chain(a.iters)
        _write(a.chain, formats.rows_to_csv(c.to_csv_rows(), ["index", "type", "left_endpoint"]))
    if a.check_inflation:
        rep = inflation_residual(build_chain(a.iters), a.tol)
        _print_json(
            {"n": a.iters, "matched": rep.matched, "unmatched": rep.unmatched, "max_dist": rep.max_dist, "window": list(rep.window)}
        )
    if not (a.chain or a.check_inflation):
        print(iterate_substitution(a.iters))


def cmd_ifs(a):
    if a.moran is not None:
        _print_json({"ratios": a.moran, "dimension": moran_dimension(a.moran)})
        if not a.system:
            return
    if not a.system:
        raise FibGeomError("ifs needs --system (or --moran)")
    sysm = IfsSystem.from_json(_read_text(a.system))
    cloud = chaos_game(sysm, a.points, a.seed, a.burn_in, a.chains, a.workers)
    if a.box is not None:
        box = tuple(a.box)
        if len(box) != 4:
            raise FibGeomError("--box needs xmin,ymin,xmax,ymax")
    else:
        lo = cloud.points.min(axis=0)
        hi = cloud.points.max(axis=0)
        pad = 0.01 * max(float(max(hi - lo)), 1e-12)
        box = (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)
    field = rasterize_measure(cloud, box, a.grid)
    report = {
        "points": a.points,
        "seed": a.seed,
        "burn_in": a.burn_in,
        "chains": a.chains,
        "rng": cloud.rng,
        "backend": kernels.BACKEND,
        "box": [float(v) for v in box],
        "grid": a.grid,
        "outside": field.outside,
        "invariance_residual": invariance_residual(field, sysm),
        "bounding_radius": sysm.bounding_radius(),
    }
    ratios = sysm.similarity_ratios()
    if ratios is not None:
        report["moran_dimension"] = moran_dimension(ratios)
    if a.pgm:
        _write(a.pgm, formats.pgm_bytes(field))
    if a.csv:
        _write(a.csv, formats.rows_to_csv([tuple(p) for p in cloud.points.tolist()], ["x", "y"]))
    _print_json(report)


def _default_views():
    return [
        Viewpoint((((0, 3), math.pi / 4), ((1, 2), math.pi / 6)), 1.0, "view 0"),
        Viewpoint((((0, 2), math.pi / 3), ((1, 3), math.pi / 5)), 1.0, "view 1"),
        Viewpoint((((0, 1), math.pi / 7), ((2, 3), math.pi / 3), ((0, 3), 0.4)), 1.0, "view 2"),
    ]


def cmd_cubist(a):
    kind, _, n = a.mesh.partition(":")
    if kind != "ncube" or not n.isdigit():
        raise FibGeomError(f"--mesh must look like ncube:<n>, got {a.mesh!r}")
    mesh = hypercube_mesh(int(n))
    views = load_views(_read_text(a.views)) if a.views else _default_views()
    fig = cubist_superpose(mesh, views)
    if a.svg:
        doc, shift = _extent_document([l.segments for l in fig.layers])
        payload = fig.to_payload()
        for layer in payload["layers"]:
            layer["segments"] = (np.asarray(layer["segments"]) + shift).tolist()
        doc.add("figure", payload, name="cubist-superposition")
        _write(a.svg, render_svg(doc))
    _print_json(
        {
            "dim": mesh.dim,
            "vertices": len(mesh.vertices),
            "edges": len(mesh.edges),
            "layers": [{"label": l.label, "weight": l.weight, "segments": len(l.segments)} for l in fig.layers],
        }
    )


def _load_scene(path):
    return build_scene(json.loads(_read_text(path)))


def cmd_scene(a):
    scene = _load_scene(a.spec)
    if a.svg:
        doc = Document(canvas=(a.size, a.size))
        doc.add("scene", scene.to_payload(), name="scene")
        _write(a.svg, render_svg(doc))
    if a.pgm:
        _write(a.pgm, formats.pgm_bytes(rasterize_scene(scene, a.grid)))
    if not (a.svg or a.pgm):
        _print_json(scene.to_payload())


def cmd_frame(a):
    atoms = atoms_from_scene(_load_scene(a.scene), a.grid)
    frame = compute_frame(atoms)
    f = synthesize(np.ones(len(atoms)), atoms)
    rep = erasure_test(f, atoms, a.erase or ())
    if a.gram_csv:
        rows = [tuple(r) for r in frame.gram.tolist()]
        _write(a.gram_csv, formats.rows_to_csv(rows, list(atoms.labels)))
    _print_json(
        {
            "atoms": list(atoms.labels),
            "grid": a.grid,
            "rank": frame.rank,
            "condition_estimate": frame.condition_estimate,
            "coefficients": (frame.dual_atoms.reshape(len(atoms), -1) @ f.ravel()).tolist(),
            "erasure": rep.to_dict(),
        }
    )


def cmd_layout(a):
    labels = None
    if a.labels is not None:
        labels = tuple(s.strip() for s in a.labels.split(",") if s.strip())
    doc = compose_layout(LayoutParams(a.squares, a.unit, labels, a.guides, a.seed, a.depth))
    if a.json:
        _write(a.json, doc.to_json(indent=2))
    _write(a.svg, render_svg(doc))


# ---- parser --------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="fibgeom", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        subs[name] = p
        return p

    p = add("fib", cmd_fib, "Fibonacci/Lucas tables")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--mod", type=int)
    p.add_argument("--lucas", action="store_true")
    p.add_argument("--csv", default="-", help="output path (default stdout)")

    p = add("tiling", cmd_tiling, "golden-rectangle tiling")
    p.add_argument("--squares", type=int, default=8)
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--svg")
    p.add_argument("--json")

    p = add("spiral", cmd_spiral, "quarter-arc or logarithmic spiral")
    p.add_argument("--squares", type=int, default=8)
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--log", type=float, nargs=3, metavar=("A", "THETA0", "THETA1"))
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--svg")

    p = add("guides", cmd_guides, "phi, thirds and diagonal guides")
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--svg")
    p.add_argument("--json")

    p = add("decay-fit", cmd_decay_fit, "fit I(x) = i0 exp(-k x)")
    p.add_argument("--input", required=True, help="CSV of x,I")

    p = add("spacing", cmd_spacing, "Fibonacci spacing score")
    p.add_argument("--coords", required=True, help="comma-separated values or a CSV file")
    p.add_argument("--terms", type=int)

    p = add("word", cmd_word, "Fibonacci word and chain")
    p.add_argument("--iters", type=int, default=5)
    p.add_argument("--chain", help="write chain CSV to this path ('-' for stdout)")
    p.add_argument("--check-inflation", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("ifs", cmd_ifs, "chaos game, invariant measure and Moran dimension")
    p.add_argument("--system")
    p.add_argument("--points", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=64)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--box", type=_floats)
    p.add_argument("--pgm")
    p.add_argument("--csv")
    p.add_argument("--moran", type=_floats, help="r1,r2,...")

    p = add("cubist", cmd_cubist, "weighted multi-view projection of a hypercube")
    p.add_argument("--mesh", default="ncube:4")
    p.add_argument("--views")
    p.add_argument("--svg")

    p = add("scene", cmd_scene, "affine scene of prototype shapes")
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--size", type=float, default=100.0, help="SVG canvas size")
    p.add_argument("--svg")
    p.add_argument("--pgm")

    p = add("frame", cmd_frame, "frame analysis and erasure test of scene atoms")
    p.add_argument("--scene", required=True)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--erase", type=_ints)
    p.add_argument("--gram-csv")

    p = add("layout", cmd_layout, "Fibonacci-guided composition layout (SVG)")
    p.add_argument("--squares", type=int, default=8)
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--labels", help="comma-separated focal labels")
    p.add_argument("--guides", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--depth", type=int, default=3, help="nested golden rectangles in the guides")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", default="-")
    p.add_argument("--json")

    return parser, subs


def _apply_config(parser, subs, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = json.loads(_read_text(known.config))
    if not isinstance(cfg, dict):
        raise FibGeomError("config must be a JSON object")
    flat = {k.replace("-", "_"): v for k, v in cfg.items() if not isinstance(v, dict)}
    for name, p in subs.items():
        dests = {act.dest for act in p._actions}
        values = {k: v for k, v in flat.items() if k in dests}
        section = cfg.get(name)
        if isinstance(section, dict):
            values.update({k.replace("-", "_"): v for k, v in section.items() if k.replace("-", "_") in dests})
        if values:
            p.set_defaults(**values)
            # a config value satisfies a required option
            for act in p._actions:
                if act.dest in values:
                    act.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        _apply_config(parser, subs, argv)
        args = parser.parse_args(argv)
        args.func(args)
    except _IOFailure as exc:
        print(f"fibgeom: {exc}", file=sys.stderr)
        return EXIT_IO
    except FibGeomError as exc:
        print(f"fibgeom: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"fibgeom: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
