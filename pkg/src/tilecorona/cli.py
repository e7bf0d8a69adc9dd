"""Command line front end: ``tilecorona SUBCOMMAND ...``.

Every analysis subcommand reads a patch either from a document (``--input``)
or from a generator (``--gen NAME [--radius R]``).  Generator radii are raised
as needed for the requested level, never beyond ``--radius-cap``.

Exit codes: 0 when a verdict is witnessed (multihedral / periodic) or a plain
query succeeded, 2 when undetermined, 1 on any error or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import __version__
from .complex import RankedComplex, validate
from .generators import GENERATOR_NAMES, generate, min_radius
from .iso import automorphism_group, isomorphic
from .local import check_conditions, classify, find_local_k
from .metric import InexactCorona, corona, exact_core, require_exact, tile_distance
from .patch_io import ENCODINGS, ParseError, PatchDocument, ValidationError, load

REPORT_SCHEMA = "tilecorona-report/1"
EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: str | None = None            # document path
    generator: str | None = None
    radius: int | None = None
    k_max: int = 3
    l: int | None = None
    core: str | list[int] = "auto"      # "auto" | "document" | explicit tiles
    output: str = "text"                # text | json
    radius_cap: int = 14
    jobs: int = 1
    geometric: bool = True

    def check(self) -> None:
        if self.k_max < 1:
            raise UsageError("k_max must be >= 1")
        if (self.input is None) == (self.generator is None):
            raise UsageError("give exactly one of --input or --gen")


@dataclass
class Patch:
    complex: RankedComplex
    coords: dict | None
    source: str
    radius: int | None = None
    center: int | None = None
    doc_core: list[int] | None = None
    notes: list[str] = field(default_factory=list)


def load_patch(input: str | None, generator: str | None, radius: int | None,
               k_needed: int, radius_cap: int, check: bool = True) -> Patch:
    if input is not None:
        doc = load(input, check=check)
        center = doc.meta.get("center")
        return Patch(doc.to_complex(), doc.coords, input, doc.meta.get("radius"),
                     center, doc.core)
    want = min_radius(generator, k_needed)
    r = radius if radius is not None else want
    notes = []
    if r <= want and want > radius_cap:
        raise UsageError(f"{generator} needs radius {want} for level {k_needed}, "
                         f"above the cap {radius_cap}")
    if r < want:
        notes.append(f"radius enlarged from {r} to {want} for level {k_needed}")
        r = want
    g = generate(generator, r)
    return Patch(g.complex, g.coords, f"gen:{generator}", r, g.center, None, notes)


def _resolve_core(patch: Patch, policy, k: int, l: int) -> tuple[int, ...]:
    cx = patch.complex
    if policy == "auto":
        return exact_core(cx, k, l)
    if policy == "document":
        if patch.doc_core is None:
            raise UsageError("the document carries no core list")
        tiles = patch.doc_core
    else:
        tiles = list(policy)
    require_exact(cx, tiles, k, l)
    return tuple(sorted(tiles))


# -- report -----------------------------------------------------------------

@dataclass
class Report:
    config: dict
    input: dict
    validation: dict
    core: dict
    combinatorial: dict | None
    geometric: dict | None
    diagnostics: list[str]
    timing: dict
    schema: str = REPORT_SCHEMA
    tool: dict = field(default_factory=lambda: {"name": "tilecorona", "version": __version__})

    @property
    def exit_code(self) -> int:
        if self.combinatorial is None:
            return EXIT_ERROR
        status = self.combinatorial["verdict"]["status"]
        return {"multihedral": EXIT_OK, "undetermined": EXIT_UNDETERMINED}.get(status, EXIT_ERROR)

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("timing")
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=1) + "\n"

    def to_text(self, timing: bool = True) -> str:
        out = [f"tilecorona {self.tool['version']} report ({self.schema})",
               f"input: {self.input['source']}  radius={self.input['radius']}  "
               f"tiles={self.input['tiles']}  f-vector={self.input['f_vector']}",
               f"validation: {'ok' if self.validation['ok'] else 'FAILED'}"
               + ("" if self.validation["ok"] else f" {self.validation['kinds']}"),
               f"core: {self.core['policy']} ({self.core['size']} tiles)"]
        for title, sec, col in (("combinatorial", self.combinatorial, "N"),
                                ("geometric", self.geometric, "M")):
            if sec is None:
                continue
            v = sec["verdict"]
            out.append(f"{title} verdict: {v['status']}"
                       + (f" n={v['n']} k={v['k']}" if v["n"] is not None else ""))
            out.append("  " + "  ".join(f"{col}_{k}={n}" for k, n in v["counts"]))
            for ch in sec["group_chains"][-1:]:
                for c in ch["classes"]:
                    orders = ",".join(map(str, c["orders"]))
                    out.append(f"  k={ch['k']} rep {c['representative']}: orders {orders}"
                               f"  stable={c['top_equal']}")
            for d in v["diagnostics"]:
                out.append(f"  {d}")
        for d in self.diagnostics:
            out.append(f"note: {d}")
        if timing:
            out.append("timing: " + "  ".join(f"{k}={v:.3f}s" for k, v in sorted(self.timing.items())))
        return "\n".join(out) + "\n"


def _chains(records) -> list[dict]:
    return [{"k": r.k, "classes": [asdict(c) for c in r.classes]} for r in records]


def run(config: RunConfig) -> Report:
    """validate -> coronas -> classify -> conditions -> verdict [-> geometric]."""
    config.check()
    timing: dict[str, float] = {}
    t0 = time.perf_counter()
    # validation is part of the report, so the loader does not reject the patch
    patch = load_patch(config.input, config.generator, config.radius,
                       config.k_max, config.radius_cap, check=False)
    cx = patch.complex
    l = config.l if config.l is not None else max(cx.dim - 2, 0)
    cfg = asdict(config)
    cfg["l"] = l
    info = {"source": patch.source, "radius": patch.radius, "tiles": len(cx.tiles),
            "f_vector": list(cx.f_vector), "coordinates": patch.coords is not None}
    timing["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    rep = validate(cx)
    val = {"ok": rep.ok, "violations": len(rep.violations), "kinds": sorted(rep.kinds())}
    timing["validate"] = time.perf_counter() - t0
    diags = list(patch.notes)
    if not rep.ok:
        return Report(cfg, info, val, {"policy": str(config.core), "size": 0},
                      {"verdict": {"status": "invalid", "n": None, "k": None, "counts": [],
                                   "diagnostics": ["patch fails validation"]},
                       "group_chains": []}, None, diags, timing)

    t0 = time.perf_counter()
    try:
        core = _resolve_core(patch, config.core, config.k_max, l)
    except InexactCorona as exc:
        core = ()
        diags.append(str(exc))
    core_info = {"policy": config.core if isinstance(config.core, str) else "explicit",
                 "size": len(core)}
    if not core:
        comb = {"verdict": {"status": "invalid", "n": None, "k": None, "counts": [],
                            "diagnostics": [f"no usable core at level {config.k_max}"]},
                "group_chains": []}
        return Report(cfg, info, val, core_info, comb, None, diags, timing)
    verdict = find_local_k(cx, config.k_max, l, core, config.jobs)
    stop = verdict.k or config.k_max
    chains = [check_conditions(cx, k, l, core).chain for k in range(1, stop + 1)]
    comb = {"verdict": verdict.as_dict(), "group_chains": _chains(chains)}
    timing["combinatorial"] = time.perf_counter() - t0

    geo_sec = None
    if config.geometric and patch.coords is not None and cx.dim == 2:
        from .geometric import GeoTiling, check_geom_theorem, classify_geo, geo_group_chain
        t0 = time.perf_counter()
        geo = GeoTiling(cx, patch.coords)
        gv = check_geom_theorem(geo, config.k_max, l, core)
        stop = gv.k or config.k_max
        gch = [geo_group_chain(geo, k, l, [c.representative for c in
                                           classify_geo(geo, k, l, core).classes])
               for k in range(1, stop + 1)]
        geo_sec = {"verdict": gv.as_dict(), "group_chains": _chains(gch)}
        timing["geometric"] = time.perf_counter() - t0
    return Report(cfg, info, val, core_info, comb, geo_sec, diags, timing)


# -- subcommands ------------------------------------------------------------

def _emit(args, data: Any, text: str) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _tile(patch: Patch, value: str) -> int:
    if value == "center":
        if patch.center is None:
            raise UsageError("this input has no designated center tile")
        return patch.center
    t = int(value)
    if t not in patch.complex or patch.complex.rank(t) != patch.complex.dim:
        raise UsageError(f"{t} is not a tile")
    return t


def _patch(args, k_needed: int) -> Patch:
    if (args.input is None) == (args.gen is None):
        raise UsageError("give exactly one of --input or --gen")
    return load_patch(args.input, args.gen, args.radius, k_needed, args.radius_cap)


def _l(args, cx) -> int:
    return args.l if args.l is not None else max(cx.dim - 2, 0)


def cmd_generate(args) -> int:
    g = generate(args.gen, args.radius)
    text = g.document(args.core_k).dumps(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.input is not None:
        try:
            doc = load(args.input, check=False)
        except ParseError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        cx = doc.to_complex()
    else:
        cx = _patch(args, 0).complex
    rep = validate(cx)
    data = {"ok": rep.ok, "violations": [asdict(v) for v in rep.violations],
            "boundary_faces": len(rep.boundary), "interior_tiles": len(rep.interior_tiles)}
    lines = [f"{'valid' if rep.ok else 'INVALID'}: {len(rep.violations)} violations, "
             f"{len(rep.interior_tiles)} interior tiles"]
    lines += [f"  {v.kind} {list(v.faces)} {v.detail}".rstrip() for v in rep.violations]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_ERROR


def cmd_distance(args) -> int:
    patch = _patch(args, 0)
    cx = patch.complex
    p, q = _tile(patch, args.p), _tile(patch, args.q)
    l = _l(args, cx)
    d = tile_distance(cx, p, q, l)
    _emit(args, {"p": p, "q": q, "l": l, "distance": d},
          f"d({p}, {q}) = {'unreachable' if d is None else d}  (l={l})")
    return EXIT_OK


def cmd_corona(args) -> int:
    patch = _patch(args, args.k)
    cx = patch.complex
    l = _l(args, cx)
    p = _tile(patch, args.tile)
    require_exact(cx, [p], args.k, l)
    c = corona(cx, p, args.k, l)
    coords = None
    if patch.coords is not None:
        coords = {v: patch.coords[v] for v in c.complex.faces(0)}
    doc, new = PatchDocument.from_complex_with_ids(c.complex, coords)
    doc.meta = {"center": new[p], "k": args.k, "l": l,
                "rings": [[new[t], r] for t, r in sorted(c.ring.items())],
                "source_ids": list(c.complex.faces())}
    sys.stdout.write(doc.dumps(args.format))
    return EXIT_OK


def _map_table(m) -> list[list[int]]:
    return [[f, g] for f, g in sorted(m.faces.items())]


def cmd_iso(args) -> int:
    patch = _patch(args, args.k)
    cx = patch.complex
    l = _l(args, cx)
    a, b = _tile(patch, args.a), _tile(patch, args.b)
    require_exact(cx, [a, b], args.k, l)
    m = isomorphic(corona(cx, a, args.k, l), corona(cx, b, args.k, l))
    if m is None:
        _emit(args, {"isomorphic": False}, "non-isomorphic")
    else:
        text = "\n".join(f"{f} -> {g}" for f, g in _map_table(m))
        _emit(args, {"isomorphic": True, "faces": _map_table(m)}, text)
    return EXIT_OK


def cmd_autgroup(args) -> int:
    patch = _patch(args, args.k)
    cx = patch.complex
    l = _l(args, cx)
    p = _tile(patch, args.tile)
    require_exact(cx, [p], args.k, l)
    g = automorphism_group(corona(cx, p, args.k, l))
    lines = [f"order {g.order}"]
    for i, m in enumerate(g):
        lines.append(f"  [{i}] " + " ".join(f"{t}->{u}" for t, u in sorted(m.tile_map().items())))
    data = {"tile": p, "k": args.k, "l": l, "order": g.order, "elements": [_map_table(m) for m in g]}
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    patch = _patch(args, args.k)
    cx = patch.complex
    l = _l(args, cx)
    core = _resolve_core(patch, args.core_policy, args.k, l)
    cls = classify(cx, args.k, l, core)
    lines = [f"N_{args.k} = {cls.n}  (l={l}, core {len(core)} tiles)"]
    lines += [f"  class rep {c.representative}: {len(c.members)} tiles" for c in cls.classes]
    data = {"k": args.k, "l": l, "n": cls.n,
            "classes": [{"representative": c.representative, "members": list(c.members)}
                        for c in cls.classes]}
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _config(args) -> RunConfig:
    return RunConfig(args.input, args.gen, args.radius, args.kmax, args.l,
                     args.core_policy, "json" if args.json else "text",
                     args.radius_cap, args.jobs, not getattr(args, "no_geometric", False))


def cmd_check_local(args) -> int:
    cfg = _config(args)
    cfg.geometric = False
    report = run(cfg)
    _emit(args, report.to_dict(not args.no_timing), report.to_text(not args.no_timing))
    return report.exit_code


def cmd_report(args) -> int:
    report = run(_config(args))
    _emit(args, report.to_dict(not args.no_timing), report.to_text(not args.no_timing))
    return report.exit_code


def cmd_geo_check(args) -> int:
    from .geometric import GeoTiling, check_geom_theorem
    patch = _patch(args, args.kmax)
    if patch.coords is None:
        raise UsageError("geometric check needs vertex coordinates")
    cx = patch.complex
    l = _l(args, cx)
    core = _resolve_core(patch, args.core_policy, args.kmax, l)
    v = check_geom_theorem(GeoTiling(cx, patch.coords), args.kmax, l, core)
    text = [f"geometric verdict: {v.status}" + (f" n={v.n} k={v.k}" if v.n else ""),
            "  " + "  ".join(f"M_{k}={m}" for k, m in v.counts)]
    text += [f"  {d}" for d in v.diagnostics]
    _emit(args, v.as_dict(), "\n".join(text))
    return {"periodic": EXIT_OK, "undetermined": EXIT_UNDETERMINED}.get(v.status, EXIT_ERROR)


def _region(cx, a: int, k: int, l: int, spec: str):
    zone = set(exact_core(cx, k, l))
    if spec == "auto":
        return zone
    from .metric import distance_rings
    near = distance_rings(cx, a, l, depth=int(spec))
    return zone & set(near)


def cmd_extend(args) -> int:
    from .extension import reconstruct
    patch = _patch(args, args.k + 1)
    cx = patch.complex
    l = _l(args, cx)
    a, b = _tile(patch, args.seed_a), _tile(patch, args.seed_b)
    require_exact(cx, [a, b], args.k, l)
    m = isomorphic(corona(cx, a, args.k, l), corona(cx, b, args.k, l))
    if m is None:
        _emit(args, {"isomorphic": False}, f"coronas of {a} and {b} are non-isomorphic")
        return EXIT_ERROR
    pa = reconstruct(cx, m, _region(cx, a, args.k, l, args.region))
    pairs = sorted(pa.faces.items())
    lines = [f"partial automorphism over {len(pa.tiles)} tiles "
             f"({len(pa.skipped)} skipped), {len(pairs)} faces"]
    lines += [f"{f} {g}" for f, g in pairs]
    _emit(args, {"tiles": sorted(pa.tiles.items()), "faces": pairs,
                 "skipped": sorted(pa.skipped)}, "\n".join(lines))
    return EXIT_OK


def cmd_orbits(args) -> int:
    from .extension import orbit_partition
    patch = _patch(args, args.k + 1)
    cx = patch.complex
    l = _l(args, cx)
    core = _resolve_core(patch, args.core_policy, args.k, l)
    orbits = orbit_partition(cx, args.k, l, core)
    cls = classify(cx, args.k, l, core).partition()
    lines = [f"{len(orbits)} orbits on {len(core)} core tiles; "
             f"{'equal to' if orbits == cls else 'different from'} the corona classes"]
    lines += [f"  orbit of {o[0]}: {len(o)} tiles" for o in orbits]
    _emit(args, {"orbits": [list(o) for o in orbits], "matches_classes": orbits == cls},
          "\n".join(lines))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _core_policy(value: str):
    if value in ("auto", "document"):
        return value
    try:
        return [int(x) for x in value.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError("core is auto, document, or a comma list of tile ids")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tilecorona", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--input", help="patch document to read")
    src.add_argument("--gen", choices=GENERATOR_NAMES, help="generate the patch instead")
    src.add_argument("--radius", type=int, help="generator radius (raised as needed)")
    src.add_argument("--radius-cap", type=int, default=14, help="largest radius auto-enlargement may use")
    src.add_argument("--l", type=int, help="distance threshold (default d-2)")
    src.add_argument("--json", action="store_true", help="machine-readable output")

    core = argparse.ArgumentParser(add_help=False)
    core.add_argument("--core", dest="core_policy", type=_core_policy, default="auto",
                      help="auto (every exact tile), document, or comma list of tiles")

    p = sub.add_parser("generate", help="unfold a named tiling to a patch document")
    p.add_argument("--gen", choices=GENERATOR_NAMES, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--core-k", type=int, help="tag the core guaranteed for this level")
    p.add_argument("--format", choices=ENCODINGS, default="text")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", parents=[src], help="check a patch is a valid face-to-face fragment")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", parents=[src], help="tile distance between two tiles")
    p.add_argument("--p", required=True, help="tile id or 'center'")
    p.add_argument("--q", required=True, help="tile id or 'center'")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("corona", parents=[src], help="dump a centered corona as a patch document")
    p.add_argument("--tile", required=True, help="tile id or 'center'")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=ENCODINGS, default="text")
    p.set_defaults(func=cmd_corona)

    p = sub.add_parser("iso", parents=[src], help="isomorphism between two centered coronas")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("autgroup", parents=[src], help="automorphism group of a centered corona")
    p.add_argument("--tile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_autgroup)

    p = sub.add_parser("classify", parents=[src, core], help="isomorphism classes of k-coronas")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument("--kmax", type=int, default=3)
    run_opts.add_argument("--jobs", type=int, default=1, help="worker processes for group chains")
    run_opts.add_argument("--no-timing", action="store_true", help="omit timing (byte-stable output)")

    p = sub.add_parser("check-local", parents=[src, core, run_opts],
                       help="combinatorial verdict: multihedral or undetermined")
    p.set_defaults(func=cmd_check_local)

    p = sub.add_parser("extend", parents=[src], help="glue transports of a corona isomorphism")
    p.add_argument("--seed-a", required=True)
    p.add_argument("--seed-b", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--region", default="auto", help="auto (exact zone) or a distance bound from seed a")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("orbits", parents=[src, core], help="tile orbits of reconstructed automorphisms")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("geo-check", parents=[src, core],
                       help="geometric verdict from congruence of tile coronas")
    p.add_argument("--kmax", type=int, default=3)
    p.set_defaults(func=cmd_geo_check)

    p = sub.add_parser("report", parents=[src, core, run_opts],
                       help="full pipeline, with the geometric check when coordinates exist")
    p.add_argument("--no-geometric", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, ValidationError, InexactCorona, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
