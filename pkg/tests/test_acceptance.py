"""The ten acceptance criteria, one function each.

Every criterion prints a single ``[PASS]``/``[FAIL]`` line.  Run under pytest
(the lines are printed past the capture) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tilecorona.cli import RunConfig, run  # noqa: E402
from tilecorona.complex import validate  # noqa: E402
from tilecorona.extension import orbit_partition, propagate_along, reconstruct  # noqa: E402
from tilecorona.generators import GENERATOR_NAMES, from_polygons, generate  # noqa: E402
from tilecorona.geometric import (GeoTiling, check_geom_theorem, classify_geo,  # noqa: E402
                                  symmetry_group)
from tilecorona.iso import automorphism_group, isomorphic  # noqa: E402
from tilecorona.local import (check_conditions, check_monotonicity, check_remone,  # noqa: E402
                              classify, find_local_k)
from tilecorona.metric import corona, exact_core  # noqa: E402

from oracles import (coordinate_tiles, corona_aut_order, corona_isomorphic,  # noqa: E402
                     d4_symmetries, defect_distance, polyiamond_triangles, polyomino_cells,
                     square_polygons, triangle_polygons)
from patches import PERIODIC, patch, three_tile_facet  # noqa: E402

TITLES = {
    1: "square grid pipeline",
    2: "hexagonal pipeline",
    3: "snub square pipeline",
    4: "defect grid stays undetermined",
    5: "counts rise and group orders fall",
    6: "pairwise level equivalence when counts agree",
    7: "isomorphism test matches brute force",
    8: "extension, transport and orbits",
    9: "geometric checks",
    10: "validation",
}


def need(cond, msg):
    if not cond:
        raise AssertionError(msg)


def _verdict(rep, section="combinatorial"):
    v = rep.to_dict()[section]["verdict"]
    return v["status"], v["n"], v["k"], [n for _, n in v["counts"]]


def _top_orders(rep, section="combinatorial"):
    chains = rep.to_dict()[section]["group_chains"]
    return [list(c["orders"]) for c in chains[-1]["classes"]]


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# -- criteria ---------------------------------------------------------------

def criterion_1():
    rep, secs = _timed(lambda: run(RunConfig(generator="square", k_max=3, l=0)))
    status, n, k, counts = _verdict(rep)
    need((status, n, k) == ("multihedral", 1, 1), f"verdict {status} n={n} k={k}")
    need(counts[:2] == [1, 1], f"N = {counts}")
    need(_top_orders(rep) == [[8, 8]], f"group orders {_top_orders(rep)}")
    block = generate("square", 1)
    brute = [corona_aut_order(corona(block.complex, block.center, j, 0)) for j in (0, 1)]
    need(brute == [8, 8], f"oracle orders {brute}")
    need(secs < 5, f"{secs:.1f}s over budget")
    return f"n=1 k=1, N={counts}, |G0|=|G1|=8 (oracle {brute}), run {secs:.1f}s"


def criterion_2():
    rep, secs = _timed(lambda: run(RunConfig(generator="hexagonal", k_max=3, l=0)))
    status, n, k, counts = _verdict(rep)
    need((status, n, k) == ("multihedral", 1, 1), f"verdict {status} n={n} k={k}")
    g = patch("hexagonal")
    brute = corona_aut_order(corona(g.complex, g.center, 0, 0))
    need(brute == 12 and _top_orders(rep)[0][0] == 12,
         f"|G0| {_top_orders(rep)} vs oracle {brute}")
    need(secs < 5, f"{secs:.1f}s over budget")
    return f"n=1 k=1, |G0|=12 (oracle {brute}), run {secs:.1f}s"


def _brute_classes(cx, core, k, l):
    reps = []
    for t in core:
        c = corona(cx, t, k, l)
        if not any(corona_isomorphic(corona(cx, r, k, l), c) for r in reps):
            reps.append(t)
    return reps


def criterion_3():
    rep, secs = _timed(lambda: run(RunConfig(generator="snub_square", k_max=3, l=0)))
    status, n, k, counts = _verdict(rep)
    need(status == "multihedral" and n == 2 and k <= 2, f"verdict {status} n={n} k={k}")
    g = patch("snub_square")
    cx = g.complex
    cls = classify(cx, k, 0)
    sizes = sorted(len(cx.boundary(c.representative)) for c in cls.classes)
    need(sizes == [3, 4], f"center polygons {sizes}")
    reps = _brute_classes(cx, exact_core(cx, 3, 0), 2, 0)
    need(len(reps) == 2, f"oracle found {len(reps)} classes")
    need(secs < 30, f"{secs:.1f}s over budget")
    return f"n=2 k={k}, centers 4-gon and 3-gon, oracle classes {len(reps)}, run {secs:.1f}s"


def criterion_4():
    cfg = RunConfig(generator="defect_grid", k_max=4, l=0, geometric=False)
    rep, secs = _timed(lambda: run(cfg))
    status, n, k, counts = _verdict(rep)
    need(status == "undetermined", f"verdict {status}")
    need(counts[1] < counts[2] < counts[3], f"N = {counts}")
    g = patch("defect_grid", k=4)
    cx = g.complex
    core = exact_core(cx, 4, 0)
    for j in (1, 2, 3):
        lab = classify(cx, j, 0, core).label()
        dist = defect_distance(cx, g.coords, core, j)
        seen = {}
        for t in core:
            need(seen.setdefault(lab[t], dist[t]) == dist[t],
                 f"a level-{j} class mixes distances to the cut")
        need(len(set(dist.values())) == j + 1, f"oracle distances at level {j}")
    need(secs < 30, f"{secs:.1f}s over budget")
    return f"undetermined, N={counts}, classes refine distance to the cut, run {secs:.1f}s"


def criterion_5():
    bad, checked = [], 0
    for name in GENERATOR_NAMES:
        cx = patch(name).complex
        for l in (0, 1):
            counts = check_monotonicity(cx, 3, l)
            ns = [c for _, c in counts]
            if ns != sorted(ns):
                bad.append(f"{name} l={l} N={ns}")
            for c in check_conditions(cx, 3, l).chain.classes:
                checked += 1
                if list(c.orders) != sorted(c.orders, reverse=True):
                    bad.append(f"{name} l={l} rep {c.representative} orders {c.orders}")
    need(not bad, "; ".join(bad))
    return f"{len(GENERATOR_NAMES)} fixtures x 2 thresholds, {checked} class chains, 0 violations"


def criterion_6():
    cases, skipped = 0, 0
    bad = []
    for name in GENERATOR_NAMES:
        cx = patch(name).complex
        for l in (0, 1):
            core = exact_core(cx, 3, l)
            for k in (1, 2, 3):
                if classify(cx, k - 1, l, core).n != classify(cx, k, l, core).n:
                    skipped += 1
                    continue
                cases += 1
                if not check_remone(cx, k, l, core):
                    bad.append(f"{name} l={l} k={k}")
    need(cases > 0, "no level had equal counts")
    need(not bad, "; ".join(bad))
    return f"{cases} fixture levels checked pair by pair, {skipped} without equal counts, 0 violations"


def _random_patch(rng):
    if rng.random() < 0.5:
        return from_polygons(square_polygons(polyomino_cells(rng, rng.randint(2, 6))))[0]
    return from_polygons(triangle_polygons(polyiamond_triangles(rng, rng.randint(2, 7))))[0]


def criterion_7():
    rng = random.Random(20261014)
    pairs = []
    while len(pairs) < 160:
        A, B = _random_patch(rng), _random_patch(rng)
        l, k = rng.choice([0, 1]), rng.randint(0, 2)
        ca, cb = corona(A, rng.choice(A.tiles), k, l), corona(B, rng.choice(B.tiles), k, l)
        if len(ca.faces) <= 40 and len(cb.faces) <= 40:
            pairs.append((ca, cb))
    small = []
    for name in GENERATOR_NAMES:
        cx = patch(name).complex
        for l in (0, 1):
            for t in exact_core(cx, 1, l)[:6]:
                for k in (0, 1):
                    c = corona(cx, t, k, l)
                    if len(c.faces) <= 40:
                        small.append(c)
    while len(pairs) < 240:
        ca, cb = rng.sample(small, 2)
        if (ca.k, ca.l) == (cb.k, cb.l):
            pairs.append((ca, cb))
    agree = positive = 0
    for ca, cb in pairs:
        ours = isomorphic(ca, cb) is not None
        agree += ours == corona_isomorphic(ca, cb)
        positive += ours
    need(agree == len(pairs), f"{len(pairs) - agree} disagreements")
    return f"{len(pairs)} pairs of at most 40 faces, {positive} isomorphic, all agree"


def criterion_8():
    bad, trips, rebuilt = [], 0, 0
    for name in PERIODIC:
        g = patch(name, 6)
        cx = g.complex
        for l in (0, 1):
            v = find_local_k(cx, 3, l)
            need(v.status == "multihedral", f"{name} l={l} is {v.status}")
            k = v.k
            if orbit_partition(cx, k, l) != classify(cx, k, l).partition():
                bad.append(f"{name} l={l}: orbits differ from classes")
            nbrs = cx.tile_neighbors(1)
            rng = random.Random(len(name) + l)
            for alpha in automorphism_group(corona(cx, g.center, k, l)):
                path = [g.center]
                for _ in range(4):
                    path.append(rng.choice([u for u in nbrs[path[-1]]
                                            if g.gen_radius[u] <= 6 - k - 1]))
                trips += 1
                if propagate_along(propagate_along(alpha, path), path[::-1]) != alpha:
                    bad.append(f"{name} l={l}: round trip changed the map")
                # reconstruct traverses every facet adjacency of the exact zone
                # and raises on any disagreement, so cycles are all checked
                reconstruct(cx, alpha)
                rebuilt += 1
    need(not bad, "; ".join(bad))
    return f"orbits = classes on {len(PERIODIC)} fixtures x 2, {trips} round trips, {rebuilt} zone reconstructions"


def criterion_9():
    g = patch("square")
    geo = GeoTiling(g.complex, g.coords)
    v = check_geom_theorem(geo, 3, 0)
    need((v.status, v.n, v.k) == ("periodic", 1, 1), f"square geometric {v.status} n={v.n}")
    shapes = coordinate_tiles(g.complex, g.coords)
    orders = [symmetry_group(geo, g.center, j, 0).order for j in (0, 1)]
    oracle = [d4_symmetries(shapes, g.center, j) for j in (0, 1)]
    need(orders == oracle == [8, 8], f"|G| {orders} vs oracle {oracle}")
    b = patch("brick_two_sizes")
    bgeo = GeoTiling(b.complex, b.coords)
    cn, gn = find_local_k(b.complex, 3, 0), check_geom_theorem(bgeo, 3, 0)
    m0, n0 = classify_geo(bgeo, 0, 0).m, classify(b.complex, 0, 0).n
    need(cn.n == 1 and gn.n == 2 and m0 > n0, f"brick comb n={cn.n} geo n={gn.n} M0={m0} N0={n0}")
    for name in GENERATOR_NAMES:
        p = patch(name)
        pgeo = GeoTiling(p.complex, p.coords)
        for l in (0, 1):
            core = exact_core(p.complex, 3, l)
            for k in range(4):
                m, n = classify_geo(pgeo, k, l, core).m, classify(p.complex, k, l, core).n
                need(m >= n, f"{name} l={l} k={k}: M={m} < N={n}")
    for name in PERIODIC:
        p = patch(name)
        pgeo = GeoTiling(p.complex, p.coords)
        a, c = check_geom_theorem(pgeo, 3, 0), check_geom_theorem(pgeo, 3, 1)
        need((a.status, a.n, a.k) == (c.status, c.n, c.k),
             f"{name}: l=0 gives {a.status} n={a.n} k={a.k}, l=1 gives {c.status} n={c.n} k={c.k}")
    return "square periodic n=1 k=1 with |G0|=|G1|=8, brick M0=2>N0=1, M>=N everywhere, l=0 and l=1 agree"


def criterion_10():
    bad = []
    for name in GENERATOR_NAMES:
        for r in range(1, 7):
            rep = validate(generate(name, r).complex)
            if not rep.ok:
                bad.append(f"{name} r={r}: {sorted(rep.kinds())}")
    need(not bad, "; ".join(bad))
    rep = validate(three_tile_facet())
    need(not rep.ok and "NotFaceToFace" in rep.kinds(), f"corrupted fixture gave {rep.kinds()}")
    return f"{len(GENERATOR_NAMES)} generators x radii 1..6 valid, corrupted facet gives NotFaceToFace"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in TITLES}


def evaluate(i):
    t0 = time.perf_counter()
    try:
        detail, ok = CRITERIA[i](), True
    except AssertionError as exc:
        detail, ok = str(exc) or "assertion failed", False
    secs = time.perf_counter() - t0
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {i}: {TITLES[i]}: {detail} ({secs:.1f}s)"
    return ok, line


@pytest.mark.parametrize("i", sorted(TITLES))
def test_criterion(i, capsys):
    ok, line = evaluate(i)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(i) for i in sorted(TITLES)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
