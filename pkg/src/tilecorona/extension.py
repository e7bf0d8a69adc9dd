"""Extending corona isomorphisms one level and transporting them across a patch.

Transport runs along facet sequences.  At each step the level-k map at the
current tile restricts to a level-(k-1) map at the next tile; that map is then
extended one level again.  Gluing the transported maps over a region gives a
partial automorphism of the patch, and every revisit of a tile is checked for
agreement.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import RankedComplex, flags_of, meet
from .iso import CoronaMap, isomorphic, propagate_with_reason, restrict_map
from .local import classify
from .metric import (InexactCorona, corona, exact_core, is_corona_exact,
                     resolve_threshold)


class NoExtension(Exception):
    pass


class PathInconsistency(Exception):
    def __init__(self, tile, first: CoronaMap, second: CoronaMap):
        self.tile, self.first, self.second = tile, first, second
        super().__init__(f"two transports disagree at tile {tile}")


@dataclass
class PartialAutomorphism:
    seed: CoronaMap
    tiles: dict[int, int]                   # domain tile -> image tile
    faces: dict[int, int]
    germs: dict[int, CoronaMap] = field(repr=False, default_factory=dict)
    skipped: frozenset[int] = frozenset()
    log: list[str] = field(default_factory=list, repr=False)

    def __getitem__(self, f: int) -> int:
        return self.faces[f]

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.tiles)


def extend_one_level(alpha: CoronaMap) -> CoronaMap:
    """Unique extension of a level-(k-1) isomorphism to level k."""
    src, tgt = alpha.source, alpha.target
    k, l = alpha.level + 1, src.l
    for cx, p in ((src.parent, src.center), (tgt.parent, tgt.center)):
        if not is_corona_exact(cx, p, k, l):
            raise InexactCorona(p, k, l)
    up_src = corona(src.parent, src.center, k, l)
    up_tgt = corona(tgt.parent, tgt.center, k, l)
    f0 = alpha.seed[0]
    g0 = tuple(alpha.faces[x] for x in f0)
    m, why = propagate_with_reason(up_src, up_tgt, f0, g0)
    if m is None:
        raise NoExtension(f"no level-{k} extension {src.center}->{tgt.center}: {why}")
    if restrict_map(m, k - 1) != alpha:
        raise NoExtension(f"level-{k} map {src.center}->{tgt.center} does not restrict to the seed")
    return m


def _step(alpha: CoronaMap, nxt: int) -> CoronaMap:
    """Transport a level-k map at P to the adjacent tile ``nxt``."""
    src, tgt = alpha.source, alpha.target
    k, l = alpha.level, src.l
    if k < 1:
        raise ValueError("transport needs maps of level >= 1")
    if not is_corona_exact(src.parent, nxt, k, l):
        raise InexactCorona(nxt, k, l)
    below = corona(src.parent, nxt, k - 1, l)
    if not below.faces <= src.faces:
        raise NoExtension(f"corona of {nxt} at level {k - 1} is not inside the level-{k} corona")
    image = alpha.faces[nxt]
    if not is_corona_exact(tgt.parent, image, k, l):
        raise InexactCorona(image, k, l)
    below_img = corona(tgt.parent, image, k - 1, l)
    sub = {f: alpha.faces[f] for f in below.faces}
    if set(sub.values()) != below_img.faces:
        raise NoExtension(f"image of corona of {nxt} is not the corona of {image}")
    f0 = flags_of(below.complex, nxt)[0]
    beta = CoronaMap(below, below_img, sub, (f0, tuple(sub[x] for x in f0)))
    return extend_one_level(beta)


def _check_facet_step(cx: RankedComplex, a: int, b: int) -> None:
    m = meet(cx, a, b)
    if m is None or cx.rank(m) < cx.dim - 1:
        raise ValueError(f"tiles {a} and {b} do not share a facet")


def propagate_along(alpha: CoronaMap, seq: Sequence[int]) -> CoronaMap:
    """Transport ``alpha`` along a facet sequence starting at its center."""
    if not seq:
        return alpha
    cx = alpha.source.parent
    if seq[0] != alpha.source.center:
        raise ValueError("sequence must start at the center of the map")
    cur = alpha
    for a, b in zip(seq, seq[1:]):
        _check_facet_step(cx, a, b)
        try:
            cur = _step(cur, b)
        except NoExtension as exc:
            raise NoExtension(f"step {a}->{b}: {exc}") from exc
    return cur


def _facet_neighbors(cx: RankedComplex) -> dict[int, tuple[int, ...]]:
    return cx.tile_neighbors(cx.dim - 1)


def reconstruct(cx: RankedComplex, alpha: CoronaMap,
                region: Iterable[int] | None = None) -> PartialAutomorphism:
    """Glue transports of ``alpha`` over ``region`` into a partial automorphism.

    ``region`` defaults to the tiles with exact coronas at the level of
    ``alpha``.  Tiles whose image falls outside the exact zone are skipped and
    reported.  Each facet adjacency inside the domain is traversed once; an
    arrival at a tile that already carries a germ must reproduce it.
    """
    if alpha.source.parent is not cx or alpha.target.parent is not cx:
        raise ValueError("the seed map must live in the given complex")
    k, l = alpha.level, alpha.source.l
    if region is None:
        region = exact_core(cx, k, l)
    region = set(region)
    p = alpha.source.center
    if p not in region:
        raise ValueError(f"seed center {p} is outside the region")
    nbrs = _facet_neighbors(cx)
    germs = {p: alpha}
    done: set[int] = set()
    skipped: set[int] = set()
    log = []
    queue = deque([p])
    while queue:
        s = queue.popleft()
        done.add(s)
        for t in nbrs[s]:
            if t not in region or t in done or t in skipped:
                continue
            image = germs[s].faces[t]
            if not is_corona_exact(cx, image, k, l):
                skipped.add(t)
                continue
            g = _step(germs[s], t)
            if t in germs:
                if germs[t] != g:
                    raise PathInconsistency(t, germs[t], g)
                log.append(f"{s}->{t}: consistent")
            else:
                germs[t] = g
                log.append(f"{s}->{t}: new germ at {t} -> {g.target.center}")
                queue.append(t)
    skipped -= set(germs)

    faces: dict[int, int] = {}
    for t, g in germs.items():
        for f in cx.tile_closure(t):
            y = g.faces[f]
            if faces.setdefault(f, y) != y:
                raise PathInconsistency(t, germs[t], g)
    if len(set(faces.values())) != len(faces):
        raise PathInconsistency(p, alpha, alpha)
    tiles = {t: g.target.center for t, g in germs.items()}
    return PartialAutomorphism(alpha, tiles, faces, germs, frozenset(skipped), log)


def orbit_partition(cx: RankedComplex, k: int, l: int | None = None,
                    core: Iterable[int] | None = None,
                    region: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """Core tiles grouped by the tile maps of reconstructed partial automorphisms.

    For each class of the level-k classification, the isomorphism from the
    representative to each member not yet merged with it is reconstructed over
    the exact zone; every tile pair ``(t, phi(t))`` with both ends in the core is
    merged.
    """
    l = resolve_threshold(cx, l)
    cls = classify(cx, k, l, core)
    core = cls.core
    inside = set(core)
    parent = {t: t for t in core}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in cls.classes:
        rep = corona(cx, c.representative, k, l)
        for m in c.members:
            if find(m) == find(c.representative):
                continue
            alpha = isomorphic(rep, corona(cx, m, k, l))
            if alpha is None:
                raise NoExtension(f"class member {m} lost its isomorphism")
            pa = reconstruct(cx, alpha, region)
            for t, u in pa.tiles.items():
                if t in inside and u in inside:
                    a, b = find(t), find(u)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for t in core:
        groups.setdefault(find(t), []).append(t)
    return sorted(tuple(sorted(g)) for g in groups.values())


def facet_cycles_consistent(cx: RankedComplex, alpha: CoronaMap,
                            region: Iterable[int] | None = None) -> bool:
    try:
        reconstruct(cx, alpha, region)
    except PathInconsistency:
        return False
    return True
