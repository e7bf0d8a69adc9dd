"""Tile distance, centered coronas and exactness of coronas inside a patch."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .complex import RankedComplex, restrict


class InexactCorona(Exception):
    """A corona would be truncated by the patch boundary."""

    def __init__(self, tile, k, l=None):
        self.tile, self.k, self.l = tile, k, l
        super().__init__(f"corona of tile {tile} at level {k} is not exact in this patch")


def default_threshold(dim: int) -> int:
    return max(dim - 2, 0)


def resolve_threshold(cx: RankedComplex, l: int | None) -> int:
    if l is None:
        return default_threshold(cx.dim)
    if not 0 <= l <= max(cx.dim - 1, 0):
        raise ValueError(f"threshold l={l} outside 0..{cx.dim - 1}")
    return l


def distance_rings(cx: RankedComplex, p: int, l: int | None = None,
                   depth: int | None = None) -> dict[int, int]:
    """Breadth-first tile distances from ``p``, optionally cut at ``depth``."""
    l = resolve_threshold(cx, l)
    nbrs = cx.tile_neighbors(l)
    dist = {p: 0}
    queue = deque([p])
    while queue:
        t = queue.popleft()
        if depth is not None and dist[t] >= depth:
            continue
        for u in nbrs[t]:
            if u not in dist:
                dist[u] = dist[t] + 1
                queue.append(u)
    return dist


def tile_distance(cx: RankedComplex, p: int, q: int, l: int | None = None) -> int | None:
    """Length of a shortest tile sequence from ``p`` to ``q``.

    Consecutive tiles must share a face of rank at least ``l``.  Returns
    ``None`` when ``q`` is unreachable inside the patch.
    """
    return distance_rings(cx, p, l).get(q)


@dataclass(frozen=True, eq=False)
class CenteredCorona:
    center: int
    k: int
    l: int
    ring: Mapping[int, int]
    complex: RankedComplex
    parent: RankedComplex

    @property
    def tiles(self) -> tuple[int, ...]:
        return tuple(sorted(self.ring, key=lambda t: (self.ring[t], t)))

    def tiles_at(self, j: int) -> tuple[int, ...]:
        return tuple(sorted(t for t, r in self.ring.items() if r == j))

    @cached_property
    def faces(self) -> frozenset[int]:
        return frozenset(self.complex.faces())

    @cached_property
    def signature(self):
        from .iso import signature
        return signature(self)

    def __repr__(self) -> str:
        return (f"CenteredCorona(center={self.center}, k={self.k}, l={self.l}, "
                f"tiles={len(self.ring)})")


def corona(cx: RankedComplex, p: int, k: int, l: int | None = None) -> CenteredCorona:
    """The ``k``-th corona of ``p``: tiles within distance ``k`` and their faces."""
    l = resolve_threshold(cx, l)
    if cx.rank(p) != cx.dim:
        raise ValueError(f"face {p} is not a tile")
    key = ("corona", p, k, l)
    hit = cx._cache.get(key)
    if hit is not None:
        return hit
    ring = distance_rings(cx, p, l, depth=k)
    faces = set()
    for t in ring:
        faces |= cx.tile_closure(t)
    c = CenteredCorona(p, k, l, ring, restrict(cx, faces), cx)
    cx._cache[key] = c
    return c


def is_corona_exact(cx: RankedComplex, p: int, k: int, l: int | None = None) -> bool:
    """True when the patch corona equals the corona in any extension.

    Every tile at distance ``<= k - 1`` must be neighbor-complete: each of its
    faces of rank ``>= l`` is closed.
    """
    l = resolve_threshold(cx, l)
    if k <= 0:
        return True
    closed = cx.closed_faces
    for t, r in distance_rings(cx, p, l, depth=k - 1).items():
        for f in cx.tile_closure(t):
            if cx.rank(f) >= l and f not in closed:
                return False
    return True


def exact_core(cx: RankedComplex, k: int, l: int | None = None) -> tuple[int, ...]:
    """All tiles whose ``k``-corona is exact (the ``auto`` core)."""
    l = resolve_threshold(cx, l)
    key = ("core", k, l)
    if key not in cx._cache:
        cx._cache[key] = tuple(t for t in cx.tiles if is_corona_exact(cx, t, k, l))
    return cx._cache[key]


def require_exact(cx: RankedComplex, tiles, k: int, l: int | None = None) -> None:
    for t in tiles:
        if not is_corona_exact(cx, t, k, l):
            raise InexactCorona(t, k, l)
