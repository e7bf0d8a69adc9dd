"""Congruence of tile coronas in the plane, with exact rational coordinates.

Tiles are compared as point sets, i.e. by their corners (vertices that are not
interior to a straight side).  An isometry of the plane is fixed by the image of
one ordered side of the center plus a choice of orientation.  If both sides
have rational endpoints and equal length, the orthogonal matrix taking one to
the other has rational entries, so the whole search stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .complex import RankedComplex
from .iso import CoronaMap, map_from_vertex_images
from .local import ClassChain, CoronaClass, GroupChainRecord, Verdict
from .metric import InexactCorona, corona, exact_core, is_corona_exact, resolve_threshold

Point = tuple[Fraction, Fraction]


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def squared_distance(p: Point, q: Point) -> Fraction:
    d = _sub(p, q)
    return _dot(d, d)


@dataclass(frozen=True)
class Isometry:
    """``x -> M x + t`` with ``M = [[a, b], [c, d]]`` orthogonal."""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    tx: Fraction
    ty: Fraction

    def __call__(self, p: Point) -> Point:
        return (self.a * p[0] + self.b * p[1] + self.tx,
                self.c * p[0] + self.d * p[1] + self.ty)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_orthogonal(self) -> bool:
        return (self.a * self.a + self.c * self.c == 1
                and self.b * self.b + self.d * self.d == 1
                and self.a * self.b + self.c * self.d == 0)

    def compose(self, other: "Isometry") -> "Isometry":
        """``self`` after ``other``."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        tx, ty = self((other.tx, other.ty))
        return Isometry(a, b, c, d, tx, ty)

    @staticmethod
    def identity() -> "Isometry":
        one, zero = Fraction(1), Fraction(0)
        return Isometry(one, zero, zero, one, zero, zero)

    @staticmethod
    def from_edges(u: Point, v: Point, u2: Point, v2: Point,
                   reflect: bool) -> "Isometry | None":
        """The isometry sending ``u -> u2``, ``v -> v2``, or ``None``."""
        e, e2 = _sub(v, u), _sub(v2, u2)
        ll = _dot(e, e)
        if ll == 0 or ll != _dot(e2, e2):
            return None
        cs, sn = _dot(e, e2) / ll, _cross(e, e2) / ll
        a, b, c, d = cs, -sn, sn, cs
        if reflect:
            # reflection fixing the direction of e, applied first
            x, y = e
            fa, fb = (x * x - y * y) / ll, 2 * x * y / ll
            fc, fd = fb, -fa
            a, b, c, d = a * fa + b * fc, a * fb + b * fd, c * fa + d * fc, c * fb + d * fd
        tx = u2[0] - (a * u[0] + b * u[1])
        ty = u2[1] - (c * u[0] + d * u[1])
        return Isometry(a, b, c, d, tx, ty)


class GeometryError(ValueError):
    pass


class GeoTiling:
    """A 2D complex with exact rational coordinates on its vertices."""

    def __init__(self, complex: RankedComplex, coords: Mapping[int, Iterable]):
        if complex.dim != 2:
            raise GeometryError("only planar tilings are supported")
        self.complex = complex
        self.coords: dict[int, Point] = {int(v): tuple(Fraction(x) for x in p)
                                         for v, p in coords.items()}
        missing = [v for v in complex.faces(0) if v not in self.coords]
        if missing:
            raise GeometryError(f"vertices without coordinates: {missing[:5]}")
        self._by_point = {p: v for v, p in self.coords.items()}

    def vertex_at(self, p: Point) -> int | None:
        return self._by_point.get(p)

    def polygon(self, t: int) -> tuple[int, ...]:
        """Vertices of tile ``t`` in boundary order."""
        return self._polygons[t]

    @cached_property
    def _polygons(self) -> dict[int, tuple[int, ...]]:
        cx = self.complex
        out = {}
        for t in cx.tiles:
            adj: dict[int, list[int]] = {}
            for e in cx.boundary(t):
                a, b = sorted(cx.boundary(e))
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
            start = min(adj)
            cyc, prev, cur = [start], None, start
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                step = nxt[0] if prev is not None else min(nxt)
                if step == start:
                    break
                cyc.append(step)
                prev, cur = cur, step
            out[t] = tuple(cyc)
        return out

    def corners(self, t: int) -> tuple[Point, ...]:
        return self._corners[t]

    @cached_property
    def _corners(self) -> dict[int, tuple[Point, ...]]:
        out = {}
        for t, cyc in self._polygons.items():
            pts = [self.coords[v] for v in cyc]
            n = len(pts)
            keep = [pts[i] for i in range(n)
                    if _cross(_sub(pts[i], pts[i - 1]), _sub(pts[(i + 1) % n], pts[i])) != 0]
            out[t] = tuple(keep)
        return out

    def shape(self, t: int) -> frozenset[Point]:
        return self._shapes[t]

    @cached_property
    def _shapes(self) -> dict[int, frozenset[Point]]:
        return {t: frozenset(c) for t, c in self._corners.items()}

    @cached_property
    def _tile_by_shape(self) -> dict[frozenset[Point], int]:
        return {s: t for t, s in self._shapes.items()}

    def tile_with_shape(self, s: frozenset[Point]) -> int | None:
        return self._tile_by_shape.get(s)

    def edge_lengths(self, t: int) -> tuple[Fraction, ...]:
        c = self._corners[t]
        return tuple(sorted(squared_distance(c[i], c[i - 1]) for i in range(len(c))))

    def check_convexity(self) -> list[int]:
        """Tiles whose vertices are not in strictly convex position."""
        bad = []
        for t, cyc in self._polygons.items():
            c = [self.coords[v] for v in cyc]
            n = len(c)
            turns = [_cross(_sub(c[i], c[i - 1]), _sub(c[(i + 1) % n], c[i]))
                     for i in range(n)]
            if n < 3 or 0 in turns or len({x > 0 for x in turns}) != 1:
                bad.append(t)
        return bad


@dataclass(frozen=True, eq=False)
class TileCorona:
    geo: GeoTiling
    center: int
    k: int
    l: int
    tiles: frozenset[int]

    @cached_property
    def invariant(self) -> tuple:
        return tuple(sorted(self.geo.edge_lengths(t) for t in self.tiles))


@dataclass
class CongruenceWitness:
    isometry: Isometry
    tiles: dict[int, int]
    vertices: dict[int, int]


@dataclass
class GeoSymGroup:
    center: int
    k: int
    elements: tuple[Isometry, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def tile_corona(geo: GeoTiling, p: int, k: int, l: int | None = None) -> TileCorona:
    cx = geo.complex
    l = resolve_threshold(cx, l)
    if not is_corona_exact(cx, p, k, l):
        raise InexactCorona(p, k, l)
    return TileCorona(geo, p, k, l, frozenset(corona(cx, p, k, l).ring))


def _seeds(a: TileCorona, b: TileCorona):
    ca, cb = a.geo.corners(a.center), b.geo.corners(b.center)
    u, v = ca[0], ca[1]
    n = len(cb)
    seen = set()
    for i in range(n):
        for u2, v2 in ((cb[i], cb[(i + 1) % n]), (cb[(i + 1) % n], cb[i])):
            for reflect in (False, True):
                iso = Isometry.from_edges(u, v, u2, v2, reflect)
                if iso is not None and iso not in seen:
                    seen.add(iso)
                    yield iso


def _try(a: TileCorona, b: TileCorona, iso: Isometry) -> CongruenceWitness | None:
    ga, gb = a.geo, b.geo
    if frozenset(iso(p) for p in ga.shape(a.center)) != gb.shape(b.center):
        return None
    tiles = {}
    for t in a.tiles:
        u = gb.tile_with_shape(frozenset(iso(p) for p in ga.shape(t)))
        if u is None or u not in b.tiles:
            return None
        tiles[t] = u
    if len(set(tiles.values())) != len(b.tiles):
        return None
    cxa = ga.complex
    verts = {}
    for v in set().union(*(cxa.vertices(t) for t in a.tiles)):
        w = gb.vertex_at(iso(ga.coords[v]))
        if w is None:
            return None
        verts[v] = w
    # The defining criterion is that every squared distance among corona
    # vertices survives.  For an orthogonal map that holds by construction, and
    # a planar point is pinned down by its distances to three non-collinear
    # anchors, so checking distances to the center's first corners suffices.
    if not iso.is_orthogonal():
        return None
    anchors = [ga.vertex_at(p) for p in ga.corners(a.center)[:3]]
    for x in verts:
        for y in anchors:
            if squared_distance(ga.coords[x], ga.coords[y]) != \
                    squared_distance(gb.coords[verts[x]], gb.coords[verts[y]]):
                return None
    return CongruenceWitness(iso, tiles, verts)


def pairwise_congruent(a: TileCorona, b: TileCorona) -> CongruenceWitness | None:
    """An isometry taking center to center and corona onto corona, if any."""
    if a.k != b.k or a.l != b.l:
        raise ValueError("coronas of different levels")
    if len(a.tiles) != len(b.tiles) or a.invariant != b.invariant:
        return None
    for iso in _seeds(a, b):
        w = _try(a, b, iso)
        if w is not None:
            return w
    return None


def symmetry_group(geo: GeoTiling, p: int, k: int, l: int | None = None) -> GeoSymGroup:
    """Isometries fixing tile ``p`` and mapping its k-th tile corona onto itself."""
    l = resolve_threshold(geo.complex, l)
    key = ("geosym", p, k, l)
    cache = geo.complex._cache
    if key in cache:
        return cache[key]
    c = tile_corona(geo, p, k, l)
    elems = []
    for iso in _seeds(c, c):
        if _try(c, c, iso) is not None:
            elems.append(iso)
    elems.sort(key=lambda g: (g.det, g.a, g.b, g.c, g.d, g.tx, g.ty))
    out = GeoSymGroup(p, k, tuple(elems))
    cache[key] = out
    return out


@dataclass
class GeoClassification:
    k: int
    l: int
    core: tuple[int, ...]
    classes: list[CoronaClass]

    @property
    def m(self) -> int:
        return len(self.classes)

    def partition(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(c.members)) for c in self.classes)


def classify_geo(geo: GeoTiling, k: int, l: int | None = None,
                 core: Iterable[int] | None = None) -> GeoClassification:
    """Partition ``core`` into pairwise congruence classes of k-th tile coronas."""
    cx = geo.complex
    l = resolve_threshold(cx, l)
    core = exact_core(cx, k, l) if core is None else tuple(sorted(core))
    key = ("classify_geo", k, l, core)
    if key in cx._cache:
        return cx._cache[key]
    reps: list[tuple[TileCorona, list[int]]] = []
    for t in core:
        c = tile_corona(geo, t, k, l)
        for rc, members in reps:
            if pairwise_congruent(rc, c) is not None:
                members.append(t)
                break
        else:
            reps.append((c, [t]))
    classes = sorted((CoronaClass(rc.center, tuple(m)) for rc, m in reps),
                     key=lambda c: c.representative)
    out = GeoClassification(k, l, core, classes)
    cx._cache[key] = out
    return out


def geo_counts(geo: GeoTiling, k_max: int, l: int | None = None,
               core: Iterable[int] | None = None) -> list[tuple[int, int]]:
    """``(k, M_k)`` for ``k = 0..k_max``; raises if M_k ever decreases."""
    cx = geo.complex
    l = resolve_threshold(cx, l)
    core = exact_core(cx, k_max, l) if core is None else tuple(sorted(core))
    counts = [(k, classify_geo(geo, k, l, core).m) for k in range(k_max + 1)]
    for (_, a), (k, b) in zip(counts, counts[1:]):
        if b < a:
            raise AssertionError(f"M_{k} = {b} < M_{k - 1} = {a}")
    return counts


def geo_group_chain(geo: GeoTiling, k: int, l: int, reps) -> GroupChainRecord:
    chains = []
    for rep in reps:
        groups = [symmetry_group(geo, rep, j, l) for j in range(k + 1)]
        equal = k == 0 or set(groups[k - 1].elements) == set(groups[k].elements)
        chains.append(ClassChain(rep, tuple(g.order for g in groups), equal))
    return GroupChainRecord(k, chains)


def check_geom_theorem(geo: GeoTiling, k_max: int, l: int | None = None,
                       core: Iterable[int] | None = None) -> Verdict:
    """Smallest ``k <= k_max`` with equal class counts and stable symmetry groups."""
    cx = geo.complex
    l = resolve_threshold(cx, l)
    core = exact_core(cx, k_max, l) if core is None else tuple(sorted(core))
    if not core:
        return Verdict("invalid", diagnostics=[f"no tile has an exact {k_max}-corona"])
    try:
        counts = geo_counts(geo, k_max, l, core)
    except InexactCorona as exc:
        return Verdict("invalid", diagnostics=[str(exc)])
    diags = []
    for k in range(1, k_max + 1):
        hi = classify_geo(geo, k, l, core)
        m_prev = counts[k - 1][1]
        chain = geo_group_chain(geo, k, l, [c.representative for c in hi.classes])
        cond1 = m_prev == hi.m
        cond2 = all(c.top_equal for c in chain.classes)
        if cond1 and cond2:
            return Verdict("periodic", hi.m, k, counts, diags)
        why = []
        if not cond1:
            why.append(f"M_{k - 1}={m_prev} != M_{k}={hi.m}")
        if not cond2:
            bad = [c.representative for c in chain.classes if not c.top_equal]
            why.append(f"symmetry groups drop at level {k} for representatives {bad}")
        diags.append(f"k={k}: " + "; ".join(why))
    return Verdict("undetermined", None, None, counts, diags)


def witness_to_corona_map(geo_a: GeoTiling, a: TileCorona, geo_b: GeoTiling,
                          b: TileCorona, w: CongruenceWitness) -> CoronaMap | None:
    """The combinatorial isomorphism induced by a congruence witness."""
    ca = corona(geo_a.complex, a.center, a.k, a.l)
    cb = corona(geo_b.complex, b.center, b.k, b.l)
    return map_from_vertex_images(ca, cb, w.vertices)
