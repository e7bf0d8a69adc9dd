"""Deterministic unfoldings of periodic tilings (and one defect) to a radius.

Every generator works the same way: lay out polygons with exact rational
corners over a window comfortably larger than requested, build the complex,
take breadth-first vertex-adjacency distance from the seed tiles, and keep the
tiles within ``radius``.  That distance is each tile's *generation radius*.

Core guarantee (``c = 1`` for every generator): a tile of generation radius
at most ``radius - k`` has an exact ``k``-corona for every threshold ``l``.
Tiles at vertex distance ``<= k - 1`` from it sit at generation radius
``<= radius - 1``, so every facet around their vertices lies in two kept tiles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .complex import RankedComplex

Point = tuple[Fraction, ...]

GENERATOR_NAMES = ("square", "triangular", "hexagonal", "snub_square",
                   "brick_two_sizes", "defect_grid")

# Core radius the analysis pipeline wants to keep, beyond ``k``, for each
# generator: enough for a full period (and, for the defect, every distance
# class up to ``k + 1``).
_MIN_CORE: dict[str, Callable[[int], int]] = {
    "square": lambda k: 1,
    "triangular": lambda k: 2,
    "hexagonal": lambda k: 1,
    "snub_square": lambda k: 2,
    "brick_two_sizes": lambda k: 2,
    "defect_grid": lambda k: k + 2,
}

F = Fraction


class UnknownGenerator(ValueError):
    pass


@dataclass
class GeneratedPatch:
    name: str
    radius: int
    complex: RankedComplex
    coords: dict[int, Point]
    gen_radius: dict[int, int]
    center: int
    labels: dict[int, tuple] = field(default_factory=dict)

    def core(self, k: int) -> tuple[int, ...]:
        """Tiles guaranteed to have exact ``k``-coronas."""
        return tuple(t for t in self.complex.tiles
                     if self.gen_radius[t] <= self.radius - k)

    def geo(self):
        from .geometric import GeoTiling
        return GeoTiling(self.complex, self.coords)

    def document(self, core_k: int | None = None):
        from .patch_io import PatchDocument
        core = None if core_k is None else list(self.core(core_k))
        doc, new = PatchDocument.from_complex_with_ids(
            self.complex, self.coords, core,
            {"generator": self.name, "radius": self.radius})
        doc.meta["center"] = new[self.center]
        return doc


def min_radius(name: str, k: int) -> int:
    if name not in _MIN_CORE:
        raise UnknownGenerator(name)
    return k + _MIN_CORE[name](k)


def from_polygons(polygons: list[list[Point]]) -> tuple[RankedComplex, dict[int, Point]]:
    """Build a 2D complex from polygons given as cyclic corner lists.

    Vertices are identified by exact coordinates, edges by their endpoint
    pair.  Ids are dense: vertices, then edges, then tiles, each in order of
    first appearance.
    """
    vid: dict[Point, int] = {}
    for poly in polygons:
        for p in poly:
            if p not in vid:
                vid[p] = len(vid)
    eid: dict[frozenset[int], int] = {}
    for poly in polygons:
        n = len(poly)
        for i in range(n):
            e = frozenset((vid[poly[i]], vid[poly[(i + 1) % n]]))
            if e not in eid:
                eid[e] = len(vid) + len(eid)
    faces: dict[int, tuple[int, tuple[int, ...]]] = {}
    for p, v in vid.items():
        faces[v] = (0, ())
    for e, i in eid.items():
        faces[i] = (1, tuple(sorted(e)))
    base = len(vid) + len(eid)
    for t, poly in enumerate(polygons):
        n = len(poly)
        edges = sorted(eid[frozenset((vid[poly[i]], vid[poly[(i + 1) % n]]))]
                       for i in range(n))
        faces[base + t] = (2, tuple(edges))
    coords = {v: p for p, v in vid.items()}
    return RankedComplex(2, faces), coords


# -- polygon layouts --------------------------------------------------------

def _lat(x, y) -> Point:
    # lattice basis (1, 0), (1/2, 1): an affine image of the regular triangle grid
    x, y = F(x), F(y)
    return (x + y / 2, y)


def _square(w):
    for i, j in product(range(-w, w + 1), repeat=2):
        yield ("sq", i, j), [(F(i), F(j)), (F(i + 1), F(j)),
                             (F(i + 1), F(j + 1)), (F(i), F(j + 1))]


def _triangular(w):
    for i, j in product(range(-w, w + 1), repeat=2):
        yield ("up", i, j), [_lat(i, j), _lat(i + 1, j), _lat(i, j + 1)]
        yield ("dn", i, j), [_lat(i + 1, j), _lat(i + 1, j + 1), _lat(i, j + 1)]


_HEX = [(F(1, 3), F(1, 3)), (F(-1, 3), F(2, 3)), (F(-2, 3), F(1, 3)),
        (F(-1, 3), F(-1, 3)), (F(1, 3), F(-2, 3)), (F(2, 3), F(-1, 3))]


def _hexagonal(w):
    for i, j in product(range(-w, w + 1), repeat=2):
        yield ("hex", i, j), [_lat(i + x, j + y) for x, y in _HEX]


_SNUB_A, _SNUB_B = 4, 1


def _snub_square(w):
    # Squares rotated alternately about a square lattice; each gap rhombus is
    # cut into two isosceles triangles along its short diagonal.  Rational
    # stand-in for the equilateral snub square with the same combinatorics and
    # the same symmetry type.
    a, b = _SNUB_A, _SNUB_B
    even = [(a, b), (-b, a), (-a, -b), (b, -a)]
    odd = [(a, -b), (b, a), (-a, b), (-b, -a)]
    for i, j in product(range(-w, w + 1), repeat=2):
        cx, cy = 2 * a * i, 2 * a * j
        offs = even if (i + j) % 2 == 0 else odd
        yield ("sq", i, j), [(F(cx + x), F(cy + y)) for x, y in offs]
    for i, j in product(range(-w - 1, w + 1), repeat=2):
        gx, gy = a * (2 * i + 1), a * (2 * j + 1)

        def at(x, y):
            return (F(gx + x), F(gy + y))
        if (i + j) % 2 == 0:
            s, wv, n, e = at(0, b - a), at(-a - b, 0), at(0, a - b), at(a + b, 0)
            yield ("tri", i, j, 0), [s, n, wv]
            yield ("tri", i, j, 1), [s, e, n]
        else:
            n, wv, s, e = at(0, a + b), at(b - a, 0), at(0, -a - b), at(a - b, 0)
            yield ("tri", i, j, 0), [n, wv, e]
            yield ("tri", i, j, 1), [wv, s, e]


def _row_y(j: int) -> Fraction:
    # rows alternate heights 1, 2, 1, 2, ... starting at row 0
    return F(j + j // 2)


def _brick_two_sizes(w):
    for i, j in product(range(-w, w + 1), repeat=2):
        y0, y1 = _row_y(j), _row_y(j + 1)
        yield ("brick", i, j), [(F(i), y0), (F(i + 1), y0), (F(i + 1), y1), (F(i), y1)]


def _defect_grid(w):
    # The central cell is cut in two by a segment whose ends are pulled 1/4
    # inside the cell, so both halves and the two side neighbors (now
    # pentagons) are strictly convex.
    h, e = F(1, 2), F(1, 4)
    lft, rgt = (e, h), (1 - e, h)
    for label, poly in _square(w):
        _, i, j = label
        if (i, j) == (0, 0):
            yield ("rect", 0), [(F(0), F(0)), (F(1), F(0)), rgt, lft]
            yield ("rect", 1), [lft, rgt, (F(1), F(1)), (F(0), F(1))]
        elif (i, j) == (-1, 0):
            yield label, [(F(-1), F(0)), (F(0), F(0)), lft, (F(0), F(1)), (F(-1), F(1))]
        elif (i, j) == (1, 0):
            yield label, [(F(1), F(0)), (F(2), F(0)), (F(2), F(1)), (F(1), F(1)), rgt]
        else:
            yield label, poly


_LAYOUTS = {
    "square": (_square, [("sq", 0, 0)]),
    "triangular": (_triangular, [("up", 0, 0)]),
    "hexagonal": (_hexagonal, [("hex", 0, 0)]),
    "snub_square": (_snub_square, [("sq", 0, 0)]),
    "brick_two_sizes": (_brick_two_sizes, [("brick", 0, 0)]),
    "defect_grid": (_defect_grid, [("rect", 0), ("rect", 1)]),
}


def _bfs(neighbors, seeds):
    dist = {s: 0 for s in seeds}
    queue = deque(seeds)
    while queue:
        t = queue.popleft()
        for u in neighbors[t]:
            if u not in dist:
                dist[u] = dist[t] + 1
                queue.append(u)
    return dist


def generate(name: str, radius: int) -> GeneratedPatch:
    """Unfold the named tiling to ``radius`` around its seed tile(s)."""
    if name not in _LAYOUTS:
        raise UnknownGenerator(f"unknown generator {name!r}; "
                               f"choose from {', '.join(GENERATOR_NAMES)}")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    layout, seed_labels = _LAYOUTS[name]
    items = list(layout(radius + 3))
    cx, _ = from_polygons([poly for _, poly in items])
    base = len(cx) - len(items)
    label_of = {base + n: lab for n, (lab, _) in enumerate(items)}
    tile_of = {lab: t for t, lab in label_of.items()}
    dist = _bfs(cx.tile_neighbors(0), [tile_of[s] for s in seed_labels])

    polys = dict(items)
    keep = sorted((dist[tile_of[lab]], lab) for lab, _ in items
                  if dist.get(tile_of[lab], radius + 1) <= radius)
    cx, coords = from_polygons([polys[lab] for _, lab in keep])
    base = len(cx) - len(keep)
    gen_radius = {base + n: rho for n, (rho, _) in enumerate(keep)}
    labels = {base + n: lab for n, (_, lab) in enumerate(keep)}
    center = next(t for t, lab in labels.items() if lab == seed_labels[0])
    return GeneratedPatch(name, radius, cx, coords, gen_radius, center, labels)


# -- higher-dimensional helpers ---------------------------------------------

def cubical_patch(shape: tuple[int, ...]) -> tuple[RankedComplex, dict[tuple, int]]:
    """Face complex of a box of unit cubes, ``shape[i]`` cubes along axis i.

    Returns the complex and the id of each cell keyed by its lower corner.
    Faces are (lower corner, free axes); ids are dense by rank.
    """
    d = len(shape)
    faces_by_rank: list[list[tuple]] = [[] for _ in range(d + 1)]
    for free_bits in product((0, 1), repeat=d):
        free = tuple(i for i in range(d) if free_bits[i])
        ranges = [range(shape[i]) if free_bits[i] else range(shape[i] + 1)
                  for i in range(d)]
        for corner in product(*ranges):
            faces_by_rank[len(free)].append((corner, free))
    ids: dict[tuple, int] = {}
    for fs in faces_by_rank:
        for f in sorted(fs):
            ids[f] = len(ids)
    faces = {}
    for (corner, free), fid in ids.items():
        bnd = []
        for ax in free:
            rest = tuple(a for a in free if a != ax)
            for step in (0, 1):
                c = list(corner)
                c[ax] += step
                bnd.append(ids[(tuple(c), rest)])
        faces[fid] = (len(free), tuple(bnd))
    cells = {corner: ids[(corner, tuple(range(d)))]
             for corner, free in ids if len(free) == d}
    return RankedComplex(d, faces), cells


def cube_lattice(d: int) -> RankedComplex:
    """Face lattice of a single ``d``-cube."""
    return cubical_patch((1,) * d)[0]
