"""Ranked face complexes: the combinatorial substrate for everything else.

A complex stores, for each face, its rank and its boundary (the faces of rank
one lower that it covers).  Tiles are the faces of top rank ``dim``.  All the
derived indices (coboundaries, vertex sets, tile stars) are built once at
construction; afterwards the object is treated as immutable.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

Flag = tuple[int, ...]


class ComplexError(Exception):
    pass


class NotFaceToFace(ComplexError):
    """Two faces meet in a vertex set that is not a common face."""


class NotClosed(ComplexError):
    """A face set handed to :func:`restrict` is missing boundary faces."""


class RankedComplex:
    """Finite graded boundary structure of a face-to-face patch.

    Parameters
    ----------
    dim : int
        Rank of the tiles.
    faces : mapping
        ``face id -> (rank, iterable of boundary ids)``.

    Construction never raises on malformed data; :func:`validate` reports it.
    """

    def __init__(self, dim: int, faces: Mapping[int, tuple[int, Iterable[int]]]):
        self.dim = int(dim)
        self._rank: dict[int, int] = {}
        self._boundary: dict[int, frozenset[int]] = {}
        for f, (r, b) in faces.items():
            self._rank[int(f)] = int(r)
            self._boundary[int(f)] = frozenset(int(x) for x in b)

        cob: dict[int, set[int]] = {f: set() for f in self._rank}
        for f, b in self._boundary.items():
            for g in b:
                if g in cob:
                    cob[g].add(f)
        self._coboundary = {f: frozenset(s) for f, s in cob.items()}

        by_rank: list[list[int]] = [[] for _ in range(self.dim + 1)]
        for f in sorted(self._rank):
            r = self._rank[f]
            if 0 <= r <= self.dim:
                by_rank[r].append(f)
        self._by_rank = tuple(tuple(x) for x in by_rank)

        verts: dict[int, frozenset[int]] = {}
        for r, fs in enumerate(self._by_rank):
            for f in fs:
                if r == 0:
                    verts[f] = frozenset((f,))
                else:
                    acc: set[int] = set()
                    for g in self._boundary[f]:
                        acc |= verts.get(g, frozenset())
                    verts[f] = frozenset(acc)
        self._verts = verts
        self._cache: dict = {}

    # -- basic queries -----------------------------------------------------

    def __contains__(self, f) -> bool:
        return f in self._rank

    def __len__(self) -> int:
        return len(self._rank)

    def __iter__(self):
        return iter(sorted(self._rank))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankedComplex):
            return NotImplemented
        return (self.dim == other.dim and self._rank == other._rank
                and self._boundary == other._boundary)

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        counts = ", ".join(str(len(fs)) for fs in self._by_rank)
        return f"RankedComplex(dim={self.dim}, f-vector=({counts}))"

    def rank(self, f: int) -> int:
        return self._rank[f]

    def boundary(self, f: int) -> frozenset[int]:
        return self._boundary[f]

    def coboundary(self, f: int) -> frozenset[int]:
        return self._coboundary[f]

    def vertices(self, f: int) -> frozenset[int]:
        return self._verts.get(f, frozenset())

    def faces(self, rank: int | None = None) -> tuple[int, ...]:
        if rank is None:
            return tuple(sorted(self._rank))
        if 0 <= rank <= self.dim:
            return self._by_rank[rank]
        return ()

    @property
    def tiles(self) -> tuple[int, ...]:
        return self._by_rank[self.dim]

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self._by_rank)

    def closure(self, faces: Iterable[int]) -> frozenset[int]:
        """Downward (boundary) closure of a set of faces."""
        out: set[int] = set()
        stack = [f for f in faces if f in self._rank]
        while stack:
            f = stack.pop()
            if f in out:
                continue
            out.add(f)
            stack.extend(g for g in self._boundary[f] if g in self._rank)
        return frozenset(out)

    def tile_closure(self, tile: int) -> frozenset[int]:
        return self._tile_closures[tile]

    @cached_property
    def _tile_closures(self) -> dict[int, frozenset[int]]:
        return {t: self.closure((t,)) for t in self.tiles}

    @cached_property
    def _tiles_of(self) -> dict[int, frozenset[int]]:
        acc: dict[int, set[int]] = defaultdict(set)
        for t, cl in self._tile_closures.items():
            for f in cl:
                acc[f].add(t)
        return {f: frozenset(acc.get(f, ())) for f in self._rank}

    def tiles_containing(self, f: int) -> frozenset[int]:
        return self._tiles_of[f]

    @cached_property
    def _vertex_index(self) -> dict[frozenset[int], tuple[int, ...]]:
        acc: dict[frozenset[int], list[int]] = defaultdict(list)
        for f in sorted(self._verts):
            acc[self._verts[f]].append(f)
        return {k: tuple(v) for k, v in acc.items()}

    def faces_with_vertices(self, verts: frozenset[int]) -> tuple[int, ...]:
        return self._vertex_index.get(frozenset(verts), ())

    @cached_property
    def closed_faces(self) -> frozenset[int]:
        """Faces whose every incident facet lies in exactly two tiles.

        For convex tiles this means the patch already contains the full star
        of the face.
        """
        d = self.dim
        facet_ok = {g: len(self._coboundary[g]) == 2 for g in self.faces(d - 1)}
        incident: dict[int, set[int]] = defaultdict(set)
        for g in self.faces(d - 1):
            for h in self.closure((g,)):
                incident[h].add(g)
        for t in self.tiles:
            incident[t] = {g for g in self._boundary[t] if g in facet_ok}
        closed = {f for f, inc in incident.items()
                  if inc and all(facet_ok[g] for g in inc)}
        return frozenset(closed)

    def is_closed(self, f: int) -> bool:
        return f in self.closed_faces

    def tile_neighbors(self, l: int) -> dict[int, tuple[int, ...]]:
        """Tiles meeting each tile in a face of rank >= l."""
        key = ("neighbors", l)
        if key not in self._cache:
            nbrs = {}
            for t in self.tiles:
                acc: set[int] = set()
                for f in self._tile_closures[t]:
                    if self._rank[f] >= l:
                        acc |= self._tiles_of[f]
                acc.discard(t)
                nbrs[t] = tuple(sorted(acc))
            self._cache[key] = nbrs
        return self._cache[key]

    def flag_count(self) -> int:
        if "flag_count" not in self._cache:
            self._cache["flag_count"] = sum(len(flags_of(self, t)) for t in self.tiles)
        return self._cache["flag_count"]

    def restrict(self, faces: Iterable[int]) -> "RankedComplex":
        return restrict(self, faces)


@dataclass(frozen=True)
class Violation:
    kind: str
    faces: tuple[int, ...]
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    boundary: frozenset[int] = frozenset()
    interior_tiles: frozenset[int] = frozenset()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate(cx: RankedComplex) -> ValidationReport:
    """Check that ``cx`` is a legal fragment of a face-to-face tiling.

    The diamond condition is checked inside every face (those intervals are
    always complete in a boundary-closed patch).  Facets may lie in one tile
    (patch boundary) but never in more than two.
    """
    out: list[Violation] = []
    d = cx.dim
    for f in cx.faces():
        r = cx.rank(f)
        if not 0 <= r <= d:
            out.append(Violation("BadRank", (f,), f"rank {r} outside 0..{d}"))
            continue
        b = cx.boundary(f)
        missing = sorted(g for g in b if g not in cx)
        if missing:
            out.append(Violation("UnknownFace", (f, *missing)))
        wrong = sorted(g for g in b if g in cx and cx.rank(g) != r - 1)
        if wrong:
            out.append(Violation("BadBoundaryRank", (f, *wrong)))
        if r >= 1 and not b:
            out.append(Violation("EmptyBoundary", (f,)))

    covered = set()
    for t in cx.tiles:
        covered |= cx.tile_closure(t)
    orphans = sorted(set(cx.faces()) - covered)
    for f in orphans:
        out.append(Violation("Orphan", (f,)))

    for fs in cx._vertex_index.values():
        seen: dict[int, int] = {}
        for f in fs:
            r = cx.rank(f)
            if r in seen:
                out.append(Violation("DuplicateFace", (seen[r], f)))
            else:
                seen[r] = f

    for g in cx.faces():
        r = cx.rank(g)
        if r == 1 and len(cx.boundary(g)) != 2:
            out.append(Violation("Diamond", (g,), "edge without two endpoints"))
        elif r >= 2:
            below = cx.boundary(g)
            counts: dict[int, int] = defaultdict(int)
            for h in below:
                if h in cx:
                    for f in cx.boundary(h):
                        counts[f] += 1
            for f, c in sorted(counts.items()):
                if c != 2:
                    out.append(Violation("Diamond", (f, g), f"{c} faces between"))

    for g in cx.faces(d - 1):
        ts = cx.coboundary(g)
        if len(ts) > 2:
            out.append(Violation("NotFaceToFace", (g, *sorted(ts)),
                                 f"facet lies in {len(ts)} tiles"))

    by_vertex: dict[int, set[int]] = defaultdict(set)
    for t in cx.tiles:
        for v in cx.vertices(t):
            by_vertex[v].add(t)
    pairs = set()
    for ts in by_vertex.values():
        s = sorted(ts)
        for i, p in enumerate(s):
            for q in s[i + 1:]:
                pairs.add((p, q))
    for p, q in sorted(pairs):
        common = cx.vertices(p) & cx.vertices(q)
        shared = cx.tile_closure(p) & cx.tile_closure(q)
        if not any(cx.vertices(f) == common for f in shared):
            out.append(Violation("NotFaceToFace", (p, q),
                                 "tiles intersect in a non-face"))

    closed = cx.closed_faces
    boundary = frozenset(f for f in cx.faces() if f not in closed)
    interior = frozenset(t for t in cx.tiles if t in closed)
    return ValidationReport(out, boundary, interior)


def meet(cx: RankedComplex, f: int, g: int) -> int | None:
    """Face whose vertex set is the intersection of those of ``f`` and ``g``."""
    common = cx.vertices(f) & cx.vertices(g)
    if not common:
        return None
    if f == g:
        return f
    shared = cx.closure((f,)) & cx.closure((g,))
    for h in cx.faces_with_vertices(common):
        if h in shared:
            return h
    raise NotFaceToFace(f"faces {f} and {g} share vertices {sorted(common)} "
                        "but no common face")


def adjacent_flag(cx: RankedComplex, flag: Flag, i: int) -> Flag | None:
    """The flag differing from ``flag`` exactly in its rank-``i`` face."""
    d = cx.dim
    if i == d:
        cands = cx.coboundary(flag[d - 1]) - {flag[d]}
    elif i == 0:
        cands = cx.boundary(flag[1]) - {flag[0]}
    else:
        lo = flag[i - 1]
        cands = {h for h in cx.boundary(flag[i + 1])
                 if h != flag[i] and lo in cx.boundary(h)}
    if not cands:
        return None
    if len(cands) > 1:
        raise ComplexError(f"{len(cands) + 1} faces of rank {i} in a diamond of {flag}")
    (h,) = cands
    return flag[:i] + (h,) + flag[i + 1:]


def flags_of(cx: RankedComplex, tile: int) -> list[Flag]:
    """All maximal chains ending at ``tile``, sorted."""
    key = ("flags", tile)
    if key in cx._cache:
        return cx._cache[key]
    chains: list[tuple[int, ...]] = [(tile,)]
    for _ in range(cx.rank(tile)):
        chains = [(g, *c) for c in chains for g in cx.boundary(c[0]) if g in cx]
    out = sorted(chains)
    cx._cache[key] = out
    return out


def restrict(cx: RankedComplex, faces: Iterable[int]) -> RankedComplex:
    """Induced subcomplex on a boundary-closed face set; ids are kept."""
    fs = set(faces)
    sub = {}
    for f in sorted(fs):
        b = cx.boundary(f)
        if not b <= fs:
            raise NotClosed(f"face {f} is missing boundary faces {sorted(b - fs)}")
        sub[f] = (cx.rank(f), b)
    return RankedComplex(cx.dim, sub)
