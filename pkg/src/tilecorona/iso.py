"""Isomorphisms of centered coronas by single-flag propagation.

An isomorphism between coronas is fixed by where it sends one flag of the
center, so testing isomorphism means trying every target flag for one fixed
source flag and propagating along flag adjacencies.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .complex import Flag, adjacent_flag, flags_of
from .metric import CenteredCorona, corona


class LevelMismatch(ValueError):
    pass


class CoronaMap:
    """Rank-preserving face bijection between two centered coronas."""

    __slots__ = ("source", "target", "faces", "seed", "_key", "_hash")

    def __init__(self, source: CenteredCorona, target: CenteredCorona,
                 faces: Mapping[int, int], seed: tuple[Flag, Flag]):
        self.source = source
        self.target = target
        self.faces = dict(faces)
        self.seed = seed
        self._key = None
        self._hash = None

    def __getitem__(self, f: int) -> int:
        return self.faces[f]

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def level(self) -> int:
        return self.source.k

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(self.faces.items())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoronaMap):
            return NotImplemented
        return self.faces == other.faces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.faces.items())

    def tile_map(self) -> dict[int, int]:
        return {t: self.faces[t] for t in self.source.ring}

    def __repr__(self) -> str:
        return (f"CoronaMap({self.source.center}->{self.target.center}, "
                f"level={self.level}, faces={len(self.faces)})")


def identity_map(c: CenteredCorona) -> CoronaMap:
    f0 = flags_of(c.complex, c.center)[0]
    return CoronaMap(c, c, {f: f for f in c.faces}, (f0, f0))


def compose(b: CoronaMap, a: CoronaMap) -> CoronaMap:
    """``b`` after ``a``."""
    if set(a.faces.values()) != set(b.faces):
        raise ValueError("maps are not composable")
    f0 = a.seed[0]
    return CoronaMap(a.source, b.target, {f: b.faces[g] for f, g in a.faces.items()},
                     (f0, tuple(b.faces[a.faces[x]] for x in f0)))


def inverse(a: CoronaMap) -> CoronaMap:
    inv = {g: f for f, g in a.faces.items()}
    g0 = flags_of(a.target.complex, a.target.center)[0]
    return CoronaMap(a.target, a.source, inv, (g0, tuple(inv[x] for x in g0)))


def _check_bijection(source: CenteredCorona, target: CenteredCorona,
                     fmap: Mapping[int, int]) -> str | None:
    sc, tc = source.complex, target.complex
    if len(fmap) != len(sc) or len(sc) != len(tc):
        return "face counts differ"
    if len(set(fmap.values())) != len(fmap) or set(fmap.values()) != set(tc.faces()):
        return "not a bijection"
    for f, g in fmap.items():
        if sc.rank(f) != tc.rank(g):
            return f"rank conflict at {f}->{g}"
        if {fmap[x] for x in sc.boundary(f)} != tc.boundary(g):
            return f"boundary not preserved at {f}->{g}"
    for t, r in source.ring.items():
        if target.ring.get(fmap[t]) != r:
            return f"ring not preserved at tile {t}"
    if fmap.get(source.center) != target.center:
        return "center not mapped to center"
    return None


def is_isomorphism(source: CenteredCorona, target: CenteredCorona,
                   fmap: Mapping[int, int]) -> bool:
    """Direct check that ``fmap`` is an isomorphism of centered coronas."""
    return _check_bijection(source, target, fmap) is None


def propagate_with_reason(source: CenteredCorona, target: CenteredCorona,
                          f0: Flag, g0: Flag) -> tuple[CoronaMap | None, str | None]:
    sc, tc = source.complex, target.complex
    d = sc.dim
    if tc.dim != d:
        return None, "dimension mismatch"
    if len(sc) != len(tc) or len(source.ring) != len(target.ring):
        return None, "corona sizes differ"
    sring, tring = source.ring, target.ring
    if f0[d] != source.center or g0[d] != target.center:
        return None, "seed flags must end at the centers"

    fmap: dict[int, int] = {}
    back: dict[int, int] = {}

    def assign(a: Flag, b: Flag) -> str | None:
        if sring[a[d]] != tring.get(b[d]):
            return f"ring conflict at tiles {a[d]}->{b[d]}"
        for x, y in zip(a, b):
            got = fmap.get(x)
            if got is None:
                if back.get(y, x) != x:
                    return f"faces {back[y]} and {x} both sent to {y}"
                fmap[x] = y
                back[y] = x
            elif got != y:
                return f"face {x} sent to both {got} and {y}"
        return None

    why = assign(f0, g0)
    if why:
        return None, why
    seen = {f0: g0}
    queue = deque([(f0, g0)])
    while queue:
        a, b = queue.popleft()
        for i in range(d + 1):
            a2 = adjacent_flag(sc, a, i)
            b2 = adjacent_flag(tc, b, i)
            if (a2 is None) != (b2 is None):
                return None, f"{i}-adjacency missing on one side at {a}"
            if a2 is None:
                continue
            prev = seen.get(a2)
            if prev is not None:
                if prev != b2:
                    return None, f"flag {a2} reached with two images"
                continue
            why = assign(a2, b2)
            if why:
                return None, why
            seen[a2] = b2
            queue.append((a2, b2))

    if len(seen) != sc.flag_count() or len(seen) != tc.flag_count():
        return None, "flag propagation did not cover the corona"
    why = _check_bijection(source, target, fmap)
    if why:
        return None, why
    return CoronaMap(source, target, fmap, (f0, g0)), None


def propagate(source: CenteredCorona, target: CenteredCorona,
              f0: Flag, g0: Flag) -> CoronaMap | None:
    """The unique isomorphism sending seed flag ``f0`` to ``g0``, if any."""
    return propagate_with_reason(source, target, f0, g0)[0]


def base_flag(c: CenteredCorona) -> Flag:
    return flags_of(c.complex, c.center)[0]


def isomorphic(a: CenteredCorona, b: CenteredCorona) -> CoronaMap | None:
    """Some isomorphism of centered coronas ``a -> b``, or ``None``."""
    if a.k != b.k or a.l != b.l:
        raise LevelMismatch(f"levels (k={a.k}, l={a.l}) and (k={b.k}, l={b.l}) differ")
    if len(a.complex) != len(b.complex) or len(a.ring) != len(b.ring):
        return None
    f0 = base_flag(a)
    for g0 in flags_of(b.complex, b.center):
        m = propagate(a, b, f0, g0)
        if m is not None:
            return m
    return None


@dataclass
class CoronaAutGroup:
    corona: CenteredCorona
    elements: tuple[CoronaMap, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _keys(self) -> frozenset:
        return frozenset(m.key for m in self.elements)

    def __contains__(self, m: CoronaMap) -> bool:
        return m.key in self._keys

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def identity(self) -> CoronaMap:
        return next(m for m in self.elements if m.is_identity())


def automorphism_group(c: CenteredCorona) -> CoronaAutGroup:
    """Stabilizer of the center in the automorphism group of the corona."""
    key = ("autgroup", c.center, c.k, c.l)
    cache = c.parent._cache
    if key in cache:
        return cache[key]
    f0 = base_flag(c)
    elems = []
    for g0 in flags_of(c.complex, c.center):
        m = propagate(c, c, f0, g0)
        if m is not None:
            elems.append(m)
    g = CoronaAutGroup(c, tuple(elems))
    cache[key] = g
    return g


def restrict_map(m: CoronaMap, k: int) -> CoronaMap:
    """Induced map on the level-``k`` sub-coronas of source and target."""
    if k > m.level:
        raise ValueError(f"cannot restrict a level-{m.level} map to level {k}")
    if k == m.level:
        return m
    src = corona(m.source.parent, m.source.center, k, m.source.l)
    tgt = corona(m.target.parent, m.target.center, k, m.target.l)
    sub = {f: m.faces[f] for f in src.faces}
    if set(sub.values()) != tgt.faces:
        raise ValueError("restriction does not land on the target sub-corona")
    return CoronaMap(src, tgt, sub, m.seed)


def conjugate_group(g: CoronaAutGroup, m: CoronaMap) -> CoronaAutGroup:
    """Image group ``m b m^-1`` on the target corona of ``m``."""
    if set(m.faces) != g.corona.faces:
        raise ValueError("map does not start at the group's corona")
    mi = inverse(m)
    return CoronaAutGroup(m.target, tuple(compose(m, compose(b, mi)) for b in g))


def groups_equal_by_extension(lower: CoronaAutGroup, upper: CoronaAutGroup) -> bool:
    """Every element of the lower-level group is a restriction of the upper one."""
    k = lower.corona.k
    restricted = {restrict_map(m, k).key for m in upper}
    return all(m.key in restricted for m in lower)


# -- invariant signatures ---------------------------------------------------

@dataclass(frozen=True)
class InvariantSignature:
    rings: tuple
    flags: int
    interfaces: tuple


def _tile_fvector(cx, t) -> tuple[int, ...]:
    cnt = Counter(cx.rank(f) for f in cx.tile_closure(t))
    return tuple(cnt[r] for r in range(cx.dim + 1))


def signature(c: CenteredCorona) -> InvariantSignature:
    """Order-independent summary; equal for isomorphic centered coronas."""
    cx = c.complex
    rings = tuple(tuple(sorted(_tile_fvector(cx, t) for t in c.tiles_at(j)))
                  for j in range(c.k + 1))
    interfaces = []
    for j in range(1, c.k + 1):
        inner = set().union(*(cx.tile_closure(t) for t in c.tiles_at(j - 1)))
        outer = set().union(*(cx.tile_closure(t) for t in c.tiles_at(j)))
        cnt = Counter(cx.rank(f) for f in inner & outer)
        interfaces.append(tuple(cnt[r] for r in range(cx.dim + 1)))
    return InvariantSignature(rings, cx.flag_count(), tuple(interfaces))


def map_from_vertex_images(source: CenteredCorona, target: CenteredCorona,
                           vmap: Mapping[int, int]) -> CoronaMap | None:
    """Extend a vertex correspondence to faces by vertex sets, if consistent."""
    sc, tc = source.complex, target.complex
    fmap = {}
    for f in sc.faces():
        image = frozenset(vmap.get(v, -1) for v in sc.vertices(f))
        cands = [g for g in tc.faces_with_vertices(image) if tc.rank(g) == sc.rank(f)]
        if len(cands) != 1:
            return None
        fmap[f] = cands[0]
    if not is_isomorphism(source, target, fmap):
        return None
    f0 = base_flag(source)
    return CoronaMap(source, target, fmap, (f0, tuple(fmap[x] for x in f0)))


def all_isomorphisms(a: CenteredCorona, b: CenteredCorona) -> Iterable[CoronaMap]:
    f0 = base_flag(a)
    for g0 in flags_of(b.complex, b.center):
        m = propagate(a, b, f0, g0)
        if m is not None:
            yield m
