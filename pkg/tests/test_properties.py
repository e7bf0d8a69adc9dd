import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tilecorona.complex import adjacent_flag, flags_of, meet
from tilecorona.extension import propagate_along
from tilecorona.generators import from_polygons
from tilecorona.iso import automorphism_group, isomorphic
from tilecorona.metric import corona, tile_distance

from oracles import (corona_isomorphic, polyiamond_triangles, polyomino_cells,
                     square_polygons, triangle_polygons)
from patches import ALL, patch

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])
names = st.sampled_from(ALL)
seeds = st.integers(0, 10 ** 6)


def _tiles(name, seed, n):
    cx = patch(name).complex
    rng = random.Random(seed)
    return cx, [rng.choice(cx.tiles) for _ in range(n)]


@SETTINGS
@given(names, seeds, st.sampled_from([0, 1]))
def test_distance_is_a_metric(name, seed, l):
    cx, (a, b, c) = _tiles(name, seed, 3)
    ab, ba = tile_distance(cx, a, b, l), tile_distance(cx, b, a, l)
    assert ab == ba
    assert (ab == 0) == (a == b)
    ac, cb = tile_distance(cx, a, c, l), tile_distance(cx, c, b, l)
    assert ab <= ac + cb


@SETTINGS
@given(names, seeds)
def test_raising_the_threshold_never_shortens(name, seed):
    cx, (a, b) = _tiles(name, seed, 2)
    assert tile_distance(cx, a, b, 0) <= tile_distance(cx, a, b, 1)


@SETTINGS
@given(names, seeds)
def test_meet_is_commutative_and_idempotent(name, seed):
    cx, (a, b) = _tiles(name, seed, 2)
    assert meet(cx, a, b) == meet(cx, b, a)
    assert meet(cx, a, a) == a
    m = meet(cx, a, b)
    if m is not None:
        assert m in cx.tile_closure(a) and m in cx.tile_closure(b)


@SETTINGS
@given(names, seeds, st.integers(0, 2))
def test_flag_adjacency_is_an_involution(name, seed, i):
    cx, (t,) = _tiles(name, seed, 1)
    for fl in flags_of(cx, t):
        g = adjacent_flag(cx, fl, i)
        if g is not None:
            assert adjacent_flag(cx, g, i) == fl
            assert sum(x != y for x, y in zip(fl, g)) == 1


def _small(rng):
    if rng.random() < 0.5:
        return from_polygons(square_polygons(polyomino_cells(rng, rng.randint(2, 6))))[0]
    return from_polygons(triangle_polygons(polyiamond_triangles(rng, rng.randint(2, 7))))[0]


@SETTINGS
@given(seeds, st.sampled_from([0, 1]))
def test_random_patches_agree_with_brute_force(seed, l):
    rng = random.Random(seed)
    A, B = _small(rng), _small(rng)
    k = rng.randint(0, 2)
    ca, cb = corona(A, rng.choice(A.tiles), k, l), corona(B, rng.choice(B.tiles), k, l)
    assert (isomorphic(ca, cb) is not None) == corona_isomorphic(ca, cb)


@SETTINGS
@given(seeds, st.integers(1, 4))
def test_transport_composes_along_concatenated_paths(seed, steps):
    g = patch("square", 6)
    cx = g.complex
    rng = random.Random(seed)
    nbrs = cx.tile_neighbors(1)
    path = [g.center]
    for _ in range(2 * steps):
        path.append(rng.choice([u for u in nbrs[path[-1]] if g.gen_radius[u] <= 2]))
    alpha = rng.choice(list(automorphism_group(corona(cx, g.center, 1, 0))))
    cut = rng.randint(0, len(path) - 1)
    whole = propagate_along(alpha, path)
    split = propagate_along(propagate_along(alpha, path[:cut + 1]), path[cut:])
    assert whole == split
    assert propagate_along(whole, path[::-1]) == alpha
