import pytest

from tilecorona.iso import automorphism_group
from tilecorona.local import (MonotonicityViolation, NotAsymmetric, PreconditionFailed,
                              asymmetric_shortcut, check_conditions, check_monotonicity,
                              check_remone, classify, find_local_k, group_chain, prime_omega,
                              stabilizer_check, strict_drops)
from tilecorona.metric import InexactCorona, corona, exact_core

from oracles import corona_isomorphic, defect_distance
from patches import PERIODIC, patch, tile_by_label


def _brute_partition(cx, core, k, l):
    classes = []
    for t in core:
        c = corona(cx, t, k, l)
        for cl in classes:
            if corona_isomorphic(corona(cx, cl[0], k, l), c):
                cl.append(t)
                break
        else:
            classes.append([t])
    return sorted(tuple(sorted(c)) for c in classes)


@pytest.mark.parametrize("name", ["square", "hexagonal", "snub_square", "defect_grid"])
def test_level_one_partition_matches_brute_force(name):
    g = patch(name)
    cx = g.complex
    core = exact_core(cx, 3, 0)
    assert classify(cx, 1, 0, core).partition() == _brute_partition(cx, core, 1, 0)


def test_classification_examples():
    g = patch("square")
    assert classify(g.complex, 2, 0).n == 1
    g = patch("snub_square")
    cls = classify(g.complex, 1, 0)
    assert cls.n == 2
    sizes = {len(g.complex.boundary(c.representative)) for c in cls.classes}
    assert sizes == {3, 4}
    lab = cls.label()
    assert all(lab[t] == lab[c.representative] for c in cls.classes for t in c.members)


def test_defect_classes_separate_distance_to_the_cut():
    g = patch("defect_grid")
    cx = g.complex
    core = exact_core(cx, 3, 0)
    for k in range(4):
        lab = classify(cx, k, 0, core).label()
        dist = defect_distance(cx, g.coords, core, k)
        for a in core:
            for b in core:
                if lab[a] == lab[b]:
                    assert dist[a] == dist[b]


@pytest.mark.parametrize("name", PERIODIC + ("defect_grid",))
def test_counts_never_drop(name):
    cx = patch(name).complex
    for l in (0, 1):
        counts = check_monotonicity(cx, 3, l)
        ns = [n for _, n in counts]
        assert ns == sorted(ns)


def test_monotonicity_violation_is_loud():
    g = patch("defect_grid")
    cx = g.complex
    core = exact_core(cx, 3, 0)
    # inflate the cached level-0 count so that the next level looks smaller
    real = classify(cx, 0, 0, core)
    fake = type(real)(0, 0, real.core, real.classes * 20)
    cx._cache[("classify", 0, 0, tuple(core))] = fake
    try:
        with pytest.raises(MonotonicityViolation):
            check_monotonicity(cx, 3, 0, core)
    finally:
        cx._cache[("classify", 0, 0, tuple(core))] = real


def test_remone():
    assert check_remone(patch("square").complex, 2, 1)
    assert check_remone(patch("snub_square").complex, 1, 0)
    with pytest.raises(PreconditionFailed):
        check_remone(patch("defect_grid").complex, 1, 0)


@pytest.mark.parametrize("name,n", [("square", 1), ("hexagonal", 1), ("triangular", 1),
                                    ("brick_two_sizes", 1)])
def test_regular_fixtures_witness_at_level_one(name, n):
    cx = patch(name).complex
    rep = check_conditions(cx, 1, 0)
    assert rep.cond1 and rep.cond2 and rep.n == n
    v = find_local_k(cx, 3, 0)
    assert (v.status, v.n, v.k) == ("multihedral", n, 1)


def test_snub_square_needs_a_second_level():
    cx = patch("snub_square").complex
    rep = check_conditions(cx, 1, 0)
    assert rep.cond1 and not rep.cond2
    v = find_local_k(cx, 3, 0)
    assert (v.status, v.n, v.k) == ("multihedral", 2, 2)
    assert v.diagnostics and "groups drop" in v.diagnostics[0]


def test_defect_grid_is_undetermined():
    cx = patch("defect_grid").complex
    for l, ns in ((0, [2, 6, 12, 20]), (1, [2, 4, 8, 12])):
        v = find_local_k(cx, 3, l)
        assert v.status == "undetermined" and not v.witnessed
        assert [n for _, n in v.counts] == ns


def test_level_zero_conditions_rejected():
    with pytest.raises(ValueError):
        check_conditions(patch("square").complex, 0, 0)


def test_inexact_core_is_rejected():
    g = patch("square")
    corner = max(g.complex.tiles, key=g.gen_radius.get)
    with pytest.raises(InexactCorona):
        classify(g.complex, 1, 0, [corner])
    assert find_local_k(g.complex, 3, 0, core=[corner]).status == "invalid"


@pytest.mark.parametrize("name", PERIODIC + ("defect_grid",))
def test_group_chains_are_representative_independent(name):
    cx = patch(name).complex
    core = exact_core(cx, 3, 0)
    cls = classify(cx, 2, 0, core)
    for c in cls.classes:
        orders = {tuple(automorphism_group(corona(cx, t, j, 0)).order for j in range(3))
                  for t in c.members[:8]}
        assert len(orders) == 1


@pytest.mark.parametrize("name", PERIODIC + ("defect_grid",))
def test_group_drops_are_bounded_by_prime_factors(name):
    cx = patch(name).complex
    rep = check_conditions(cx, 3, 0)
    for c in rep.chain.classes:
        assert list(c.orders) == sorted(c.orders, reverse=True)
        assert all(a % b == 0 for a, b in zip(c.orders, c.orders[1:]))
        assert strict_drops(c.orders) <= prime_omega(c.orders[0])


def test_prime_omega():
    assert [prime_omega(n) for n in (1, 2, 8, 12, 97, 360)] == [0, 1, 3, 3, 1, 6]
    assert strict_drops([8, 8, 4, 4, 2]) == 2


def test_stabilizer_check():
    g = patch("square", 6)
    assert stabilizer_check(g.complex, g.center, 1, 0)
    s = patch("snub_square", 6)
    assert stabilizer_check(s.complex, s.center, 2, 0)


def test_asymmetric_shortcut_guards():
    # every polygon has a dihedral face lattice of order 2n, so a planar
    # patch never qualifies; the shortcut must refuse it
    g = patch("snub_square")
    with pytest.raises(NotAsymmetric) as info:
        asymmetric_shortcut(g.complex, 1, 0)
    n = len(g.complex.boundary(info.value.tile))
    assert info.value.order == 2 * n
    assert asymmetric_shortcut(g.complex, 1, 0, core=[]).status == "invalid"


def test_asymmetric_shortcut_on_a_one_tile_core(monkeypatch):
    import tilecorona.local as local
    g = patch("square")

    class Trivial:
        order = 1
    monkeypatch.setattr(local, "automorphism_group", lambda c: Trivial())
    v = local.asymmetric_shortcut(g.complex, 1, 0, core=[tile_by_label(g, ("sq", 0, 0))])
    assert (v.status, v.n) == ("multihedral", 1)


def test_worker_processes_give_the_same_chain():
    cx = patch("defect_grid").complex
    reps = list(exact_core(cx, 3, 0)[:6])
    assert group_chain(cx, 2, 0, reps, jobs=2) == group_chain(cx, 2, 0, reps, jobs=1)
