"""Corona classification, group chains and the combinatorial multihedrality check.

On a finite patch the conditions can only be *witnessed* on core tiles with
exact coronas, so verdicts are "multihedral" (both conditions hold at some
level) or "undetermined"; patch data never refutes multihedrality.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import RankedComplex
from .iso import automorphism_group, groups_equal_by_extension, isomorphic
from .metric import corona, exact_core, require_exact, resolve_threshold


class PreconditionFailed(Exception):
    pass


class MonotonicityViolation(AssertionError):
    pass


class NotAsymmetric(Exception):
    def __init__(self, tile, order):
        self.tile, self.order = tile, order
        super().__init__(f"tile {tile} has {order} combinatorial automorphisms")


@dataclass
class CoronaClass:
    representative: int
    members: tuple[int, ...]


@dataclass
class CoronaClassification:
    k: int
    l: int
    core: tuple[int, ...]
    classes: list[CoronaClass]

    @property
    def n(self) -> int:
        return len(self.classes)

    def label(self) -> dict[int, int]:
        """Tile -> index of its class."""
        return {t: i for i, c in enumerate(self.classes) for t in c.members}

    def partition(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(c.members)) for c in self.classes)


@dataclass
class ClassChain:
    representative: int
    orders: tuple[int, ...]
    top_equal: bool


@dataclass
class GroupChainRecord:
    k: int
    classes: list[ClassChain]


@dataclass
class ConditionReport:
    k: int
    n_prev: int
    n: int
    cond1: bool
    cond2: bool
    chain: GroupChainRecord


@dataclass
class Verdict:
    status: str                     # multihedral | periodic | undetermined | invalid
    n: int | None = None
    k: int | None = None
    counts: list[tuple[int, int]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def witnessed(self) -> bool:
        return self.status in ("multihedral", "periodic")

    def as_dict(self) -> dict:
        return {"status": self.status, "n": self.n, "k": self.k,
                "counts": [list(c) for c in self.counts],
                "diagnostics": list(self.diagnostics)}


def _core(cx, k, l, core):
    if core is None:
        return exact_core(cx, k, l)
    return tuple(sorted(core))


def classify(cx: RankedComplex, k: int, l: int | None = None,
             core: Iterable[int] | None = None) -> CoronaClassification:
    """Partition ``core`` by isomorphism type of centered ``k``-coronas.

    Coronas are bucketed by invariant signature first; only tiles in the same
    bucket are compared with :func:`isomorphic`.
    """
    l = resolve_threshold(cx, l)
    core = _core(cx, k, l, core)
    require_exact(cx, core, k, l)
    key = ("classify", k, l, core)
    if key in cx._cache:
        return cx._cache[key]
    buckets: dict = defaultdict(list)       # signature -> [(rep, members)]
    order = []
    for t in core:
        c = corona(cx, t, k, l)
        reps = buckets[c.signature]
        for rep, members in reps:
            if isomorphic(corona(cx, rep, k, l), c) is not None:
                members.append(t)
                break
        else:
            entry = (t, [t])
            reps.append(entry)
            order.append(entry)
    classes = sorted((CoronaClass(rep, tuple(m)) for rep, m in order),
                     key=lambda c: c.representative)
    out = CoronaClassification(k, l, core, classes)
    cx._cache[key] = out
    return out


def check_monotonicity(cx: RankedComplex, k_max: int, l: int | None = None,
                       core: Iterable[int] | None = None) -> list[tuple[int, int]]:
    """``(k, N_k)`` for ``k = 0..k_max`` on a fixed core; raises if N_k drops."""
    l = resolve_threshold(cx, l)
    core = _core(cx, k_max, l, core)
    counts = [(k, classify(cx, k, l, core).n) for k in range(k_max + 1)]
    for (_, a), (k, b) in zip(counts, counts[1:]):
        if b < a:
            raise MonotonicityViolation(f"N_{k} = {b} < N_{k - 1} = {a}")
    return counts


def check_remone(cx: RankedComplex, k: int, l: int | None = None,
                 core: Iterable[int] | None = None) -> bool:
    """Check, pair by pair, that (k-1)- and k-coronas are isomorphic together.

    Only meaningful when N_{k-1} = N_k on the core; raises otherwise.
    """
    l = resolve_threshold(cx, l)
    core = _core(cx, k, l, core)
    lo, hi = classify(cx, k - 1, l, core), classify(cx, k, l, core)
    if lo.n != hi.n:
        raise PreconditionFailed(f"N_{k - 1} = {lo.n} != N_{k} = {hi.n}")

    def iso_at(level, p, q):
        a, b = corona(cx, p, level, l), corona(cx, q, level, l)
        if a.signature != b.signature:
            return False
        return isomorphic(a, b) is not None

    for i, p in enumerate(core):
        for q in core[i + 1:]:
            if iso_at(k - 1, p, q) != iso_at(k, p, q):
                return False
    return True


def _group_orders(args):
    cx, rep, k, l = args
    return [automorphism_group(corona(cx, rep, j, l)).order for j in range(k + 1)]


def group_chain(cx: RankedComplex, k: int, l: int, reps: Sequence[int],
                jobs: int = 1) -> GroupChainRecord:
    if jobs > 1 and len(reps) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            all_orders = list(ex.map(_group_orders, [(cx, r, k, l) for r in reps]))
    else:
        all_orders = [_group_orders((cx, r, k, l)) for r in reps]
    chains = []
    for rep, orders in zip(reps, all_orders):
        if k >= 1:
            lower = automorphism_group(corona(cx, rep, k - 1, l))
            upper = automorphism_group(corona(cx, rep, k, l))
            equal = groups_equal_by_extension(lower, upper)
        else:
            equal = True
        chains.append(ClassChain(rep, tuple(orders), equal))
    return GroupChainRecord(k, chains)


def check_conditions(cx: RankedComplex, k: int, l: int | None = None,
                     core: Iterable[int] | None = None, jobs: int = 1) -> ConditionReport:
    """Evaluate both local conditions at level ``k >= 1`` on the core."""
    if k < 1:
        raise ValueError("conditions are stated for k >= 1")
    l = resolve_threshold(cx, l)
    core = _core(cx, k, l, core)
    lo, hi = classify(cx, k - 1, l, core), classify(cx, k, l, core)
    chain = group_chain(cx, k, l, [c.representative for c in hi.classes], jobs)
    cond1 = lo.n == hi.n
    cond2 = all(c.top_equal for c in chain.classes)
    return ConditionReport(k, lo.n, hi.n, cond1, cond2, chain)


def find_local_k(cx: RankedComplex, k_max: int, l: int | None = None,
                 core: Iterable[int] | None = None, jobs: int = 1) -> Verdict:
    """Smallest ``k <= k_max`` at which both conditions are witnessed."""
    l = resolve_threshold(cx, l)
    try:
        core = _core(cx, k_max, l, core)
        require_exact(cx, core, k_max, l)
    except Exception as exc:
        return Verdict("invalid", diagnostics=[str(exc)])
    if not core:
        return Verdict("invalid", diagnostics=[f"no tile has an exact {k_max}-corona"])
    counts = [(j, classify(cx, j, l, core).n) for j in range(k_max + 1)]
    diags = []
    for k in range(1, k_max + 1):
        rep = check_conditions(cx, k, l, core, jobs)
        if rep.cond1 and rep.cond2:
            return Verdict("multihedral", rep.n, k, counts, diags)
        why = []
        if not rep.cond1:
            why.append(f"N_{k - 1}={rep.n_prev} != N_{k}={rep.n}")
        if not rep.cond2:
            bad = [c.representative for c in rep.chain.classes if not c.top_equal]
            why.append(f"groups drop at level {k} for representatives {bad}")
        diags.append(f"k={k}: " + "; ".join(why))
    return Verdict("undetermined", None, None, counts, diags)


def stabilizer_check(cx: RankedComplex, p: int, k: int, l: int | None = None,
                     region: Iterable[int] | None = None) -> bool:
    """Every automorphism of the centered k-corona extends over the exact zone."""
    from .extension import PathInconsistency, NoExtension, reconstruct
    l = resolve_threshold(cx, l)
    require_exact(cx, [p], k, l)
    group = automorphism_group(corona(cx, p, k, l))
    for alpha in group:
        try:
            reconstruct(cx, alpha, region)
        except (PathInconsistency, NoExtension):
            return False
    return True


def asymmetric_shortcut(cx: RankedComplex, k: int, l: int | None = None,
                        core: Iterable[int] | None = None) -> Verdict:
    """Decide from the coronas counts alone when every tile is asymmetric."""
    l = resolve_threshold(cx, l)
    core = _core(cx, k, l, core)
    if not core:
        return Verdict("invalid", 0, k, diagnostics=["empty core"])
    for t in core:
        order = automorphism_group(corona(cx, t, 0, l)).order
        if order != 1:
            raise NotAsymmetric(t, order)
    lo, hi = classify(cx, k - 1, l, core), classify(cx, k, l, core)
    counts = [(k - 1, lo.n), (k, hi.n)]
    if lo.n == hi.n:
        return Verdict("multihedral", hi.n, k, counts)
    return Verdict("undetermined", None, None, counts,
                   [f"N_{k - 1}={lo.n} != N_{k}={hi.n}"])


def strict_drops(orders: Sequence[int]) -> int:
    return sum(1 for a, b in zip(orders, orders[1:]) if b < a)


def prime_omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    count, p = 0, 2
    while p * p <= n:
        while n % p == 0:
            n //= p
            count += 1
        p += 1
    return count + (1 if n > 1 else 0)
