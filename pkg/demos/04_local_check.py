"""
Checking the local conditions
=============================

Two conditions in the coronas of a patch certify that the tiling is
combinatorially multihedral: the class count stops growing from one level to
the next, and each class keeps its automorphism group.  On a finite patch they
can be witnessed, never refuted, so a failing patch is "undetermined".
"""

from tilecorona import find_local_k, generate, min_radius

for name in ("square", "hexagonal", "snub_square", "defect_grid"):
    g = generate(name, min_radius(name, 3))
    v = find_local_k(g.complex, 3, 0)
    counts = [n for _, n in v.counts]
    print(f"{name:12s} {v.status:13s} n={v.n} k={v.k}  N_k={counts}")
    for d in v.diagnostics[:2]:
        print("             ", d)
