"""
Tile distance and coronas
=========================

Two tiles are adjacent when they share a face of rank at least ``l``.  With
``l = 0`` (sharing a vertex is enough) the square grid distance is Chebyshev;
with ``l = 1`` (a shared edge is needed) it is Manhattan.
"""

from tilecorona import corona, exact_core, generate, tile_distance
from tilecorona.metric import is_corona_exact

g = generate("square", 4)
cx = g.complex
at = {lab: t for t, lab in g.labels.items()}
p, q = at[("sq", 0, 0)], at[("sq", 2, 1)]
print("d(P, Q) with l=0:", tile_distance(cx, p, q, 0))
print("d(P, Q) with l=1:", tile_distance(cx, p, q, 1))

# the k-th corona collects every face of the tiles within distance k
for l in (0, 1):
    sizes = [len(corona(cx, g.center, k, l).ring) for k in range(4)]
    print(f"tiles in the coronas of the center, l={l}:", sizes)

# on a finite patch, only coronas that stop short of the rim are trusted
corner = at[("sq", -4, -4)]
print("corner 1-corona exact:", is_corona_exact(cx, corner, 1, 0))
print("tiles with exact 2-coronas:", len(exact_core(cx, 2, 0)), "of", len(cx.tiles))
