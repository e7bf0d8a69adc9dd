"""
Congruence of tile coronas
==========================

With vertex coordinates, coronas can also be compared up to isometry.  All
coordinates are exact fractions, so congruence is decided without rounding.
The brick fixture shows the two notions differing: its two brick sizes are
combinatorially alike but not congruent.
"""

from tilecorona import GeoTiling, check_geom_theorem, classify, generate, min_radius
from tilecorona.geometric import classify_geo, symmetry_group

g = generate("square", min_radius("square", 3))
geo = GeoTiling(g.complex, g.coords)
print("square: |G_k| =", [symmetry_group(geo, g.center, k, 0).order for k in range(3)])
v = check_geom_theorem(geo, 3, 0)
print("square geometric verdict:", v.status, v.n, v.k)

b = generate("brick_two_sizes", min_radius("brick_two_sizes", 3))
bgeo = GeoTiling(b.complex, b.coords)
print("brick N_0 =", classify(b.complex, 0, 0).n, " M_0 =", classify_geo(bgeo, 0, 0).m)
v = check_geom_theorem(bgeo, 3, 0)
print("brick geometric verdict:", v.status, v.n, v.k)
