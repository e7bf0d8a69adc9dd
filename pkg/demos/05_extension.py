"""
Extending and transporting isomorphisms
=======================================

When the local conditions hold, a corona isomorphism extends one level in a
unique way and can be carried from tile to tile across shared facets.  Gluing
the carried maps gives a partial automorphism of the whole patch.
"""

from tilecorona import automorphism_group, corona, generate
from tilecorona.extension import extend_one_level, orbit_partition, reconstruct

g = generate("square", 6)
cx, p = g.complex, g.center

# every symmetry of the center tile extends to its 1-corona
for alpha in automorphism_group(corona(cx, p, 0, 0)):
    up = extend_one_level(alpha)
    assert up.level == 1

# a nontrivial symmetry of the 1-corona, glued over the exact zone
sym = next(m for m in automorphism_group(corona(cx, p, 1, 0)) if not m.is_identity())
pa = reconstruct(cx, sym)
print(f"partial automorphism over {len(pa.tiles)} tiles, {len(pa.skipped)} skipped")

# tile orbits of the rebuilt maps coincide with the corona classes
print("orbits:", [len(o) for o in orbit_partition(cx, 1, 0)])

sn = generate("snub_square", 6)
print("snub square orbits:", [len(o) for o in orbit_partition(sn.complex, 2, 0)])
