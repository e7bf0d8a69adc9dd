"""
Corona isomorphisms and automorphism groups
===========================================

A corona isomorphism is a rank-preserving face bijection that keeps the
center.  Once the image of one flag of the center is fixed, the whole map is
forced, so at most as many maps exist as the center has flags.
"""

from tilecorona import automorphism_group, corona, exact_core, generate, isomorphic

sq = generate("square", 4)
hx = generate("hexagonal", 4)
cs, ch = corona(sq.complex, sq.center, 1, 0), corona(hx.complex, hx.center, 1, 0)

print("square vs hexagon 1-coronas:", isomorphic(cs, ch))
print("|Aut| square 1-corona:", automorphism_group(cs).order)
print("|Aut| hexagon 1-corona:", automorphism_group(ch).order)

# in the snub square tiling, squares and triangles never match
sn = generate("snub_square", 4)
cx = sn.complex
tri = next(t for t in exact_core(cx, 1, 0) if len(cx.boundary(t)) == 3)
a, b = corona(cx, sn.center, 1, 0), corona(cx, tri, 1, 0)
print("snub square vs triangle:", isomorphic(a, b))

# the group of a growing corona can only shrink
for k in range(3):
    print(f"  snub square center, k={k}: |Aut| =",
          automorphism_group(corona(cx, sn.center, k, 0)).order)
