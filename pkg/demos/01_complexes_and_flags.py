"""
Face complexes, validation and flags
====================================

A patch is a ranked face complex: every face has a rank and a boundary.
This walk-through builds a 3x3 block of squares, checks it, and looks at
the flags of its middle tile.
"""

from tilecorona import generate, validate
from tilecorona.complex import adjacent_flag, flags_of, meet

# generator radius 1 gives the 3x3 block around the center cell
block = generate("square", 1)
cx = block.complex
print("f-vector (vertices, edges, tiles):", cx.f_vector)

# validation reports violations and the open boundary of the patch
rep = validate(cx)
print("valid:", rep.ok, " interior tiles:", sorted(rep.interior_tiles))

# a flag is a chain vertex < edge < tile; a square has 8 of them
center = block.center
flags = flags_of(cx, center)
print("flags of the center tile:", len(flags))

# flipping the rank-i face of a flag gives its i-adjacent flag
f = flags[0]
for i in range(3):
    print(f"  {i}-adjacent of {f}: {adjacent_flag(cx, f, i)}")

# two tiles meet in a face of each: an edge, a vertex, or nothing
right = next(t for t, lab in block.labels.items() if lab == ("sq", 1, 0))
e = meet(cx, center, right)
print("center and right neighbor meet in a face of rank", cx.rank(e))
