"""Hierarchical densities: nested checkerboard patches under an area budget.

Each refinement level plants a scaled checkerboard patch inside a thin
neighborhood of every active segment; the total neighborhood area of level
i must stay below half of the previous level's epsilon, which is what makes
the limit density measurable and its values trapped in [1, 1+c].
"""

from bknet import (
    Rect,
    assemble_limit_density,
    build_hierarchy,
    toy_constants,
)

consts = toy_constants(2.0, 1.0, N=4, M=2)
field, hierarchy = build_hierarchy(2.0, 1.0, depth=3, consts=consts)
hierarchy.validate()

print("levels:", len(hierarchy.levels))
for i, level in enumerate(hierarchy.levels):
    area = sum(r.area for r in level.neighborhoods)
    budget = hierarchy.levels[i - 1].epsilon / 2 if i else float("inf")
    print(f"level {i}: {len(level.segments):4d} segments, "
          f"neighborhood area {area:.3e} < budget {budget:.3e}, "
          f"epsilon {level.epsilon:.3e}")

print("density cells:", len(field.cells))
print("density values within [1, 1+c]:",
      all(1.0 <= v <= 2.0 for v in field.values()))

# the limit construction packs one hierarchy per square, with amplitude
# c_k = min(c, 1/k) shrinking along the sequence
squares = [(Rect(2.0 ** -(k + 1), 2.0 ** -(k + 1), 2.0 ** -k, 2.0 ** -k), k)
           for k in (1, 2)]
limit = assemble_limit_density(1.0, squares)
print("limit density cells:", len(limit.cells),
      " amplitude:", limit.amplitude)
