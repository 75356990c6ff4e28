"""
Choosing the multiport to maximize the click probability
========================================================

The success weight depends on the multiport only through the squared
moduli x_n = |U[n,0]|^2 of its first column. We maximize it over the
simplex and then build a full unitary around the optimal column.
"""

import numpy as np

from retrostate import ColumnSpec, TargetState, char_polynomial, complete_unitary, find_roots, make_plan
from retrostate.optimize import ColumnWeights, objective, optimize, optimize_grid, optimize_n1

# One photon: a single variable, and for |0> + |1> the optimum is the
# golden ratio.
r = optimize_n1(-1.0)
print("N=1: |U00|^2 = %.6f  (golden ratio %.6f)" % (r.weights.x[0], (np.sqrt(5) - 1) / 2))
print("     |kbar|^2: %.4f (50:50) -> %.4f" % (objective(ColumnWeights.uniform(1), [-1.0]), r.value))

# Two photons. Newton on the Lagrange system, cross-checked by brute force.
target = TargetState([1, 1, 1])
roots = find_roots(char_polynomial(target))
newton = optimize(roots)
grid = optimize_grid(roots)
print("N=2: x =", np.round(newton.weights.x, 4), " value %.5f" % newton.value)
print("     grid search value %.5f, difference %.1e" % (grid.value, abs(grid.value - newton.value)))

# Only the first column is fixed; Gram-Schmidt fills in the rest.
U = complete_unitary([ColumnSpec(0, newton.weights.column())])
plan = make_plan(target, U)
print("     ratio %.2f%%, total drive sum|beta|^2 = %.4f" % (100 * plan.ratio, plan.total_drive))

# With one coherent input only, the second column is rebuilt and the
# success weight does not change.
single = make_plan(target, U, "single")
print("single input: |beta1| = %.4f, |U_n1|^2 =" % abs(single.betas[0]),
      np.round(np.abs(single.unitary.entries[:, 1]) ** 2, 4))
print("same success:", np.isclose(single.success, plan.success))

# When the origin lies inside the convex hull of the roots, the supremum
# sits on the edge x0 -> 0 and is reported as a boundary result.
edge = optimize(find_roots(char_polynomial(TargetState([0, 1]))))
print("target |1>: boundary =", edge.boundary, " value %.4f" % edge.value)
