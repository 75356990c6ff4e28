"""
Equal superposition of zero and one photon
==========================================

A 50:50 beamsplitter, a coherent state in one input and a single click in
the other output. Reading the click backwards in time assigns a state to
the free input; here we choose the coherent amplitude so that state is
|0> + |1>.
"""

import numpy as np

from retrostate import TargetState, char_polynomial, dft_unitary, find_roots, make_plan

# The target, unnormalized; TargetState normalizes on the way in.
target = TargetState([1, 1])
print("normalized coefficients:", target.coeffs)

# Every target is a product of shifted creation operators. The shifts are
# the roots of a polynomial built from c_n / sqrt(n!).
roots = find_roots(char_polynomial(target))
print("root g1:", roots.g)

# A two-mode DFT multiport is the symmetric beamsplitter.
U = dft_unitary(2)
print("multiport:\n", np.round(U.entries, 4))

plan = make_plan(target, U)
print("coherent amplitude beta1:", plan.betas[0])
print("|kbar|^2 = %.4f, k^2 = %.3f" % (plan.success, plan.k2))

# |kbar|^2 / k^2 is the click probability when the target itself enters
# the free port, i.e. how often the device "recognizes" it.
print("ratio: %.1f%%" % (100 * plan.ratio))

# The engineered state, unnormalized, is proportional to the target.
psi = plan.state()
print("engineered state:", psi, " overlap:", plan.fidelity())
