"""
Three-term superposition on a three-port DFT
============================================

|0> + |1> + |2> needs two clicks and three modes. The roots come as a
complex-conjugate pair, and the two coherent amplitudes turn out real.
"""

import numpy as np

from retrostate import dft_unitary, make_plan, TargetState

plan = make_plan(TargetState([1, 1, 1]), dft_unitary(3))

g1, g2 = plan.roots.g
print("roots:", g1, g2)
print("closed form: -1/sqrt2 -/+ i sqrt(sqrt2 - 1/2) =",
      -1 / np.sqrt(2) - 1j * np.sqrt(np.sqrt(2) - 0.5))

# g0 is not a root of the target. It is fixed by asking that port 0 carry
# no coherent light, so that it stays free for the retrodicted state.
print("g0:", plan.roots.g0)

for m, b in enumerate(plan.betas, start=1):
    print(f"beta_{m} = {b.real:+.4f} {b.imag:+.1e}i")

print("|kbar|^2 = %.5f   ratio = %.2f%%" % (plan.success, 100 * plan.ratio))

# Complex targets work the same way; the amplitudes simply pick up phases.
plan = make_plan(TargetState([1, 0.5j, -0.4]), dft_unitary(3))
print("complex target, betas:", np.round(plan.betas, 4), " overlap:", plan.fidelity())
