"""
Checking the closed form with a Fock-space simulation
=====================================================

Forget the product formula and simulate the optics directly: send |q> into
port 0 next to the coherent states, and compute the amplitude of the
(0, 1, ..., 1) click pattern from matrix permanents. The conjugated
amplitudes are the retrodicted state.
"""

import numpy as np

from retrostate import TargetState, dft_unitary, make_plan
from retrostate.focksim import (
    detection_probability,
    fock_amplitude,
    forward_amplitudes,
    permanent,
)

# The Hong-Ou-Mandel dip: two photons on a 50:50 beamsplitter never exit
# in separate ports.
print("HOM amplitude:", abs(fock_amplitude(dft_unitary(2), (1, 1), (1, 1))))
print("perm([[1,2],[3,4]]) =", permanent([[1, 2], [3, 4]]).real)

plan = make_plan(TargetState([1, -0.5, 0.25j, 0.2]), dft_unitary(4))
A, report = forward_amplitudes(plan.unitary, plan.betas, q_max=plan.N + 2)
oracle = A.conj()
print("cutoff", report.cutoff, "deficit %.1e" % report.deficit)

closed = plan.state()
for q, (o, c) in enumerate(zip(oracle, np.pad(closed, (0, 2)))):
    print(f"q={q}: oracle {o:.6f}   closed form {c:.6f}")

# With the normalized target in port 0 the click probability is the ratio.
p = detection_probability(plan.unitary, plan.betas, plan.target)
print("P(click | target) = %.6f, ratio = %.6f" % (p, plan.ratio))
