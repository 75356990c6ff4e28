"""
Saving and checking plans
=========================

Plans are plain JSON. The command-line tool writes the same format, so a
plan can be produced here and checked with ``retrostate verify``.
"""

import os
import tempfile

import numpy as np

from retrostate import TargetState, make_plan
from retrostate.cli import main
from retrostate.multiport import MultiportUnitary, haar_unitary
from retrostate.planfile import load, plan_from_doc, plan_to_doc, save

rng = np.random.default_rng(3)
U = MultiportUnitary(haar_unitary(3, rng), "haar")
plan = make_plan(TargetState([0.3, 1, -0.7j]), U)

path = os.path.join(tempfile.mkdtemp(), "plan.json")
save(plan_to_doc(plan), path)
print(open(path).read()[:300], "...")

# Reading back restores every number exactly; nothing is recomputed.
back = plan_from_doc(load(path))
print("identical betas:", np.array_equal(back.betas, plan.betas))

# The verifier recomputes the state with the Fock-space simulation.
code = main(["verify", "--plan", path])
print("exit code", code)
