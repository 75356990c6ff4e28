"""Retrodictive optical state engineering with linear multiports.

Find the coherent inputs and multiport configuration that make the click
pattern ``(0, 1, ..., 1)`` retrodict a chosen photon-number superposition into
a free input port, optimize the probability of that pattern, and check the
result against a brute-force Fock-space simulation.
"""

__version__ = "0.1.0"

from .engineer import (  # noqa: E402
    DetectionPattern,
    EngineeringPlan,
    PlanMode,
    betas_from_roots,
    derive_g0,
    engineered_shape,
    engineered_state,
    kbar,
    make_plan,
    overlap,
    roots_from_betas,
    single_input_reduction,
    success_metric,
)
from .multiport import (  # noqa: E402
    ColumnSpec,
    MultiportUnitary,
    beamsplitter,
    check_unitary,
    complete_unitary,
    dft_unitary,
)
from .rootcore import CharPolynomial, RootSet, TargetState, char_polynomial, expand_roots, find_roots  # noqa: E402
