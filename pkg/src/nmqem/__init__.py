"""Non-Markovian two-qubit noise channels, Gamma-basis recovery operators,
mitigation cost functions, and Re k estimation from device counts."""

from .channel import (
    Basis4,
    Channel,
    MTensor,
    computational_basis,
    m_tensor,
    multiplet_basis,
    population_channel,
    predict_table,
    to_computational,
    v_element,
)
from .gamma import GammaBasis, GammaCoeffs, anticommutator, build_gamma_basis, decompose, reconstruct
from .kernel import KernelParams, k_printed, k_quadrature, re_k_approx, si_shifted
from .recovery import (
    RecoveryOp,
    closed_form_id,
    closed_form_swap,
    cost_from_decomposition,
    cost_id,
    cost_swap,
    recovery_numeric,
    recovery_op,
)
from .expdata import (
    CountTable,
    ProbTable,
    RekEstimate,
    classify_cells,
    estimate_re_k,
    fit_coupling,
    load_counts,
    normalize,
)

__version__ = "0.1.0"
