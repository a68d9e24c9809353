from .report import DecompositionReport, TERMS  # NOQA
from .decomposition import Decomposer, expectation, var_q, var_b, q_term,\
    deficit_term, decompose, TOL_IDENTITY  # NOQA
from .relations import quantum_potential_mean, check_qp_relation,\
    uncertainty_check, energy_q_term_polar  # NOQA
