from .qcrac import fourier_qcrac_protocol, qcrac_analytic, sequential_success
from .earac import (
    bell_rac_instance,
    bell_rac_value,
    chsh_strategy,
    earac_23_success,
    explicit_strategy,
    probability_table,
)
from .classical import classical_analytic_n2, classical_optimum, classical_value
from .concat import concat_success, extract_outcome_distribution

__all__ = [
    "fourier_qcrac_protocol",
    "qcrac_analytic",
    "sequential_success",
    "bell_rac_instance",
    "bell_rac_value",
    "chsh_strategy",
    "earac_23_success",
    "explicit_strategy",
    "probability_table",
    "classical_analytic_n2",
    "classical_optimum",
    "classical_value",
    "concat_success",
    "extract_outcome_distribution",
]
