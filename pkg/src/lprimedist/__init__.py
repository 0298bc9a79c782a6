"""Numerical study of |L'/L(1, chi)| over Dirichlet characters modulo a prime."""

from .arith import coprime_part, is_odd_prime, lambda_convolution, mangoldt_sieve, primitive_root
from .characters import build_table, chi, orthogonality_sum
from .distribution import (EmpiricalDistribution, empirical_cdf, empirical_moment, figure1_data,
                           tail_report, theorem1_report)
from .lvalues import LValueRecord, l_values_all, ratio_oracle_smoothed
from .moments import MomentEstimate, carleman_partial_sum, moment_constant
from .stieltjes import StieltjesTable, build_stieltjes_table, digamma, gamma1_at

__version__ = "0.1.0"
