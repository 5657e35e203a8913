"""Euler-angle chart of SU(N), exact Haar integrals of finite-type monomials,
admissible-function algebra and Mathieu-conjecture hypothesis integrals."""

__version__ = "0.1.0"

from .exact import ExactSum, ExactValue, MixedTranscendenceError, QQi, half_beta
from .group_core import GroupElement, exp_generator, generator, mat_exp
from .euler_param import (ChartBoundaryError, EulerCoordinates, constraint_matrix, invert, invert_su2,
                          jacobian_weight, sample_haar_coords, to_group)
from .finite_type import FiniteTypeMonomial, LevelExponents, NotFiniteTypeError, beta_half, evaluate_at, haar_integral
from .admissible import AdmissibleFunction, HalfSquarePolynomial, multiply, power, spectrum
from .hull import hull_contains_zero, hull_witness
from .harness import JacobianSpec, ScanReport, integrate_hypothesis, jac_g2_tilde, jac_sp_tilde, jac_su_tilde, scan
from .oracle import MCEstimate, mc_integrate, quadrature, sample_su_qr
