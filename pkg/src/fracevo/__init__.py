"""Distributed-order fractional evolution equations.

Solves ``u = S(t) a`` for Caputo and Riemann-Liouville distributed-order
problems with finite-dimensional generators, by resolvent inversion,
subordination, Post-Widder inversion and Volterra time stepping.
"""

from .errors import (AccuracyWarning, CapabilityError, ContourError, DomainError, FracEvoError,
                     PoleError, QuadratureError, SingularResolventError, TailMassError, WeightError)
from .generators import (Diagonal, DirichletLaplacian1D, Scalar, hille_yosida_check,
                         parse_generator, resolvent_apply, semigroup_apply)
from .jets import Jet
from .kernels import (KernelId, cm_check, convolution_identity_check, k1_eval, k1_spectral,
                      k1_spectral_density, k2_eval, kernel_eval, kernel_integral)
from .laplace import (DEFAULT_CONTOUR, DENSITY_CONTOUR, BromwichLine, FixedTalbot, HankelSector,
                      invert_scalar, invert_vector)
from .solvers import (Trajectory, postwidder_coeffs, solve_postwidder, solve_resolvent,
                      solve_subordination, solve_volterra, subordination_density, tau_rule)
from .special import MLParams, gamma, mittag_leffler, rgamma
from .symbols import (ConstantWeight, DiscreteWeight, PolynomialWeight, ProblemKind, format_weight,
                      g_eval, g_jet, h_eval, h_jet, parse_weight, sector_angle_check, validate)

__version__ = "0.1.0"
