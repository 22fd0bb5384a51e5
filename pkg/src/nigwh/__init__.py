"""Wiener-Hopf factorization of normal inverse Gaussian processes.

Exact Thorin-type representations of the laws of the supremum and infimum of
an NIG process killed at an exponential time, closed-form negative moments,
high-precision Padé approximation by gamma convolutions and exponential
mixtures, and applications to ruin and perpetual put pricing.
"""

__version__ = "0.1.0"

from .applications import OptionQuote, RuinReport, cramer_constant, perpetual_put, risk_neutral_drift, ruin_probability
from .distributions import (
    ExactFactor,
    ExponentialMixture,
    GammaConvolution,
    exact_factor,
    gc_mgf,
    laplace_invert_cdf,
    me_cdf,
    me_density,
    me_mgf,
)
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    NegativeWeightError,
    NonFiniteError,
    NonPositiveResidueError,
    NotGGCError,
    PoleError,
    SingularSystemError,
)
from .factorization import (
    Atom,
    Family,
    JordanPair,
    Side,
    SpectralMeasure,
    abc_constants,
    crossover_rational,
    is_ggc,
    jordan_decomposition,
    levy_density,
    omega_measure,
    radius_of_convergence,
    support_infimum,
    thorin_measure,
)
from .moments import (
    MomentSequence,
    PartialFractionCoeffs,
    cumulants_to_moments,
    moment_sequence,
    negative_moment,
    negative_moments,
    partial_fraction_coeffs,
    pole_integral_complex,
    pole_integral_real,
    stieltjes_power_integral,
)
from .nig_core import (
    CaseLabel,
    MinusCase,
    NigParams,
    PlusCase,
    RootSet,
    characteristic_roots,
    classify_case,
    count_solutions,
    is_solution,
    laplace_exponent,
    laplace_exponent_derivative,
    phi_q,
    zeta_roots,
)
from .pade import (
    DEFAULT_PRECISION,
    PadeApproximant,
    exp_mixture,
    exp_mixture_from_mgf,
    gamma_convolution,
    gamma_convolution_from_cgf,
    pade_n_minus_1_n,
    polynomial_roots,
)
from .quadrature import integrate_half_line, tanh_sinh_quadrature
from .validation import (
    McConfig,
    cumulant_identity_table,
    exact_cumulants,
    quadrature_moment_oracle,
    sample_nig_increment,
    simulate_extrema_cdf,
)
