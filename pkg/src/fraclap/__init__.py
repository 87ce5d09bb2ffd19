"""Fourier-space decay simulator and verifier for damped second-order equations.

Each Fourier mode of  (1 + (-D)^delta) v_tt + (-D)^theta v_t + (-D)^alpha v = 0
is a scalar ODE with closed-form kernels; this package predicts, simulates and
fits the decay rates of the solution norms and certifies the pointwise
energy inequalities behind them.
"""
from .errors import (BetaRequired, ConfigError, DegenerateInput, EquivalenceViolated,
                     FraclapError, HypothesisNotMet, HypothesisViolated,
                     InadmissibleExponents, InvalidParameters, PreconditionError,
                     QuadratureNonConvergent, StepTooLarge, ThetaOutOfRange)
from .symbols import (CanonicalParams, Eigenpair, GeneralSymbol, KernelQuad, SymbolTriple,
                      effective_canonical, eigenvalues, epsilon_threshold, kernels_at,
                      real_branch_brackets, solution_hat)
from .spectra import NormRequest, RadialProfile, lemma1_ratio, parseval_split_check, radial_norm
from .energy import (EnergyPoint, check_diff_inequality, check_e1f, check_equivalence,
                     dissipation_identity_check, energy_point, hf_energy_integral, rho)
from .rates import (DecayPrediction, RateQuery, choose_beta, combined_rate, high_freq_rate,
                    low_freq_rate, preset)
from .fit import CurveQuery, DecayCurve, RateFit, fit_loglog, generate_curve, read_csv, write_csv
from .oracle import ModeState, kernel_agreement, rk4_mode

__version__ = "0.1.0"
