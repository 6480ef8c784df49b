"""Length-homogeneous random walks on the free group F_2.

Exact radial laws, band schedules whose drift or central limit behaviour
fails, tameness checks, and a block quasi-isometry whose push-forward of the
simple random walk has no drift.
"""

__version__ = "0.1.0"

from .errors import (BandOverlap, BudgetExceeded, CapacityExceeded, ExoticWalksError,
                     InvalidAddress, InvalidParameter, InvalidRelativeWord,
                     InvariantViolation, NoPreimage)
from .radial import (ConstantProfile, LambdaProfile, RadialDistribution, RadialEngine,
                     TableProfile, distribution_at, expected_distance,
                     expected_distance_series, hitting_zero_probability,
                     identity_residual, random_tame_profile, return_mass_sum)
from .profiles import (NoCltSchedule, NoDriftSchedule, band_of, make_profile,
                       no_clt_profile, no_drift_profile)
from .qi import (QiConfig, a_series, apply_X, apply_f, d_x, displacement_distribution,
                 invert_f, pushforward_expected_distance, pushforward_law_check, verify_qi)
from .tameness import (chernoff_bound, check_bounded_jumps, irreducibility_bound,
                       linear_progress_check, max_point_probability, tameness_report)
from .diagnostics import (CltDiagnostics, DriftSeries, clt_diagnostics, drift_series,
                          oscillation_report)
