"""Space-time fractional diffusion: special functions, stable densities,
Green functions by subordination and random-walk simulation."""

__version__ = "0.1.0"

from .errors import (AccuracyWarning, CensoredObservation, ConvergenceError,
                     DiracLimit, ParameterError)
from .specfun import (MlParams, WrightOrder, is_completely_monotone,
                      mittag_leffler, mittag_leffler_complex, ml_relaxation,
                      ml_spectral_density, wright_f, wright_m, wright_m_density,
                      wright_m_moment)
from .stable import (StableParams, StableRegime, extremal_from_wright,
                     stable_cf, stable_pdf, stable_pdf_scaled, stable_regime,
                     stable_tail, tail_coefficient)
from .sampling import (CmsParams, RngStream, feller_to_cms, sample_one_sided,
                       sample_scaled_increments, sample_stable)
from .subordination import (DensityGrid, DiffusionParams, directing_density,
                            drift_green, green_cdf, green_cf, green_function,
                            leading_density, parent_density, tabulate_green)
from .walker import (WalkConfig, WalkPath, invert_leading, refine,
                     sample_position_at, simulate_walk)
