"""
Renyi information, Shannon entropy and Song measure of the invariant laws
of one-dimensional ergodic diffusions.
"""
from .quadrature import DivergenceError, Interval, QuadratureError, integrate
from .density import Density, affine, cauchy, from_log_kernel, laplace, normal, student_t, uniform
from .measures import (
    MeasureReport,
    power_divergence,
    renyi_divergence,
    renyi_numeric,
    shannon_numeric,
    song_numeric,
)
from .sde import DiffusionSpec, NotErgodicError, ergodicity_check, invariant_density

__version__ = "0.1.0"
