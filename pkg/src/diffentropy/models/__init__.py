"""Parametric diffusion families with closed-form information measures."""
from ._base import Family, MeasureTriple
from .pearson import *  # noqa: F401,F403
from .pearson import __all__ as _pearson_all
from .gig import *  # noqa: F401,F403
from .gig import __all__ as _gig_all
from .hyperbolic import *  # noqa: F401,F403
from .hyperbolic import __all__ as _hyp_all
from .skewt import *  # noqa: F401,F403
from .skewt import __all__ as _skewt_all
from .expfam import *  # noqa: F401,F403
from .expfam import __all__ as _expfam_all

__all__ = ["Family", "MeasureTriple"] + _pearson_all + _gig_all + _hyp_all + _skewt_all + _expfam_all
