"""Spectral analysis of the electric volume integral operator on a dielectric ball.

Subpackages are plain modules: :mod:`specfun`, :mod:`rootscan`,
:mod:`spectrum`, :mod:`modes`, :mod:`green`, :mod:`imaging` and :mod:`cli`.
"""

from .errors import DomainError, ResonanceError, SingularityError

__version__ = "0.1.0"

__all__ = ["DomainError", "SingularityError", "ResonanceError", "__version__"]
