"""Parameter-space deformation of sampled haptic simulators.

Maps virtual (K, B) gains of a sampled loop to the continuous (k, b) they
actually realize, and back, and builds the deformation grids and stability
boundaries that follow from it.
"""
from .config import DiscreteParams, CharacteristicForm, assemble, builtin, resolve
from .deformation import (
    distortion_at,
    invmap,
    map_params,
    pole_report,
    stability_boundary,
    tune,
)
from .errors import InputError, MathDomainError, ZDeformError
from .reference import ContinuousParams, PhysicalUnits

__version__ = "0.1.0"

__all__ = [
    "CharacteristicForm",
    "ContinuousParams",
    "DiscreteParams",
    "InputError",
    "MathDomainError",
    "PhysicalUnits",
    "ZDeformError",
    "__version__",
    "assemble",
    "builtin",
    "distortion_at",
    "invmap",
    "map_params",
    "pole_report",
    "resolve",
    "stability_boundary",
    "tune",
]
