"""Stabilizer subsystem codes and symmetry-protected memory simulations."""

from .codes import (
    CODE_BUILDERS,
    SubsystemCode,
    SurfaceLattice,
    build_code,
    surface_code,
)
from .errors import (
    DataQualityError,
    GaugememError,
    ResourceRefusalError,
    ValidationError,
)
from .hamiltonians import TermList, memory_model, surface_field_model
from .pauli import (
    Circuit,
    PauliGroup,
    PauliOp,
    apply_pauli,
    canonicalize_symmetries,
    product,
    symplectic_pairs,
)
from .spectral import Sector, mean_spacing_ratio, spectrum

__version__ = "0.1.0"

__all__ = [
    "CODE_BUILDERS",
    "Circuit",
    "DataQualityError",
    "GaugememError",
    "PauliGroup",
    "PauliOp",
    "ResourceRefusalError",
    "Sector",
    "SubsystemCode",
    "SurfaceLattice",
    "TermList",
    "ValidationError",
    "apply_pauli",
    "build_code",
    "canonicalize_symmetries",
    "mean_spacing_ratio",
    "memory_model",
    "product",
    "spectrum",
    "surface_code",
    "surface_field_model",
    "symplectic_pairs",
    "__version__",
]
