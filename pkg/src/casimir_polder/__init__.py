"""Casimir-Polder interaction between two ground-state atoms.

The potential is computed along a real-wavenumber route built from vacuum
field correlations and the oscillating-dipole tensor, and checked against the
imaginary-frequency formula and a finite-box mode sum.
"""

__version__ = "0.1.0"

from .atoms import (
    AtomModel,
    AtomModelError,
    PoleProximityError,
    Transition,
    alpha_imag,
    alpha_real,
    load_atom_model,
    parse_atom_model,
    serialize_atom_model,
    static_polarizability,
)
from .potential import (
    AsymptoticReport,
    Method,
    PotentialCurve,
    PotentialValue,
    Zone,
    asymptotic_fit,
    compute_curve,
    cp_correlation_route,
    cp_imagfreq_oracle,
    cp_modesum,
    cp_thermal,
    far_zone_coefficient,
    kernel_bracket,
    london_c6,
)
