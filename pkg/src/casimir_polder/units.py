"""Unit conventions.

Everything inside the library works in natural Gaussian units with
hbar = c = 1: energies are wavenumbers (1/length), squared dipole matrix
elements carry units of length**2 so that polarizabilities are volumes, and
interaction energies come out as inverse lengths.  The length scale itself is
arbitrary; ``UnitSystem.reference_length`` only matters when numbers cross
the I/O boundary.

Atomic-unit input (hartree energies, e^2 a0^2 dipoles) is mapped onto the
reduced system with the bohr radius as the reference length.  In that case a
transition energy E (hartree) becomes the wavenumber ``E * alpha_fs`` in
1/bohr and a squared dipole |mu|^2 (e^2 a0^2) becomes ``|mu|^2 * alpha_fs``
in bohr^2, where ``alpha_fs = e^2 / (4 pi eps0 hbar c)``.  The 1/(hbar c)
prefactor of the Gaussian-unit polarizability is absorbed by that second
factor, so alpha(0) comes out directly in bohr^3.
"""

from dataclasses import dataclass
from enum import Enum

import scipy.constants as const


class Convention(str, Enum):
    NATURAL_GAUSSIAN = "natural-gaussian"


# CODATA values via scipy.constants
FINE_STRUCTURE = const.e**2 / (4 * const.pi * const.epsilon_0 * const.hbar * const.c)
BOHR_RADIUS = const.physical_constants["Bohr radius"][0]  # m
HARTREE = const.physical_constants["Hartree energy"][0]  # J

# hartree -> 1/bohr, and e^2 a0^2 -> bohr^2 (hbar = c = 1)
HARTREE_TO_WAVENUMBER = FINE_STRUCTURE
DIPOLE2_AU_TO_REDUCED = FINE_STRUCTURE


@dataclass(frozen=True)
class UnitSystem:
    """Reduced-unit convention plus the length (in metres) that 1.0 stands for."""

    reference_length: float = BOHR_RADIUS
    convention: Convention = Convention.NATURAL_GAUSSIAN

    def __post_init__(self):
        if not self.reference_length > 0:
            raise ValueError(f"reference_length must be positive, got {self.reference_length}")

    def length_to_si(self, x):
        """Reduced length -> metres."""
        return x * self.reference_length

    def energy_to_si(self, e):
        """Reduced energy (an inverse length, hbar = c = 1) -> joules."""
        return e * const.hbar * const.c / self.reference_length


ATOMIC = UnitSystem(reference_length=BOHR_RADIUS)


def hartree_to_reduced(energy):
    return energy * HARTREE_TO_WAVENUMBER


def reduced_to_hartree(energy):
    """Inverse of :func:`hartree_to_reduced` (valid when lengths are in bohr)."""
    return energy / HARTREE_TO_WAVENUMBER
