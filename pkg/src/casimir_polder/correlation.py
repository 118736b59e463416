"""Equal-time vacuum correlations of the transverse displacement field.

Per mode (box volume V, hbar = c = 1)

    <d_m(r_B) d_l(r_A)> = (2 pi / V) k e_m e_l exp(i k.R),   R = r_B - r_A.

Summing over both polarizations and replacing sum_k by V/(2 pi)^3 int d^3k
gives sum_kj <d_m d_l> = int_0^inf dk T_ml(k, R) with the spectral density

    T(k, R) = (k^3 / (4 pi^2)) int dOmega (delta - kk) exp(i k.R)
            = -(1/pi) F[sin(kR)/R].

Its trace is (2 k^2 / pi) sin(kR)/R and at R = 0 it reduces to
(2 k^3 / (3 pi)) delta.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dipole import _unit, assemble, sin_coefficients

_ZHAT = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Mode:
    k_vec: np.ndarray
    polarization: int  # 1 or 2

    def __post_init__(self):
        kv = np.asarray(self.k_vec, dtype=float)
        if kv.shape != (3,):
            raise ValueError("k_vec must be a 3-vector")
        if self.polarization not in (1, 2):
            raise ValueError(f"polarization index must be 1 or 2, got {self.polarization!r}")
        object.__setattr__(self, "k_vec", kv)

    @property
    def k(self):
        return float(np.linalg.norm(self.k_vec))


@dataclass(frozen=True)
class CorrelationTensor:
    components: np.ndarray
    k: float
    R_vec: np.ndarray
    volume: Optional[float] = None


def polarization_basis(k_vec, rule="z-cross"):
    """Two orthonormal vectors transverse to ``k_vec``.

    ``"z-cross"`` (default): e1 = khat x z / |khat x z|, e2 = khat x e1, with
    (x, y) when khat is along z.  ``"x-cross"`` uses x as the reference axis
    instead; it exists to check that polarization sums do not depend on the
    choice.
    """
    k_vec = np.asarray(k_vec, dtype=float)
    k = np.linalg.norm(k_vec)
    if k == 0:
        raise ValueError("zero wavevector has no transverse basis")
    khat = k_vec / k
    if rule == "z-cross":
        ref, fallback = _ZHAT, (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    elif rule == "x-cross":
        ref, fallback = np.array([1.0, 0.0, 0.0]), (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))
    else:
        raise ValueError(f"unknown polarization rule {rule!r}")
    c = np.cross(khat, ref)
    n = np.linalg.norm(c)
    if n < 1e-12:
        e1, e2 = fallback
        # keep (e1, e2, khat) right-handed up to the sign of khat
        if np.dot(np.cross(e1, e2), khat) < 0:
            e2 = -e2
        return e1, e2
    e1 = c / n
    e2 = np.cross(khat, e1)
    return e1, e2


def polarization_bases(k_vecs, rule="z-cross"):
    """Vectorized :func:`polarization_basis` for an (N, 3) array; returns (e1, e2)."""
    k_vecs = np.asarray(k_vecs, dtype=float)
    k = np.linalg.norm(k_vecs, axis=1)
    if np.any(k == 0):
        raise ValueError("zero wavevector has no transverse basis")
    khat = k_vecs / k[:, None]
    if rule == "z-cross":
        ref = _ZHAT
        f1, f2 = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    elif rule == "x-cross":
        ref = np.array([1.0, 0.0, 0.0])
        f1, f2 = np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])
    else:
        raise ValueError(f"unknown polarization rule {rule!r}")
    c = np.cross(khat, ref)
    n = np.linalg.norm(c, axis=1)
    par = n < 1e-12
    e1 = np.where(par[:, None], f1, c / np.where(par, 1.0, n)[:, None])
    e2 = np.cross(khat, e1)
    if np.any(par):
        sign = np.sign(np.einsum("ij,j->i", khat[par], np.cross(f1, f2)))
        e2[par] = f2 * sign[:, None]
    return e1, e2


def mode_polarization(mode: Mode, rule="z-cross"):
    e1, e2 = polarization_basis(mode.k_vec, rule)
    return e1 if mode.polarization == 1 else e2


def mode_correlation(mode: Mode, R_vec, V, rule="z-cross") -> CorrelationTensor:
    """Single-mode vacuum correlation (2 pi / V) k e e exp(i k.R)."""
    if not V > 0:
        raise ValueError(f"volume must be positive, got {V!r}")
    k = mode.k
    if k == 0:
        raise ValueError("zero wavevector")
    R_vec = np.asarray(R_vec, dtype=float)
    e = mode_polarization(mode, rule)
    phase = np.exp(1j * np.dot(mode.k_vec, R_vec))
    comp = (2 * np.pi / V) * k * np.outer(e, e) * phase
    return CorrelationTensor(comp, k, R_vec, float(V))


def correlation_coefficients(k, R):
    """Transverse/longitudinal coefficients of the spectral density T(k, R).

    Vectorized over ``k``; ``R`` may be zero.
    """
    k = np.asarray(k, dtype=float)
    if R == 0:
        a = 2.0 * k**3 / (3.0 * np.pi)
        return a, a.copy() if isinstance(a, np.ndarray) else a
    a, b = sin_coefficients(k, R)
    return -a / np.pi, -b / np.pi


def integrated_correlation(k, R_vec) -> CorrelationTensor:
    """Polarization-summed, angle-integrated correlation per unit k.

    Real and symmetric.  ``R_vec = 0`` returns the analytic limit
    (2 k^3 / (3 pi)) delta.
    """
    if not k > 0:
        raise ValueError(f"k must be positive, got {k!r}")
    R_vec = np.asarray(R_vec, dtype=float)
    R = float(np.linalg.norm(R_vec))
    if R == 0:
        a, _ = correlation_coefficients(k, 0.0)
        comp = float(a) * np.eye(3)
    else:
        rhat, R = _unit(R_vec)
        a, b = correlation_coefficients(k, R)
        comp = assemble(float(a), float(b), rhat)
    return CorrelationTensor(comp, float(k), R_vec)


def thermal_weight(k, T):
    """coth(k / 2T), the symmetrized thermal enhancement; exactly 1 at T = 0."""
    if T < 0:
        raise ValueError(f"temperature must be nonnegative, got {T!r}")
    k = np.asarray(k)
    k = k.astype(np.result_type(k.dtype, np.float64), copy=False)
    if T == 0:
        out = np.ones_like(k)
    else:
        out = 1.0 / np.tanh(k / (2.0 * T))
    return out if out.ndim else out[()]


def thermal_weight_dk(k, T):
    k = np.asarray(k)
    k = k.astype(np.result_type(k.dtype, np.float64), copy=False)
    if T == 0:
        out = np.zeros_like(k)
    else:
        # -1/(2T sinh^2 x) = -(2/T) e^{-2x} / (1 - e^{-2x})^2, free of overflow for large x
        e = np.exp(-np.abs(k) / T)
        out = -(2.0 / T) * e / (1.0 - e) ** 2
    return out if out.ndim else out[()]
