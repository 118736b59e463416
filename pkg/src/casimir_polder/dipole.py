"""Oscillating-dipole coupling tensor and the transverse operator F.

F acts on a radial function f(R) as

    F f = (laplacian * delta - grad grad) f
        = (delta - RR) * (f'' + f'/R) + RR * (2 f'/R)

with RR the projector onto the unit separation vector.  Every tensor in this
module therefore has the form ``a * (delta - RR) + b * RR`` and is carried
around as the pair ``(a, b)`` of "transverse" and "longitudinal" radial
coefficients.  The full 3x3 matrix is only built at the API surface.

With x = k R the two kernels that matter are

    F[cos(kR)/R]:  a = -(x^2 cos x - x sin x - cos x) / R^3,  b = -2 (x sin x + cos x) / R^3
    F[sin(kR)/R]:  a =  (sin x - x cos x - x^2 sin x) / R^3,  b =  2 (x cos x - sin x) / R^3

and the dipole tensor is V = -F[cos(kR)/R].
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

# below this kR the sin-kernel coefficients switch to their Taylor series
SERIES_THRESHOLD = 1e-3


class KernelKind(str, Enum):
    COS_OVER_R = "cos"
    SIN_OVER_R = "sin"


@dataclass(frozen=True)
class RadialKernel:
    kind: KernelKind
    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"kernel wavenumber must be positive, got {self.k!r}")
        object.__setattr__(self, "kind", KernelKind(self.kind))

    def __call__(self, R):
        R = np.asarray(R, dtype=float)
        f = np.cos if self.kind is KernelKind.COS_OVER_R else np.sin
        return f(self.k * R) / R


@dataclass(frozen=True)
class DipoleTensor:
    components: np.ndarray
    k: float
    R_vec: np.ndarray

    def __getitem__(self, idx):
        return self.components[idx]


def _unit(R_vec):
    R_vec = np.asarray(R_vec, dtype=float)
    if R_vec.shape != (3,):
        raise ValueError("separation must be a 3-vector")
    R = float(np.linalg.norm(R_vec))
    if R == 0.0:
        raise ValueError("separation vector must be nonzero")
    return R_vec / R, R


def assemble(a, b, rhat):
    """Build ``a (delta - RR) + b RR`` as a 3x3 matrix."""
    rr = np.outer(rhat, rhat)
    return a * (np.eye(3) - rr) + b * rr


# --- radial coefficients (vectorized over k) ---------------------------------

def _float_array(k):
    # keep extended precision when the caller asks for it
    k = np.asarray(k)
    return k.astype(np.result_type(k.dtype, np.float64), copy=False)


def v_coefficients(k, R):
    """Transverse and longitudinal coefficients of V(k, R) = -F[cos(kR)/R]."""
    x = _float_array(k) * R
    return v_coefficients_trig(x, np.cos(x), np.sin(x), R)


def v_coefficients_dk(k, R):
    """k-derivatives of :func:`v_coefficients`."""
    x = _float_array(k) * R
    return v_coefficients_dk_trig(x, np.cos(x), np.sin(x), R)


def sin_coefficients(k, R):
    """Coefficients of F[sin(kR)/R]; Taylor series for kR below the threshold."""
    x = _float_array(k) * R
    return sin_coefficients_trig(x, np.cos(x), np.sin(x), R)


def sin_coefficients_dk(k, R):
    x = _float_array(k) * R
    return sin_coefficients_dk_trig(x, np.cos(x), np.sin(x), R)


# The *_trig variants take cos(x) and sin(x) precomputed, so callers that
# know x = x0 + dx more accurately than the rounded sum can supply them.

def v_coefficients_trig(x, c, s, R):
    R3 = R**3
    return (x * x * c - x * s - c) / R3, 2.0 * (x * s + c) / R3


def v_coefficients_dk_trig(x, c, s, R):
    R2 = R**2
    return (x * c - x * x * s) / R2, 2.0 * x * c / R2


def sin_coefficients_trig(x, c, s, R):
    R3 = R**3
    a = (s - x * c - x * x * s) / R3
    b = 2.0 * (x * c - s) / R3
    small = np.abs(x) < SERIES_THRESHOLD
    if np.any(small):
        x2 = x * x
        k3 = (x / R) ** 3
        a_ser = k3 * (-2.0 / 3.0 + (2.0 / 15.0) * x2 - x2 * x2 / 140.0)
        b_ser = k3 * (-2.0 / 3.0 + x2 / 15.0 - x2 * x2 / 420.0)
        a = np.where(small, a_ser, a)
        b = np.where(small, b_ser, b)
    return a, b


def sin_coefficients_dk_trig(x, c, s, R):
    R2 = R**2
    return (-x * s - x * x * c) / R2, -2.0 * x * s / R2


def static_coefficients(R):
    """k -> 0 limit of V: -(delta - 3 RR)/R^3."""
    return -1.0 / R**3, 2.0 / R**3


# --- public tensor API -----------------------------------------------------------

def apply_F(kernel: RadialKernel, R_vec):
    """F applied analytically to ``kernel`` at ``R_vec``; returns a 3x3 array."""
    rhat, R = _unit(R_vec)
    if kernel.kind is KernelKind.COS_OVER_R:
        a, b = v_coefficients(kernel.k, R)
        a, b = -a, -b
    else:
        a, b = sin_coefficients(kernel.k, R)
    return assemble(float(a), float(b), rhat)


def v_tensor(k, R_vec) -> DipoleTensor:
    """Coupling tensor of two dipoles oscillating at wavenumber ``k``.

    ``k = 0`` returns the static dipole-dipole tensor.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k!r}")
    rhat, R = _unit(R_vec)
    if k == 0:
        a, b = static_coefficients(R)
    else:
        a, b = v_coefficients(k, R)
    return DipoleTensor(assemble(float(a), float(b), rhat), float(k), np.asarray(R_vec, dtype=float))


def contract(a1, b1, a2, b2):
    """Full double contraction of two ``(a, b)`` tensors: 2 a1 a2 + b1 b2."""
    return 2.0 * a1 * a2 + b1 * b2
