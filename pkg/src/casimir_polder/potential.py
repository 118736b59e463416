"""Casimir-Polder potential: correlation route, imaginary-frequency oracle, asymptotics.

Correlation route
-----------------
Per unit k, the angle- and polarization-summed vacuum correlation T(k, R)
(see :mod:`casimir_polder.correlation`) contracted with the oscillating-dipole
tensor V(k, R) gives the real-axis integrand

    h(k) = alpha_A(k) alpha_B(k) w_T(k) T(k, R) : V(k, R),

with w_T = 1 in vacuum.  h is the imaginary part of the boundary value of

    Phi(k) = alpha_A alpha_B w_T G(k),   G = (1/2pi) g:g,   g = F[exp(ikR)/R] = -V - i pi T,

which is analytic in the upper half plane when the polarizabilities are the
causal (retarded) ones.  The potential is

    E(R) = - int_0^inf dk Im Phi(k + i0)
         = - [ FP int_0^inf h dk  -  pi * sum_p Re c1(p) ],

where the finite part (principal value for simple poles) runs over the
transition wavenumbers p and c1 is the 1/(k-p) Laurent coefficient of Phi.
The integral over k is only Abel-convergent: at large k, h oscillates as
sin(2kR) with constant amplitude.  It is split into a head with pole windows
and a tail summed over half periods with epsilon acceleration.

Imaginary-frequency oracle
--------------------------
Rotating the same integral onto k = iu gives the classic pole-free form

    E(R) = -1/(pi R^6) int_0^inf du alpha_A(iu) alpha_B(iu) exp(-2uR) P(uR),
    P(s) = s^4 + 2 s^3 + 5 s^2 + 6 s + 3.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import dipole
from .atoms import AtomModel, alpha_imag, alpha_real, polarizability_laurent, static_polarizability
from .correlation import thermal_weight, thermal_weight_dk
from .quadrature import (
    PoleSpec,
    QuadratureError,
    QuadratureResult,
    decay_integrate,
    oscillatory_integrate,
    pv_integrate,
)

DEFAULT_ORACLE_TOL = 1e-6
DEFAULT_ROUTE_TOL = 1e-4
_PI = np.longdouble("3.14159265358979323846264338327950288")
# Pole windows cancel against the pole bookkeeping to ~10 digits in the far
# zone, so they are converged to the extended-precision noise floor.
_WINDOW_TOL = 1e-17


class Method(str, Enum):
    CORRELATION = "correlation"
    IMAGFREQ = "imagfreq"
    MODESUM = "modesum"
    THERMAL = "thermal"


class Zone(str, Enum):
    NEAR = "near"
    FAR = "far"


@dataclass(frozen=True)
class PotentialValue:
    R: float
    energy: float
    method: Method
    error_estimate: float = 0.0
    conjectural: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be nonnegative")
        if self.conjectural != (self.method is Method.THERMAL):
            raise ValueError("conjectural is set exactly for the thermal method")


@dataclass
class PotentialCurve:
    values: list
    k_range: tuple = (None, None)  # smallest and largest transition wavenumber of the pair
    meta: dict = field(default_factory=dict)

    @property
    def R(self):
        return np.array([v.R for v in self.values])

    @property
    def energy(self):
        return np.array([v.energy for v in self.values])

    @property
    def error_estimate(self):
        return np.array([v.error_estimate for v in self.values])


@dataclass(frozen=True)
class AsymptoticReport:
    zone: Zone
    coefficient: float
    exponent: int
    fit_residual: float
    free_exponent: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "zone", Zone(self.zone))
        expected = 6 if self.zone is Zone.NEAR else 7
        if self.exponent != expected:
            raise ValueError(f"{self.zone.value} zone has exponent {expected}")


# --- closed-form coefficients ----------------------------------------------------

def london_c6(atomA: AtomModel, atomB: AtomModel) -> float:
    """C6 = (2/3) sum_mn mu2_m mu2_n / (k_m + k_n), so that E -> -C6/R^6."""
    total = 0.0
    for ta in atomA.transitions:
        for tb in atomB.transitions:
            total += ta.mu2 * tb.mu2 / (ta.k + tb.k)
    return 2.0 * total / 3.0


def far_zone_coefficient(atomA: AtomModel, atomB: AtomModel) -> float:
    """C7 in E -> C7 / R^7 at large R: -23 alpha_A(0) alpha_B(0) / (4 pi)."""
    return -23.0 * static_polarizability(atomA) * static_polarizability(atomB) / (4.0 * math.pi)


def _check_R(R):
    if not (np.isfinite(R) and R > 0):
        raise ValueError(f"separation must be positive, got {R!r}")


# --- imaginary-frequency oracle -----------------------------------------------------

def cp_imagfreq_oracle(atomA: AtomModel, atomB: AtomModel, R: float,
                       tol: float = DEFAULT_ORACLE_TOL) -> PotentialValue:
    _check_R(R)

    def integrand(u):
        s = u * R
        poly = (((s + 2.0) * s + 5.0) * s + 6.0) * s + 3.0
        return alpha_imag(atomA, u) * alpha_imag(atomB, u) * np.exp(-2.0 * s) * poly

    ks = sorted(set(atomA.wavenumbers.tolist()) | set(atomB.wavenumbers.tolist()))
    try:
        res = decay_integrate(integrand, tol=min(tol, 1e-8), scale=1.0 / (2.0 * R), breakpoints=ks)
    except QuadratureError as exc:
        raise QuadratureError(f"imaginary-frequency quadrature failed at R={R}: {exc}") from exc
    pref = 1.0 / (math.pi * R**6)
    return PotentialValue(R, -pref * res.value, Method.IMAGFREQ, pref * res.error_estimate)


# --- real-axis route -----------------------------------------------------------------

def _alpha_local(atom: AtomModel, base, t):
    """alpha(base + t) from partial fractions, exact in t when base is a transition."""
    km = atom.wavenumbers
    mu2 = atom.strengths
    t = np.asarray(t)[..., None]
    return np.sum(mu2 * (1.0 / ((base + km) + t) - 1.0 / ((base - km) + t)), axis=-1) / 3.0


class RouteIntegrand:
    """h(k) = alpha_A alpha_B w_T (T : V) and the pole data of its analytic parent."""

    def __init__(self, atomA: AtomModel, atomB: AtomModel, R: float, T: float = 0.0):
        self.atomA, self.atomB, self.R, self.T = atomA, atomB, float(R), float(T)

    def _tensors(self, base, t):
        R = self.R
        t = np.asarray(t)
        x0 = np.asarray(base, dtype=t.dtype) * R
        dx = t * R
        c0, s0 = np.cos(x0), np.sin(x0)
        cd, sd = np.cos(dx), np.sin(dx)
        c = c0 * cd - s0 * sd
        s = s0 * cd + c0 * sd
        x = x0 + dx
        av, bv = dipole.v_coefficients_trig(x, c, s, R)
        a_s, b_s = dipole.sin_coefficients_trig(x, c, s, R)
        pi = _PI if x.dtype == np.longdouble else math.pi
        return av, bv, -a_s / pi, -b_s / pi

    def local(self, base, t):
        """h(base + t) without rounding base + t."""
        av, bv, at, bt = self._tensors(base, t)
        w = thermal_weight(base + np.asarray(t), self.T) if self.T > 0 else 1.0
        return (_alpha_local(self.atomA, base, t) * _alpha_local(self.atomB, base, t) * w
                * dipole.contract(at, bt, av, bv))

    def __call__(self, k):
        return self.local(0.0, k)

    def green(self, p):
        """G(p) and G'(p) as (real, imaginary) pairs in extended precision."""
        p = np.longdouble(p)
        R = self.R
        av, bv = dipole.v_coefficients(p, R)
        dav, dbv = dipole.v_coefficients_dk(p, R)
        a_s, b_s = dipole.sin_coefficients(p, R)
        das, dbs = dipole.sin_coefficients_dk(p, R)
        # T = -S / pi with S = F[sin(kR)/R]; pi^2 T:T = S:S is formed without dividing by pi
        vv = dipole.contract(av, bv, av, bv)
        ss = dipole.contract(a_s, b_s, a_s, b_s)
        sv = dipole.contract(a_s, b_s, av, bv)
        dvv = 2.0 * dipole.contract(av, bv, dav, dbv)
        dss = 2.0 * dipole.contract(a_s, b_s, das, dbs)
        dsv = dipole.contract(das, dbs, av, bv) + dipole.contract(a_s, b_s, dav, dbv)
        G = np.array([(vv - ss) / (2 * _PI), -sv / _PI])
        dG = np.array([(dvv - dss) / (2 * _PI), -dsv / _PI])
        return G, dG

    def laurent(self, p, eps=0.0):
        """(c2, c1) of Phi(k) exp(-eps k) at the transition wavenumber p.

        Each coefficient is a (real, imaginary) pair of extended-precision
        numbers; far from the atoms the pole terms cancel to many digits.
        """
        G, dG = self.green(p)
        pl = np.longdouble(p)
        w = thermal_weight(pl, self.T) if self.T > 0 else 1.0
        dw = thermal_weight_dk(pl, self.T) if self.T > 0 else 0.0
        H = w * G
        dH = dw * G + w * dG
        rA, regA = polarizability_laurent(self.atomA, pl)
        rB, regB = polarizability_laurent(self.atomB, pl)
        c2 = rA * rB * H
        c1 = rA * rB * dH + (rA * regB + rB * regA) * H
        if eps:
            damp = np.exp(-eps * pl)
            c1 = (c1 - eps * c2) * damp
            c2 = c2 * damp
        return c2, c1

    def poles(self):
        ks = sorted(set(self.atomA.wavenumbers.tolist()) | set(self.atomB.wavenumbers.tolist()))
        return ks


def _energy_scale(atomA, atomB, R):
    """Rough magnitude of the vacuum potential, min(C6/R^6, |C7|/R^7).

    Used only to turn relative tolerances into absolute ones: near R = 0 the
    k integral is dominated by k ~ 1/R and the pole windows are tiny by
    comparison, so a tolerance relative to the window alone would chase
    rounding noise.
    """
    return min(london_c6(atomA, atomB) / R**6, abs(far_zone_coefficient(atomA, atomB)) / R**7)


def _route_integral(integrand: RouteIntegrand, tol, eps=0.0, k_end=None):
    """FP int h exp(-eps k) dk - pi sum Re c1 over [0, inf) (or [0, k_end] when damped)."""
    R = integrand.R
    ks = integrand.poles()
    half_period = math.pi / (2.0 * R)
    specs = []
    bookkeeping = 0.0
    for p in ks:
        c2, c1 = integrand.laurent(p, eps)
        order = 2 if np.any(c2 != 0) else 1
        specs.append(PoleSpec(p, order, (c2[1], c1[1])))
        bookkeeping -= _PI * c1[0]

    if eps:
        f = lambda k: integrand(k) * np.exp(-eps * k)
        f_local = lambda b, t: integrand.local(b, t) * np.exp(-eps * (b + t))
    else:
        f, f_local = integrand, integrand.local
    k_top = ks[-1]
    tail_start = max(2.0 * k_top, k_top + math.pi / R)
    if integrand.T > 0:
        tail_start = max(tail_start, 40.0 * integrand.T)
    quad_tol = min(1e-10, tol * 1e-3)
    atol = quad_tol * _energy_scale(integrand.atomA, integrand.atomB, R)
    if eps:
        res = pv_integrate(f, specs, k_end, tol=quad_tol, f_local=f_local, max_panel=half_period,
                           window_tol=_WINDOW_TOL, atol=atol, dtype=np.longdouble)
    else:
        res = pv_integrate(f, specs, math.inf, tol=quad_tol, f_local=f_local, max_panel=half_period,
                           omega=2.0 * R, tail_start=tail_start, window_tol=_WINDOW_TOL, atol=atol, dtype=np.longdouble)
    return QuadratureResult(float(res.value + bookkeeping), res.error_estimate, res.evaluations)


def _route(atomA, atomB, R, tol, T, method, tail):
    _check_R(R)
    integrand = RouteIntegrand(atomA, atomB, R, T)
    try:
        if tail == "wynn":
            res = _route_integral(integrand, tol)
        elif tail == "regulator":
            # regulators scale with the oscillation length of the integrand
            eps_list = [0.2 / R, 0.1 / R, 0.05 / R, 0.025 / R]
            eps_list = [e * min(1.0, R) for e in eps_list]

            def integral(eps):
                return _route_integral(integrand, tol, eps=eps, k_end=2 * max(integrand.poles()) + 40.0 / eps)

            res = oscillatory_integrate(None, 2.0 * R, eps_list, tol=tol, integral=integral)
        else:
            raise ValueError(f"unknown tail treatment {tail!r}")
    except QuadratureError as exc:
        raise QuadratureError(f"correlation route failed at R={R}: {exc}") from exc
    # Far out the pole windows and the tail are ~R^5 times larger than their
    # sum; once rounding in extended precision exceeds tol, refuse the value.
    if not res.error_estimate <= tol * abs(res.value):
        raise QuadratureError(
            f"correlation route lost precision at R={R}: error {res.error_estimate:.3g} "
            f"vs value {float(res.value):.3g}; use the imagfreq method here")
    return PotentialValue(R, -res.value, method, res.error_estimate, method is Method.THERMAL)


def cp_correlation_route(atomA: AtomModel, atomB: AtomModel, R: float, tol: float = DEFAULT_ROUTE_TOL,
                         tail: str = "wynn") -> PotentialValue:
    """Potential from the real-wavenumber integral of alpha_A alpha_B (T : V).

    ``tail="regulator"`` replaces the accelerated half-period tail by
    exp(-eps k) damping extrapolated to eps -> 0 (slower; kept as a
    cross-check).
    """
    return _route(atomA, atomB, R, tol, 0.0, Method.CORRELATION, tail)


def cp_thermal(atomA: AtomModel, atomB: AtomModel, R: float, T: float,
               tol: float = DEFAULT_ROUTE_TOL) -> PotentialValue:
    """Correlation route with the correlation weighted by coth(k / 2T).

    Conjectural: the weighting is an extrapolation of the vacuum result and
    every value carries ``conjectural=True``.
    """
    if T < 0:
        raise ValueError(f"temperature must be nonnegative, got {T!r}")
    return _route(atomA, atomB, R, tol, float(T), Method.THERMAL, "wynn")


# --- kernel bracket and the principal-value identities -----------------------------

def _as_vector(R):
    R_vec = np.asarray(R, dtype=float)
    if R_vec.ndim == 0:
        R_vec = np.array([0.0, 0.0, float(R_vec)])
    return R_vec


def kernel_bracket(atomA: AtomModel, atomB: AtomModel, k: float, R, pole_guard=1e-6):
    """(1/2pi) alpha_A(k) alpha_B(k) F[cos(kR)/R] as a 3x3 matrix.

    A scalar ``R`` places the separation along z.
    """
    R_vec = _as_vector(R)
    rhat, r = dipole._unit(R_vec)
    aa = alpha_real(atomA, k, pole_guard)
    ab = alpha_real(atomB, k, pole_guard)
    av, bv = dipole.v_coefficients(k, r)
    pref = -aa * ab / (2.0 * math.pi)
    return dipole.assemble(float(pref * av), float(pref * bv), rhat)


class _ResonantIntegral:
    """int_0^inf dk' k'/(k'^2 - k^2) Im[ g(k') E(k') ] with causal g.

    ``g`` is alpha_B (``pair=False``) or alpha_A alpha_B (``pair=True``),
    optionally plus ``scale * alpha_B``; E(k') is a complex kernel analytic
    in the upper half plane given with its derivative.  The pole at k' = k
    is a plain principal value; at each transition the finite part is
    supplemented by -pi Re c1.
    """

    def __init__(self, atomA, atomB, k, pair, single_scale, kernel, kernel_dk, omega):
        self.atomA, self.atomB, self.k = atomA, atomB, float(k)
        self.pair, self.single_scale = pair, single_scale
        self.kernel, self.kernel_dk, self.omega = kernel, kernel_dk, omega

    def g_local(self, base, t):
        out = 0.0
        aB = _alpha_local(self.atomB, base, t)
        if self.single_scale:
            out = out + self.single_scale * aB
        if self.pair:
            out = out + _alpha_local(self.atomA, base, t) * aB
        return out

    def g_laurent(self, p):
        rA, regA = polarizability_laurent(self.atomA, p)
        rB, regB = polarizability_laurent(self.atomB, p)
        g2, g1, g0 = 0.0, self.single_scale * rB, self.single_scale * regB
        if self.pair:
            g2 += rA * rB
            g1 += rA * regB + rB * regA
            g0 += regA * regB  # only used when p is not a pole of either atom
        return g2, g1, g0

    def local(self, base, t):
        t = np.asarray(t, dtype=float)
        kp = base + t
        # k'^2 - k^2 = (k' - k)(k' + k), with k' - k exact when base == k
        q = kp / (((base - self.k) + t) * (kp + self.k))
        return q * self.g_local(base, t) * self.kernel(base, t).imag

    def __call__(self, kp):
        return self.local(0.0, kp)

    def integrate(self, tol):
        k = self.k
        transitions = sorted(set(self.atomB.wavenumbers.tolist())
                             | (set(self.atomA.wavenumbers.tolist()) if self.pair else set()))
        if any(abs(k - p) < 1e-6 * p for p in transitions):
            raise ValueError("k coincides with a transition wavenumber")
        specs = []
        bookkeeping = 0.0
        for p in sorted(transitions + [k]):
            E0 = self.kernel(p, np.array(0.0))
            if p == k:
                g = float(self.g_local(k, np.array(0.0)))
                # k'/(k'^2-k^2) = (1/2)/(k'-k) + regular
                specs.append(PoleSpec(p, 1, (0.0, 0.5 * g * E0.imag)))
                continue
            dE = self.kernel_dk(p)
            q = p / (p * p - k * k)
            dq = -(p * p + k * k) / (p * p - k * k) ** 2
            g2, g1, _ = self.g_laurent(p)
            c2 = g2 * q * E0
            c1 = g2 * (dq * E0 + q * dE) + g1 * q * E0
            specs.append(PoleSpec(p, 2 if g2 else 1, (c2.imag, c1.imag)))
            bookkeeping -= math.pi * c1.real
        tail_start = 2.0 * max(max(transitions), k) + 2.0 * math.pi / self.omega
        res = pv_integrate(self, specs, math.inf, tol=tol, f_local=self.local,
                           max_panel=math.pi / self.omega, omega=self.omega, tail_start=tail_start)
        return QuadratureResult(res.value + bookkeeping, res.error_estimate, res.evaluations)


def _phase_kernel(R):
    def kernel(base, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * base * R) * np.exp(1j * t * R)

    def kernel_dk(p):
        return 1j * R * np.exp(1j * p * R)

    return kernel, kernel_dk


def pv_identity_lhs(atomA: AtomModel, atomB: AtomModel, k: float, R: float, pair: bool,
                    tol: float = 1e-11) -> QuadratureResult:
    """Left-hand side int k'/(k'^2-k^2) sin(k'R) alpha(...) dk' of the PV identities.

    ``pair=False`` integrates alpha_B alone, ``pair=True`` the product
    alpha_A alpha_B.  The transition poles are taken with the causal
    prescription (finite part plus the delta-function piece of Im alpha).
    """
    kernel, kernel_dk = _phase_kernel(R)
    integ = _ResonantIntegral(atomA, atomB, k, pair, 0.0 if pair else 1.0, kernel, kernel_dk, R)
    return integ.integrate(tol)


def pv_identity_rhs(atomA: AtomModel, atomB: AtomModel, k: float, R: float, pair: bool) -> float:
    ab = alpha_real(atomB, k)
    if pair:
        ab *= alpha_real(atomA, k)
    return 0.5 * math.pi * ab * math.cos(k * R)


def kernel_bracket_pre_identity(atomA: AtomModel, atomB: AtomModel, k: float, R, tol: float = 1e-11):
    """The bracket before the PV identities are used, with the k' integrals done numerically.

    Returns (1/2pi^2) F[(1/R) (alpha_A(k) I_B + I_AB)] as a 3x3 matrix, with F
    moved under the integral sign so only closed-form tensors are needed.
    """
    R_vec = _as_vector(R)
    rhat, r = dipole._unit(R_vec)
    aA = alpha_real(atomA, k)
    coeffs = []
    for part in ("a", "b"):
        idx = 0 if part == "a" else 1

        def kernel(base, t, idx=idx):
            t = np.asarray(t, dtype=float)
            x0, dx = base * r, t * r
            c = math.cos(x0) * np.cos(dx) - math.sin(x0) * np.sin(dx)
            s = math.sin(x0) * np.cos(dx) + math.cos(x0) * np.sin(dx)
            v = dipole.v_coefficients_trig(x0 + dx, c, s, r)[idx]
            sn = dipole.sin_coefficients_trig(x0 + dx, c, s, r)[idx]
            return -v + 1j * sn  # F[exp(ik'R)/R] component

        def kernel_dk(p, idx=idx):
            return -dipole.v_coefficients_dk(p, r)[idx] + 1j * dipole.sin_coefficients_dk(p, r)[idx]

        integ = _ResonantIntegral(atomA, atomB, k, True, aA, kernel, kernel_dk, r)
        coeffs.append(integ.integrate(tol).value / (2.0 * math.pi**2))
    return dipole.assemble(coeffs[0], coeffs[1], rhat)


# --- asymptotics -----------------------------------------------------------------------

class ZoneError(ValueError):
    pass


def check_zone(R, k_range, zone):
    zone = Zone(zone)
    k_min, k_max = k_range
    R = np.asarray(R, dtype=float)
    if zone is Zone.NEAR:
        if not np.all(k_max * R <= 0.01):
            raise ZoneError(f"near zone requires k_max*R <= 0.01 (k_max={k_max}, R_max={R.max()})")
    else:
        if not np.all(k_min * R >= 100):
            raise ZoneError(f"far zone requires k_min*R >= 100 (k_min={k_min}, R_min={R.min()})")


def asymptotic_fit(curve: PotentialCurve, zone) -> AsymptoticReport:
    """Fit energy = coefficient / R^n (n = 6 near, 7 far) by log-log least squares."""
    zone = Zone(zone)
    R = curve.R
    E = curve.energy
    if R.size < 2:
        raise ValueError("need at least two samples")
    if curve.k_range[0] is not None:
        check_zone(R, curve.k_range, zone)
    if np.any(E == 0) or not (np.all(E < 0) or np.all(E > 0)):
        raise ValueError("energies must be nonzero and of one sign")
    n = 6 if zone is Zone.NEAR else 7
    logR, logE = np.log(R), np.log(np.abs(E))
    log_c = np.mean(logE + n * logR)
    residual = float(np.sqrt(np.mean((logE + n * logR - log_c) ** 2)))
    slope = np.polyfit(logR, logE, 1)[0]
    return AsymptoticReport(zone, float(np.sign(E[0]) * math.exp(log_c)), n, residual, float(-slope))


# --- finite-box values and whole curves -------------------------------------------------

DEFAULT_BOX_FACTOR = 20.0


def cp_modesum(atomA: AtomModel, atomB: AtomModel, R: float, box_factor: float = DEFAULT_BOX_FACTOR,
               k_max: Optional[float] = None) -> PotentialValue:
    """Potential from the finite-box double mode sum with box side L = box_factor * R.

    The error estimate is the change from a box of half the side.
    """
    from .modesum import BoxConfig, default_k_max, interaction_energy_box

    _check_R(R)
    kc = default_k_max(R) if k_max is None else k_max
    L = box_factor * R
    fine = interaction_energy_box(BoxConfig(L, kc), atomA, atomB, R)
    coarse = interaction_energy_box(BoxConfig(0.5 * L, kc), atomA, atomB, R)
    return PotentialValue(R, fine, Method.MODESUM, abs(fine - coarse))


class SampleError(RuntimeError):
    """Numerical failure at one separation of a curve."""

    def __init__(self, R, message):
        self.R = R
        super().__init__(f"R={R!r}: {message}")


def evaluate(atomA: AtomModel, atomB: AtomModel, R: float, method, temperature: float = 0.0,
             tol: Optional[float] = None) -> PotentialValue:
    """Potential at one separation by the chosen method."""
    method = Method(method)
    if method is Method.IMAGFREQ:
        return cp_imagfreq_oracle(atomA, atomB, R, tol or DEFAULT_ORACLE_TOL)
    if method is Method.CORRELATION:
        return cp_correlation_route(atomA, atomB, R, tol or DEFAULT_ROUTE_TOL)
    if method is Method.THERMAL:
        return cp_thermal(atomA, atomB, R, temperature, tol or DEFAULT_ROUTE_TOL)
    return cp_modesum(atomA, atomB, R)


def _evaluate_sample(args):
    atomA, atomB, R, method, temperature, tol = args
    try:
        return evaluate(atomA, atomB, R, method, temperature, tol)
    except (QuadratureError, ArithmeticError, ValueError, RuntimeError) as exc:
        raise SampleError(R, str(exc)) from exc


def compute_curve(atomA: AtomModel, atomB: AtomModel, R_values, method, temperature: float = 0.0,
                  tol: Optional[float] = None, workers: int = 1) -> PotentialCurve:
    """Potential at each separation, in input order.

    With ``workers > 1`` the samples go to a process pool; every sample is
    computed independently, so the values do not depend on the worker count.
    """
    tasks = [(atomA, atomB, float(R), Method(method), float(temperature), tol) for R in R_values]
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_evaluate_sample, tasks))
    else:
        values = [_evaluate_sample(t) for t in tasks]
    ks = np.concatenate([atomA.wavenumbers, atomB.wavenumbers])
    return PotentialCurve(values, (float(ks.min()), float(ks.max())))
