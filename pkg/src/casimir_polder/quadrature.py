"""Quadrature engines: principal values, decaying tails, oscillatory tails.

All engines are built on composite Gauss-Legendre rules evaluated panel-wise
with vectorized integrands: ``f`` receives a 1-d array of nodes and must
return an array of the same shape.  Integrands must be pure functions.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be nonnegative")

    def __add__(self, other):
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )


@dataclass(frozen=True)
class PoleSpec:
    """A pole of the integrand on the real axis.

    ``laurent`` optionally gives the singular coefficients ``(a2, a1)`` of
    the integrand, f(x) ~ a2/(x-p)^2 + a1/(x-p).  Order-1 poles need only
    a1 (a2 must be 0); when omitted they are estimated numerically.  Order-2
    poles are integrated as a Hadamard finite part.
    """

    location: float
    order: int = 1
    laurent: Optional[tuple] = None

    def __post_init__(self):
        if not self.location > 0:
            raise ValueError(f"pole location must be positive, got {self.location!r}")
        if self.order not in (1, 2):
            raise ValueError(f"only simple and double poles are supported, got order {self.order!r}")


_EPS = np.finfo(float).eps


def _eps(dtype):
    return np.finfo(np.dtype(dtype) if dtype is not None else np.float64).eps


@lru_cache(maxsize=None)
def _gauss_legendre(n, dtype_name):
    x, w = np.polynomial.legendre.leggauss(n)
    dtype = np.dtype(dtype_name)
    if dtype.itemsize <= 8:
        return x, w
    # polish the double-precision nodes with Newton steps on P_n in extended precision
    x = x.astype(dtype)
    for _ in range(3):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        x = x - p1 / dp
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    w = 2 / ((1 - x * x) * dp * dp)
    return x, w


def gauss_legendre(n, dtype=np.float64):
    """Nodes and weights of the n-point rule on [-1, 1]; exact to the precision of ``dtype``."""
    return _gauss_legendre(n, np.dtype(dtype).name)


def _panel_sums(f, lo, hi, n, with_abs=False):
    """GL-n sums on every panel [lo_i, hi_i]; one vectorized call to f.

    The rule is formed in the floating type of the panel edges.
    """
    lo, hi = np.asarray(lo), np.asarray(hi)
    x, w = gauss_legendre(n, np.result_type(lo.dtype, np.float64))
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel())).reshape(nodes.shape)
    if with_abs:
        return (vals @ w) * half, (np.abs(vals) @ w) * np.abs(half)
    return (vals @ w) * half


def _initial_edges(a, b, breakpoints, max_panel, dtype=None):
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    edges = [pts[0]]
    for lo, hi in zip(pts[:-1], pts[1:]):
        m = 1 if max_panel is None else max(1, int(np.ceil((hi - lo) / max_panel)))
        edges.extend(np.linspace(lo, hi, m + 1)[1:])
    return np.asarray(edges, dtype=dtype or float)


def adaptive_gl(f, a, b, tol=1e-10, atol=0.0, breakpoints=(), max_panel=None,
                n=16, max_panels=20000, dtype=None) -> QuadratureResult:
    """Globally adaptive composite Gauss-Legendre on [a, b].

    Each panel is scored by comparing one GL-n rule with two GL-n rules on
    its halves.  Panels are bisected until the summed score falls below
    ``max(atol, tol * sum |panel|)``; the magnitude scale keeps the stopping
    rule meaningful for strongly cancelling integrands.  ``dtype`` sets
    the floating type of the nodes (``np.longdouble`` for extended precision).
    """
    if not b > a:
        if a == b:
            return QuadratureResult(0.0, 0.0, 1)
        raise ValueError("adaptive_gl requires a < b")
    edges = _initial_edges(a, b, breakpoints, max_panel, dtype)
    eps = _eps(dtype)
    lo, hi = edges[:-1], edges[1:]
    done_val = np.zeros((), dtype=dtype or float)[()]
    done_err = 0.0
    done_mag = 0.0
    evals = 0
    while True:
        mid = 0.5 * (lo + hi)
        coarse = _panel_sums(f, lo, hi, n)
        left, labs = _panel_sums(f, lo, mid, n, with_abs=True)
        right, rabs = _panel_sums(f, mid, hi, n, with_abs=True)
        evals += 3 * n * lo.size
        fine = left + right
        # differences at the rounding level of the integrand are not error
        err = np.maximum(np.abs(fine - coarse) - 64 * eps * (labs + rabs), 0.0)
        mag = np.abs(left) + np.abs(right)
        total_mag = done_mag + mag.sum()
        target = max(atol, tol * total_mag)
        if done_err + err.sum() <= target or lo.size + 1 > max_panels:
            if done_err + err.sum() > target:
                raise QuadratureError(
                    f"adaptive quadrature on [{a}, {b}] did not converge "
                    f"(error {done_err + err.sum():.3g} > {target:.3g})"
                )
            return QuadratureResult(done_val + fine.sum(), float(done_err + err.sum()), evals)
        # keep panels whose error is already negligible, bisect the rest
        share = target / max(lo.size, 1)
        keep = err <= 0.5 * share
        done_val += fine[keep].sum()
        done_err += err[keep].sum()
        done_mag += mag[keep].sum()
        split = ~keep
        lo, mid_s, hi = lo[split], mid[split], hi[split]
        lo, hi = np.concatenate([lo, mid_s]), np.concatenate([mid_s, hi])
        order = np.argsort(lo)
        lo, hi = lo[order], hi[order]


def _uniform_gl(f, a, b, tol, atol=0.0, max_panel=None, n=16, max_doublings=10, noise=None,
                fallback_tol=None, dtype=None):
    """Composite GL with uniform panels, doubled until two levels agree.

    Used where the integrand is analytic but evaluated with rounding noise
    that grows towards one end, so local bisection would only chase noise.
    Sums keep the integrand's floating type (extended precision survives).
    When the level differences stop shrinking (a rounding plateau) the result
    is accepted if it meets the looser ``fallback_tol``.
    """
    m = 1 if max_panel is None else max(1, int(np.ceil((b - a) / max_panel)))
    edges = np.linspace(a, b, m + 1, dtype=dtype)
    prev = _panel_sums(f, edges[:-1], edges[1:], n).sum()
    evals = n * m
    err = np.inf
    for _ in range(max_doublings):
        m *= 2
        edges = np.linspace(a, b, m + 1, dtype=dtype)
        vals, absv = _panel_sums(f, edges[:-1], edges[1:], n, with_abs=True)
        if noise is not None:
            absv = _panel_sums(noise, edges[:-1], edges[1:], n)
        cur = vals.sum()
        evals += n * m
        last, err = err, abs(cur - prev)
        scale = np.abs(vals).sum()
        if err <= max(atol, tol * scale, 32 * _EPS * absv.sum()):
            return QuadratureResult(cur, float(err), evals)
        if fallback_tol is not None and err > 0.25 * last and err <= max(atol, fallback_tol * scale):
            return QuadratureResult(cur, float(err), evals)
        prev = cur
    raise QuadratureError(f"pole-window quadrature on [{a}, {b}] did not converge (error {err:.3g})")


# --- principal values -----------------------------------------------------------

def _estimate_laurent(f, p, h, order):
    """Richardson estimate of (a2, a1) from symmetric samples around p."""
    hs = h * np.array([4.0, 2.0, 1.0])
    fp = np.asarray(f(p + hs), dtype=float)
    fm = np.asarray(f(p - hs), dtype=float)
    if order == 1:
        est = 0.5 * hs * (fp - fm)          # a1 + O(h^2)
        a2 = 0.0
    else:
        est2 = 0.5 * hs**2 * (fp + fm)      # a2 + O(h^2)
        a2 = _richardson_h2(est2)
        est = 0.5 * hs * (fp - fm)          # a1 + O(h^2)
    return a2, _richardson_h2(est)


def _richardson_h2(vals):
    # vals at h = 4, 2, 1 (times h0); eliminate h^2 and h^4 terms
    r1 = (4 * vals[1] - vals[0]) / 3
    r2 = (4 * vals[2] - vals[1]) / 3
    return (16 * r2 - r1) / 15


def _pole_windows(poles, lower, upper, tol, window):
    locs = [p.location for p in poles]
    if sorted(locs) != locs:
        raise ValueError("poles must be sorted by location")
    for p in locs:
        if p - lower <= 10 * tol or (np.isfinite(upper) and upper - p <= 10 * tol):
            raise QuadratureError(f"pole at {p} too close to the integration limits [{lower}, {upper}]")
    for p, q in zip(locs, locs[1:]):
        if q - p <= 10 * tol:
            raise QuadratureError(f"overlapping pole neighbourhoods at {p} and {q}")
    deltas = []
    for i, p in enumerate(locs):
        d = 0.5 * (p - lower)
        if np.isfinite(upper):
            d = min(d, 0.5 * (upper - p))
        if i > 0:
            d = min(d, 0.5 * (p - locs[i - 1]))
        if i + 1 < len(locs):
            d = min(d, 0.5 * (locs[i + 1] - p))
        if window is not None:
            d = min(d, window)
        deltas.append(d)
    return deltas


def pv_integrate(f: Callable, poles: Sequence[PoleSpec], cutoff: float, tol: float = 1e-10,
                 lower: float = 0.0, f_local: Optional[Callable] = None, window=None,
                 max_panel=None, omega=None, tail_start=None, atol=0.0,
                 n=16, window_tol=None, dtype=None) -> QuadratureResult:
    """Principal value (finite part for double poles) of the integral of f over [lower, cutoff].

    Around each pole p a window [p - d, p + d] is integrated after
    subtracting the singular part a2/(x-p)^2 + a1/(x-p) and folding the
    window onto [0, d]; the subtracted pieces are restored analytically
    (zero for the odd term, -2 a2 / d for the finite part).  ``f_local(p, t)``, when given, evaluates f(p + t)
    without forming p + t, which avoids rounding amplification next to the
    pole.  ``window_tol`` (default ``tol``) is the relative tolerance inside
    the windows; it must be tighter when the windows cancel against other
    contributions.  ``cutoff = inf`` requires ``omega`` and treats the
    region beyond ``tail_start`` with :func:`oscillatory_tail`.  ``dtype``
    is passed to every sub-quadrature; with ``np.longdouble`` and an
    integrand that honours it, the whole sum runs in extended precision.
    """
    poles = list(poles)
    infinite = not np.isfinite(cutoff)
    if infinite and omega is None:
        raise ValueError("an infinite cutoff needs the oscillation frequency omega")
    if not infinite:
        for pole in poles:
            if pole.location >= cutoff:
                raise QuadratureError(f"pole at {pole.location} is not inside (lower, cutoff={cutoff})")
    deltas = _pole_windows(poles, lower, cutoff, tol, window)
    local = f_local is not None
    if not local:
        def f_local(p, t, _f=f):
            return _f(p + t)

    result = QuadratureResult(0.0, 0.0, 0)
    regions = []
    prev = lower
    for pole, d in zip(poles, deltas):
        p = pole.location
        if pole.laurent is None:
            a2, a1 = _estimate_laurent(f, p, 1e-3 * d, pole.order)
        else:
            a2, a1 = pole.laurent
            if pole.order == 1 and a2 != 0:
                raise ValueError("a simple pole cannot carry a second-order coefficient")

        def remainder(t, p=p, a2=a2, a1=a1):
            return f_local(p, t) - a2 / t**2 - a1 / t

        def folded(t, remainder=remainder):
            # The odd part of the remainder, including any residue error,
            # cancels here.  With a local evaluator the subtraction runs in
            # extended precision: next to a double pole it cancels many digits.
            if local:
                t = np.asarray(t, dtype=np.longdouble)
            return remainder(t) + remainder(-t)

        def noise(t, p=p):
            # rounding scale of the folded remainder; forming p + t costs a factor p/t
            amp = np.finfo(np.longdouble).eps / _EPS if local else p / t
            return (np.abs(f_local(p, t)) + np.abs(f_local(p, -t))) * amp

        window_part = _uniform_gl(folded, 0.0, d, tol=window_tol or tol, atol=atol / 4,
                                  max_panel=max_panel, n=n, noise=noise, fallback_tol=tol, dtype=dtype)
        result = result + window_part + QuadratureResult(-2.0 * a2 / d, 0.0, 0)
        regions.append((prev, p - d))
        prev = p + d

    if infinite:
        tail_start = max(prev, tail_start if tail_start is not None else prev)
        regions.append((prev, tail_start))
    else:
        regions.append((prev, cutoff))
    for lo, hi in regions:
        if hi > lo:
            result = result + adaptive_gl(f, lo, hi, tol=tol, atol=atol / 4, max_panel=max_panel, n=n,
                                          dtype=dtype)
    if infinite:
        result = result + oscillatory_tail(f, tail_start, omega, tol=tol, atol=atol / 4, n=n, dtype=dtype)
    return result


# --- decaying integrands -------------------------------------------------------

def decay_integrate(f: Callable, tol: float = 1e-10, scale: float = 1.0,
                    breakpoints=(), max_panels=20000) -> QuadratureResult:
    """Integral of f over [0, inf) for exponentially or algebraically decaying f.

    The half line is mapped onto [0, 1) by x = scale * t / (1 - t);
    ``scale`` should be the decay length of the integrand.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")

    def g(t):
        one_minus = 1.0 - t
        x = scale * t / one_minus
        jac = scale / one_minus**2
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(f(x), dtype=float) * jac
        return np.where(np.isfinite(out), out, 0.0)

    bp = [b / (scale + b) for b in breakpoints if b > 0]
    bp += [0.5, 0.75, 0.9]
    res = adaptive_gl(g, 0.0, 1.0, tol=tol, breakpoints=bp, max_panels=max_panels)
    if abs(res.value) > 0 and res.error_estimate > 10 * tol * abs(res.value) and res.error_estimate > 1e-300:
        raise QuadratureError(f"decay_integrate did not reach tol={tol} (error {res.error_estimate:.3g})")
    return res


# --- oscillatory tails -----------------------------------------------------------

def wynn_epsilon(partial_sums):
    """Wynn's epsilon algorithm; returns (estimate, error) from the last two even columns."""
    s = np.asarray(partial_sums)
    s = s.astype(np.result_type(s.dtype, np.float64), copy=True)
    n = s.size
    if n < 3:
        return s[-1], (float(abs(s[-1] - s[0])) if n > 1 else np.inf)
    e_prev = np.zeros(n + 1, dtype=s.dtype)
    e_cur = s.copy()
    estimates = [s[-1]]
    col = 0
    while e_cur.size > 1:
        diff = e_cur[1:] - e_cur[:-1]
        if col % 2 == 0 and np.any(diff == 0):
            # an even column that has stopped changing is the converged value
            return e_cur[-1], float(abs(diff[-1]))
        with np.errstate(divide="ignore", invalid="ignore"):
            e_next = e_prev[1:e_cur.size] + 1.0 / diff
        if not np.all(np.isfinite(e_next)):
            break
        e_prev, e_cur = e_cur, e_next
        col += 1
        if col % 2 == 0:
            estimates.append(e_cur[-1])
    if len(estimates) < 2:
        return estimates[-1], float(abs(s[-1] - s[-2]))
    return estimates[-1], float(abs(estimates[-1] - estimates[-2]))


def oscillatory_tail(f: Callable, a: float, omega: float, tol: float = 1e-10, atol: float = 0.0,
                     n=16, min_terms=12, max_terms=200, dtype=None) -> QuadratureResult:
    """Integral of an oscillating f over [a, inf) by half-period partial sums.

    The pieces have length pi/omega; their running sums are accelerated with
    the epsilon algorithm, which also gives the Abel-summed value for tails
    whose amplitude does not decay.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    dtype = np.dtype(dtype or np.float64)
    h = np.arccos(np.asarray(-1, dtype=dtype)) / dtype.type(omega)
    start0 = dtype.type(a)
    eps = _eps(dtype)
    pieces = np.zeros(0, dtype=dtype)
    evals = 0
    best = None
    chunk = min_terms
    while pieces.size < max_terms:
        lo = start0 + h * np.arange(pieces.size, pieces.size + chunk, dtype=dtype)
        vals = _panel_sums(f, lo, lo + h, n)
        evals += n * chunk
        pieces = np.concatenate([pieces, vals])
        sums = np.cumsum(pieces)
        est, err = wynn_epsilon(sums[-min(len(sums), 40):])
        scale = float(np.max(np.abs(pieces)))
        if best is not None:
            err = max(err, float(abs(est - best)))
        best = est
        if err <= max(atol, tol * max(float(abs(est)), 1e-300)) or err <= 10 * eps * scale:
            return QuadratureResult(est, err, evals)
        chunk = 8
    if err <= max(atol, 1e3 * tol * float(abs(best))):
        return QuadratureResult(best, err, evals)
    raise QuadratureError(f"oscillatory tail from {a} did not converge (estimate {best}, error {err:.3g})")


def neville_extrapolate(xs, ys):
    """Value at 0 of the interpolating polynomial through (xs, ys), with the table diagonal."""
    xs = np.asarray(xs, dtype=float)
    p = np.asarray(ys, dtype=float).copy()
    n = len(xs)
    diag = [p[-1]]
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
        diag.append(p[n - m - 1])
    return float(p[0]), diag


def regulated_integral(f, eps, omega, tol=1e-13, a=0.0, breakpoints=(), n=16):
    """int_a^inf f(k) exp(-eps k) dk by half-period panels up to where the damping has killed f."""
    k_end = a + 40.0 / eps
    h = np.pi / omega
    edges = _initial_edges(a, k_end, breakpoints, h)
    lo, hi = edges[:-1], edges[1:]
    g = lambda k: f(k) * np.exp(-eps * k)
    vals = _panel_sums(g, lo, hi, n)
    check = _panel_sums(g, lo, hi, 2 * n)
    return QuadratureResult(float(check.sum()), float(np.abs(check - vals).sum()), 3 * n * lo.size)


def oscillatory_integrate(f: Callable, omega: float, epsilons: Sequence[float], tol: float = 1e-8,
                          integral: Optional[Callable] = None, max_extra=8) -> QuadratureResult:
    """Abel-regulated integral of f over [0, inf), extrapolated to zero regulator.

    I(eps) = int f(k) exp(-eps k) dk is computed for each regulator (with
    ``integral(eps)`` if supplied, otherwise by direct panel quadrature) and
    extrapolated polynomially in eps (all powers, since odd terms occur,
    e.g. for cos).  The regulator list is extended by halving until the
    last two extrapolants agree to ``tol``; a table whose extrapolants grow
    instead of settling is reported as divergent.
    """
    eps_list = sorted((float(e) for e in epsilons), reverse=True)
    if not eps_list or eps_list[-1] <= 0:
        raise ValueError("regulators must be positive")
    if integral is None:
        def integral(eps):
            return regulated_integral(f, eps, omega)
    vals = []
    evals = 0
    qerr = 0.0
    for e in eps_list:
        r = integral(e)
        vals.append(r.value)
        evals += r.evaluations
        qerr = max(qerr, r.error_estimate)
    history = []
    for extra in range(max_extra + 1):
        est, diag = neville_extrapolate(eps_list, vals)
        history.append(est)
        change = abs(diag[-1] - diag[-2]) if len(diag) > 1 else np.inf
        if len(history) > 1:
            change = max(change, abs(history[-1] - history[-2]))
        if change <= tol * max(1.0, abs(est)) and np.isfinite(est):
            return QuadratureResult(est, float(2 * change + qerr), evals)
        if len(history) >= 3 and abs(history[-1] - history[-2]) > abs(history[-2] - history[-3]) \
                and abs(history[-1]) > 10 * abs(history[0]):
            break
        if extra == max_extra:
            break
        e_new = eps_list[-1] / 2
        r = integral(e_new)
        eps_list.append(e_new)
        vals.append(r.value)
        evals += r.evaluations
        qerr = max(qerr, r.error_estimate)
    raise QuadratureError(
        f"regulator extrapolation failed to settle: estimates {history[-3:]} (divergent integral?)"
    )
