"""Atomic transition data and the isotropic dynamic polarizability.

With hbar = c = 1 the polarizability of a ground-state atom is

    alpha(k) = (2/3) * sum_m k_m * mu2_m / (k_m**2 - k**2)

on the real axis and, continued to k = i u,

    alpha(iu) = (2/3) * sum_m k_m * mu2_m / (k_m**2 + u**2).

Partial fractions give alpha(k) = (1/3) sum_m mu2_m [1/(k + k_m) - 1/(k - k_m)],
which is what the pole bookkeeping in :mod:`casimir_polder.potential` uses.
"""

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .units import DIPOLE2_AU_TO_REDUCED, HARTREE_TO_WAVENUMBER


class AtomModelError(ValueError):
    """Invalid atom-model document or field; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PoleProximityError(ValueError):
    def __init__(self, k, transition_index, k_m):
        self.k = k
        self.transition_index = transition_index
        self.k_m = k_m
        super().__init__(
            f"k={k!r} lies within the pole guard of transition {transition_index} (k_m0={k_m!r})"
        )


@dataclass(frozen=True)
class Transition:
    k: float    # transition wavenumber (E_m - E_0) / (hbar c)
    mu2: float  # |mu^{m0}|^2 summed over degenerate sublevels

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise AtomModelError(f"transition wavenumber must be positive, got {self.k!r}", "k")
        if not (np.isfinite(self.mu2) and self.mu2 > 0):
            raise AtomModelError(f"mu2 must be positive, got {self.mu2!r}", "mu2")


@dataclass(frozen=True)
class AtomModel:
    name: str
    transitions: tuple

    def __post_init__(self):
        trans = tuple(self.transitions)
        if not trans:
            raise AtomModelError("empty transition list", "transitions")
        trans = tuple(sorted(trans, key=lambda t: t.k))
        for i in range(1, len(trans)):
            if trans[i].k == trans[i - 1].k:
                raise AtomModelError(f"duplicate transition at k={trans[i].k!r}", f"transitions[{i}]")
        object.__setattr__(self, "transitions", trans)

    @classmethod
    def two_level(cls, k, mu2, name="two-level"):
        return cls(name, (Transition(float(k), float(mu2)),))

    @property
    def wavenumbers(self):
        return np.array([t.k for t in self.transitions])

    @property
    def strengths(self):
        return np.array([t.mu2 for t in self.transitions])

    def scaled(self, lam):
        """Model with k_m -> lam k_m and mu2 -> mu2 / lam**2 (alpha(k) -> alpha(k/lam)/lam**3)."""
        return AtomModel(self.name, tuple(Transition(t.k * lam, t.mu2 / lam**2) for t in self.transitions))


def alpha_imag(atom: AtomModel, u):
    """Polarizability at imaginary wavenumber ``k = i u`` (u >= 0); broadcasts over ``u``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("alpha_imag requires u >= 0")
    km = atom.wavenumbers
    mu2 = atom.strengths
    u2 = u[..., None] ** 2
    out = (2.0 / 3.0) * np.sum(km * mu2 / (km**2 + u2), axis=-1)
    return out if out.ndim else float(out)


def alpha_real(atom: AtomModel, k, pole_guard=1e-6):
    """Polarizability at real wavenumber ``k``.

    Even in ``k`` by construction.  Raises :class:`PoleProximityError` when
    ``|k| - k_m`` is within ``pole_guard * k_m`` of a transition; pass
    ``pole_guard=0`` to skip the check (quadrature nodes never sit on a pole).
    """
    k = np.asarray(k, dtype=float)
    km = atom.wavenumbers
    mu2 = atom.strengths
    kk = np.abs(k)[..., None]
    if pole_guard > 0:
        close = np.abs(kk - km) < pole_guard * km
        if np.any(close):
            idx = np.argwhere(close)[0]
            bad_k = float(k[tuple(idx[:-1])]) if k.ndim else float(k)
            raise PoleProximityError(bad_k, int(idx[-1]), float(km[idx[-1]]))
    out = (2.0 / 3.0) * np.sum(km * mu2 / (km**2 - kk**2), axis=-1)
    return out if out.ndim else float(out)


def static_polarizability(atom: AtomModel) -> float:
    return alpha_imag(atom, 0.0)


def polarizability_laurent(atom: AtomModel, p):
    """Split alpha(k) = r/(k - p) + regular(k) near ``p``; returns ``(r, regular(p))``.

    ``r`` is zero when ``p`` is not one of the atom's transitions.  The
    arithmetic follows the floating type of ``p`` (extended precision in,
    extended precision out).
    """
    ftype = np.result_type(np.asarray(p).dtype, np.float64).type
    p = ftype(p)
    r = ftype(0.0)
    reg = ftype(0.0)
    for t in atom.transitions:
        mu2, km = ftype(t.mu2), ftype(t.k)
        reg += mu2 / (3.0 * (p + km))
        if t.k == p:
            r -= mu2 / 3.0
        else:
            reg -= mu2 / (3.0 * (p - km))
    return r, reg


# --- atom-model documents -------------------------------------------------

_TOP_KEYS = {"name", "units", "transitions"}
_UNITS = {"reduced", "atomic"}


def parse_atom_model(text) -> AtomModel:
    """Parse a JSON atom-model document.

    Keys: ``name`` (string), ``units`` ("reduced" | "atomic", default
    "reduced") and ``transitions``, a list of objects.  With reduced units a
    transition is ``{"k": ..., "mu2": ...}``; with atomic units it is
    ``{"energy": <hartree>, "mu2": <e^2 a0^2>}``.  Unknown keys are rejected.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AtomModelError(f"malformed document: {exc}") from exc
    else:
        doc = text
    if not isinstance(doc, dict):
        raise AtomModelError("document must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise AtomModelError(f"unknown key(s) {sorted(unknown)}", sorted(unknown)[0])
    name = doc.get("name", "atom")
    if not isinstance(name, str):
        raise AtomModelError("must be a string", "name")
    units = doc.get("units", "reduced")
    if units not in _UNITS:
        raise AtomModelError(f"must be one of {sorted(_UNITS)}, got {units!r}", "units")
    raw = doc.get("transitions")
    if not isinstance(raw, list):
        raise AtomModelError("missing or not a list", "transitions")
    if not raw:
        raise AtomModelError("empty transition list", "transitions")

    energy_key = "k" if units == "reduced" else "energy"
    transitions = []
    for i, entry in enumerate(raw):
        path = f"transitions[{i}]"
        if not isinstance(entry, dict):
            raise AtomModelError("must be an object", path)
        extra = set(entry) - {energy_key, "mu2"}
        if extra:
            raise AtomModelError(f"unknown key(s) {sorted(extra)}", f"{path}.{sorted(extra)[0]}")
        for key in (energy_key, "mu2"):
            if key not in entry:
                raise AtomModelError("missing", f"{path}.{key}")
            val = entry[key]
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise AtomModelError(f"must be a number, got {val!r}", f"{path}.{key}")
            if not val > 0:
                raise AtomModelError(f"must be positive, got {val!r}", f"{path}.{key}")
        k = float(entry[energy_key])
        mu2 = float(entry["mu2"])
        if units == "atomic":
            k *= HARTREE_TO_WAVENUMBER
            mu2 *= DIPOLE2_AU_TO_REDUCED
        transitions.append(Transition(k, mu2))

    ks = sorted(t.k for t in transitions)
    for a, b in zip(ks, ks[1:]):
        if a == b:
            raise AtomModelError(f"duplicate transition at k={a!r}", "transitions")
    return AtomModel(name, tuple(transitions))


def serialize_atom_model(atom: AtomModel) -> str:
    """JSON document in reduced units; ``parse_atom_model`` inverts it exactly."""
    doc = {
        "name": atom.name,
        "units": "reduced",
        "transitions": [{"k": t.k, "mu2": t.mu2} for t in atom.transitions],
    }
    return json.dumps(doc, indent=2)


def load_atom_model(path) -> AtomModel:
    with open(path, encoding="utf-8") as fh:
        return parse_atom_model(fh.read())


def combined_poles(*atoms: Sequence[AtomModel]):
    """Sorted distinct transition wavenumbers of several atoms with their multiplicity."""
    counts = {}
    for atom in atoms:
        for t in atom.transitions:
            counts[t.k] = counts.get(t.k, 0) + 1
    return sorted(counts.items())
