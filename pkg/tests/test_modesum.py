import math

import numpy as np
import pytest

from casimir_polder.atoms import AtomModel, PoleProximityError, alpha_real
from casimir_polder.correlation import Mode, mode_polarization
from casimir_polder.modesum import (
    BoxConfig,
    ModeBudgetError,
    box_energy,
    box_sweep,
    dressed_expectation,
    enumerate_modes,
    interaction_energy_box,
    two_photon_amplitude,
)
from casimir_polder.potential import cp_imagfreq_oracle


@pytest.fixture
def high_atom():
    # transition above every mode of the small test boxes: alpha(k) > 0 on the grid
    return AtomModel.two_level(2.0, 1.0)


def test_mode_count_example():
    modes = enumerate_modes(BoxConfig(2 * math.pi, 1.5, (0, 0, 0)))
    assert len(modes) == 36
    norms = sorted({round(m.k, 12) for m in modes})
    assert norms == [1.0, round(math.sqrt(2), 12)]


def test_half_offset_has_no_zero_mode():
    modes = enumerate_modes(BoxConfig(2 * math.pi, 1.0))
    assert len(modes) == 16 and min(m.k for m in modes) == pytest.approx(math.sqrt(3) / 2)


def test_enumeration_is_deterministic():
    box = BoxConfig(7.0, 3.0, (0.5, 0.5, 0.5))
    a, b = enumerate_modes(box), enumerate_modes(box)
    assert all(np.array_equal(x.k_vec, y.k_vec) and x.polarization == y.polarization for x, y in zip(a, b))
    assert [m.polarization for m in a[:4]] == [1, 2, 1, 2]


def test_enumeration_errors():
    with pytest.raises(ValueError):
        enumerate_modes(BoxConfig(2 * math.pi, 0.5))
    with pytest.raises(ModeBudgetError):
        enumerate_modes(BoxConfig(50.0, 5.0), budget=1000)
    with pytest.raises(ValueError):
        BoxConfig(1.0, 1.0, (0.5, 1.0, 0.0))
    with pytest.raises(ValueError):
        BoxConfig(-1.0, 1.0)


def test_two_photon_amplitude(high_atom):
    box = BoxConfig(6.0, 3.0)
    m1, m2 = Mode([0.3, 0.0, 1.1], 1), Mode([0.0, -0.7, 0.5], 2)
    r_A = np.array([0.1, 0.2, -0.3])
    amp = two_photon_amplitude(box, high_atom, r_A, m1, m2)
    k1, k2 = m1.k, m2.k
    e1, e2 = mode_polarization(m1), mode_polarization(m2)
    expected = (-(math.pi / box.volume) * alpha_real(high_atom, k1) * np.dot(e1, e2)
                * math.sqrt(k1 * k2) / (k1 + k2) * np.exp(-1j * np.dot(m1.k_vec + m2.k_vec, r_A)))
    assert amp.amplitude == pytest.approx(expected, rel=1e-14)
    assert amp.mode1 is m1 and amp.mode2 is m2


def test_dressed_expectation_single_term(high_atom):
    # hand expansion with a single k' term
    box = BoxConfig(6.0, 3.0)
    probe = Mode([0.0, 0.0, 1.0], 1)       # e = x
    other = Mode([1.0, 0.0, 1.0], 2)
    modes = [probe, other]
    R = np.array([0.2, -0.4, 1.3])
    V = box.volume

    def term(m):
        k, kp = probe.k, m.k
        ee = np.dot(mode_polarization(probe), mode_polarization(m))
        w = k * kp / (k + kp) * (alpha_real(high_atom, k) + alpha_real(high_atom, kp)) * ee**2
        return 2 * (2 * math.pi**2 / V**2) * w * math.cos(np.dot(probe.k_vec + m.k_vec, R))

    got = dressed_expectation(box, high_atom, [0, 0, 0], probe, R, modes=modes)
    assert got == pytest.approx(term(probe) + term(other), rel=1e-13)
    with pytest.raises(ValueError):
        dressed_expectation(box, high_atom, [0, 0, 0], Mode([5.0, 0, 0], 1), R, modes=modes)


def test_dressed_expectation_coincident_points_positive(high_atom):
    box = BoxConfig(6.0, 1.9)  # every mode below the transition at k = 2
    modes = enumerate_modes(box)
    vals = [dressed_expectation(box, high_atom, [0, 0, 0], m, [0, 0, 0], modes=modes) for m in modes[:10]]
    assert all(v > 0 for v in vals)


def test_pole_on_grid_is_reported():
    box = BoxConfig(2 * math.pi, 1.5, (0, 0, 0))
    modes = enumerate_modes(box)
    with pytest.raises(PoleProximityError):
        dressed_expectation(box, AtomModel.two_level(1.0, 1.0), [0, 0, 0], modes[0], [0, 0, 1], modes=modes)


def test_shell_path_matches_mode_list(two_level, other_two_level):
    box = BoxConfig(8.0, 5.0)
    shells = box_energy(box, two_level, other_two_level, 2.0)
    assert shells.path == "shells"
    # moving R off the axis by rounding-level amounts forces the explicit path
    explicit = box_energy(box, two_level, other_two_level, [0.0, 1e-300, 2.0])
    assert explicit.path == "modes"
    assert explicit.energy == pytest.approx(shells.energy, rel=1e-12)
    assert explicit.mode_count == shells.mode_count
    along_x = box_energy(box, two_level, other_two_level, [2.0, 0.0, 0.0]).energy
    assert along_x == pytest.approx(shells.energy, rel=1e-14)


def test_polarization_rule_independence(two_level):
    box = BoxConfig(8.0, 5.0)
    R = [0.3, 1.2, 1.0]
    a = interaction_energy_box(box, two_level, two_level, R, rule="z-cross")
    b = interaction_energy_box(box, two_level, two_level, R, rule="x-cross")
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("kernel", ["causal", "literal"])
def test_exchange_symmetry(kernel, two_level, other_two_level):
    box = BoxConfig(8.0, 4.0)
    R = [0.3, 1.2, 1.0]
    ab = interaction_energy_box(box, two_level, other_two_level, R, kernel=kernel)
    ba = interaction_energy_box(box, other_two_level, two_level, R, kernel=kernel)
    assert ab == pytest.approx(ba, rel=1e-10)


def test_attractive(two_level):
    for R in (0.5, 1.0, 2.0, 4.0):
        assert interaction_energy_box(BoxConfig(10 * R, 100 / R), two_level, two_level, R) < 0


def test_rotation_anisotropy_report(two_level):
    # 90 degrees about the x axis maps z to y: identical on the cubic lattice
    box = BoxConfig(12.0, 50.0)
    ez = interaction_energy_box(box, two_level, two_level, [0, 0, 1.0])
    ey = interaction_energy_box(box, two_level, two_level, [0, 1.0, 0])
    assert ey == pytest.approx(ez, rel=5e-3)


def test_sweep_converges(two_level):
    ref = cp_imagfreq_oracle(two_level, two_level, 2.0).energy
    rows = box_sweep(two_level, two_level, 2.0, [10.0, 20.0], ref)
    assert rows[1].deviation < rows[0].deviation < 1e-2


def test_unresolved_box_rejected(two_level):
    with pytest.raises(ValueError, match="too few mode shells"):
        interaction_energy_box(BoxConfig(2 * math.pi, 1.5), two_level, two_level, 1.0)
    with pytest.raises(ValueError):
        interaction_energy_box(BoxConfig(8.0, 5.0), two_level, two_level, 1.0, kernel="other")
