import math
import warnings

import numpy as np
import pytest

from wavegate.errors import DegenerateIntensityError, UndefinedPhaseError
from wavegate.fieldmap import (
    FieldMode,
    assemble_state,
    comoving_z0,
    extract_channel,
    field_snapshot,
    free_evolution,
)


def wrap(x):
    return (x + math.pi) % (2 * math.pi) - math.pi


def test_snapshot_examples():
    m = FieldMode(0.3, -1.2, omega=2.0, beta=5.0)
    assert field_snapshot(m, 0, 0) == (0.3, -1.2)
    F = field_snapshot(FieldMode(1, 0, omega=1.0, beta=1.0), math.pi / 2, 0)
    assert abs(F[0]) < 1e-16 and F[1] == 1


def test_snapshot_intensity_invariant(rng):
    m = FieldMode(0.7, 1.9, omega=3.1, beta=0.4)
    for z, t in rng.uniform(-50, 50, size=(100, 2)):
        F1, F2 = field_snapshot(m, z, t)
        assert abs(F1**2 + F2**2 - (0.7**2 + 1.9**2)) < 1e-12


def test_extract_examples():
    assert extract_channel(FieldMode(1, 0), 0, 0) == (1, 0)
    with pytest.raises(UndefinedPhaseError):
        extract_channel(FieldMode(0, 0), 0, 0)


def test_fixed_z0_phase_advance(rng):
    m = FieldMode(0.4, 0.9, omega=1.7, beta=2.3)
    eps = 0.05
    for t in rng.uniform(0, 20, 50):
        _, p0 = extract_channel(m, 1.5, t)
        _, p1 = extract_channel(m, 1.5, t + eps)
        assert abs(wrap(p1 - p0 + m.omega * eps)) < 1e-12


def test_comoving_phase_constant(rng):
    m = FieldMode(0.4, 0.9, omega=1.7, beta=2.3)
    _, ref = extract_channel(m, comoving_z0(m, 0.0, 0.8), 0.0)
    for t in rng.uniform(0, 20, 50):
        _, p = extract_channel(m, comoving_z0(m, t, 0.8), t)
        assert abs(wrap(p - ref)) < 1e-12


def test_assemble_single_mode():
    modes = [FieldMode(0, 0), FieldMode(0.0, 2.0), FieldMode(0, 0), FieldMode(0, 0)]
    psi = assemble_state(modes).psi
    np.testing.assert_allclose(psi, [0, 1j, 0, 0], atol=1e-16)


def test_assemble_identical_modes():
    psi = assemble_state([FieldMode(0.3, 0.4)] * 4, t=1.3).psi
    np.testing.assert_allclose(np.abs(psi), 0.5, atol=1e-15)
    assert np.max(np.abs(psi - psi[0])) < 1e-15


def test_assemble_rejects_all_zero():
    with pytest.raises(DegenerateIntensityError):
        assemble_state([FieldMode(0, 0)] * 2)


def test_free_evolution_square(rng):
    modes = [FieldMode(*rng.normal(size=2), omega=1.3, beta=0.7) for _ in range(8)]
    eps = 0.21
    for t in rng.uniform(0, 10, 20):
        a = assemble_state(modes, "fixed", t)
        b = assemble_state(modes, "fixed", t + eps)
        assert np.max(np.abs(b.psi - free_evolution(modes, eps) @ a.psi)) < 1e-12


def test_conventions_differ_by_global_phase(rng):
    modes = [FieldMode(*rng.normal(size=2), omega=1.3, beta=0.7) for _ in range(8)]
    for t in rng.uniform(0, 10, 20):
        fixed = assemble_state(modes, "fixed", t, z0=0.5)
        co = assemble_state(modes, "co-moving", t, z0=0.5)
        assert abs(abs(np.vdot(fixed.psi, co.psi)) - 1) < 1e-12
        np.testing.assert_allclose(np.abs(fixed.psi) ** 2, np.abs(co.psi) ** 2, atol=1e-15)


def test_mixed_frequencies_warn():
    with pytest.warns(UserWarning):
        assemble_state([FieldMode(1, 0, omega=1.0), FieldMode(1, 0, omega=2.0)])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assemble_state([FieldMode(1, 0), FieldMode(0, 1)])
