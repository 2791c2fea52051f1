import math

import numpy as np
import pytest
from scipy.linalg import expm

from wavegate.errors import BranchAmbiguityError, ContractViolation
from wavegate.gates import BeamSplit, Switch, gate_matrix, generator_of_step
from wavegate.state import ComplexState, RealState, complex_form, is_compatible, real_embedding, standard_complex_structure, to_complex, to_real
from wavegate.wdynamics import (
    AntisymmetricGenerator,
    OrthogonalStep,
    antilinear_split,
    apply_orthogonal,
    embed_gate,
    generator,
    rotation_block,
    stochastic_gate,
)

from conftest import random_orthogonal, random_psi, random_unitary


def random_antisym(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return a - a.T


def test_identity_step(rng):
    q = to_real(ComplexState(random_psi(rng, 4)))
    np.testing.assert_array_equal(apply_orthogonal(OrthogonalStep(np.eye(8)), q).q, q.q)


def test_rotation_block_sign_layout():
    g = 0.3
    out = apply_orthogonal(OrthogonalStep(rotation_block(g)), RealState([1, 0]))
    np.testing.assert_allclose(out.q, [math.cos(g), -math.sin(g)], atol=1e-16)


def test_embedded_unitary_matches_complex(rng):
    u = random_unitary(rng, 4)
    psi = ComplexState(random_psi(rng, 4))
    out = apply_orthogonal(OrthogonalStep(real_embedding(u)), to_real(psi))
    np.testing.assert_allclose(out.q, to_real(ComplexState(u @ psi.psi)).q, atol=1e-14)


def test_dimension_mismatch():
    with pytest.raises(ContractViolation):
        apply_orthogonal(OrthogonalStep(np.eye(4)), RealState([1, 0]))


def test_generator_identity_and_rotation():
    assert np.max(np.abs(generator(OrthogonalStep(np.eye(4)), 0.5).w)) < 1e-15
    gam, eps = 0.8, 0.25
    w = generator(OrthogonalStep(rotation_block(gam)), eps).w
    np.testing.assert_allclose(w, (gam / eps) * np.array([[0, 1], [-1, 0]]), atol=1e-12)


def test_generator_round_trip(rng):
    for _ in range(20):
        w0 = random_antisym(rng, 8, 0.3)
        s = OrthogonalStep(expm(0.5 * w0))
        gen = generator(s, 0.5)
        assert np.max(np.abs(gen.w + gen.w.T)) < 1e-12
        assert np.max(np.abs(expm(0.5 * gen.w) - s.s)) < 1e-8
        assert np.max(np.abs(gen.step().s - s.s)) < 1e-8


def test_generator_branch_error():
    with pytest.raises(BranchAmbiguityError):
        generator(embed_gate(Switch(1, 2), 2))


def test_compatible_generator_matches_hamiltonian(rng):
    eps = 0.3
    for _ in range(10):
        u = expm(-1j * eps * (lambda h: h + h.conj().T)(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))) * 0.2)
        w = generator(OrthogonalStep(real_embedding(u)), eps).w
        wc = complex_form(w)
        hbar = generator_of_step(u, eps).h
        assert np.max(np.abs(1j * wc - (1j * wc).conj().T)) < 1e-10
        assert np.max(np.abs(1j * wc - hbar)) < 1e-8


def test_antilinear_split_examples(rng):
    cs = standard_complex_structure(4)
    lin, anti = antilinear_split(OrthogonalStep(real_embedding(random_unitary(rng, 4))), cs)
    assert np.max(np.abs(anti)) < 1e-12
    lin, anti = antilinear_split(OrthogonalStep(cs.K), cs)
    np.testing.assert_array_equal(lin, 0 * cs.K)
    np.testing.assert_array_equal(anti, cs.K)
    s = OrthogonalStep(random_orthogonal(rng, 8))
    lin, anti = antilinear_split(s, cs)
    assert np.max(np.abs(lin + anti - s.s)) < 1e-12
    assert np.max(np.abs(lin @ cs.I - cs.I @ lin)) < 1e-12
    assert np.max(np.abs(anti @ cs.I + cs.I @ anti)) < 1e-12


def test_compatibility_equivalences(rng):
    cs = standard_complex_structure(4)
    for s in [real_embedding(random_unitary(rng, 4)), random_orthogonal(rng, 8), cs.K]:
        _, anti = antilinear_split(OrthogonalStep(s), cs)
        compat = is_compatible(s, cs)
        assert compat == (np.max(np.abs(anti)) < 1e-10)
        agrees = True
        uc = complex_form(s)
        for _ in range(20):
            psi = ComplexState(random_psi(rng, 4))
            got = to_complex(RealState(s @ to_real(psi).q)).psi
            agrees &= np.max(np.abs(got - uc @ psi.psi)) < 1e-10
        assert compat == agrees


def test_stochastic_gates_orthogonal_and_reproducible():
    for seed in range(50):
        for kind, ch in (("phase", [1, 3, 4]), ("beam_split", [2, 4])):
            s = stochastic_gate(kind, ch, 4, seed).s
            assert np.max(np.abs(s.T @ s - np.eye(8))) < 1e-12
            np.testing.assert_array_equal(s, stochastic_gate(kind, ch, 4, seed).s)


def test_stochastic_compatibility():
    cs = standard_complex_structure(4)
    assert is_compatible(stochastic_gate("beam_split", [1, 2], 4, 0).s, cs)
    assert not is_compatible(stochastic_gate("beam_split", [1, 2], 4, 0, compatible=False).s, cs)


def test_long_stochastic_sequence_preserves_norm(rng):
    q = to_real(ComplexState(random_psi(rng, 4))).q
    r = np.random.default_rng(9)
    for _ in range(1000):
        a, b = (int(x) for x in r.choice([1, 2, 3, 4], 2, replace=False))
        q = stochastic_gate("beam_split", [a, b], 4, r, compatible=bool(r.integers(2))).s @ q
    assert abs(np.linalg.norm(q) - 1) < 1e-9


def test_reversibility(rng):
    q = to_real(ComplexState(random_psi(rng, 8))).q
    steps = [random_orthogonal(rng, 16) for _ in range(50)]
    out = q
    for s in steps:
        out = s @ out
    for s in reversed(steps):
        out = s.T @ out
    assert np.max(np.abs(out - q)) < 1e-10


def test_block_rotation_conserves_pair_intensity(rng):
    gam = rng.uniform(0, 2 * np.pi, 4)
    s = np.zeros((8, 8))
    for a, g in enumerate(gam):
        s[2 * a:2 * a + 2, 2 * a:2 * a + 2] = rotation_block(g)
    q = to_real(ComplexState(random_psi(rng, 4))).q
    out = s @ q
    np.testing.assert_allclose(out[0::2] ** 2 + out[1::2] ** 2, q[0::2] ** 2 + q[1::2] ** 2, atol=1e-15)
    # block rotation by gamma is multiplication by exp(-i gamma)
    np.testing.assert_allclose(complex_form(s), np.diag(np.exp(-1j * gam)), atol=1e-15)


def test_invalid_types():
    with pytest.raises(ContractViolation):
        OrthogonalStep(2 * np.eye(2))
    with pytest.raises(ContractViolation):
        AntisymmetricGenerator(np.eye(2), 1.0)
