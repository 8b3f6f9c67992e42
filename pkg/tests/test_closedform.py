import math

import numpy as np
import pytest

from qdcavity import (
    AtomicInitialState,
    HamiltonianSpec,
    Propagator,
    UnsupportedConfigurationError,
    amplitude_quadruple,
    amplitude_table,
    choose_cutoff,
    coherent_weights,
    compose,
    decompose,
    evolved_bloch,
    initial_bloch,
    initial_composite_state,
    reduced_atomic_state,
)
from conftest import random_ket


def excited_pair():
    return AtomicInitialState(1.0, 0.0, 0.0, 0.0)


def standard_config(q=0.9, m=1, nbar=10.0):
    cutoff = choose_cutoff(nbar, m)
    field = coherent_weights(nbar, cutoff)
    spec = HamiltonianSpec.resonant(1.0, m=m, q=q)
    return field, spec


def random_atoms(rng):
    return AtomicInitialState(*random_ket(rng, 4))


class TestInitialBloch:
    def test_doubly_excited(self):
        state = initial_bloch(excited_pair())
        np.testing.assert_allclose(state.s, [0, 0, 1], atol=1e-14)
        np.testing.assert_allclose(state.t, [0, 0, 1], atol=1e-14)
        np.testing.assert_allclose(state.cross, np.diag([0, 0, 1]), atol=1e-14)

    def test_single_excitation(self):
        state = initial_bloch(AtomicInitialState(0, 1.0, 0, 0))
        assert state.s[2] == 1.0
        assert state.t[2] == -1.0
        assert state.cross[2, 2] == -1.0

    def test_bell_combination(self):
        amp = 1.0 / math.sqrt(2.0)
        state = initial_bloch(AtomicInitialState(amp, 0, 0, amp))
        np.testing.assert_allclose(state.s, [0, 0, 0], atol=1e-14)
        np.testing.assert_allclose(state.t, [0, 0, 0], atol=1e-14)
        np.testing.assert_allclose(state.cross, np.diag([1, -1, 1]), atol=1e-14)

    def test_matches_pauli_decomposition(self, rng):
        # The explicit products must agree with tracing the projector
        # against the Pauli basis.
        for _ in range(20):
            atoms = random_atoms(rng)
            ket = atoms.vector
            reference = decompose(np.outer(ket, ket.conj()))
            state = initial_bloch(atoms)
            np.testing.assert_allclose(state.s, reference.s, atol=1e-12)
            np.testing.assert_allclose(state.t, reference.t, atol=1e-12)
            np.testing.assert_allclose(state.cross, reference.cross, atol=1e-12)


class TestAmplitudeQuadruple:
    def test_initial_values(self):
        field, spec = standard_config()
        atoms = AtomicInitialState.normalized(0.8, 0.4, 0.3, 0.2)
        for n in (0, 3, 10):
            quad = amplitude_quadruple(n, 0.0, atoms, field, spec)
            assert quad.c1 == pytest.approx(atoms.a1 * field.amplitude(n))
            assert quad.c2 == pytest.approx(atoms.a2 * field.amplitude(n + 1))
            assert quad.c3 == pytest.approx(atoms.a3 * field.amplitude(n + 1))
            assert quad.c4 == pytest.approx(atoms.a4 * field.amplitude(n + 2))

    def test_vacuum_rabi_law(self):
        field = coherent_weights(0.0, 2)
        spec = HamiltonianSpec.resonant(1.0, m=1, q=1.0)
        for t in np.linspace(0.0, 12.0, 97):
            quad = amplitude_quadruple(0, t, excited_pair(), field, spec)
            law = 1.0 - (2.0 / 3.0) * math.sin(math.sqrt(1.5) * t) ** 2
            assert abs(quad.c1 - law) < 1e-12
            assert quad.weight == pytest.approx(1.0, abs=1e-12)

    def test_rejects_index_below_tail(self):
        field, spec = standard_config(m=2)
        with pytest.raises(ValueError):
            amplitude_quadruple(-5, 1.0, excited_pair(), field, spec)

    def test_rejects_asymmetric_couplings(self):
        field, _ = standard_config()
        lopsided = HamiltonianSpec(1.0, 1.2, 1, 0.9)
        with pytest.raises(UnsupportedConfigurationError, match="exact"):
            amplitude_quadruple(0, 1.0, excited_pair(), field, lopsided)

    def test_rejects_detuning(self):
        field, _ = standard_config()
        detuned = HamiltonianSpec(1.0, 1.0, 1, 0.9, detuning=0.3,
                                  field_freq=2.0)
        with pytest.raises(UnsupportedConfigurationError, match="exact"):
            amplitude_table(1.0, excited_pair(), field, detuned)


class TestNormalization:
    @pytest.mark.parametrize("m", [1, 2])
    @pytest.mark.parametrize("q", [0.0, 0.5, 0.9, 1.0])
    def test_total_weight_is_one(self, rng, q, m):
        # This identity is what fixes the sin(2 mu t)/(2 mu) denominator:
        # the printed extra 1/t factor would destroy it for t > 0.
        field, spec = standard_config(q=q, m=m)
        for atoms in (excited_pair(), random_atoms(rng)):
            for t in np.linspace(0.0, 10.0, 21):
                table = amplitude_table(t, atoms, field, spec)
                assert table.total_weight == pytest.approx(1.0, abs=1e-9)

    def test_tail_manifolds_carry_the_low_fock_states(self, rng):
        # With general amplitudes the eg/ge/gg populations on Fock states
        # below m live in the negative-index manifolds; dropping them
        # would lose about W_0^2 of weight at nbar = 10.
        field, spec = standard_config()
        atoms = AtomicInitialState.normalized(0.0, 1.0, 1.0, 1.0)
        table = amplitude_table(2.0, atoms, field, spec)
        assert table.n_min == -2
        tail_weight = sum(table.quadruple(n).weight
                          for n in range(table.n_min, 0))
        assert tail_weight > 1e-6


class TestEvolvedBloch:
    def test_matches_initial_at_t_zero(self, rng):
        field, spec = standard_config()
        for _ in range(10):
            atoms = random_atoms(rng)
            evolved = evolved_bloch(0.0, atoms, field, spec)
            start = initial_bloch(atoms)
            np.testing.assert_allclose(evolved.s, start.s, atol=1e-10)
            np.testing.assert_allclose(evolved.t, start.t, atol=1e-10)
            np.testing.assert_allclose(evolved.cross, start.cross, atol=1e-10)

    def test_exchange_symmetry(self):
        # Identical couplings and a2 = a3 keep the two atoms equivalent.
        field, spec = standard_config(q=0.5)
        atoms = AtomicInitialState.normalized(0.6, 0.4, 0.4, 0.2)
        for t in np.linspace(0.0, 8.0, 17):
            state = evolved_bloch(t, atoms, field, spec)
            np.testing.assert_allclose(state.s, state.t, atol=1e-12)

    def test_agrees_with_exact_engine_random_state(self, rng):
        # Spot check with a general initial state (the doubly-excited
        # sweep is covered by the acceptance grid).
        field, spec = standard_config(q=0.9)
        atoms = random_atoms(rng)
        initial = initial_composite_state(atoms, field)
        prop = Propagator(spec, field.cutoff)
        for t in (0.5, 2.0, 7.5):
            analytic = evolved_bloch(t, atoms, field, spec)
            reference = decompose(reduced_atomic_state(prop.evolve(initial, t)))
            np.testing.assert_allclose(analytic.s, reference.s, atol=1e-8)
            np.testing.assert_allclose(analytic.t, reference.t, atol=1e-8)
            np.testing.assert_allclose(analytic.cross, reference.cross,
                                       atol=1e-8)

    def test_reconstructed_density_is_physical(self):
        field, spec = standard_config(q=0.5, m=2)
        for t in np.linspace(0.0, 10.0, 11):
            rho = compose(evolved_bloch(t, excited_pair(), field, spec))
            assert rho.warnings == ()
            eigvals = np.linalg.eigvalsh(rho.matrix)
            assert eigvals[0] > -1e-9

    def test_bloch_norms_bounded(self):
        field, spec = standard_config(q=0.9, m=2)
        for t in np.linspace(0.0, 10.0, 21):
            state = evolved_bloch(t, excited_pair(), field, spec)
            assert np.linalg.norm(state.s) <= 1.0 + 1e-9
            assert np.linalg.norm(state.t) <= 1.0 + 1e-9
