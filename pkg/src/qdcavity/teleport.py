"""Single-qubit teleportation over a generated two-atom channel.

Two independent routes are provided: a gate-level density-matrix
simulation of the protocol (CNOT, Hadamard, projective measurement,
conditional Pauli correction) and a closed-form expression for Bob's
Bloch vector on the ee branch built directly from the manifold
amplitudes of the channel.  The closed form tracks the branch operator
scaled by twice its probability; which scaling reproduces the circuit is
established by compare_bob_conventions rather than assumed.
"""

from dataclasses import dataclass

import numpy as np

from .closedform import AmplitudeTable
from .exact import DensityMatrix, PhysicalityError, as_matrix
from .states import PAULI_X, PAULI_Z, bloch_vector

__all__ = [
    "OUTCOME_LABELS",
    "TeleportOutcome",
    "UnknownQubit",
    "average_fidelity",
    "circuit_teleport",
    "closed_form_bob",
    "compare_bob_conventions",
    "fidelity_overlap",
    "fidelity_paper",
]

OUTCOME_LABELS = ("ee", "eg", "ge", "gg")

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)

# Pauli correction per measurement outcome, fixed so the ideal maximally
# entangled channel (|ee> + |gg>)/sqrt(2) teleports perfectly on every
# branch.
_CORRECTIONS = {
    "ee": np.eye(2, dtype=complex),
    "eg": PAULI_X,
    "ge": PAULI_Z,
    "gg": PAULI_Z @ PAULI_X,
}


@dataclass(frozen=True)
class UnknownQubit:
    """Pure input state alpha|e> + beta|g> handed to the sender."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm_sq = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"input not normalised, |alpha|^2+|beta|^2={norm_sq!r}")

    @property
    def density(self) -> np.ndarray:
        ket = np.array([self.alpha, self.beta], dtype=complex)
        return np.outer(ket, ket.conj())

    @property
    def su(self) -> np.ndarray:
        """Bloch vector of the input: (2 Re(alpha beta*),
        2 Im(alpha beta*), |alpha|^2 - |beta|^2)."""
        z = complex(self.alpha) * np.conj(complex(self.beta))
        return np.array([2.0 * z.real, 2.0 * z.imag,
                         abs(self.alpha) ** 2 - abs(self.beta) ** 2])

    @classmethod
    def from_bloch(cls, su) -> "UnknownQubit":
        """Pure state with the given unit Bloch vector."""
        sx, sy, sz = (float(v) for v in np.asarray(su, dtype=float))
        norm = np.sqrt(sx * sx + sy * sy + sz * sz)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"pure input needs |su| = 1, got {norm!r}")
        alpha = np.sqrt(max((1.0 + sz) / 2.0, 0.0))
        if alpha < 1e-12:
            return cls(alpha=0.0, beta=1.0)
        beta = (sx - 1j * sy) / (2.0 * alpha)
        state = np.array([alpha, beta], dtype=complex)
        state = state / np.linalg.norm(state)
        return cls(alpha=complex(state[0]), beta=complex(state[1]))


@dataclass(frozen=True)
class TeleportOutcome:
    """One measurement branch: its probability, the receiver's corrected
    (normalised) state and its Bloch vector."""

    outcome_label: str
    probability: float
    bob_state: DensityMatrix
    sb: np.ndarray


def _cnot_control_first() -> np.ndarray:
    gate = np.zeros((4, 4), dtype=complex)
    gate[0, 0] = gate[1, 1] = 1.0  # control |e> (bit 0) leaves target alone
    gate[2, 3] = gate[3, 2] = 1.0  # control |g> flips the target
    return gate


def circuit_teleport(channel, unknown: UnknownQubit) -> list[TeleportOutcome]:
    """Run the full protocol on qubits (u, A, B) where (A, B) hold the
    channel: CNOT with u as control and A as target, Hadamard on u,
    measurement of (u, A) in the energy basis, then the branch's Pauli
    correction on B.  Returns all four branches; branch states are
    normalised.  A branch of zero probability carries the maximally
    mixed state."""
    rho_chan = as_matrix(channel)
    if rho_chan.shape != (4, 4):
        raise PhysicalityError(f"channel must be 4x4, got {rho_chan.shape}")
    if not isinstance(channel, DensityMatrix):
        DensityMatrix.from_matrix(rho_chan)

    # |e> is the CNOT-inactive control value, matching the correction
    # table above.
    cnot = _cnot_control_first()
    unitary = np.kron(np.kron(_HADAMARD, np.eye(2)), np.eye(2)) \
        @ np.kron(cnot, np.eye(2, dtype=complex))
    rho = unitary @ np.kron(unknown.density, rho_chan) @ unitary.conj().T

    outcomes = []
    for index, label in enumerate(OUTCOME_LABELS):
        rows = [2 * index, 2 * index + 1]
        block = rho[np.ix_(rows, rows)]
        probability = float(np.trace(block).real)
        if probability > 1e-14:
            bob = block / probability
        else:
            probability = max(probability, 0.0)
            bob = np.eye(2, dtype=complex) / 2.0
        correction = _CORRECTIONS[label]
        bob = correction @ bob @ correction.conj().T
        bob_state = DensityMatrix.from_matrix(bob, positivity="warn")
        outcomes.append(TeleportOutcome(
            outcome_label=label,
            probability=probability,
            bob_state=bob_state,
            sb=bloch_vector(bob_state),
        ))
    return outcomes


def closed_form_bob(unknown: UnknownQubit, table: AmplitudeTable) -> np.ndarray:
    """Receiver Bloch vector on the ee branch, assembled directly from
    the channel's manifold amplitudes.

    The sums carry the branch weight rather than being normalised: at
    t = 0 over a doubly-excited channel they give (0, 0, |beta|^2).
    """
    alpha, beta = complex(unknown.alpha), complex(unknown.beta)
    m = table.m

    pop = {i: table.population(i) for i in (1, 2, 3, 4)}
    ee_eg = table.correlation(1, 2, m)
    ge_gg = table.correlation(3, 4, m)
    ee_ge = table.correlation(1, 3, m)
    eg_gg = table.correlation(2, 4, m)
    ee_gg = table.correlation(1, 4, 2 * m)
    ge_eg = table.correlation(3, 2, 0)

    aa = abs(alpha) ** 2
    bb = abs(beta) ** 2
    ab = alpha * np.conj(beta)

    gg_ee = np.conj(ee_gg)
    sx = aa * 2.0 * ge_gg.real + bb * 2.0 * ee_eg.real \
        + 2.0 * (ab * (ge_eg + gg_ee)).real
    sy = aa * 2.0 * ge_gg.imag + bb * 2.0 * ee_eg.imag \
        + 2.0 * (ab * (ge_eg - gg_ee)).imag
    sz = aa * (pop[3] - pop[4]) + bb * (pop[1] - pop[2]) \
        + 2.0 * (np.conj(ab) * (ee_ge - eg_gg)).real
    return np.array([sx, sy, sz])


def fidelity_paper(su, sb) -> float:
    """Quarter-normalised overlap score (1 + su . sb)/4.  With this
    normalisation a perfectly teleported pure state scores 0.5."""
    return (1.0 + float(np.dot(np.asarray(su, dtype=float),
                               np.asarray(sb, dtype=float)))) / 4.0


def fidelity_overlap(unknown: UnknownQubit, bob_state) -> float:
    """Standard state overlap <psi_u| rho_B |psi_u> in [0, 1]."""
    rho = as_matrix(bob_state)
    ket = np.array([unknown.alpha, unknown.beta], dtype=complex)
    return float((ket.conj() @ rho @ ket).real)


def average_fidelity(outcomes: list[TeleportOutcome],
                     unknown: UnknownQubit) -> float:
    """Probability-weighted overlap fidelity across the four branches."""
    return float(sum(o.probability * fidelity_overlap(unknown, o.bob_state)
                     for o in outcomes))


def compare_bob_conventions(unknown: UnknownQubit, table: AmplitudeTable,
                            channel) -> dict:
    """Deviations of the closed-form receiver vector from the circuit's
    ee branch under the two candidate scalings of the branch state:
    'normalized' (unit trace) and 'unnormalized' (trace = twice the
    branch probability).  Exactly one should agree."""
    outcomes = circuit_teleport(channel, unknown)
    branch = outcomes[0]
    analytic = closed_form_bob(unknown, table)
    dev_normalized = float(np.max(np.abs(analytic - branch.sb)))
    carried = 2.0 * branch.probability * branch.sb
    dev_unnormalized = float(np.max(np.abs(analytic - carried)))
    return {
        "normalized": dev_normalized,
        "unnormalized": dev_unnormalized,
        "sb_closed_form": analytic,
        "probability": branch.probability,
    }
