"""Two-qubit state analysis: Bloch/dyadic decomposition, purity, the
entanglement-dyadic measure and Werner-form detection.

Axis convention: the y Pauli matrix is taken as [[0, i], [-i, 0]], the
mirror image of the more common sign.  All Bloch components, dyadic
elements and teleportation formulas in this package follow that
convention consistently; rotation-invariant quantities (purity, the
entanglement degree, fidelities, negativity) are unaffected by it.
"""

from dataclasses import dataclass

import numpy as np

from .exact import DensityMatrix, PhysicalityError, as_matrix

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "TwoQubitBlochState",
    "WernerParameters",
    "bloch_vector",
    "compose",
    "decompose",
    "entanglement_degree",
    "negativity",
    "purity",
    "werner_parameters",
]

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)
_ID2 = np.eye(2, dtype=complex)

# Operator tables for the linear (de)composition maps.
_FIRST_OPS = [np.kron(p, _ID2) for p in _PAULIS]
_SECOND_OPS = [np.kron(_ID2, p) for p in _PAULIS]
_CROSS_OPS = [[np.kron(pi, pj) for pj in _PAULIS] for pi in _PAULIS]


@dataclass(frozen=True)
class TwoQubitBlochState:
    """Bloch vectors s (first atom), t (second atom) and the 3x3 cross
    dyadic of joint Pauli correlations."""

    s: np.ndarray
    t: np.ndarray
    cross: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        t = np.asarray(self.t, dtype=float)
        cross = np.asarray(self.cross, dtype=float)
        if s.shape != (3,) or t.shape != (3,) or cross.shape != (3, 3):
            raise ValueError("expected two 3-vectors and one 3x3 matrix")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "cross", cross)


@dataclass(frozen=True)
class WernerParameters:
    """Diagonal dyadic components of a Werner-form candidate plus the
    residual weight sitting outside that form."""

    x1: float
    x2: float
    x3: float
    is_werner: bool
    residual: float


def decompose(rho) -> TwoQubitBlochState:
    """Pauli expectation values of a physical 4x4 density matrix:
    s_i = tr(rho sigma_i x 1), t_i = tr(rho 1 x tau_i),
    C_ij = tr(rho sigma_i x tau_j)."""
    mat = as_matrix(rho)
    if mat.shape != (4, 4):
        raise PhysicalityError(f"expected a 4x4 matrix, got {mat.shape}")
    if not isinstance(rho, DensityMatrix):
        DensityMatrix.from_matrix(mat, positivity="warn")
    s = np.array([np.trace(mat @ op).real for op in _FIRST_OPS])
    t = np.array([np.trace(mat @ op).real for op in _SECOND_OPS])
    cross = np.array(
        [[np.trace(mat @ _CROSS_OPS[i][j]).real for j in range(3)]
         for i in range(3)]
    )
    return TwoQubitBlochState(s=s, t=t, cross=cross)


def compose(state: TwoQubitBlochState) -> DensityMatrix:
    """Inverse of decompose: rho = (1 + s.sigma + t.tau + sigma.C.tau)/4.

    Hermiticity and unit trace hold by construction; positivity is
    checked but only recorded as a warning on the result, since callers
    may legitimately build trial states outside the physical set.
    """
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho = rho + state.s[i] * _FIRST_OPS[i] + state.t[i] * _SECOND_OPS[i]
        for j in range(3):
            rho = rho + state.cross[i, j] * _CROSS_OPS[i][j]
    return DensityMatrix.from_matrix(rho / 4.0, positivity="warn")


def purity(state: TwoQubitBlochState) -> float:
    """tr(rho^2) = (1 + |s|^2 + |t|^2 + ||C||_F^2)/4, in [1/4, 1]."""
    return (1.0 + float(state.s @ state.s) + float(state.t @ state.t)
            + float(np.sum(state.cross * state.cross))) / 4.0


def entanglement_degree(state: TwoQubitBlochState) -> float:
    """Squared Frobenius norm of the entanglement dyadic E = C - s t^T.

    Zero for every product state and 3 for a maximally entangled one.
    Positive values certify correlation beyond the product of the local
    Bloch vectors, which for classically correlated mixtures is not the
    same as entanglement; see negativity() for a standard cross-check.
    """
    excess = state.cross - np.outer(state.s, state.t)
    return float(np.sum(excess * excess))


def werner_parameters(state: TwoQubitBlochState,
                      tol: float = 1e-6) -> WernerParameters:
    """Detect the Werner form rho = (1 + sum_i x_i sigma_i tau_i)/4.

    The residual is the largest magnitude among both Bloch vectors and
    the off-diagonal dyadic entries; the state is within the form when
    the residual stays below tol.
    """
    off = state.cross - np.diag(np.diag(state.cross))
    residual = max(
        float(np.max(np.abs(state.s))),
        float(np.max(np.abs(state.t))),
        float(np.max(np.abs(off))),
    )
    diag = np.diag(state.cross)
    return WernerParameters(
        x1=float(diag[0]),
        x2=float(diag[1]),
        x3=float(diag[2]),
        is_werner=residual < tol,
        residual=residual,
    )


def negativity(rho) -> float:
    """Standard negativity: absolute sum of the negative eigenvalues of
    the partial transpose over the second qubit.  This is not the
    entanglement-dyadic measure; it is emitted alongside it as an
    independent sanity channel."""
    mat = as_matrix(rho)
    if mat.shape != (4, 4):
        raise PhysicalityError(f"expected a 4x4 matrix, got {mat.shape}")
    tensor = mat.reshape(2, 2, 2, 2)
    partial = tensor.transpose(0, 3, 2, 1).reshape(4, 4)
    eigvals = np.linalg.eigvalsh((partial + partial.conj().T) / 2.0)
    return float(-np.sum(eigvals[eigvals < 0.0]))


def bloch_vector(rho) -> np.ndarray:
    """Single-qubit Bloch vector (same y-axis convention as above)."""
    mat = as_matrix(rho)
    if mat.shape != (2, 2):
        raise PhysicalityError(f"expected a 2x2 matrix, got {mat.shape}")
    return np.array([np.trace(mat @ p).real for p in _PAULIS])
