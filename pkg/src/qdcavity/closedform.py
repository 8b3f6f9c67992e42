"""Analytic solution of the resonant, equal-coupling dynamics.

Each excitation manifold {|ee,n>, |eg,n+m>, |ge,n+m>, |gg,n+2m>} evolves
under a fixed 4x4 block whose exponential is known in closed form; the
four manifold amplitudes are assembled here directly, and the reduced
two-atom state follows by summing shifted amplitude products over n.

The manifold index runs from -2m: indices -2m..-m-1 hold the frozen
ground states |gg, n+2m> with too few photons to climb, and -m..-1 hold
the three-level tail {|eg,n+m>, |ge,n+m>, |gg,n+2m>} missing its
doubly-excited head.  Couplings to missing states are zero there, which
keeps the same formulas valid and makes the table exhaust the whole
truncated space (total weight 1 for any initial state).
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import FieldSpec, ladder_couplings, q_factorial_ratio
from .exact import AtomicInitialState, HamiltonianSpec
from .states import TwoQubitBlochState

__all__ = [
    "AmplitudeQuadruple",
    "AmplitudeTable",
    "UnsupportedConfigurationError",
    "amplitude_quadruple",
    "amplitude_table",
    "evolved_bloch",
    "initial_bloch",
]


class UnsupportedConfigurationError(ValueError):
    """Raised when a configuration falls outside the closed form."""


def _require_closed_form(spec: HamiltonianSpec):
    if not spec.symmetric_resonant:
        raise UnsupportedConfigurationError(
            "the closed form holds only for equal couplings at zero "
            "detuning; use the exact propagator engine for "
            f"lambda1={spec.lambda1}, lambda2={spec.lambda2}, "
            f"detuning={spec.detuning}"
        )


@dataclass(frozen=True)
class AmplitudeQuadruple:
    """Amplitudes of one manifold: c1 on |ee,n>, c2 on |eg,n+m>,
    c3 on |ge,n+m>, c4 on |gg,n+2m>."""

    n: int
    c1: complex
    c2: complex
    c3: complex
    c4: complex

    @property
    def weight(self) -> float:
        return (abs(self.c1) ** 2 + abs(self.c2) ** 2
                + abs(self.c3) ** 2 + abs(self.c4) ** 2)


class AmplitudeTable:
    """Amplitude quadruples for every manifold index in [-2m, n_top]."""

    def __init__(self, m: int, n_top: int, c: np.ndarray):
        self.m = m
        self.n_min = -2 * m
        self.n_top = n_top
        self.c = c  # shape (4, n_top + 2m + 1), row i holds c^(i+1)

    def _idx(self, n: int) -> int:
        return n - self.n_min

    def quadruple(self, n: int) -> AmplitudeQuadruple:
        if not (self.n_min <= n <= self.n_top):
            raise IndexError(f"manifold index {n} outside table range")
        i = self._idx(n)
        return AmplitudeQuadruple(n, *(self.c[row, i] for row in range(4)))

    def correlation(self, i: int, j: int, shift: int) -> complex:
        """sum_n c^(i)_n conj(c^(j)_{n-shift}) with shift >= 0."""
        ci = self.c[i - 1]
        cj = self.c[j - 1]
        if shift == 0:
            return complex(np.sum(ci * np.conj(cj)))
        return complex(np.sum(ci[shift:] * np.conj(cj[:-shift])))

    def population(self, i: int) -> float:
        """sum_n |c^(i)_n|^2."""
        ci = self.c[i - 1]
        return float(np.sum(ci.real**2 + ci.imag**2))

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.c.real**2 + self.c.imag**2))


def initial_bloch(atoms: AtomicInitialState) -> TwoQubitBlochState:
    """Bloch vectors and cross dyadic of the pure two-atom input, written
    out as the explicit amplitude products."""
    a1, a2, a3, a4 = atoms.amplitudes

    def re2(x, y):
        return 2.0 * (x * np.conj(y)).real

    def im2(x, y):
        return 2.0 * (x * np.conj(y)).imag

    s = np.array([
        re2(a1, a3) + re2(a2, a4),
        im2(a1, a3) + im2(a2, a4),
        abs(a1) ** 2 + abs(a2) ** 2 - abs(a3) ** 2 - abs(a4) ** 2,
    ])
    t = np.array([
        re2(a1, a2) + re2(a3, a4),
        im2(a1, a2) + im2(a3, a4),
        abs(a1) ** 2 - abs(a2) ** 2 + abs(a3) ** 2 - abs(a4) ** 2,
    ])
    cross = np.array([
        [re2(a1, a4) + re2(a2, a3),
         im2(a1, a4) - im2(a2, a3),
         re2(a1, a3) - re2(a2, a4)],
        [im2(a1, a4) + im2(a2, a3),
         re2(a2, a3) - re2(a1, a4),
         im2(a1, a3) - im2(a2, a4)],
        [re2(a1, a2) - re2(a3, a4),
         im2(a1, a2) - im2(a3, a4),
         abs(a1) ** 2 - abs(a2) ** 2 - abs(a3) ** 2 + abs(a4) ** 2],
    ])
    return TwoQubitBlochState(s=s, t=t, cross=cross)


@functools.lru_cache(maxsize=128)
def _cached_couplings(n_lo: int, n_hi: int, m: int, lam: float,
                      q_value: float):
    """nu1, nu2, mu per manifold index in [n_lo, n_hi]; couplings to
    states that do not exist (negative photon numbers) are zero.  The
    arrays are shared read-only across sweep points."""
    count = n_hi - n_lo + 1
    nu1 = np.zeros(count)
    nu2 = np.zeros(count)
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        if n >= 0:
            couplings = ladder_couplings(n, m, lam, q_value)
            nu1[i] = couplings.nu1
            nu2[i] = couplings.nu2
        elif n >= -m:
            nu2[i] = lam * math.sqrt(q_factorial_ratio(n + m, m, q_value))
    mu = np.sqrt((nu1 * nu1 + nu2 * nu2) / 2.0)
    for arr in (nu1, nu2, mu):
        arr.setflags(write=False)
    return nu1, nu2, mu


def _coupling_arrays(n_values: np.ndarray, m: int, lam: float,
                     q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    q_value = q.q if hasattr(q, "q") else float(q)
    return _cached_couplings(int(n_values[0]), int(n_values[-1]), m, lam,
                             q_value)


def _amplitude_arrays(t: float, atoms: AtomicInitialState, field: FieldSpec,
                      spec: HamiltonianSpec, n_values: np.ndarray) -> np.ndarray:
    a1, a2, a3, a4 = atoms.amplitudes
    m = spec.m
    w = field.weights

    def w_at(offsets: np.ndarray) -> np.ndarray:
        out = np.zeros(offsets.shape)
        ok = (offsets >= 0) & (offsets <= field.cutoff)
        out[ok] = w[offsets[ok]]
        return out

    w_n = w_at(n_values)
    w_nm = w_at(n_values + m)
    w_n2m = w_at(n_values + 2 * m)

    nu1, nu2, mu = _coupling_arrays(n_values, m, spec.lambda1, spec.q)

    # Frozen manifolds have mu = 0; there sin(2 mu t)/(2 mu) -> t and
    # sin^2(mu t)/mu^2 -> t^2, both multiplied by vanishing couplings.
    mu_safe = np.where(mu > 0.0, mu, 1.0)
    half_rabi = np.where(mu > 0.0, np.sin(2.0 * mu_safe * t) / (2.0 * mu_safe), t)
    swap = np.where(mu > 0.0, (np.sin(mu_safe * t) / mu_safe) ** 2, t * t)
    cos_sq = np.cos(mu * t) ** 2
    sin_sq = np.sin(mu * t) ** 2

    drive = a1 * nu1 * w_n + a4 * nu2 * w_n2m
    c1 = a1 * w_n - nu1 * drive * swap \
        - 1j * nu1 * (a2 + a3) * w_nm * half_rabi
    c2 = w_nm * (a2 * cos_sq - a3 * sin_sq) - 1j * drive * half_rabi
    c3 = w_nm * (a3 * cos_sq - a2 * sin_sq) - 1j * drive * half_rabi
    c4 = a4 * w_n2m - nu2 * drive * swap \
        - 1j * nu2 * (a2 + a3) * w_nm * half_rabi
    return np.vstack([c1, c2, c3, c4])


def amplitude_table(t: float, atoms: AtomicInitialState, field: FieldSpec,
                    spec: HamiltonianSpec) -> AmplitudeTable:
    """All manifold amplitudes at time t.

    Valid only for equal couplings at zero detuning; anything else must
    go through the exact propagator.
    """
    _require_closed_form(spec)
    m = spec.m
    n_top = field.cutoff - 2 * m
    if n_top < 0:
        raise UnsupportedConfigurationError(
            f"cutoff {field.cutoff} below one manifold span 2m = {2 * m}"
        )
    n_values = np.arange(-2 * m, n_top + 1)
    c = _amplitude_arrays(t, atoms, field, spec, n_values)
    return AmplitudeTable(m=m, n_top=n_top, c=c)


def amplitude_quadruple(n: int, t: float, atoms: AtomicInitialState,
                        field: FieldSpec,
                        spec: HamiltonianSpec) -> AmplitudeQuadruple:
    """Amplitudes of manifold n at time t (n may reach down to -2m for
    the headless tail manifolds)."""
    _require_closed_form(spec)
    if n < -2 * spec.m:
        raise ValueError(f"no manifold below index {-2 * spec.m}, got {n}")
    c = _amplitude_arrays(t, atoms, field, spec, np.array([n]))
    return AmplitudeQuadruple(n, *(c[row, 0] for row in range(4)))


def evolved_bloch(t: float, atoms: AtomicInitialState, field: FieldSpec,
                  spec: HamiltonianSpec) -> TwoQubitBlochState:
    """Bloch vectors and cross dyadic of the reduced two-atom state at
    time t, assembled from shifted manifold-amplitude products."""
    table = amplitude_table(t, atoms, field, spec)
    return bloch_from_table(table)


def bloch_from_table(table: AmplitudeTable) -> TwoQubitBlochState:
    """Reduce an amplitude table to the two-atom Bloch representation.

    Products pair amplitudes living on the same photon number: flipping
    one atom shifts the manifold index by m, flipping both by 2m (the
    eg/ge coherence stays inside one manifold).
    """
    m = table.m
    pops = [table.population(i) for i in (1, 2, 3, 4)]
    n1, n2, n3, n4 = pops

    ee_ge = table.correlation(1, 3, m)
    eg_gg = table.correlation(2, 4, m)
    ee_eg = table.correlation(1, 2, m)
    ge_gg = table.correlation(3, 4, m)
    ee_gg = table.correlation(1, 4, 2 * m)
    eg_ge = table.correlation(2, 3, 0)

    s = np.array([
        2.0 * (ee_ge + eg_gg).real,
        2.0 * (ee_ge + eg_gg).imag,
        n1 + n2 - n3 - n4,
    ])
    t_vec = np.array([
        2.0 * (ee_eg + ge_gg).real,
        2.0 * (ee_eg + ge_gg).imag,
        n1 - n2 + n3 - n4,
    ])
    cross = np.array([
        [2.0 * (ee_gg + eg_ge).real,
         2.0 * (ee_gg - eg_ge).imag,
         2.0 * (ee_ge - eg_gg).real],
        [2.0 * (ee_gg + eg_ge).imag,
         2.0 * (eg_ge - ee_gg).real,
         2.0 * (ee_ge - eg_gg).imag],
        [2.0 * (ee_eg - ge_gg).real,
         2.0 * (ee_eg - ge_gg).imag,
         n1 - n2 - n3 + n4],
    ])
    return TwoQubitBlochState(s=s, t=t_vec, cross=cross)
