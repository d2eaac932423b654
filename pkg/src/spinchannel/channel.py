"""Channel quantities derived from a single transition amplitude f.

The receiver spin sees an amplitude-damping channel whose damping is set by
|f|; its phase arg f can be cancelled with a uniform field.  Everything here
is a pure function of f (and of the input state where relevant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .graph import TransitionAmplitude

__all__ = [
    "QubitState",
    "ReceiverOutput",
    "ChannelReport",
    "KrausPair",
    "receiver_state",
    "averaged_fidelity",
    "compensating_field",
    "kraus_operators",
    "kraus_apply",
    "shared_entanglement",
    "entangled_output_state",
    "wootters_concurrence",
    "bloch_average_oracle",
    "classical_threshold_amplitude",
    "amplitude_for_fidelity",
    "channel_report",
    "CLASSICAL_FIDELITY",
]

CLASSICAL_FIDELITY = 2 / 3
_AMP_SLACK = 1e-9


def _as_complex(f) -> complex:
    if isinstance(f, TransitionAmplitude):
        return f.value
    return complex(f)


def _check_abs(f_abs: float) -> None:
    if not (-_AMP_SLACK <= f_abs <= 1 + _AMP_SLACK):
        raise ValueError(f"|f| = {f_abs} outside [0, 1]")


@dataclass(frozen=True)
class QubitState:
    """cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>."""

    theta: float
    phi: float = 0.0

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([math.cos(self.theta / 2),
                         np.exp(1j * self.phi) * math.sin(self.theta / 2)])

    @property
    def density(self) -> np.ndarray:
        psi = self.amplitudes
        return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class ReceiverOutput:
    """rho = P |psi_out><psi_out| + (1 - P) |0><0|.

    ``psi_out`` is None when P = 0, where the conditional state is undefined.
    """

    rho: np.ndarray
    P: float
    psi_out: np.ndarray | None


def receiver_state(state: QubitState, f) -> ReceiverOutput:
    f = _as_complex(f)
    _check_abs(abs(f))
    c, s = math.cos(state.theta / 2), math.sin(state.theta / 2)
    beta = np.exp(1j * state.phi) * s * f
    P = c * c + abs(beta) ** 2
    rho = np.array([[c * c + (1 - P), c * np.conj(beta)],
                    [beta * c, abs(beta) ** 2]], dtype=complex)
    psi_out = np.array([c, beta]) / math.sqrt(P) if P > 1e-15 else None
    return ReceiverOutput(rho, P, psi_out)


def averaged_fidelity(f_abs: float, gamma: float = 0.0) -> float:
    """Bloch-sphere averaged fidelity |f| cos(gamma)/3 + |f|^2/6 + 1/2."""
    _check_abs(f_abs)
    return f_abs * math.cos(gamma) / 3 + f_abs ** 2 / 6 + 0.5


def amplitude_for_fidelity(F: float) -> float:
    """Invert averaged_fidelity at gamma = 0: the |f| giving fidelity F."""
    if not 0.5 <= F <= 1:
        raise ValueError("compensated fidelity lies in [1/2, 1]")
    # f^2 + 2 f + 3 - 6F = 0
    return -1 + math.sqrt(1 - (3 - 6 * F))


def classical_threshold_amplitude() -> float:
    """|f| above which the compensated channel beats classical transmission."""
    return brentq(lambda x: averaged_fidelity(x) - CLASSICAL_FIDELITY, 0.0, 1.0, xtol=1e-15)


def compensating_field(gamma_at_B0: float, t0: float) -> float:
    """Smallest B >= 0 with arg f(B) = gamma_at_B0 - 2 B t0 = 0 mod 2 pi."""
    if not t0 > 0:
        raise ValueError("compensating field undefined at t0 <= 0")
    return (gamma_at_B0 % (2 * math.pi)) / (2 * t0)


@dataclass(frozen=True)
class KrausPair:
    M0: np.ndarray
    M1: np.ndarray

    def completeness(self) -> np.ndarray:
        return self.M0.conj().T @ self.M0 + self.M1.conj().T @ self.M1


def kraus_operators(f_abs: float) -> KrausPair:
    _check_abs(f_abs)
    f_abs = min(max(f_abs, 0.0), 1.0)
    M0 = np.array([[1.0, 0.0], [0.0, f_abs]])
    M1 = np.array([[0.0, math.sqrt(1 - f_abs ** 2)], [0.0, 0.0]])
    return KrausPair(M0, M1)


def _check_density(rho: np.ndarray, dim: int, tol: float = 1e-9) -> None:
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix must be {dim}x{dim}")
    if not np.allclose(rho, rho.conj().T, atol=tol):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix must be positive semidefinite")


def kraus_apply(rho_in, f_abs: float) -> np.ndarray:
    rho_in = np.asarray(rho_in, dtype=complex)
    _check_density(rho_in, 2)
    K = kraus_operators(f_abs)
    return K.M0 @ rho_in @ K.M0.conj().T + K.M1 @ rho_in @ K.M1.conj().T


def entangled_output_state(f_abs: float) -> np.ndarray:
    """Two-qubit state after sending one half of (|01> + |10>)/sqrt 2.

    Basis order |ab>, a = kept qubit, b = receiver:
    (1/2)[(1 - |f|^2)|00><00| + (|10> + |f||01>)(<10| + |f|<01|)].
    """
    _check_abs(f_abs)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1 - f_abs ** 2
    v = np.zeros(4)
    v[2], v[1] = 1.0, f_abs
    rho += np.outer(v, v)
    return rho / 2


_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho) -> float:
    """Concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix.

    l_i are the decreasing square roots of the eigenvalues of rho rho~, with
    rho~ = (Y x Y) rho* (Y x Y).  They are taken as singular values of
    X^T (Y x Y) X for rho = X X^dagger, which avoids square-rooting
    eigenvalues that are zero up to rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_density(rho, 4)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    keep = w > 1e-14
    X = v[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    sv = np.linalg.svd(X.T @ _YY @ X, compute_uv=False)
    lam[:len(sv)] = sv
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def shared_entanglement(f_abs: float, verify: bool = False) -> float:
    """Concurrence shared by sending half of |psi+> through the channel: |f|.

    With ``verify`` the explicit two-qubit output is built and its Wootters
    concurrence is checked against |f|.
    """
    _check_abs(f_abs)
    if verify:
        C = wootters_concurrence(entangled_output_state(f_abs))
        if abs(C - f_abs) > 1e-10:
            raise AssertionError(f"concurrence {C} differs from |f| = {f_abs}")
    return float(f_abs)


def bloch_average_oracle(f, order: int = 16) -> float:
    """Numerical average of <psi|rho_out|psi> over the Bloch sphere.

    Product rule: Gauss-Legendre in cos(theta) and uniform points in phi,
    exact for the low-degree trigonometric integrand at this order.
    """
    f = _as_complex(f)
    _check_abs(abs(f))
    u, wu = np.polynomial.legendre.leggauss(order)
    phis = 2 * np.pi * np.arange(2 * order) / (2 * order)
    total = 0.0
    for ui, wi in zip(u, wu):
        theta = math.acos(ui)
        for phi in phis:
            state = QubitState(theta, phi)
            psi = state.amplitudes
            rho = receiver_state(state, f).rho
            total += wi * float(np.real(psi.conj() @ rho @ psi))
    return total / (2 * len(phis))


@dataclass(frozen=True)
class ChannelReport:
    """Channel figures of merit at readout time t0.

    ``F_avg`` uses the actual phase gamma; ``F_compensated`` assumes the
    field B_star has removed it.
    """

    f_abs: float
    gamma: float
    F_avg: float
    F_compensated: float
    E: float
    B_star: float | None
    t0: float


def channel_report(f: TransitionAmplitude) -> ChannelReport:
    f_abs = min(abs(f.value), 1.0)
    gamma = f.phase
    B_star = compensating_field(gamma, f.t) if f.t > 0 else None
    return ChannelReport(
        f_abs=f_abs,
        gamma=gamma,
        F_avg=averaged_fidelity(f_abs, gamma),
        F_compensated=averaged_fidelity(f_abs),
        E=shared_entanglement(f_abs),
        B_star=B_star,
        t0=f.t,
    )
