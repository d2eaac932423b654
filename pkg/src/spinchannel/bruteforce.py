"""Full 2^N Hilbert-space reference simulation for small graphs.

Bit convention: site j is bit j-1 of the basis index (little endian), bit
value 0 is |0> with sigma^z = +1.  Evolution uses a dense Hermitian
eigendecomposition, which is exact up to rounding and fine for N <= 12.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import QubitState, ReceiverOutput
from .graph import SpinGraph

__all__ = [
    "MAX_SITES",
    "full_hamiltonian",
    "total_sz",
    "single_flip_block",
    "FullEvolution",
    "initial_state",
    "evolve_and_trace",
    "entangled_pair_transmission",
    "reduced_density",
]

MAX_SITES = 12


def _guard(n: int) -> None:
    if n > MAX_SITES:
        raise ValueError(f"brute-force simulation limited to {MAX_SITES} sites, got {n}")


def full_hamiltonian(graph: SpinGraph) -> np.ndarray:
    """H = -sum J_ij sigma_i.sigma_j - sum B_i sigma^z_i on all 2^N states."""
    n = graph.n_sites
    _guard(n)
    dim = 1 << n
    idx = np.arange(dim)
    bits = (idx[:, None] >> np.arange(n)) & 1  # bits[b, j-1] is site j
    z = 1 - 2 * bits
    H = np.zeros((dim, dim))
    H[idx, idx] -= z @ np.asarray(graph.fields)
    for (i, j), J in graph.couplings.items():
        zi, zj = z[:, i - 1], z[:, j - 1]
        H[idx, idx] -= J * zi * zj
        # sigma^x sigma^x + sigma^y sigma^y swaps anti-aligned pairs with amplitude 2
        differ = np.flatnonzero(zi != zj)
        swapped = differ ^ ((1 << (i - 1)) | (1 << (j - 1)))
        H[swapped, differ] -= 2 * J
    return H


def total_sz(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)) & 1
    return np.diag((1 - 2 * bits).sum(axis=1).astype(float))


def single_flip_block(H: np.ndarray, n: int) -> np.ndarray:
    """Restriction to {|j>} minus the all-|0> energy."""
    flips = [1 << (j - 1) for j in range(1, n + 1)]
    return H[np.ix_(flips, flips)] - H[0, 0] * np.eye(n)


class FullEvolution:
    """Cached eigendecomposition of the full Hamiltonian, energies shifted so E_0 = 0."""

    def __init__(self, graph: SpinGraph):
        self.graph = graph
        self.H = full_hamiltonian(graph)
        self.energies, self.vectors = np.linalg.eigh(self.H)
        self.e0 = self.H[0, 0]

    @property
    def n(self) -> int:
        return self.graph.n_sites

    def propagate(self, psi: np.ndarray, t: float) -> np.ndarray:
        """exp(-i (H - E_0) t) applied along the last axis of psi."""
        phases = np.exp(-1j * (self.energies - self.e0) * t)
        V = self.vectors
        return ((psi @ V.conj()) * phases) @ V.T


def initial_state(n: int, state: QubitState, s: int) -> np.ndarray:
    _guard(n)
    psi = np.zeros(1 << n, dtype=complex)
    amps = state.amplitudes
    psi[0] = amps[0]
    psi[1 << (s - 1)] = amps[1]
    return psi


def reduced_density(psi: np.ndarray, n: int, keep: list[int]) -> np.ndarray:
    """Reduced density matrix of the listed sites, first listed is most significant.

    ``psi`` may carry leading extra axes (e.g. an ancilla); those are kept
    ahead of the chain sites in the output ordering.
    """
    lead = psi.shape[:-1]
    # reshape puts site n on the first chain axis, site 1 on the last
    tensor = psi.reshape(lead + (2,) * n)
    nl = len(lead)
    keep_axes = list(range(nl)) + [nl + n - site for site in keep]
    rest = [ax for ax in range(nl + n) if ax not in keep_axes]
    mat = np.transpose(tensor, keep_axes + rest).reshape(1 << len(keep_axes), -1)
    return mat @ mat.conj().T


def _check_sites(graph: SpinGraph, *sites: int) -> None:
    for site in sites:
        graph.check_site(site)


def evolve_and_trace(graph: SpinGraph, state: QubitState, s: int, r: int, t: float,
                     evolution: FullEvolution | None = None) -> ReceiverOutput:
    """Put ``state`` on site s, evolve for time t, return the reduced state of site r."""
    _check_sites(graph, s, r)
    evo = evolution or FullEvolution(graph)
    psi = evo.propagate(initial_state(graph.n_sites, state, s), t)
    rho = reduced_density(psi, graph.n_sites, [r])
    # rho = P|psi_out><psi_out| + (1-P)|0><0| with |beta|^2 = rho_11
    c = math.cos(state.theta / 2)
    P = c * c + float(rho[1, 1].real)
    psi_out = None
    if P > 1e-15:
        beta = rho[1, 0] / c if c > 1e-12 else math.sqrt(max(rho[1, 1].real, 0.0))
        psi_out = np.array([c, beta]) / math.sqrt(P)
    return ReceiverOutput(rho, P, psi_out)


def entangled_pair_transmission(graph: SpinGraph, s: int, r: int, t: float,
                                evolution: FullEvolution | None = None) -> np.ndarray:
    """Send one half of (|01> + |10>)/sqrt 2 in at site s, read out at site r.

    Returns the 4x4 density matrix of (kept qubit, site r) in basis |ab>.
    """
    _check_sites(graph, s, r)
    evo = evolution or FullEvolution(graph)
    dim = 1 << graph.n_sites
    psi = np.zeros((2, dim), dtype=complex)
    psi[0, 1 << (s - 1)] = 1 / math.sqrt(2)  # kept |0>, chain spin s flipped
    psi[1, 0] = 1 / math.sqrt(2)             # kept |1>, chain in |00..0>
    psi = evo.propagate(psi, t)
    return reduced_density(psi, graph.n_sites, [r])
