"""Ferromagnetic Heisenberg spin graphs reduced to the single-excitation sector.

Sites are numbered 1..N throughout the public API.  The Hamiltonian is

    H = -sum_<ij> J_ij sigma_i . sigma_j - sum_i B_i sigma^z_i

with sigma^z|0> = +|0>, so the all-|0> state is the ground state and flipping
one spin costs 2*B_i of Zeeman energy.  Because total sigma^z is conserved, a
single flipped spin only ever hops between the N states |j>, and the dynamics
reduce to an N x N real symmetric matrix.  Energies are measured from the
ground state (E_0 = 0) and times are in units of 1/J (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.linalg

__all__ = [
    "SpinGraph",
    "SpectralDecomposition",
    "TransitionAmplitude",
    "build_sector_hamiltonian",
    "diagonalize",
    "transition_amplitude",
    "amplitude_trace",
    "endpoint_weights",
    "transition_amplitude_expm",
    "read_graph_file",
    "BENZENE_COUPLINGS",
]

# Distance-resolved couplings of the six-site benzene ring (distance -> J_ij).
BENZENE_COUPLINGS = {1: 1 / 4, 2: 1 / (12 * math.sqrt(3)), 3: 1 / 32}


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class SpinGraph:
    """Sites, positive pairwise couplings and per-site fields.

    ``couplings`` maps unordered pairs (stored as ``(i, j)`` with ``i < j``) to
    J_ij.  Use :meth:`from_edges` when pairs may arrive in either orientation;
    it rejects a pair listed twice.
    """

    n_sites: int
    couplings: Mapping[tuple[int, int], float]
    fields: tuple[float, ...] = ()
    topology: str = "general"

    def __post_init__(self):
        n = self.n_sites
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n_sites must be a positive integer, got {n!r}")
        normalized: dict[tuple[int, int], float] = {}
        for (i, j), J in self.couplings.items():
            if i == j:
                raise ValueError(f"self-pair ({i}, {j}) is not allowed")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"pair ({i}, {j}) out of range 1..{n}")
            if not J > 0:
                raise ValueError(f"coupling J_{i}{j} = {J} must be strictly positive")
            key = _pair(i, j)
            if key in normalized:
                raise ValueError(f"pair {key} appears more than once")
            normalized[key] = float(J)
        object.__setattr__(self, "couplings", dict(sorted(normalized.items())))

        fields = tuple(float(b) for b in self.fields) if len(self.fields) else (0.0,) * n
        if len(fields) != n:
            raise ValueError(f"expected {n} fields, got {len(fields)}")
        if any(b < 0 for b in fields):
            raise ValueError("fields B_i must be non-negative")
        object.__setattr__(self, "fields", fields)
        if self.topology not in ("line", "ring", "general"):
            raise ValueError(f"unknown topology tag {self.topology!r}")

    @classmethod
    def from_edges(cls, n_sites: int, edges: Iterable[tuple[int, int, float]],
                   fields: Iterable[float] | None = None, topology: str = "general") -> "SpinGraph":
        couplings: dict[tuple[int, int], float] = {}
        for i, j, J in edges:
            key = _pair(int(i), int(j))
            if key in couplings:
                raise ValueError(f"pair {key} appears more than once")
            couplings[key] = J
        return cls(n_sites, couplings, tuple(fields) if fields is not None else (), topology)

    @classmethod
    def line(cls, n_sites: int, J: float = 1.0, B: float = 0.0) -> "SpinGraph":
        """Open chain with J_{i,i+1} = J/2 and uniform field B."""
        couplings = {(i, i + 1): J / 2 for i in range(1, n_sites)}
        return cls(n_sites, couplings, (B,) * n_sites, "line")

    @classmethod
    def ring(cls, n_sites: int, J: float = 1.0, B: float = 0.0,
             distance_couplings: Mapping[int, float] | None = None) -> "SpinGraph":
        """Closed ring of ``n_sites`` spins.

        By default only nearest neighbours couple, with J_{i,i+1} = J/2.
        ``distance_couplings`` maps ring distance d to J_ij for every pair at
        that distance; each unordered pair is counted once, so on an even ring
        the antipodal distance contributes n_sites/2 pairs.
        """
        if n_sites < 3:
            raise ValueError("a ring needs at least 3 sites")
        dc = {1: J / 2} if distance_couplings is None else dict(distance_couplings)
        couplings: dict[tuple[int, int], float] = {}
        for d, Jd in dc.items():
            if not 1 <= d <= n_sites // 2:
                raise ValueError(f"ring distance {d} out of range 1..{n_sites // 2}")
            for i in range(1, n_sites + 1):
                j = (i - 1 + d) % n_sites + 1
                couplings.setdefault(_pair(i, j), Jd)
        return cls(n_sites, couplings, (B,) * n_sites, "ring")

    @classmethod
    def benzene(cls, B: float = 0.0) -> "SpinGraph":
        return cls.ring(6, B=B, distance_couplings=BENZENE_COUPLINGS)

    def with_uniform_field(self, B: float) -> "SpinGraph":
        return SpinGraph(self.n_sites, self.couplings, (B,) * self.n_sites, self.topology)

    def check_site(self, site: int) -> None:
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} out of range 1..{self.n_sites}")


def read_graph_file(path) -> SpinGraph:
    """Parse an edge-list file.

    Lines are ``i j J_ij`` for couplings and ``field i B_i`` for fields; an
    optional ``sites N`` line fixes the site count (otherwise the largest
    index seen).  ``#`` starts a comment.
    """
    edges = []
    fields: dict[int, float] = {}
    n_sites = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "field" and len(parts) == 3:
                    fields[int(parts[1])] = float(parts[2])
                    n_sites = max(n_sites, int(parts[1]))
                elif parts[0] == "sites" and len(parts) == 2:
                    n_sites = max(n_sites, int(parts[1]))
                elif len(parts) == 3:
                    i, j = int(parts[0]), int(parts[1])
                    edges.append((i, j, float(parts[2])))
                    n_sites = max(n_sites, i, j)
                else:
                    raise ValueError("unrecognized line")
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}: {raw.rstrip()!r}") from None
    field_list = [fields.get(i, 0.0) for i in range(1, n_sites + 1)]
    return SpinGraph.from_edges(n_sites, edges, field_list)


def build_sector_hamiltonian(graph: SpinGraph) -> np.ndarray:
    """Single-flip block of H with the ground energy subtracted.

    Off-diagonal (j, k) is -2 J_jk on an edge; diagonal (j, j) is
    2 B_j + 2 sum_k J_jk over the neighbours of j.
    """
    n = graph.n_sites
    H = np.diag(2.0 * np.asarray(graph.fields))
    for (i, j), J in graph.couplings.items():
        a, b = i - 1, j - 1
        H[a, b] -= 2 * J
        H[b, a] -= 2 * J
        H[a, a] += 2 * J
        H[b, b] += 2 * J
    return H


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending single-excitation energies and orthonormal modes (columns)."""

    energies: np.ndarray
    modes: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.energies, self.modes):
            arr.flags.writeable = False

    @property
    def n_sites(self) -> int:
        return len(self.energies)


def diagonalize(H: np.ndarray) -> SpectralDecomposition:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("sector Hamiltonian must be square")
    if not np.allclose(H, H.T, atol=1e-12):
        raise ValueError("sector Hamiltonian must be symmetric")
    energies, modes = np.linalg.eigh(H)
    modes = np.array(modes)
    # first non-negligible component of every column is made positive
    for m in range(modes.shape[1]):
        col = modes[:, m]
        lead = col[np.flatnonzero(np.abs(col) > 1e-10)[0]]
        if lead < 0:
            modes[:, m] = -col
    return SpectralDecomposition(np.array(energies), modes)


@dataclass(frozen=True)
class TransitionAmplitude:
    """f_{r,s}(t) = <r| exp(-i H t) |s>."""

    value: complex
    t: float
    s: int
    r: int

    def __abs__(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return float(np.angle(self.value))


def _check_sites(n: int, *sites: int) -> None:
    for site in sites:
        if not 1 <= site <= n:
            raise ValueError(f"site {site} out of range 1..{n}")


def endpoint_weights(spec: SpectralDecomposition, s: int, r: int) -> np.ndarray:
    """Mode weights <r|m><m|s>; f(t) = sum_m w_m exp(-i E_m t)."""
    _check_sites(spec.n_sites, s, r)
    return spec.modes[r - 1, :] * spec.modes[s - 1, :]


def amplitude_trace(spec: SpectralDecomposition, s: int, r: int, times) -> np.ndarray:
    """Vectorized f_{r,s}(t) over an array of times."""
    w = endpoint_weights(spec, s, r)
    t = np.asarray(times, dtype=float)
    return np.exp(-1j * np.multiply.outer(t, spec.energies)) @ w


def transition_amplitude(spec: SpectralDecomposition, s: int, r: int, t: float) -> TransitionAmplitude:
    if t < 0:
        raise ValueError("t must be non-negative")
    value = complex(amplitude_trace(spec, s, r, float(t)))
    return TransitionAmplitude(value, float(t), s, r)


def transition_amplitude_expm(H: np.ndarray, s: int, r: int, t: float) -> complex:
    """Same amplitude through a direct matrix exponential (independent path)."""
    _check_sites(H.shape[0], s, r)
    U = scipy.linalg.expm(-1j * t * np.asarray(H, dtype=float))
    return complex(U[r - 1, s - 1])
