"""Search for the readout time that maximizes |f| within [0, T_max].

|f(t)| = |sum_m w_m exp(-i E_m t)| is scanned on a uniform grid, then every
grid peak that could still hide the global maximum is refined by a
vectorized golden-section search.  Mode weights are computed once per
system, so no re-diagonalization happens inside the scan.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import averaged_fidelity
from .closed_form import LineSpec, line_energies, line_mode_weights

__all__ = [
    "SearchConfig",
    "SweepRecord",
    "Optimum",
    "maximize_amplitude",
    "make_record",
    "find_optimum",
    "sweep",
    "thread_count",
]

THREADS_ENV = "SPINCHANNEL_THREADS"
_CHUNK = 1 << 21  # complex entries per scan block
_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SearchConfig:
    T_max: float = 4000.0
    coarse_step: float = 0.05
    refine_tol: float = 1e-6
    round_decimals: int = 3

    def __post_init__(self):
        if not self.T_max > 0:
            raise ValueError("T_max must be positive")
        if not self.coarse_step > 0:
            raise ValueError("coarse_step must be positive")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")


@dataclass(frozen=True)
class SweepRecord:
    N: int
    t0: float
    f_max: float
    F: float
    E: float
    alpha: float


@dataclass(frozen=True)
class Optimum:
    t0: float
    f_max: float
    best: float
    best_t: float


def _abs_amplitude(weights, energies, t) -> np.ndarray:
    return np.abs(np.exp(-1j * np.multiply.outer(t, energies)) @ weights)


def _refine(weights, energies, lo, hi, tol):
    """Golden-section maximization of |f| on each bracket [lo_i, hi_i]."""
    a, b = lo.copy(), hi.copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _abs_amplitude(weights, energies, c)
    fd = _abs_amplitude(weights, energies, d)
    while np.max(b - a) > tol:
        left = fc > fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = b - _GOLDEN * (b - a)
        d_new = a + _GOLDEN * (b - a)
        # reuse the surviving interior point; evaluate only the new one
        probe = np.where(left, c_new, d_new)
        fp = _abs_amplitude(weights, energies, probe)
        fd, fc = np.where(left, fc, fp), np.where(left, fp, fd)
        c, d = np.where(left, c_new, d), np.where(left, c, d_new)
    t = 0.5 * (a + b)
    return t, _abs_amplitude(weights, energies, t)


def maximize_amplitude(weights, energies, cfg: SearchConfig) -> Optimum:
    """Global maximum of |f| on [0, cfg.T_max].

    Every coarse local maximum within the worst-case sampling loss of the
    best grid value is refined.  The reported time is the earliest refined
    peak whose |f| rounds (to ``round_decimals``) to the overall maximum.
    """
    w = np.asarray(weights, dtype=complex)
    E = np.asarray(energies, dtype=float)
    E = E - E.min()  # |f| is unchanged by a uniform energy shift
    bandwidth = float(E.max())
    if bandwidth > 0 and cfg.coarse_step > math.pi / (2 * bandwidth):
        raise ValueError(
            f"coarse_step {cfg.coarse_step} exceeds pi/(2 E_max) = {math.pi / (2 * bandwidth):.4g}")

    h = cfg.coarse_step
    n_pts = int(math.floor(cfg.T_max / h + 1e-9)) + 1
    grid = np.arange(n_pts) * h
    if grid[-1] < cfg.T_max:
        grid = np.append(grid, cfg.T_max)
    values = np.empty(len(grid))
    rows = max(1, _CHUNK // max(1, len(E)))
    for i in range(0, len(grid), rows):
        values[i:i + rows] = _abs_amplitude(w, E, grid[i:i + rows])

    # |f''| <= sum |w_m| E_m^2, so a peak between grid points sits at most
    # this far above its nearest sample
    loss = 0.5 * float(np.sum(np.abs(w) * E ** 2)) * (h / 2) ** 2
    gmax = values.max()
    is_peak = np.ones(len(values), dtype=bool)
    is_peak[1:] &= values[1:] >= values[:-1]
    is_peak[:-1] &= values[:-1] >= values[1:]
    cand = np.flatnonzero(is_peak & (values >= gmax - loss - 1e-12))

    lo = np.clip(grid[cand] - h, 0.0, cfg.T_max)
    hi = np.clip(grid[cand] + h, 0.0, cfg.T_max)
    t_ref, f_ref = _refine(w, E, lo, hi, cfg.refine_tol)
    # never report less than the sampled value itself
    keep_grid = values[cand] >= f_ref
    t_ref = np.where(keep_grid, grid[cand], t_ref)
    f_ref = np.where(keep_grid, values[cand], f_ref)

    order = np.argsort(t_ref, kind="stable")
    t_ref, f_ref = t_ref[order], f_ref[order]
    best_i = int(np.argmax(f_ref))
    target = round(float(f_ref[best_i]), cfg.round_decimals)
    first = int(np.flatnonzero(np.round(f_ref, cfg.round_decimals) >= target)[0])
    return Optimum(float(t_ref[first]), float(f_ref[first]),
                   float(f_ref[best_i]), float(t_ref[best_i]))


def make_record(N: int, opt: Optimum, J: float = 1.0) -> SweepRecord:
    f_max = min(opt.f_max, 1.0)
    alpha = math.log10(2 * J * opt.t0) if opt.t0 > 0 else float("-inf")
    return SweepRecord(N, opt.t0, f_max, averaged_fidelity(f_max), f_max, alpha)


def find_optimum(line: LineSpec, cfg: SearchConfig = SearchConfig()) -> SweepRecord:
    """Best readout time for an open chain (uniform field drops out of |f|)."""
    opt = maximize_amplitude(line_mode_weights(line), line_energies(line.N, line.J), cfg)
    return make_record(line.N, opt, line.J)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, n)


def sweep(N_range, cfg: SearchConfig = SearchConfig(), J: float = 1.0,
          threads: int | None = None) -> list[SweepRecord]:
    """End-to-end optimum (s = 1, r = N) for every chain length in N_range."""
    Ns = list(N_range)
    threads = thread_count() if threads is None else threads
    job = lambda N: find_optimum(LineSpec(N, J=J), cfg)  # noqa: E731
    if threads > 1 and len(Ns) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(job, Ns))
    return [job(N) for N in Ns]
