"""Self-check suite run by ``spinchannel verify``.

Each check compares two independent routes to the same quantity and returns a
:class:`CheckResult`.  ``fault=True`` perturbs the sector Hamiltonian used by
the reduced route so the harness itself can be shown to fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bruteforce as bf
from .channel import (
    QubitState,
    averaged_fidelity,
    bloch_average_oracle,
    entangled_output_state,
    kraus_apply,
    receiver_state,
    wootters_concurrence,
)
from .closed_form import (
    BesselSeriesParams,
    LineSpec,
    RingSpec,
    line_amplitude_trace,
    line_bessel_entanglement,
    ring_amplitude_trace,
    ring_dispersion,
)
from .graph import SpinGraph, amplitude_trace, build_sector_hamiltonian, diagonalize

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _sector(graph: SpinGraph, fault: bool) -> np.ndarray:
    H = build_sector_hamiltonian(graph)
    if fault:
        H = H.copy()
        H[0, 1] = H[1, 0] = -H[0, 1] + 0.1
    return H


def _graphs(max_n: int):
    for n in range(2, max_n + 1):
        yield SpinGraph.line(n, B=0.2)
        if n >= 3:
            yield SpinGraph.ring(n, B=0.1)


def _result(name: str, err: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(err <= tol), f"max error {err:.3e} (tol {tol:.0e})")


def check_sector_equivalence(max_n, rng, fault):
    err = 0.0
    for g in _graphs(max_n):
        block = bf.single_flip_block(bf.full_hamiltonian(g), g.n_sites)
        err = max(err, float(np.abs(block - _sector(g, fault)).max()))
    return _result("sector Hamiltonian = full-space single-flip block", err, 1e-12)


def check_receiver_oracle(max_n, rng, fault):
    err = 0.0
    for g in _graphs(max_n):
        evo = bf.FullEvolution(g)
        spec = diagonalize(_sector(g, fault))
        for _ in range(3):
            s, r = (int(x) for x in rng.integers(1, g.n_sites + 1, size=2))
            t = float(rng.uniform(0, 10))
            state = QubitState(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
            f = complex(amplitude_trace(spec, s, r, t))
            ref = bf.evolve_and_trace(g, state, s, r, t, evo).rho
            err = max(err, float(np.abs(receiver_state(state, f).rho - ref).max()))
    return _result("receiver state: full evolution vs sector reduction", err, 1e-10)


def check_kraus_consistency(max_n, rng, fault):
    err = 0.0
    for _ in range(50):
        f = float(rng.uniform(0, 1))
        state = QubitState(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
        err = max(err, float(np.abs(kraus_apply(state.density, f) - receiver_state(state, f).rho).max()))
        trace_err = abs(np.trace(kraus_apply(state.density, f)) - 1)
        err = max(err, float(trace_err))
    return _result("Kraus map = receiver state (compensated phase), trace preserved", err, 1e-13)


def check_concurrence(max_n, rng, fault):
    err = 0.0
    for _ in range(100):
        f = float(rng.uniform(0, 1))
        err = max(err, abs(wootters_concurrence(entangled_output_state(f)) - f))
    for g in _graphs(min(max_n, 6)):
        evo = bf.FullEvolution(g)
        spec = diagonalize(_sector(g, fault))
        t = float(rng.uniform(0, 10))
        rho = bf.entangled_pair_transmission(g, 1, g.n_sites, t, evo)
        err = max(err, abs(wootters_concurrence(rho) - abs(amplitude_trace(spec, 1, g.n_sites, t))))
    return _result("Wootters concurrence = |f|", err, 1e-10)


def check_transforms(max_n, rng, fault):
    err = 0.0
    times = np.linspace(0, 30, 61)
    for n in range(2, max(max_n, 2) + 1):
        line = LineSpec(n, B=0.3)
        spec = diagonalize(_sector(line.graph(), fault))
        err = max(err, float(np.abs(line_amplitude_trace(line, times)
                                    - amplitude_trace(spec, line.s, line.r, times)).max()))
    for half in range(2, max(max_n // 2, 2) + 1):
        ring = RingSpec(half, B=0.1)
        spec = diagonalize(_sector(ring.graph(), fault))
        err = max(err, float(np.abs(ring_amplitude_trace(ring, times)
                                    - amplitude_trace(spec, ring.s, ring.r, times)).max()))
        err = max(err, float(np.abs(np.sort(ring_dispersion(ring)) - spec.energies).max()))
    return _result("IDCT / IDFT closed forms = eigendecomposition", err, 1e-10)


def check_bessel_series(max_n, rng, fault):
    err = 0.0
    for n in range(2, max(max_n, 2) + 1):
        line = LineSpec(n)
        spec = diagonalize(_sector(line.graph(), fault))
        for beta in np.linspace(0.5, 2.5 * n, 7):
            exact = abs(amplitude_trace(spec, 1, n, beta / 2))
            err = max(err, abs(line_bessel_entanglement(BesselSeriesParams(n, beta)) - exact))
    return _result("Bessel image sum = |f_{N,1}|", err, 1e-8)


def check_bloch_average(max_n, rng, fault):
    err = 0.0
    for _ in range(20):
        f = float(rng.uniform(0, 1)) * np.exp(1j * rng.uniform(-math.pi, math.pi))
        err = max(err, abs(bloch_average_oracle(f) - averaged_fidelity(abs(f), float(np.angle(f)))))
    return _result("Bloch-sphere quadrature = averaged fidelity formula", err, 1e-6)


def check_sector_closure(max_n, rng, fault):
    err = 0.0
    for g in _graphs(min(max_n, 8)):
        evo = bf.FullEvolution(g)
        Sz = bf.total_sz(g.n_sites)
        err = max(err, float(np.abs(evo.H @ Sz - Sz @ evo.H).max()))
        psi = evo.propagate(bf.initial_state(g.n_sites, QubitState(math.pi), 1), 7.3)
        leak = 1 - sum(abs(psi[1 << j]) ** 2 for j in range(g.n_sites))
        err = max(err, abs(leak))
    return _result("single-excitation sector closure", err, 1e-12)


def check_field_covariance(max_n, rng, fault):
    err = 0.0
    times = np.linspace(0, 20, 41)
    for n in range(2, max(max_n, 2) + 1):
        a = amplitude_trace(diagonalize(_sector(SpinGraph.line(n, B=0.0), fault)), 1, n, times)
        b = amplitude_trace(diagonalize(_sector(SpinGraph.line(n, B=0.7), fault)), 1, n, times)
        err = max(err, float(np.abs(np.abs(a) - np.abs(b)).max()))
        err = max(err, float(np.abs(b - a * np.exp(-1j * 2 * 0.7 * times)).max()))
    return _result("uniform field only rotates the phase of f", err, 1e-12)


CHECKS = [
    check_sector_equivalence,
    check_receiver_oracle,
    check_kraus_consistency,
    check_concurrence,
    check_transforms,
    check_bessel_series,
    check_bloch_average,
    check_sector_closure,
    check_field_covariance,
]


def run_checks(max_n: int = 8, fault: bool = False, seed: int = 1234) -> list[CheckResult]:
    if not 2 <= max_n <= bf.MAX_SITES:
        raise ValueError(f"max_n must be in 2..{bf.MAX_SITES}")
    rng = np.random.default_rng(seed)
    return [check(max_n, rng, fault) for check in CHECKS]
