import math

import numpy as np
import pytest

from spinchannel.channel import averaged_fidelity
from spinchannel.closed_form import (
    LineSpec,
    asymptotic_readout_time,
    line_amplitude,
    line_amplitude_trace,
    line_energies,
    line_mode_weights,
)
from spinchannel.optimizer import SearchConfig, find_optimum, maximize_amplitude, sweep


def test_two_site_chain_earliest_maximum():
    rec = find_optimum(LineSpec(2))
    assert rec.f_max == pytest.approx(1.0, abs=1e-9)
    assert rec.t0 == pytest.approx(math.pi / 2, abs=1e-5)
    assert rec.alpha == pytest.approx(math.log10(math.pi), abs=1e-5)


def test_four_site_chain_rounds_to_perfect():
    rec = find_optimum(LineSpec(4))
    assert round(rec.F, 3) == 1.0


def test_record_consistency():
    for N in [3, 6, 9]:
        rec = find_optimum(LineSpec(N), SearchConfig(T_max=500))
        assert rec.F == averaged_fidelity(rec.f_max)
        assert rec.E == rec.f_max
        assert 0 <= rec.t0 <= 500
        assert rec.f_max == pytest.approx(abs(line_amplitude(LineSpec(N), rec.t0)), abs=1e-12)


@pytest.mark.parametrize("N", [5, 9, 16])
def test_refinement_soundness(N):
    cfg = SearchConfig(T_max=300)
    w, E = line_mode_weights(LineSpec(N)), line_energies(N)
    opt = maximize_amplitude(w, E, cfg)
    grid = np.arange(0, 300 + 1e-9, cfg.coarse_step)
    coarse = np.abs(np.exp(-1j * np.outer(grid, E)) @ w)
    assert opt.best >= coarse.max() - 1e-9
    # reported peak is the earliest one that agrees with the best to 3 decimals
    assert round(opt.f_max, 3) == round(opt.best, 3)
    assert opt.t0 <= opt.best_t


def test_global_maximum_against_dense_scan():
    N, T = 7, 150.0
    opt = maximize_amplitude(line_mode_weights(LineSpec(N)), line_energies(N), SearchConfig(T_max=T))
    dense = np.arange(0, T, 1e-3)
    ref = np.abs(line_amplitude_trace_dense(N, dense)).max()
    assert opt.best >= ref - 1e-8
    assert opt.best <= ref + 1e-6


def line_amplitude_trace_dense(N, times):
    w, E = line_mode_weights(LineSpec(N)), line_energies(N)
    out = np.empty(len(times), dtype=complex)
    for i in range(0, len(times), 50_000):
        out[i:i + 50_000] = np.exp(-1j * np.outer(times[i:i + 50_000], E)) @ w
    return out


def test_step_guard():
    with pytest.raises(ValueError, match="coarse_step"):
        find_optimum(LineSpec(10), SearchConfig(T_max=10, coarse_step=0.5))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(T_max=0)
    with pytest.raises(ValueError):
        SearchConfig(coarse_step=-1)


def test_sweep_is_order_and_thread_independent():
    cfg = SearchConfig(T_max=300)
    serial = sweep(range(2, 12), cfg, threads=1)
    parallel = sweep(range(2, 12), cfg, threads=4)
    assert serial == parallel
    assert [r.N for r in serial] == list(range(2, 12))


def test_thread_env(monkeypatch):
    from spinchannel.optimizer import thread_count
    monkeypatch.setenv("SPINCHANNEL_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("SPINCHANNEL_THREADS", "x")
    with pytest.raises(ValueError):
        thread_count()


# Over the default window the sweep also sees later revivals, which beat the first lobe for
# mid-sized chains (ratio about 0.69 at N=50). Kept at the stated 0.8 threshold.
@pytest.mark.parametrize("N", [50, 100, 200, 500])
def test_first_arrival_is_near_optimal(N):
    rec = find_optimum(LineSpec(N))
    first = abs(line_amplitude(LineSpec(N), asymptotic_readout_time(N)))
    ratio = first / rec.f_max
    print(f"N={N}: |f(t_asym)| / max |f| = {ratio:.4f}")
    assert ratio >= 0.8


@pytest.mark.parametrize("N", [50, 120, 300])
def test_asymptotic_time_sits_on_first_lobe_peak(N):
    line = LineSpec(N)
    ta = asymptotic_readout_time(N)
    lobe = np.abs(line_amplitude_trace(line, np.linspace(0.5 * ta, 1.5 * ta, 20001))).max()
    assert abs(line_amplitude(line, ta)) == pytest.approx(lobe, rel=1e-3)


def test_n8_implied_amplitude_matches_optimizer():
    from spinchannel.channel import amplitude_for_fidelity
    rec = find_optimum(LineSpec(8))
    assert rec.f_max == pytest.approx(amplitude_for_fidelity(0.994), abs=0.0015)
