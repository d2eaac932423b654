"""Quantum state transfer through unmodulated ferromagnetic spin graphs."""

from .channel import (
    ChannelReport,
    KrausPair,
    QubitState,
    ReceiverOutput,
    averaged_fidelity,
    bloch_average_oracle,
    channel_report,
    compensating_field,
    kraus_apply,
    kraus_operators,
    receiver_state,
    shared_entanglement,
    wootters_concurrence,
)
from .closed_form import (
    BesselSeriesParams,
    LineSpec,
    RingSpec,
    asymptotic_entanglement,
    asymptotic_readout_time,
    line_amplitude,
    line_bessel_entanglement,
    ring_amplitude,
    ring_dispersion,
)
from .graph import (
    SpectralDecomposition,
    SpinGraph,
    TransitionAmplitude,
    build_sector_hamiltonian,
    diagonalize,
    transition_amplitude,
)
from .optimizer import SearchConfig, SweepRecord, find_optimum, sweep

__version__ = "0.1.0"
