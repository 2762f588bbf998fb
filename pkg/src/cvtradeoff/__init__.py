"""Information/disturbance trade-off for indirect measurements on Gaussian signals."""

from cvtradeoff.gaussian_core import (
    EnergyReport,
    ProbeSpec,
    SignalEnsemble,
    SqrtGaussian,
    make_probe,
    mean_signal_energy,
    min_energy_theta,
    min_probe_energy,
    probe_energy,
    signal_energy,
    signal_overlap,
    squeezing_for_width,
)
from cvtradeoff.channel import (
    ConditionalState,
    GaussianMixture1D,
    MeasurementSpec,
    conditional_overlap,
    conditional_state,
    outcome_density,
)
from cvtradeoff.fidelities import FidelityPoint, estimation_fidelity, transmission_fidelity
from cvtradeoff.oracle import QuadratureConfig, discrepancy_report, oracle_F, oracle_G
from cvtradeoff.tradeoff import (
    TradeoffCurve,
    WidthRatios,
    compare_B_C,
    config_A,
    config_B,
    config_C,
    curve_A,
    curve_B,
    curve_C,
    cv_bound,
    kappa_opt,
    qudit_bound,
)
from cvtradeoff.montecarlo import McConfig, McEstimate, simulate_F, simulate_G

__version__ = "0.1.0"
