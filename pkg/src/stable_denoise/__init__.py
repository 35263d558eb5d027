"""Denoising and estimation toolkit for autoregressive time series with
additive finite- or infinite-variance (symmetric alpha-stable) noise.

Simulation, self-supervised denoising (Stable-N2N plus the NAC, NR2N, N2C
and WDN baselines), Yule-Walker / FLOC-YW / errors-in-variables estimation,
5-step forecasting, and a seeded Monte Carlo benchmark harness.
"""

from .ar import (
    ArDataset,
    ArSpec,
    NoisyModelSpec,
    check_causality,
    corrupt,
    read_series,
    simulate_ar,
    simulate_noisy_dataset,
    write_series,
)
from .denoise import (
    BlindNoiseRange,
    WindowSet,
    apply_windows,
    build_training_windows,
    draw_blind_noise,
    n2c,
    nac,
    nr2n,
    stable_n2n,
    wdn,
)
from .dependence import FlocConfig, empirical_autocov, empirical_floc
from .errors import (
    DegenerateDataError,
    ModelError,
    NumericalError,
    ParameterError,
    ShapeError,
    StableDenoiseError,
    TrainingDivergence,
    UnsupportedOrderError,
)
from .estimators import (
    EstimationResult,
    YwSystem,
    build_yw_system,
    classical_yw,
    eiv_gaussian,
    eiv_stable,
    floc_yw,
)
from .evaluate import TrajectoryResult, forecast_5, forecast_mae, param_mae
from .harness import (
    ExperimentConfig,
    ReplicateRecord,
    ResultTable,
    config_from_dict,
    model_from_dict,
    read_results,
    run_experiment,
    write_results,
)
from .network import (
    LAYER_DIMS,
    NetworkState,
    TrainConfig,
    dump_weights,
    forward,
    init_network,
    train,
)
from .stable import StableParams, sample_stable, signed_power

__version__ = "0.1.0"
