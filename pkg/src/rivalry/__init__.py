"""Simulation and analysis of binocular-rivalry rate models."""
from .models import (
    MODEL_KINDS,
    KalarickalParams,
    LaingChowParams,
    LCAdaptationParams,
    LCDepressionParams,
    ModelError,
    ModelInstance,
    Stimulus,
    WilsonParams,
    default_params,
    heaviside,
    make_model,
    naka_rushton,
    rhs,
    sigmoid,
)
from .integrator import (
    NoiseStream,
    NumericalBlowupError,
    SimConfig,
    Trajectory,
    default_sim_config,
    draw_noise,
    simulate,
    step_euler,
    step_rk4,
)
from .analysis import (
    AnalysisConfig,
    AnalysisError,
    DominanceInterval,
    DominanceReport,
    Regime,
    analyze,
    classify_regime,
    detect_dominance,
)
from .experiments import (
    BandSelectionError,
    LeveltReport,
    SweepResult,
    SweepSpec,
    cross_inhibition_sweep,
    evaluate_levelt,
    find_regime_bands,
    run_levelt_suite,
    run_sweep,
)

__version__ = "0.1.0"
