"""Exact simulator of two-stage polarization entanglement purification
built on down-conversion pair sources and cross-Kerr QND detectors."""

from .fock import (
    AmbiguousRoutingError,
    BranchState,
    ConfigError,
    EnsembleState,
    ModeLabel,
    OccupancyViolationError,
    Party,
    PhaseTag,
    Pol,
    PureState,
    SimulationError,
    Spatial,
    ZeroNormError,
    ZERO_PHASE,
    PI,
    create_photon,
    inner,
    mode,
    normalize,
    overlap,
    probe_outcomes,
    product_state,
    project_probe,
)
from .elements import (
    bilateral_rotation,
    coupler,
    diagonal_outcomes,
    measure_diagonal,
    pbs,
    sigma_x,
    sigma_z,
)
from .qnd import (
    HomodyneModel,
    HomodyneOutcome,
    KerrMedium,
    QndConfig,
    Variant,
    apply_kerr,
    apply_qnd,
    default_config,
    homodyne_x,
    qnd1,
    qnd2,
    qnd3,
    qnd4,
)
from .sources import (
    NoiseParams,
    PdcSourceParams,
    apply_bitflip_noise,
    bell_pair,
    ideal_mixed_pairs,
    independent_pair_noise,
    pdc_emit,
    single_pair_state,
    two_pair_components,
)
from .branches import BRANCH_CASES, CASE_IDS, run_branch_case, run_branch_suite
from .protocol import (
    OutcomeRecord,
    RoundRow,
    RunReport,
    Verdict,
    enumerate_exact,
    monte_carlo,
    pbs_baseline,
    stage1_fidelity_closed_form,
    stage1_run,
    stage2_fidelity_map,
    stage2_iterate,
    stage2_run,
    stage2_yield,
)

__version__ = "0.1.0"
