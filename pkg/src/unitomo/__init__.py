"""unitomo: a desk-scale laboratory for unitary-channel estimation.

Simulated query access to a hidden unitary, per-column process tomography
with 1/eps^2 cost, iterative refinement down to Heisenberg 1/eps scaling,
closed-form channel metrics, reflection-net hard instances with
fractional-query gadgets, and eigenphase estimation, all with exact query
accounting.
"""

from .linalg import (
    BranchCutError,
    DecompositionError,
    RankDeficiencyError,
    UnitaryEigensystem,
    assert_antihermitian,
    assert_unitary,
    eig_unitary,
    expm,
    frac_power,
    haar_batch,
    haar_random,
    is_unitary,
    op_norm,
    principal_log,
    project_to_unitary,
    random_generator,
)
from .metrics import (
    SpreadResult,
    circular_dist,
    diamond_dist,
    diamond_norm,
    ent_infidelity,
    frob_phase_metric,
    hausdorff_phase_dist,
    lie_dist,
    path_dist,
    pudist,
    spread,
)
from .oracle import BudgetExceededError, QueryOracle, basis_flip, derived_oracle_pattern
from .state_tomography import (
    PatternPrep,
    PovmSampleSet,
    StateEstimate,
    collect_samples,
    estimate_state,
    povm_inversion,
    round_to_state,
    simplex_project,
)
from .process_tomography import (
    BoostResult,
    ChannelSpec,
    base_estimate,
    boost_confidence,
    fix_phases,
    learn_columns,
    reference_transform,
)
from .bootstrap import (
    BootstrapIterate,
    BootstrapTrace,
    InsufficientDataError,
    bootstrap,
    heisenberg_slope,
)
from .hard_instances import (
    GadgetResult,
    IdentifyResult,
    ReflectionNet,
    ancilla_truncation_error,
    build_net,
    frac_reflection,
    gadget_amplitude,
    gadget_apply,
    gadget_matrix,
    identification_bound,
    identify_via_powering,
    sample_reflection,
)
from .eigenphases import (
    EigenphaseSimulator,
    PhaseDiffSampler,
    cluster_phases,
    estimate_eigenphases,
    phase_diff_estimate,
    swap_gadget_qubit_state,
)
from .constants import BOOTSTRAP_BASE, DEFAULT, SCALING_CONTROL, TomographyConstants
from .harness import (
    CSV_HEADER,
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentRecord,
    make_real_base,
    read_results_csv,
    run_experiment,
    summarize,
    write_results_csv,
)

__version__ = "0.1.0"
