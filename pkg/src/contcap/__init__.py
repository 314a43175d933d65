"""Continuous-time quantum coding at desk scale.

Lindblad semigroups, channel calculus, entropic quantities, closed-form
capacity bounds, continuous stabilizer error correction with its recovery
bound, and Haar-averaged decoupling experiments — everything exactly
computable up to system dimension 32 (superoperators up to 1024 x 1024).
"""

from .linalg import (
    default_rng,
    herm_eig,
    expm,
    trace_norm,
    fidelity,
    partial_trace,
    partial_transpose,
    permute_systems,
    haar_unitary,
    random_density,
    random_pure,
    max_entangled,
)
from .channels import (
    QuantumChannel,
    Isometry,
    identity_channel,
    unitary_channel,
    depolarizing_channel,
    pauli_depolarizing_channel,
    completely_depolarizing,
    amplitude_damping_channel,
    random_channel,
    stinespring,
    complementary,
    compose,
    tensor,
    tensor_power,
    isometry_to_unitary,
    entanglement_fidelity,
    diamond_distance_bounds,
    is_ppt_channel,
    channel_to_json,
    channel_from_json,
)
from .lindblad import (
    Liouvillian,
    PiecewiseLiouvillian,
    build,
    from_channel,
    depolarizing_liouvillian,
    semigroup_channel,
    local_sum,
    evolve_piecewise,
    is_purely_dissipative,
    normalize_traceless,
    fixed_points,
    liouvillian_to_json,
    liouvillian_from_json,
)
from .entropy import (
    von_neumann,
    conditional_entropy,
    coherent_information_state,
    coherent_information_channel,
    Ensemble,
    holevo_chi,
    binary_entropy,
    fannes_audenaert_bound,
    continuity_capacity_bound,
)
from .minentropy import min_entropy, MinEntropySolverError
from .typicality import (
    TypicalConfig,
    typical_projector,
    typical_probability,
    schumacher_compress,
    truncated_choi_purification,
)
from .bounds import (
    BoundReport,
    unitary_upper_bound_depolarizing,
    cd_upper_bound,
    delta_k,
    lower_bound_fixed_point,
    ppt_time,
)
from .qec import (
    StabilizerCode,
    five_qubit_code,
    verify_code_conditions,
    coding_liouvillian,
    logical_channel,
    f_closed_form,
    f_series,
    alpha_lower_bound_check,
)
from .classical import ClassicalChain, classical_repetition, classical_alpha_check
from .decoupling import (
    DecouplingRun,
    decoupling_experiment,
    decoupling_bound_check,
    uhlmann_decoder,
    information_disturbance_probe,
)

__version__ = "0.1.0"
