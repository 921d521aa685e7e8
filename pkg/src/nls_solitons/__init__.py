"""Standing waves of coupled cubic Schrodinger systems.

Construction, verification and classification of scalar-type solitary
waves for two-component systems with gauge-invariant cubic (or, for the
two-wave resonance model, quadratic) nonlinearities.
"""

from .systems import (
    System,
    MatrixVectorForm,
    nls1,
    nls2,
    nls3,
    nls4,
    nls5,
    colin_ohta,
    from_lambdas,
    custom,
    make_standard,
    eval_g,
    eval_F,
    lambdas_to_cv,
    cv_to_lambdas,
    energy_criterion,
    transform_system,
    transform_lambdas,
    diagonal_phase_transform,
    unitary_angle,
    system_from_dict,
    system_to_dict,
)
from .sphere import (
    OrbitFamily,
    SphereMin,
    TrigRoots,
    solve_trig,
    rho_star,
    gmin_analytic,
    gmin_numeric,
    critical_points,
    orbit_distance,
    co_kappa_c,
    co_trichotomy,
)
from .profiles import (
    ConvergenceError,
    RadialProfile,
    ScaledProfile,
    solve_Q,
    rescale,
    profile_norms,
    sigma_d,
)
from .states import (
    Functionals,
    VectorState,
    StateCheck,
    GNReport,
    PotentialWell,
    StabilityVerdict,
    functionals,
    field_functionals,
    action_min,
    build_ground_states,
    build_bound_states,
    verify_excited,
    gn_constant,
    gn_check,
    potential_well,
    stability_verdict,
)
from .dynamics import (
    Grid,
    GridState,
    Stepper,
    Diagnostics,
    OrbitTracker,
    ExperimentResult,
    step,
    evolve,
    standing_wave_solution,
    pseudo_conformal_blowup,
    localized_virial,
    soliton_experiment,
    stability_experiment,
    blowup_experiment,
    pseudoconformal_experiment,
    write_snapshot,
    read_snapshot,
)
from .classify import (
    KernelReport,
    MatchResult,
    NotInClassError,
    rank_and_kernel,
    admissible_direction,
    structure_invariants,
    match_standard_form,
)

__all__ = [
    "System",
    "MatrixVectorForm",
    "nls1",
    "nls2",
    "nls3",
    "nls4",
    "nls5",
    "colin_ohta",
    "from_lambdas",
    "custom",
    "make_standard",
    "eval_g",
    "eval_F",
    "lambdas_to_cv",
    "cv_to_lambdas",
    "energy_criterion",
    "transform_system",
    "transform_lambdas",
    "diagonal_phase_transform",
    "unitary_angle",
    "system_from_dict",
    "system_to_dict",
    "OrbitFamily",
    "SphereMin",
    "TrigRoots",
    "solve_trig",
    "rho_star",
    "gmin_analytic",
    "gmin_numeric",
    "critical_points",
    "orbit_distance",
    "co_kappa_c",
    "co_trichotomy",
    "ConvergenceError",
    "RadialProfile",
    "ScaledProfile",
    "solve_Q",
    "rescale",
    "profile_norms",
    "sigma_d",
    "Functionals",
    "VectorState",
    "StateCheck",
    "GNReport",
    "PotentialWell",
    "StabilityVerdict",
    "functionals",
    "field_functionals",
    "action_min",
    "build_ground_states",
    "build_bound_states",
    "verify_excited",
    "gn_constant",
    "gn_check",
    "potential_well",
    "stability_verdict",
    "Grid",
    "GridState",
    "Stepper",
    "Diagnostics",
    "OrbitTracker",
    "ExperimentResult",
    "step",
    "evolve",
    "standing_wave_solution",
    "pseudo_conformal_blowup",
    "localized_virial",
    "soliton_experiment",
    "stability_experiment",
    "blowup_experiment",
    "pseudoconformal_experiment",
    "write_snapshot",
    "read_snapshot",
    "KernelReport",
    "MatchResult",
    "NotInClassError",
    "rank_and_kernel",
    "admissible_direction",
    "structure_invariants",
    "match_standard_form",
]
