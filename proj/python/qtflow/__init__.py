"""Pseudo-spectral toolkit for the coupled Navier-Stokes / Q-tensor system."""

from qtflow._core import (  # noqa: F401
    DyadicDecomposition,
    Field,
    Grid,
    ModelParams,
    Regularization,
    Scheme,
    SimState,
    StepperConfig,
    alignment,
    audit_lyapunov,
    audit_uniqueness,
    bony_decompose,
    bulk_force,
    choose_shift_M,
    commutator,
    dissipation_rate,
    divergence,
    divergence_defect,
    epsilon_stabilizers,
    free_energy,
    gradient,
    jq_decompose,
    kinetic_energy,
    laplacian,
    leray_project,
    lp_norm,
    molecular_field,
    mollifier_multiplier,
    mollify,
    osgood_integrate,
    osgood_mu,
    pressure_field,
    random_qtensor,
    random_scalar,
    random_velocity,
    read_snapshot,
    rhs_Q,
    rhs_u,
    run,
    sobolev_norm,
    sobolev_norm_dyadic,
    sobolev_pairing,
    spectral_cutoff,
    step,
    stress_sigma,
    stress_tau,
    symmetrize_tracefree,
    symmetry_defect,
    taylor_green_velocity,
    total_energy,
    trace_defect,
    twin_run,
    uniaxial_stripe_q,
    write_snapshot,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
