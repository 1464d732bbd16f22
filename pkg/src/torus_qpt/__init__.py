"""Boundary-coupling phase transition diagnostics for flux-threaded tight-binding tori.

The package builds brick-wall honeycomb and square lattices on a torus
with one tunable boundary bond per row, reduces them to momentum-block
ring Hamiltonians, and analyzes the avoided crossing of the near-zero
modes: degenerate perturbation theory for the midgap pair, ground-state
energy curvature sweeps, finite-size scaling of the curvature peak, and
fidelity-susceptibility curves, plus a self-check suite and a CLI.
"""

from .blocks import (
    BlochBlock,
    blocks_to_csv,
    critical_modes,
    honeycomb_blocks,
    in_critical_set,
    lattice_blocks,
    peierls_ring,
    square_blocks,
    square_ring,
    union_eigenvalues,
)
from .criticality import (
    FidelityCurve,
    GroundStateResult,
    LinearFit,
    ScalingReport,
    SweepResult,
    d2_analytic,
    exact_midgap_gap,
    fidelity_exact,
    fidelity_to_csv,
    golden_section_min,
    ground_energy_exact,
    ground_energy_perturbative,
    linear_fit,
    scaling_scan,
    scaling_to_json_dict,
    sweep,
    sweep_to_csv,
)
from .eigensolve import (
    Spectrum,
    degenerate_clusters,
    eigh,
    matrix_fingerprint,
    square_ring_closed_form,
)
from .models import (
    HermitianOperator,
    ModelSpec,
    build_honeycomb_torus,
    build_lattice,
    build_square_torus,
    site_basis,
)
from .ssh import (
    CONVENTIONS,
    MidgapSolution,
    ZeroModePair,
    build_h0_hprime,
    corner_coupling,
    fidelity_at_minimum,
    fidelity_perturbative,
    midgap_perturbation,
    omega_factor,
    zero_modes,
)
from .validate import DEFAULT_TOLERANCES, run_validation

__version__ = "0.1.0"

__all__ = [
    "BlochBlock",
    "CONVENTIONS",
    "DEFAULT_TOLERANCES",
    "FidelityCurve",
    "GroundStateResult",
    "HermitianOperator",
    "LinearFit",
    "MidgapSolution",
    "ModelSpec",
    "ScalingReport",
    "Spectrum",
    "SweepResult",
    "ZeroModePair",
    "__version__",
    "blocks_to_csv",
    "build_h0_hprime",
    "build_honeycomb_torus",
    "build_lattice",
    "build_square_torus",
    "corner_coupling",
    "critical_modes",
    "d2_analytic",
    "degenerate_clusters",
    "eigh",
    "exact_midgap_gap",
    "fidelity_at_minimum",
    "fidelity_exact",
    "fidelity_perturbative",
    "fidelity_to_csv",
    "golden_section_min",
    "ground_energy_exact",
    "ground_energy_perturbative",
    "honeycomb_blocks",
    "in_critical_set",
    "lattice_blocks",
    "linear_fit",
    "matrix_fingerprint",
    "midgap_perturbation",
    "omega_factor",
    "peierls_ring",
    "run_validation",
    "scaling_scan",
    "scaling_to_json_dict",
    "site_basis",
    "square_blocks",
    "square_ring",
    "square_ring_closed_form",
    "sweep",
    "sweep_to_csv",
    "union_eigenvalues",
    "zero_modes",
]
