"""Strong stationary duals for Mobius-monotone Markov chains on finite posets."""
from . import errors
from .absorption import (
    AbsorptionLaw,
    BirthChain,
    SeparationCurve,
    absorption_survival,
    chebyshev_bound,
    coupon_collector_bound,
    default_horizon,
    geometric_sum_law,
    pure_birth_projection,
    separation_curve,
    simulate_sst,
    spectrum_from_triangular,
)
from .chain import (
    ChainSpec,
    SpectrumReport,
    ValidationReport,
    evolve,
    is_reversible,
    spectrum_numeric,
    stationary,
    time_reversal,
    validate,
    with_stationary,
)
from .chainfile import LoadedChain, load_chain, save_chain
from .duality import (
    DualChain,
    LinkKernel,
    MonotonicityReport,
    build_dual,
    build_link,
    check_g_monotone,
    check_mobius_monotone,
    down_set_masses,
    intertwining_residuals,
    restrict_to_reachable,
    verify_intertwining,
    verify_sharpness,
)
from .models import (
    CubeSpec,
    IsingSpec,
    LatticeSpec,
    ising_circle,
    ising_circle_dual,
    ising_gibbs_graph,
    kary_cube,
    kary_cube_dual,
    lattice_walk,
    lattice_walk_dual,
)
from .poset import (
    MobiusPair,
    Poset,
    build_poset,
    chain_poset,
    grid_poset,
    max_states,
    mobius_inverse_check,
    mobius_pair,
    product_poset,
)

__all__ = [
    "AbsorptionLaw",
    "BirthChain",
    "ChainSpec",
    "CubeSpec",
    "DualChain",
    "IsingSpec",
    "LatticeSpec",
    "LinkKernel",
    "LoadedChain",
    "MobiusPair",
    "MonotonicityReport",
    "Poset",
    "SeparationCurve",
    "SpectrumReport",
    "ValidationReport",
    "absorption_survival",
    "build_dual",
    "build_link",
    "build_poset",
    "chain_poset",
    "chebyshev_bound",
    "check_g_monotone",
    "check_mobius_monotone",
    "coupon_collector_bound",
    "default_horizon",
    "down_set_masses",
    "errors",
    "evolve",
    "geometric_sum_law",
    "grid_poset",
    "intertwining_residuals",
    "is_reversible",
    "ising_circle",
    "ising_circle_dual",
    "ising_gibbs_graph",
    "kary_cube",
    "kary_cube_dual",
    "lattice_walk",
    "lattice_walk_dual",
    "load_chain",
    "max_states",
    "mobius_inverse_check",
    "mobius_pair",
    "product_poset",
    "pure_birth_projection",
    "restrict_to_reachable",
    "save_chain",
    "separation_curve",
    "simulate_sst",
    "spectrum_from_triangular",
    "spectrum_numeric",
    "stationary",
    "time_reversal",
    "validate",
    "verify_intertwining",
    "verify_sharpness",
    "with_stationary",
]
