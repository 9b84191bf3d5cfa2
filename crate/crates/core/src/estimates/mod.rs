//! Counting quantities and inequality checks.

mod duality;
mod energy;
mod extension;
mod incidence;
mod weak;

pub use duality::{
    alternating_extremals, dense_extension_ratio, pairing_identity, restriction_ratio, AlternatingRun, PairingCheck,
};
pub use energy::{
    additive_energy, energy_by_transform, energy_chain_check, energy_report, orthogonal_triples, spectral_counts, zero_distance_pairs,
    ChainReport, EnergyReport, SpectralCounts, TripleCount, DIRECT_TRIPLE_LIMIT, TRANSFORM_TRIPLE_LIMIT,
};
pub use extension::{
    extension_ratio, necessary_exponents, subspace_ratio_closed_form, witness_exponent_prediction, RatioSample,
    Route, TestFunction, SPARSE_COST_LIMIT,
};
pub use incidence::{
    collinear_triple_check, incidence_count, max_line_intersection, paraboloid_pair_count, IncidenceReport,
    PairCountReport,
};
pub use weak::{
    restriction_l2_zero_sphere, weak_l4_nonzero_sphere, L2Report, RegimeBound, WeakL4Report, ZeroSphereKernel,
};
