//! Numerical laboratory for mixtures of random qubit states.
//!
//! Two ways of combining a pair of qubit states are studied side by side:
//! the equiprobable convex mixture and a "quantum addition" obtained by
//! conjugating the pair with a partial-swap unitary and tracing out one
//! subsystem. The crate provides
//!
//! - exact spectral densities (pdf, cdf, inverse-cdf sampling) for the
//!   outputs of both rules and for the underlying random-state ensembles,
//! - closed-form and quadrature averages of the output entropy, squared
//!   fidelity, and related statistics,
//! - seeded, reproducible Monte Carlo estimators that cross-check every
//!   analytic result,
//! - Jensen-Shannon style divergences for both rules and a randomized
//!   search for triangle-inequality violations of the induced distance.
//!
//! Entropies are in bits unless a function says otherwise. All sampling
//! flows through [`SeededSampler`]; equal seeds give equal results,
//! including across worker counts wherever a function documents it.

pub mod bloch;
pub mod densities;
pub mod divergence;
pub mod ensembles;
pub mod error;
pub mod matrix;
pub mod mixing;
pub mod quad;
pub mod stats;

pub use bloch::{
    binary_entropy, bloch_to_matrix, entropy_phi, fidelity_squared, matrix_to_bloch,
    rel_entropy_coherence, BlochVector, DensityMatrix2, EntropyBits,
};
pub use densities::{DensityKind, Interval, SupportSpec};
pub use divergence::{
    distance_equi, distance_qadd, qjsd_equi, qjsd_qadd, triangle_deficits, violation_search,
    TripleMode, TripleReport, ViolationReport,
};
pub use ensembles::{OrbitSpec, SeededSampler};
pub use error::{Error, Result};
pub use matrix::{Mat2, Mat4};
pub use mixing::{
    channel_et, channel_et_closed_form, mix_weighted, partial_swap_unitary, quantum_add_bloch,
    MixCurve, PartialSwapUnitary,
};
pub use quad::{integrate, GkRule, QuadEstimate, QuadratureConfig};
pub use stats::{
    avg_entropy_equi_hs, avg_entropy_qadd_hs, avg_fidelity_squared_exact,
    avg_fidelity_squared_quadrature, cond_avg_entropy_equi, cond_avg_entropy_qadd, ks_one_sample,
    ks_threshold, mc_avg_coherence_mean_n, mc_avg_entropy_equi_hs, mc_avg_entropy_mean_n,
    mc_avg_entropy_qadd_hs, mc_avg_fidelity_squared, mc_mean, page_entropy, McEstimate,
    PageEntropy,
};
