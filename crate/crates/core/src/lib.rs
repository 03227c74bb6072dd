//! Exact Kronecker coefficients and the polytope of admissible spectral
//! triples of bipartite quantum states.
//!
//! - [`partitions`]: Young diagrams, enumeration and row-wise arithmetic.
//! - [`symfunc`]: characters of `S_k`, dimensions, Schur polynomials and
//!   Schur–Weyl outcome probabilities.
//! - [`kronecker`]: Kronecker coefficients, the semigroup of nonzero
//!   triples and bounded generator extraction.
//! - [`spectra`]: density operators, marginal spectra, purification, the
//!   spectrum-estimation bound and witness-state search.
//! - [`polytope`]: the hull of normalized triples with exact LP membership
//!   and Carathéodory certificates.

pub mod error;
pub mod kronecker;
pub mod lp;
pub mod partitions;
pub mod polytope;
pub mod spectra;
pub mod symfunc;

pub use error::{Error, Result};
pub use kronecker::{
    check_semigroup, check_stability, entropy_check, enumerate_kron, enumerate_kron_up_to, extract_generators,
    kronecker_coefficient, EntropyReport, KronSet, KronTriple, RowBounds,
};
pub use partitions::{enumerate_partitions, NormalizedPartition, Partition};
pub use polytope::{build_polytope, find_scaling, CaratheodoryCert, Membership, PolytopeV, RationalTriple};
pub use spectra::{
    check_pinsker, estimation_bound, estimation_convergence, find_witness_state, kl_divergence, partial_trace,
    purify, random_density, spectral_triple, DensityOperator, PureState, Side, SpectralTriple, WitnessSearch,
};
pub use symfunc::{
    character, dim_gl, dim_sk, schur_poly, schur_weyl_prob, CharacterCache, CharacterValue, CycleType, Spectrum,
};
