//! Exact stochastic dominance and diversification certificates for finite
//! distributions.
//!
//! Probabilities and values are exact rationals throughout, so every
//! dominance decision and every certificate is exact: a certificate that
//! verifies is a proof, with no tolerance involved.

// errors carry exact rationals for diagnostics
#![allow(clippy::result_large_err)]

pub mod certify;
pub mod dist;
pub mod dominance;
pub mod error;
mod matching;
mod quantile;
pub mod rational;
pub mod risk;
pub mod transport;

pub use certify::{
    birkhoff_decompose, build_doubly_stochastic, certify_div1, decompose_ssd, lift_delta_gamma,
    mps_coupling, t_transforms, CertificateTerm, DecompositionResult, Div1Witness,
    DoublyStochasticMatrix, LiftResult, MartingaleCoupling, PermutationCertificate, TTransform,
};
pub use dist::{
    common_refinement, expand_to_uniform_grid, from_samples, mixture, quantize_values, Atom,
    JointDist, SimpleDist, UniformGrid, WeightVector,
};
pub use dominance::{
    check_fsd, check_majorization, check_ssd, fsd_violation, ssd_violation, verify_div1_certificate,
    verify_div2_instance, Majorization,
};
pub use error::{Error, Result};
pub use rational::Rational;
pub use risk::{expected_shortfall, ssd_gap, EsCurve};
pub use transport::{kantorovich, kantorovich_cdf};
