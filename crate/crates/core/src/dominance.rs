//! Decision procedures for first and second order stochastic dominance,
//! majorization of equiprobable grids, and verification of diversification
//! witnesses.
//!
//! Second-order dominance is decided in the quantile domain: `xi` dominates
//! `eta` iff `int_0^alpha (q_eta - q_xi) du <= 0` for every `alpha`, and since
//! both tail integrals are piecewise linear it suffices to check the merged
//! breakpoints.

use num_traits::{Signed, Zero};

use crate::certify::PermutationCertificate;
use crate::dist::{JointDist, SimpleDist, UniformGrid, WeightVector};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::risk::max_gap;

/// `F_xi(x) <= F_eta(x)` for every `x`.
pub fn check_fsd(xi: &SimpleDist, eta: &SimpleDist) -> bool {
    fsd_violation(xi, eta).is_none()
}

/// Smallest `x` with `P(xi <= x) > P(eta <= x)`; `None` when `xi` dominates
/// `eta` in the first order.
pub fn fsd_violation(xi: &SimpleDist, eta: &SimpleDist) -> Option<Rational> {
    // both sides are step functions; compare right limits at every atom
    let (a, b) = (xi.atoms(), eta.atoms());
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (Rational::zero(), Rational::zero());
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => (&p.value).min(&q.value),
            (Some(p), None) => &p.value,
            (None, Some(q)) => &q.value,
            (None, None) => unreachable!(),
        };
        let step_a = a.get(i).is_some_and(|t| &t.value == x);
        let step_b = b.get(j).is_some_and(|t| &t.value == x);
        if step_a {
            fa += &a[i].prob;
        }
        if step_b {
            fb += &b[j].prob;
        }
        if fa > fb {
            return Some(x.clone());
        }
        i += step_a as usize;
        j += step_b as usize;
    }
    None
}

/// Level at which second-order dominance of `xi` over `eta` fails worst,
/// with the size of the violation; `None` when dominance holds.
pub fn ssd_violation(xi: &SimpleDist, eta: &SimpleDist) -> Option<(Rational, Rational)> {
    let (alpha, gap) = max_gap(xi, eta);
    gap.is_positive().then_some((alpha, gap))
}

/// `int_{-inf}^a F_xi <= int_{-inf}^a F_eta` for every `a`.
pub fn check_ssd(xi: &SimpleDist, eta: &SimpleDist) -> bool {
    ssd_violation(xi, eta).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Majorization {
    Holds,
    /// Shortest prefix length `j` (1-based) at which
    /// `sum_{i<=j} a_i >= sum_{i<=j} b_i` fails, or `n` when only the totals
    /// differ.
    ViolatedAt(usize),
}

impl Majorization {
    pub fn holds(self) -> bool {
        self == Majorization::Holds
    }
}

/// Equal totals and ascending prefix sums of `a` at least those of `b`.
pub fn check_majorization(a: &UniformGrid, b: &UniformGrid) -> Result<Majorization> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let mut diff = Rational::zero();
    for (k, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
        diff += x - y;
        if diff.is_negative() {
            return Ok(Majorization::ViolatedAt(k + 1));
        }
    }
    if !diff.is_zero() {
        return Ok(Majorization::ViolatedAt(a.n()));
    }
    Ok(Majorization::Holds)
}

/// Checks a permutation certificate against the definition of
/// diversification dominance: every permuted copy of `eta`'s grid is
/// distributed as `eta`, and their weighted sum is distributed as `xi`.
///
/// Fails with an error when the certificate cannot be laid over `eta`'s grid
/// (wrong size or malformed permutations); returns `false` when it is well
/// formed but does not witness the relation.
pub fn verify_div1_certificate(
    xi: &SimpleDist,
    eta: &SimpleDist,
    cert: &PermutationCertificate,
) -> Result<bool> {
    let grid = UniformGrid::with_size(eta, cert.n())?;
    cert.check_structure()?;

    let weights: Vec<Rational> = cert.terms().iter().map(|t| t.weight.clone()).collect();
    if WeightVector::new(weights).is_err() {
        return Ok(false);
    }
    // each copy rearranges the grid of `eta` by a bijection (checked above),
    // so it is distributed as `eta`
    let b = grid.values();
    let combined = SimpleDist::uniform(cert.reconstruct(b))?;
    Ok(&combined == xi)
}

/// `xi` is the law of `sum_i w_i X_i` and `eta` the `w`-mixture of the
/// marginals of `X ~ joint`.
pub fn verify_div2_instance(
    xi: &SimpleDist,
    eta: &SimpleDist,
    joint: &JointDist,
    w: &WeightVector,
) -> Result<bool> {
    let combination = joint.convex_combination(w)?;
    let mix = crate::dist::mixture(&joint.marginals(), w)?;
    Ok(&combination == xi && &mix == eta)
}
