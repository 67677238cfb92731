//! Expected Shortfall and the second-order dominance gap.
//!
//! For a simple distribution the lower quantile `q` is a step function, so
//! the tail integral `T(alpha) = int_0^alpha q(u) du` is piecewise linear with
//! kinks at the cumulative probabilities. Everything here is evaluated
//! exactly on those pieces.
//!
//! ```text
//! ES_alpha(X) = -T(alpha) / alpha
//! gap(xi, eta) = max(0, sup_alpha [T_eta(alpha) - T_xi(alpha)])
//! ```

use num_traits::{One, Signed, Zero};

use crate::dist::SimpleDist;
use crate::error::{Error, Result};
use crate::quantile::merged_segments;
use crate::rational::Rational;

/// Tail integral `alpha -> int_0^alpha q(u) du` stored at its breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsCurve {
    /// `(alpha, tail integral at alpha, quantile value on the step ending at alpha)`
    breakpoints: Vec<(Rational, Rational, Rational)>,
}

impl EsCurve {
    pub fn new(d: &SimpleDist) -> Self {
        let mut tail = Rational::zero();
        let mut prev = Rational::zero();
        let breakpoints = d
            .quantile_steps()
            .map(|(alpha, value)| {
                tail += (&alpha - &prev) * value;
                prev = alpha.clone();
                (alpha, tail.clone(), value.clone())
            })
            .collect();
        Self { breakpoints }
    }

    /// `(alpha, tail integral)` at each kink; the last entry is `(1, mean)`.
    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.breakpoints.iter().map(|(a, t, _)| (a, t))
    }

    pub fn tail_integral(&self, alpha: &Rational) -> Result<Rational> {
        check_level(alpha)?;
        let mut prev_alpha = Rational::zero();
        let mut prev_tail = Rational::zero();
        for (a, t, v) in &self.breakpoints {
            if alpha <= a {
                return Ok(prev_tail + (alpha - prev_alpha) * v);
            }
            prev_alpha = a.clone();
            prev_tail = t.clone();
        }
        unreachable!("last breakpoint is 1")
    }

    pub fn expected_shortfall(&self, alpha: &Rational) -> Result<Rational> {
        Ok(-self.tail_integral(alpha)? / alpha)
    }
}

fn check_level(alpha: &Rational) -> Result<()> {
    if !alpha.is_positive() || alpha > &Rational::one() {
        return Err(Error::Domain(format!("level {alpha} outside (0, 1]")));
    }
    Ok(())
}

/// `ES_alpha(d) = -(1/alpha) int_0^alpha q(u) du`, exactly.
pub fn expected_shortfall(d: &SimpleDist, alpha: &Rational) -> Result<Rational> {
    check_level(alpha)?;
    let mut tail = Rational::zero();
    let mut lo = Rational::zero();
    for (hi, value) in d.quantile_steps() {
        if alpha <= &hi {
            tail += (alpha - &lo) * value;
            break;
        }
        tail += (&hi - &lo) * value;
        lo = hi;
    }
    Ok(-tail / alpha)
}

/// Largest value of `G(alpha) = int_0^alpha (q_eta - q_xi) du` over the
/// merged breakpoints, with the first level attaining it.
pub fn max_gap(xi: &SimpleDist, eta: &SimpleDist) -> (Rational, Rational) {
    let mut g = Rational::zero();
    let mut best: Option<(Rational, Rational)> = None;
    for seg in merged_segments(xi, eta) {
        g += &seg.width * (seg.qb - seg.qa);
        if best.as_ref().is_none_or(|(_, b)| &g > b) {
            best = Some((seg.hi, g.clone()));
        }
    }
    best.expect("at least one segment")
}

/// `sup_{alpha in (0,1]} alpha * (ES_alpha(xi) - ES_alpha(eta))`, which is zero
/// exactly when `xi` dominates `eta` in the second order.
pub fn ssd_gap(xi: &SimpleDist, eta: &SimpleDist) -> Rational {
    let (_, g) = max_gap(xi, eta);
    if g.is_positive() {
        g
    } else {
        Rational::zero()
    }
}
