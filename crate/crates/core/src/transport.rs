//! Kantorovich (Wasserstein-1) distance on the line.
//!
//! Two independent closed forms are provided: the L1 distance between lower
//! quantile functions and the L1 distance between distribution functions.
//! They must agree exactly; the test suites hold them to that.

use num_traits::{Signed, Zero};

use crate::dist::SimpleDist;
use crate::quantile::merged_segments;
use crate::rational::Rational;

/// `int_0^1 |q_a(u) - q_b(u)| du`.
pub fn kantorovich(a: &SimpleDist, b: &SimpleDist) -> Rational {
    merged_segments(a, b)
        .into_iter()
        .map(|s| s.width * (s.qa - s.qb).abs())
        .sum()
}

/// `int |F_a(x) - F_b(x)| dx`, integrating the step functions between
/// consecutive atoms of either distribution.
pub fn kantorovich_cdf(a: &SimpleDist, b: &SimpleDist) -> Rational {
    let (aa, ba) = (a.atoms(), b.atoms());
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (Rational::zero(), Rational::zero());
    let mut prev: Option<Rational> = None;
    let mut total = Rational::zero();
    while i < aa.len() || j < ba.len() {
        let x = match (aa.get(i), ba.get(j)) {
            (Some(p), Some(q)) => p.value.clone().min(q.value.clone()),
            (Some(p), None) => p.value.clone(),
            (None, Some(q)) => q.value.clone(),
            (None, None) => unreachable!(),
        };
        if let Some(p) = prev {
            total += (&x - p) * (&fa - &fb).abs();
        }
        // F is constant on (x, next atom]; move past every atom at x
        if aa.get(i).is_some_and(|t| t.value == x) {
            fa += &aa[i].prob;
            i += 1;
        }
        if ba.get(j).is_some_and(|t| t.value == x) {
            fb += &ba[j].prob;
            j += 1;
        }
        prev = Some(x);
    }
    total
}
