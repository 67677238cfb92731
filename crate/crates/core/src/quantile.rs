use num_traits::Zero;

use crate::dist::SimpleDist;
use crate::rational::Rational;

/// Piece of `(0, 1]` on which both lower quantile functions are constant.
pub(crate) struct Segment<'a> {
    pub hi: Rational,
    pub width: Rational,
    pub qa: &'a Rational,
    pub qb: &'a Rational,
}

/// Merges the quantile breakpoints of `a` and `b` into the common partition
/// of `(0, 1]`, in increasing order.
pub(crate) fn merged_segments<'a>(a: &'a SimpleDist, b: &'a SimpleDist) -> Vec<Segment<'a>> {
    let sa: Vec<_> = a.quantile_steps().collect();
    let sb: Vec<_> = b.quantile_steps().collect();
    let mut out = Vec::with_capacity(sa.len() + sb.len());
    let (mut i, mut j) = (0, 0);
    let mut lo = Rational::zero();
    while i < sa.len() && j < sb.len() {
        let hi = sa[i].0.clone().min(sb[j].0.clone());
        out.push(Segment {
            width: &hi - &lo,
            hi: hi.clone(),
            qa: sa[i].1,
            qb: sb[j].1,
        });
        if sa[i].0 == hi {
            i += 1;
        }
        if sb[j].0 == hi {
            j += 1;
        }
        lo = hi;
    }
    out
}
