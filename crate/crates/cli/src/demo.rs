//! Law-of-large-numbers demonstration: the average of `n` independent
//! Exp(1) losses, discretized exactly, for `n = 1, 2, 4, ...`.
//!
//! Each stage diversifies the previous one, so its Expected Shortfall can
//! only go down, while the stages converge to the constant 1 in the
//! Kantorovich metric. The limit is not reached by any finite stage.

use std::fmt::Write as _;

use divdom::rational::{format_rational, from_f64, int, to_decimal_string};
use divdom::{check_ssd, expected_shortfall, kantorovich, Rational, SimpleDist};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::CliError;
use crate::io::DECIMAL_DIGITS;

/// Largest accepted number of doublings.
pub const MAX_DOUBLINGS: u32 = 30;

#[derive(Debug, Clone)]
pub struct DemoParams {
    pub max_doublings: u32,
    pub alpha: Rational,
    /// Number of equiprobable points per stage.
    pub grid: usize,
    /// Draw samples from this seed instead of using quantile midpoints.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoRow {
    pub n: u64,
    pub es: Rational,
    pub kappa_to_one: Rational,
    /// The stage dominates the first stage in the second order.
    pub ssd_over_first: bool,
}

/// Inverse of the regularized lower incomplete gamma function in its second
/// argument: the `u`-quantile of Gamma(`shape`, 1).
pub fn gamma_quantile(shape: f64, u: f64) -> f64 {
    debug_assert!(shape > 0.0 && u > 0.0 && u < 1.0);
    let (mut lo, mut hi) = (0.0_f64, shape.max(1.0));
    while gamma_lr(shape, hi) < u {
        lo = hi;
        hi *= 2.0;
    }
    let log_norm = ln_gamma(shape);
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = gamma_lr(shape, y) - u;
        if f == 0.0 {
            return y;
        }
        if f < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let density = ((shape - 1.0) * y.ln() - y - log_norm).exp();
        let mut next = y - f / density;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 4.0 * f64::EPSILON * y || hi - lo <= 4.0 * f64::EPSILON * hi {
            return next;
        }
        y = next;
    }
    y
}

/// Mean of `n` Exp(1) variables at the midpoints `(k - 1/2) / grid` of its
/// quantile function, each point rationalized exactly.
pub fn quantile_stage(n: u64, grid: usize) -> Result<SimpleDist, CliError> {
    let shape = n as f64;
    let values = (1..=grid)
        .map(|k| {
            let u = (k as f64 - 0.5) / grid as f64;
            from_f64(gamma_quantile(shape, u) / shape)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimpleDist::uniform(values)?)
}

/// Empirical law of `grid` draws of the mean of `n` Exp(1) variables.
pub fn sampled_stage(n: u64, grid: usize, rng: &mut ChaCha8Rng) -> Result<SimpleDist, CliError> {
    let law = Gamma::new(n as f64, 1.0 / n as f64).map_err(|e| CliError::Parameter(e.to_string()))?;
    let draws: Vec<f64> = (0..grid).map(|_| law.sample(rng)).collect();
    Ok(divdom::from_samples(&draws)?)
}

pub fn run_demo(params: &DemoParams) -> Result<Vec<DemoRow>, CliError> {
    if params.max_doublings > MAX_DOUBLINGS {
        return Err(CliError::Parameter(format!(
            "max-doublings must be at most {MAX_DOUBLINGS}"
        )));
    }
    if params.grid == 0 {
        return Err(CliError::Parameter("grid must be positive".into()));
    }
    let one = SimpleDist::point(int(1));
    let mut rng = params.seed.map(ChaCha8Rng::seed_from_u64);
    let mut first: Option<SimpleDist> = None;
    let mut rows = Vec::new();
    for d in 0..=params.max_doublings {
        let n = 1u64 << d;
        let stage = match rng.as_mut() {
            Some(rng) => sampled_stage(n, params.grid, rng)?,
            None => quantile_stage(n, params.grid)?,
        };
        let es = expected_shortfall(&stage, &params.alpha)?;
        let first = first.get_or_insert_with(|| stage.clone());
        rows.push(DemoRow {
            n,
            es,
            kappa_to_one: kantorovich(&stage, &one),
            ssd_over_first: check_ssd(&stage, first),
        });
    }
    Ok(rows)
}

pub fn demo_csv(rows: &[DemoRow]) -> String {
    let mut out = String::from("n,es_alpha,kappa_to_one,ssd_over_first,es_alpha_exact,kappa_to_one_exact\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            to_decimal_string(&r.es, DECIMAL_DIGITS),
            to_decimal_string(&r.kappa_to_one, DECIMAL_DIGITS),
            r.ssd_over_first,
            format_rational(&r.es),
            format_rational(&r.kappa_to_one),
        )
        .expect("writing to a String");
    }
    out
}
