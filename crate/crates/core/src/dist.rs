//! Finite distributions on the real line with exact rational data.
//!
//! [`SimpleDist`] is the canonical form used everywhere: atoms sorted by
//! value, distinct values, strictly positive probabilities summing to one.
//! Two distributions are equal iff their canonical atom lists are equal.
//!
//! [`UniformGrid`] is the equiprobable representation: `n` sorted values,
//! each carrying probability `1/n`. Every distribution with rational
//! probabilities has one, with `n` the lcm of the probability denominators.

use std::collections::BTreeMap;
use std::num::NonZeroU64;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_f64, lcm_of_denominators, Rational};

/// Largest grid [`expand_to_uniform_grid`] will build by default.
pub const DEFAULT_GRID_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub value: Rational,
    pub prob: Rational,
}

/// A distribution with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleDist {
    atoms: Vec<Atom>,
}

impl SimpleDist {
    /// Canonicalizes `(value, prob)` pairs: merges equal values, drops zero
    /// probabilities and sorts. Fails on negative probabilities, an empty
    /// support, or a total mass other than exactly one.
    pub fn new(pairs: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (value, prob) in pairs {
            if prob.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {prob} at value {value}"
                )));
            }
            *merged.entry(value).or_insert_with(Rational::zero) += prob;
        }
        let atoms: Vec<Atom> = merged
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(value, prob)| Atom { value, prob })
            .collect();
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms with positive mass".into()));
        }
        let total: Rational = atoms.iter().map(|a| &a.prob).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { atoms })
    }

    /// Dirac mass at `value`.
    pub fn point(value: Rational) -> Self {
        Self {
            atoms: vec![Atom {
                value,
                prob: Rational::one(),
            }],
        }
    }

    /// Equal-weight distribution of `values` (duplicates merge).
    pub fn uniform(values: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let values: Vec<Rational> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::InvalidDistribution("no values".into()));
        }
        let p = Rational::new(BigInt::one(), BigInt::from(values.len()));
        Self::new(values.into_iter().map(|v| (v, p.clone())))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.atoms.iter().map(|a| &a.value)
    }

    pub fn min_value(&self) -> &Rational {
        &self.atoms[0].value
    }

    pub fn max_value(&self) -> &Rational {
        &self.atoms[self.atoms.len() - 1].value
    }

    pub fn mean(&self) -> Rational {
        self.atoms.iter().map(|a| &a.value * &a.prob).sum()
    }

    /// `P(X < x)`: the left-continuous distribution function.
    pub fn cdf_at(&self, x: &Rational) -> Rational {
        self.atoms
            .iter()
            .take_while(|a| &a.value < x)
            .map(|a| &a.prob)
            .sum()
    }

    /// `P(X <= x)`: the right limit of [`cdf_at`](Self::cdf_at).
    pub fn cdf_le(&self, x: &Rational) -> Rational {
        self.atoms
            .iter()
            .take_while(|a| &a.value <= x)
            .map(|a| &a.prob)
            .sum()
    }

    /// Lower quantile `inf{x : P(X <= x) >= u}` for `u` in `(0, 1]`.
    pub fn quantile_at(&self, u: &Rational) -> Result<Rational> {
        if !u.is_positive() || u > &Rational::one() {
            return Err(Error::Domain(format!("quantile level {u} outside (0, 1]")));
        }
        let mut cum = Rational::zero();
        for atom in &self.atoms {
            cum += &atom.prob;
            if &cum >= u {
                return Ok(atom.value.clone());
            }
        }
        unreachable!("probabilities sum to one")
    }

    /// Quantile steps as `(upper breakpoint, value)`: the lower quantile
    /// equals `value` on `(previous breakpoint, upper breakpoint]`.
    pub fn quantile_steps(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        let mut cum = Rational::zero();
        self.atoms.iter().map(move |a| {
            cum += &a.prob;
            (cum.clone(), &a.value)
        })
    }

    /// Pushes every value through `f`; colliding images merge.
    pub fn map_values(&self, mut f: impl FnMut(&Rational) -> Rational) -> Self {
        Self::new(self.atoms.iter().map(|a| (f(&a.value), a.prob.clone())))
            .expect("image of a valid distribution is valid")
    }

    pub fn shift(&self, c: &Rational) -> Self {
        self.map_values(|v| v + c)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map_values(|v| v * factor)
    }

    /// Distribution of `min(X, c)`.
    pub fn truncate_above(&self, c: &Rational) -> Self {
        self.map_values(|v| v.min(c).clone())
    }

    /// lcm of the probability denominators: the smallest uniform grid size.
    pub fn grid_size(&self) -> BigInt {
        lcm_of_denominators(self.atoms.iter().map(|a| &a.prob))
    }
}

/// `n` sorted values, each with probability `1/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniformGrid {
    values: Vec<Rational>,
}

impl UniformGrid {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution("empty grid".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidDistribution("grid values not sorted".into()));
        }
        Ok(Self { values })
    }

    pub fn from_unsorted(mut values: Vec<Rational>) -> Result<Self> {
        values.sort();
        Self::new(values)
    }

    /// Expands `d` onto exactly `n` equiprobable slots. `n` must be a
    /// multiple of `d.grid_size()`.
    pub fn with_size(d: &SimpleDist, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("grid size must be positive".into()));
        }
        let n_big = BigInt::from(n);
        let mut values = Vec::with_capacity(n);
        for atom in d.atoms() {
            let copies = &atom.prob * Rational::from_integer(n_big.clone());
            if !copies.is_integer() {
                return Err(Error::LengthMismatch {
                    expected: d.grid_size().to_usize().unwrap_or(usize::MAX),
                    found: n,
                });
            }
            let copies = copies.to_integer().to_usize().expect("at most n copies");
            values.extend(std::iter::repeat_n(atom.value.clone(), copies));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn to_dist(&self) -> SimpleDist {
        SimpleDist::uniform(self.values.iter().cloned()).expect("grid is non-empty")
    }
}

fn checked_grid_size(size: BigInt, cap: usize) -> Result<usize> {
    match size.to_usize() {
        Some(n) if n <= cap => Ok(n),
        _ => Err(Error::RefinementTooLarge {
            n: size.to_string(),
            cap,
        }),
    }
}

pub fn expand_to_uniform_grid(d: &SimpleDist) -> Result<UniformGrid> {
    expand_to_uniform_grid_with_cap(d, DEFAULT_GRID_CAP)
}

pub fn expand_to_uniform_grid_with_cap(d: &SimpleDist, cap: usize) -> Result<UniformGrid> {
    let n = checked_grid_size(d.grid_size(), cap)?;
    UniformGrid::with_size(d, n)
}

/// Both distributions on one equiprobable grid of the smallest common size.
pub fn common_refinement(a: &SimpleDist, b: &SimpleDist) -> Result<(UniformGrid, UniformGrid)> {
    common_refinement_with_cap(a, b, DEFAULT_GRID_CAP)
}

pub fn common_refinement_with_cap(
    a: &SimpleDist,
    b: &SimpleDist,
    cap: usize,
) -> Result<(UniformGrid, UniformGrid)> {
    let n = checked_grid_size(a.grid_size().lcm(&b.grid_size()), cap)?;
    Ok((UniformGrid::with_size(a, n)?, UniformGrid::with_size(b, n)?))
}

/// A point of the standard simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<Rational>,
}

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidWeights(format!("negative weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        let w = Rational::new(BigInt::one(), BigInt::from(m));
        Ok(Self {
            weights: vec![w; m],
        })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Joint law of a random vector with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointDist {
    dim: usize,
    atoms: Vec<(Vec<Rational>, Rational)>,
}

impl JointDist {
    /// Canonicalizes like [`SimpleDist::new`]; every vector must have `dim`
    /// coordinates.
    pub fn new(
        dim: usize,
        atoms: impl IntoIterator<Item = (Vec<Rational>, Rational)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDistribution("zero-dimensional joint law".into()));
        }
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (vector, prob) in atoms {
            if vector.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    found: vector.len(),
                });
            }
            if prob.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative probability {prob}")));
            }
            *merged.entry(vector).or_insert_with(Rational::zero) += prob;
        }
        let atoms: Vec<_> = merged.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms with positive mass".into()));
        }
        let total: Rational = atoms.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { dim, atoms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Vec<Rational>, Rational)] {
        &self.atoms
    }

    /// Law of coordinate `index` (zero-based).
    pub fn marginal(&self, index: usize) -> Result<SimpleDist> {
        if index >= self.dim {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.dim,
            });
        }
        SimpleDist::new(self.atoms.iter().map(|(v, p)| (v[index].clone(), p.clone())))
    }

    pub fn marginals(&self) -> Vec<SimpleDist> {
        (0..self.dim)
            .map(|i| self.marginal(i).expect("index in range"))
            .collect()
    }

    /// Law of the scalar `sum_i w_i X_i`.
    pub fn convex_combination(&self, w: &WeightVector) -> Result<SimpleDist> {
        if w.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        SimpleDist::new(self.atoms.iter().map(|(v, p)| {
            let x: Rational = v.iter().zip(w.weights()).map(|(x, b)| x * b).sum();
            (x, p.clone())
        }))
    }
}

/// Law whose distribution function is `sum_i w_i F_i`.
pub fn mixture(ds: &[SimpleDist], w: &WeightVector) -> Result<SimpleDist> {
    if ds.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: ds.len(),
            found: w.len(),
        });
    }
    SimpleDist::new(
        ds.iter()
            .zip(w.weights())
            .filter(|(_, wi)| !wi.is_zero())
            .flat_map(|(d, wi)| d.atoms().iter().map(move |a| (a.value.clone(), &a.prob * wi))),
    )
}

/// Empirical law of the sample, each observation weighted `1/N`.
pub fn from_samples(xs: &[f64]) -> Result<SimpleDist> {
    if xs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let values = xs.iter().map(|&x| from_f64(x)).collect::<Result<Vec<_>>>()?;
    SimpleDist::uniform(values)
}

/// Rounds every value to the nearest multiple of `1/q`, ties downward.
/// Moves each atom by at most `1/(2q)`, which bounds the transport distance.
pub fn quantize_values(d: &SimpleDist, q: NonZeroU64) -> SimpleDist {
    let q = Rational::from_integer(BigInt::from(q.get()));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    d.map_values(|v| {
        let t = v * &q;
        let floor = t.floor();
        let k = if &t - &floor <= half {
            floor
        } else {
            floor + Rational::one()
        };
        k / &q
    })
}
