//! Constructive witnesses for diversification dominance.
//!
//! Given equiprobable grids `a` (for `xi`) and `b` (for `eta`) with equal
//! totals and `a` prefix-dominating `b`, the pipeline is:
//!
//! 1. [`t_transforms`]: a chain of at most `n - 1` two-coordinate averaging
//!    steps carrying `b` to `a`;
//! 2. [`build_doubly_stochastic`]: their product `D`, with `a = D b`;
//! 3. [`birkhoff_decompose`]: `D` as a convex combination of at most
//!    `(n-1)^2 + 1` permutation matrices.
//!
//! The weights and permutations form a [`PermutationCertificate`]:
//! `a_i = sum_k w_k b_{perm_k[i]}`, so `xi` is a convex combination of
//! rearranged copies of `eta`. The same `D` scaled by `1/n` is a martingale
//! coupling of the two grids.
//!
//! [`lift_delta_gamma`] repairs pairs that are not in dominance by adding
//! non-negative amounts to `xi`'s grid and to the top of `eta`'s grid, and
//! [`decompose_ssd`] splits a dominance with unequal means into a first order
//! step followed by an equal-mean one.



use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dist::{common_refinement, JointDist, SimpleDist, UniformGrid, WeightVector};
use crate::dominance::{check_majorization, ssd_violation, Majorization};
use crate::error::{Error, Result};
use crate::matching::LexMatching;
use crate::rational::{lcm_of_denominators, Rational};

/// `(1 - s) I + s Q_ij`, where `Q_ij` swaps coordinates `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub s: Rational,
}

impl TTransform {
    pub fn apply(&self, v: &mut [Rational]) {
        let moved = &self.s * (&v[self.j] - &v[self.i]);
        v[self.i] += &moved;
        v[self.j] -= &moved;
    }

    /// Replaces `m` by `T m`; only rows `i` and `j` change.
    fn left_multiply(&self, m: &mut [Vec<Rational>]) {
        let (head, tail) = m.split_at_mut(self.j);
        for (x, y) in head[self.i].iter_mut().zip(tail[0].iter_mut()) {
            // equal entries are fixed by the averaging
            if x == y {
                continue;
            }
            let moved = &self.s * (&*y - &*x);
            *x += &moved;
            *y -= &moved;
        }
    }
}

/// Non-negative square matrix whose rows and columns each sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyStochasticMatrix {
    entries: Vec<Vec<Rational>>,
}

impl DoublyStochasticMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if entries.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::InvalidMatrix("negative entry".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if !row.iter().sum::<Rational>().is_one() {
                return Err(Error::InvalidMatrix(format!("row {i} does not sum to 1")));
            }
        }
        for c in 0..n {
            if !entries.iter().map(|r| &r[c]).sum::<Rational>().is_one() {
                return Err(Error::InvalidMatrix(format!("column {c} does not sum to 1")));
            }
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// `D v`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(d, x)| d * x).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateTerm {
    /// Zero-based; slot `i` of the copy takes `b[perm[i]]`.
    pub perm: Vec<usize>,
    pub weight: Rational,
}

/// Weights over rearrangements of an equiprobable grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationCertificate {
    n: usize,
    terms: Vec<CertificateTerm>,
}

impl PermutationCertificate {
    /// Unchecked; see [`check_structure`](Self::check_structure) and
    /// [`verify_div1_certificate`](crate::dominance::verify_div1_certificate).
    pub fn new(n: usize, terms: Vec<CertificateTerm>) -> Self {
        Self { n, terms }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            terms: vec![CertificateTerm {
                perm: (0..n).collect(),
                weight: Rational::one(),
            }],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[CertificateTerm] {
        &self.terms
    }

    /// Every term is a permutation of `0..n`.
    pub fn check_structure(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidCertificate("no terms".into()));
        }
        for (k, term) in self.terms.iter().enumerate() {
            if term.perm.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    found: term.perm.len(),
                });
            }
            let mut seen = vec![false; self.n];
            for &p in &term.perm {
                if p >= self.n || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidCertificate(format!(
                        "term {k} is not a permutation of 0..{}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// `sum_k w_k b[perm_k[i]]` for each slot `i`.
    pub fn reconstruct(&self, b: &[Rational]) -> Vec<Rational> {
        // integer weights over a common denominator, gathered per source slot
        let scale = lcm_of_denominators(self.terms.iter().map(|t| &t.weight));
        let weights: Vec<BigInt> = self
            .terms
            .iter()
            .map(|t| t.weight.numer() * (&scale / t.weight.denom()))
            .collect();
        let scale = Rational::from_integer(scale);
        (0..self.n)
            .map(|i| {
                let mut coef = vec![BigInt::zero(); b.len()];
                for (t, w) in self.terms.iter().zip(&weights) {
                    coef[t.perm[i]] += w;
                }
                let total: Rational = coef
                    .into_iter()
                    .zip(b)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, bj)| Rational::from_integer(c) * bj)
                    .sum();
                total / &scale
            })
            .collect()
    }

    /// `sum_k w_k P(perm_k)`.
    pub fn to_matrix(&self) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); self.n]; self.n];
        for t in &self.terms {
            for (i, &p) in t.perm.iter().enumerate() {
                m[i][p] += &t.weight;
            }
        }
        m
    }

    pub fn weights(&self) -> Result<WeightVector> {
        WeightVector::new(self.terms.iter().map(|t| t.weight.clone()).collect())
    }

    /// Joint law of the rearranged copies: slot `i` (probability `1/n`) maps
    /// to the vector `(b[perm_1[i]], ..., b[perm_m[i]])`.
    pub fn joint(&self, b: &[Rational]) -> Result<JointDist> {
        let p = Rational::new(BigInt::one(), BigInt::from(self.n));
        JointDist::new(
            self.terms.len(),
            (0..self.n).map(|i| {
                (
                    self.terms.iter().map(|t| b[t.perm[i]].clone()).collect(),
                    p.clone(),
                )
            }),
        )
    }
}

/// Averaging steps carrying `b` to `a`, in application order.
///
/// Repeatedly takes the smallest index `i` where the running vector differs
/// from `a` (there it falls short), the smallest `j > i` where it exceeds `a`,
/// and moves `min(a_i - c_i, c_j - a_j)` from `j` to `i`.
pub fn t_transforms(a: &UniformGrid, b: &UniformGrid) -> Result<Vec<TTransform>> {
    if let Majorization::ViolatedAt(index) = check_majorization(a, b)? {
        return Err(Error::MajorizationViolated { index });
    }
    let target = a.values();
    let mut c = b.values().to_vec();
    let mut steps = Vec::new();
    let mut i = 0;
    loop {
        while i < c.len() && c[i] == target[i] {
            i += 1;
        }
        if i == c.len() {
            break;
        }
        debug_assert!(c[i] < target[i]);
        let j = (i + 1..c.len())
            .find(|&j| c[j] > target[j])
            .expect("totals agree, so a surplus follows every deficit");
        let shortfall = &target[i] - &c[i];
        let surplus = &c[j] - &target[j];
        let moved = shortfall.min(surplus);
        let step = TTransform {
            i,
            j,
            s: &moved / (&c[j] - &c[i]),
        };
        step.apply(&mut c);
        steps.push(step);
    }
    Ok(steps)
}

/// Doubly stochastic `D` with `a = D b`, as the product of [`t_transforms`].
pub fn build_doubly_stochastic(a: &UniformGrid, b: &UniformGrid) -> Result<DoublyStochasticMatrix> {
    let mut d = DoublyStochasticMatrix::identity(a.n());
    for step in t_transforms(a, b)? {
        step.left_multiply(&mut d.entries);
    }
    Ok(d)
}

/// Writes `D` as `sum_k w_k P(perm_k)` by repeatedly peeling off the
/// lexicographically smallest perfect matching of the positive entries,
/// weighted by its smallest entry.
pub fn birkhoff_decompose(d: &DoublyStochasticMatrix) -> Result<PermutationCertificate> {
    let n = d.n();
    // peel integer numerators over a common denominator
    let scale = lcm_of_denominators(d.entries.iter().flatten());
    let mut rest: Vec<Vec<BigInt>> = d
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect()
        })
        .collect();
    let support: Vec<Vec<bool>> = rest
        .iter()
        .map(|row| row.iter().map(|x| x.is_positive()).collect())
        .collect();
    let mut matching = LexMatching::new(&support);
    let mut remaining = scale.clone();
    let mut terms = Vec::new();
    while remaining.is_positive() {
        let perm = matching.smallest().ok_or(Error::NoPerfectMatching)?;
        let weight = perm
            .iter()
            .enumerate()
            .map(|(i, &c)| &rest[i][c])
            .min()
            .expect("n > 0")
            .clone();
        for (i, &c) in perm.iter().enumerate() {
            rest[i][c] -= &weight;
            if rest[i][c].is_zero() {
                matching.remove_edge(i, c);
            }
        }
        remaining -= &weight;
        terms.push(CertificateTerm {
            perm,
            weight: Rational::new(weight, scale.clone()),
        });
    }
    Ok(PermutationCertificate { n, terms })
}

/// A certificate together with the grids it refers to and the joint law of
/// the rearranged copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Div1Witness {
    pub xi_grid: UniformGrid,
    pub eta_grid: UniformGrid,
    pub certificate: PermutationCertificate,
    pub joint: JointDist,
}

impl Div1Witness {
    pub fn weights(&self) -> WeightVector {
        self.certificate.weights().expect("weights come from a decomposition")
    }
}

fn refined_pair(xi: &SimpleDist, eta: &SimpleDist) -> Result<(UniformGrid, UniformGrid)> {
    let (mx, me) = (xi.mean(), eta.mean());
    if mx != me {
        return Err(Error::MeansDiffer { xi: mx, eta: me });
    }
    if let Some((alpha, gap)) = ssd_violation(xi, eta) {
        return Err(Error::SsdViolated { alpha, gap });
    }
    common_refinement(xi, eta)
}

/// Exhibits `xi` as a convex combination of rearranged copies of `eta`.
/// Requires equal means and second-order dominance.
pub fn certify_div1(xi: &SimpleDist, eta: &SimpleDist) -> Result<Div1Witness> {
    let (a, b) = refined_pair(xi, eta)?;
    let d = build_doubly_stochastic(&a, &b)?;
    let certificate = birkhoff_decompose(&d)?;
    let joint = certificate.joint(b.values())?;
    Ok(Div1Witness {
        xi_grid: a,
        eta_grid: b,
        certificate,
        joint,
    })
}

/// Joint law of `(xi, eta)` on the common grid with `E(eta | xi slot) = xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MartingaleCoupling {
    pub xi_grid: UniformGrid,
    pub eta_grid: UniformGrid,
    /// `matrix[i][j]` is the mass on (slot `i` of `xi`, slot `j` of `eta`).
    pub matrix: Vec<Vec<Rational>>,
}

impl MartingaleCoupling {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    /// Non-negative entries, uniform row and column sums `1/n`, and
    /// `n sum_j C_ij b_j = a_i` for every row.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        let slot = Rational::new(BigInt::one(), BigInt::from(n));
        let scale = Rational::from_integer(BigInt::from(n));
        let (a, b) = (self.xi_grid.values(), self.eta_grid.values());
        if a.len() != n || b.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return false;
        }
        let nonneg = self.matrix.iter().flatten().all(|x| !x.is_negative());
        let rows = self.matrix.iter().all(|r| r.iter().sum::<Rational>() == slot);
        let cols = (0..n).all(|j| self.matrix.iter().map(|r| &r[j]).sum::<Rational>() == slot);
        let martingale = self.matrix.iter().zip(a).all(|(row, ai)| {
            &scale * row.iter().zip(b).map(|(c, bj)| c * bj).sum::<Rational>() == *ai
        });
        nonneg && rows && cols && martingale
    }
}

/// Mean-preserving-spread coupling `C = D / n`. Same preconditions as
/// [`certify_div1`].
pub fn mps_coupling(xi: &SimpleDist, eta: &SimpleDist) -> Result<MartingaleCoupling> {
    let (a, b) = refined_pair(xi, eta)?;
    let d = build_doubly_stochastic(&a, &b)?;
    let n = Rational::from_integer(BigInt::from(a.n()));
    let matrix = d
        .entries
        .into_iter()
        .map(|row| row.into_iter().map(|x| x / &n).collect())
        .collect();
    Ok(MartingaleCoupling {
        xi_grid: a,
        eta_grid: b,
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub xi_grid: UniformGrid,
    pub eta_grid: UniformGrid,
    /// Amount added to each slot of `xi_grid`.
    pub delta: Vec<Rational>,
    /// Amount added to the top slot of `eta_grid`.
    pub gamma_top: Rational,
    pub lifted_xi: SimpleDist,
    pub lifted_eta: SimpleDist,
}

impl LiftResult {
    pub fn mean_delta(&self) -> Rational {
        let n = Rational::from_integer(BigInt::from(self.delta.len()));
        self.delta.iter().sum::<Rational>() / n
    }

    pub fn mean_gamma(&self) -> Rational {
        &self.gamma_top / Rational::from_integer(BigInt::from(self.delta.len()))
    }
}

/// Smallest-mean non-negative lift making `xi + delta` dominate `eta + gamma`
/// with equal means. No relation between the inputs is assumed.
///
/// On the common grid `x`, `y`:
/// `delta_k = max(0, sum_{i<=k} (y_i - x_i) - sum_{i<k} delta_i)`, and
/// `gamma_top = sum x + sum delta - sum y` goes on the largest slot of `y`.
pub fn lift_delta_gamma(xi: &SimpleDist, eta: &SimpleDist) -> Result<LiftResult> {
    let (a, b) = common_refinement(xi, eta)?;
    let (x, y) = (a.values(), b.values());
    let mut delta = Vec::with_capacity(x.len());
    let mut excess = Rational::zero(); // sum_{i<=k} (y_i - x_i) - sum_{i<k} delta_i
    for (xk, yk) in x.iter().zip(y) {
        excess += yk - xk;
        let dk = if excess.is_positive() {
            excess.clone()
        } else {
            Rational::zero()
        };
        excess -= &dk;
        delta.push(dk);
    }
    let gamma_top = -excess;
    debug_assert!(!gamma_top.is_negative());

    let lifted_x: Vec<Rational> = x.iter().zip(&delta).map(|(xk, dk)| xk + dk).collect();
    let mut lifted_y = y.to_vec();
    *lifted_y.last_mut().expect("non-empty grid") += &gamma_top;
    Ok(LiftResult {
        lifted_xi: SimpleDist::uniform(lifted_x)?,
        lifted_eta: SimpleDist::uniform(lifted_y)?,
        xi_grid: a,
        eta_grid: b,
        delta,
        gamma_top,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    /// Truncation level; `None` when the means already agree.
    pub c: Option<Rational>,
    /// `min(xi, c)`: dominated by `xi` in the first order, with `eta`'s mean
    /// and still dominating `eta` in the second order.
    pub zeta: SimpleDist,
}

/// Splits `xi >=_ssd eta` into `xi >=_fsd zeta` and an equal-mean
/// `zeta >=_ssd eta`, with `zeta = min(xi, c)` and `E min(xi, c) = E eta`.
pub fn decompose_ssd(xi: &SimpleDist, eta: &SimpleDist) -> Result<DecompositionResult> {
    if let Some((alpha, gap)) = ssd_violation(xi, eta) {
        return Err(Error::SsdViolated { alpha, gap });
    }
    let (mx, target) = (xi.mean(), eta.mean());
    if mx == target {
        return Ok(DecompositionResult {
            c: None,
            zeta: xi.clone(),
        });
    }
    if target > mx {
        return Err(Error::MeansDiffer { xi: mx, eta: target });
    }

    // g(y) = E min(xi, y) = sum_{x_i <= y} p_i x_i + y P(xi > y): continuous,
    // increasing and linear between atoms. Tabulate it at the atoms.
    let atoms = xi.atoms();
    let mut below_mass = Rational::zero();
    let mut below_sum = Rational::zero();
    let mut at_atoms = Vec::with_capacity(atoms.len());
    for atom in atoms {
        // g(x_k) before adding x_k's own mass
        let g = &below_sum + &atom.value * (Rational::one() - &below_mass);
        at_atoms.push((g, below_mass.clone(), below_sum.clone()));
        below_mass += &atom.prob;
        below_sum += &atom.value * &atom.prob;
    }
    // first atom with g(x_k) >= target; the root lies in (x_{k-1}, x_k]
    let k = at_atoms.partition_point(|(g, _, _)| g < &target);
    let c = if k == 0 {
        target.clone()
    } else {
        // on [x_{k-1}, x_k] exactly the atoms before k sit below y
        let (_, mass, sum) = &at_atoms[k];
        (&target - sum) / (Rational::one() - mass)
    };
    Ok(DecompositionResult {
        zeta: xi.truncate_above(&c),
        c: Some(c),
    })
}
