//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use divdom::rational::{int, ratio};
use divdom::{JointDist, Rational, SimpleDist, UniformGrid};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random value `k / den` with `|k| <= range * den`.
pub fn random_value<R: Rng>(rng: &mut R, range: i64, den: i64) -> Rational {
    ratio(rng.gen_range(-range * den..=range * den), den)
}

/// Equiprobable grid of `n` random values (duplicates allowed).
pub fn random_grid_values<R: Rng>(rng: &mut R, n: usize, range: i64) -> Vec<Rational> {
    let den = *[1, 2, 3].choose(rng).unwrap();
    (0..n).map(|_| random_value(rng, range, den)).collect()
}

/// Random distribution with up to `max_atoms` atoms and random rational
/// probabilities.
pub fn random_dist<R: Rng>(rng: &mut R, max_atoms: usize, range: i64) -> SimpleDist {
    let k = rng.gen_range(1..=max_atoms);
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    let den = *[1, 2, 4].choose(rng).unwrap();
    SimpleDist::new(
        weights
            .iter()
            .map(|&w| (random_value(rng, range, den), ratio(w, total))),
    )
    .unwrap()
}

/// Uniform distribution over `n` random values.
pub fn random_uniform_dist<R: Rng>(rng: &mut R, n: usize, range: i64) -> SimpleDist {
    SimpleDist::uniform(random_grid_values(rng, n, range)).unwrap()
}

/// A pair `(xi, eta)` where `eta` is a mean-preserving spread of `xi`,
/// built by adding conditionally centred noise: either each slot splits into
/// `v - e, v + e`, or random pairs of slots are pushed apart. The common
/// grid stays at most `max_n` slots.
pub fn random_mps_pair<R: Rng>(rng: &mut R, max_n: usize) -> (SimpleDist, SimpleDist) {
    let split = rng.gen_bool(0.5) && max_n >= 2;
    let m = if split {
        rng.gen_range(1..=max_n / 2)
    } else {
        rng.gen_range(1..=max_n)
    };
    let xi_slots = random_grid_values(rng, m, 6);
    let mut eta_slots = Vec::new();
    if split {
        for v in &xi_slots {
            let e = ratio(rng.gen_range(0..=8), *[1, 2, 4].choose(rng).unwrap());
            eta_slots.push(v - &e);
            eta_slots.push(v + &e);
        }
    } else {
        eta_slots = xi_slots.clone();
    }
    let n = eta_slots.len();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=2 * n) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let (lo, hi) = if eta_slots[i] <= eta_slots[j] { (i, j) } else { (j, i) };
            let eps = ratio(rng.gen_range(1..=4), *[1, 2].choose(rng).unwrap());
            eta_slots[lo] -= &eps;
            eta_slots[hi] += &eps;
        }
    }
    (
        SimpleDist::uniform(xi_slots).unwrap(),
        SimpleDist::uniform(eta_slots).unwrap(),
    )
}

/// A pair with `xi >=_ssd eta` and `E xi > E eta`: a spread followed by a
/// strict first-order decrease of some slots.
pub fn random_ssd_pair_unequal_means<R: Rng>(rng: &mut R, max_n: usize) -> (SimpleDist, SimpleDist) {
    let (xi, eta) = random_mps_pair(rng, max_n);
    let mut slots = divdom::expand_to_uniform_grid(&eta).unwrap().into_values();
    let n = slots.len();
    let hits = rng.gen_range(1..=n);
    for _ in 0..hits {
        let i = rng.gen_range(0..n);
        slots[i] -= ratio(rng.gen_range(1..=6), *[1, 2].choose(rng).unwrap());
    }
    (xi, SimpleDist::uniform(slots).unwrap())
}

/// Random joint law on `m` coordinates with `n` equiprobable atoms.
pub fn random_joint<R: Rng>(rng: &mut R, m: usize, n: usize) -> JointDist {
    let p = ratio(1, n as i64);
    JointDist::new(
        m,
        (0..n).map(|_| {
            (
                (0..m).map(|_| random_value(rng, 5, 2)).collect(),
                p.clone(),
            )
        }),
    )
    .unwrap()
}

pub fn random_weights<R: Rng>(rng: &mut R, m: usize) -> divdom::WeightVector {
    let raw: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=5)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        return divdom::WeightVector::uniform(m).unwrap();
    }
    divdom::WeightVector::new(raw.iter().map(|&w| ratio(w, total)).collect()).unwrap()
}

/// Union of the quantile breakpoints of all `ds`.
pub fn breakpoints(ds: &[&SimpleDist]) -> Vec<Rational> {
    let mut out: Vec<Rational> = ds
        .iter()
        .flat_map(|d| d.quantile_steps().map(|(a, _)| a).collect::<Vec<_>>())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `int_{-inf}^a F(x) dx`, integrating the left-continuous step function.
pub fn integrated_cdf(d: &SimpleDist, a: &Rational) -> Rational {
    let mut total = Rational::zero();
    let mut mass = Rational::zero();
    let atoms = d.atoms();
    for (k, atom) in atoms.iter().enumerate() {
        if &atom.value >= a {
            break;
        }
        mass += &atom.prob;
        let right = atoms.get(k + 1).map_or(a.clone(), |n| n.value.clone().min(a.clone()));
        total += &mass * (right - &atom.value);
    }
    total
}

/// Second-order dominance from the integrated distribution functions,
/// checked at every atom of either law (the difference is piecewise linear
/// with kinks there and constant beyond the largest atom).
pub fn ssd_by_cdf_integral(xi: &SimpleDist, eta: &SimpleDist) -> bool {
    xi.values()
        .chain(eta.values())
        .all(|a| integrated_cdf(xi, a) <= integrated_cdf(eta, a))
}

/// `E min(X - a, 0)`.
pub fn shortfall_utility(d: &SimpleDist, a: &Rational) -> Rational {
    d.atoms()
        .iter()
        .filter(|t| &t.value < a)
        .map(|t| (&t.value - a) * &t.prob)
        .sum()
}

/// Second-order dominance through the utility family `x -> min(x - a, 0)`.
pub fn ssd_by_utilities(xi: &SimpleDist, eta: &SimpleDist) -> bool {
    xi.values()
        .chain(eta.values())
        .all(|a| shortfall_utility(xi, a) >= shortfall_utility(eta, a))
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Exact phase-one simplex with Bland's rule: is there `x >= 0` with
/// `A x = rhs`?
pub fn lp_feasible(a: &[Vec<Rational>], rhs: &[Rational]) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // tableau [A | I | rhs] with rhs made non-negative
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (r, row) in a.iter().enumerate() {
        let flip = rhs[r].is_negative();
        let mut line: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        line.extend((0..rows).map(|k| if k == r { Rational::one() } else { Rational::zero() }));
        line.push(if flip { -&rhs[r] } else { rhs[r].clone() });
        t.push(line);
    }
    let width = cols + rows;
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // reduced costs of minimizing the sum of artificials
    loop {
        let reduced: Vec<Rational> = (0..width)
            .map(|j| {
                let cost = if j >= cols { Rational::one() } else { Rational::zero() };
                let dual: Rational = (0..rows)
                    .map(|r| {
                        let cb = if basis[r] >= cols { Rational::one() } else { Rational::zero() };
                        cb * &t[r][j]
                    })
                    .sum();
                cost - dual
            })
            .collect();
        let Some(enter) = (0..width).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if t[r][enter].is_positive() {
                let q = &t[r][width] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lq)) => q < *lq || (q == *lq && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, q));
                }
            }
        }
        let Some((pr, _)) = leave else {
            unreachable!("phase one objective is bounded below");
        };
        let pivot = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..rows {
            if r != pr && !t[r][enter].is_zero() {
                let f = t[r][enter].clone();
                let pivot_row = t[pr].clone();
                for (x, p) in t[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }
    (0..rows).all(|r| basis[r] < cols || t[r][width].is_zero())
}

/// Brute force over all `n!` rearrangements of `b`: is `a` a convex
/// combination of them?
pub fn brute_force_div1(a: &[Rational], b: &[Rational]) -> bool {
    let n = a.len();
    let perms = permutations(n);
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| perms.iter().map(|p| b[p[i]].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); perms.len()]);
    let mut rhs = a.to_vec();
    rhs.push(Rational::one());
    lp_feasible(&rows, &rhs)
}

pub fn ints(vs: &[i64]) -> Vec<Rational> {
    vs.iter().map(|&v| int(v)).collect()
}

pub fn grid(vs: &[i64]) -> UniformGrid {
    UniformGrid::new(ints(vs)).unwrap()
}

/// All non-decreasing sequences of length `n` over `lo..=hi`.
pub fn sorted_sequences(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in sorted_sequences(n - 1, lo, hi) {
        let start = rest.last().copied().unwrap_or(lo);
        for v in start..=hi {
            let mut s = rest.clone();
            s.push(v);
            out.push(s);
        }
    }
    out
}
