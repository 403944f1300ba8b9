//! Plancherel measure, its samplers, and the transition and co-transition
//! distributions of a diagram.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, factorial, Partition};
use crate::seminormal::index_bound;

/// `(dim lambda)^2 / n!`.
pub fn plancherel_pmf(lambda: &Partition) -> BigRational {
    let d: BigUint = lambda.dimension();
    BigRational::new((&d * &d).into(), factorial(lambda.size()).into())
}

/// Partitions of `n` with their exact Plancherel probabilities.
#[derive(Clone, Debug)]
pub struct PlancherelEnsemble {
    pub n: usize,
    pub support: Vec<(Partition, BigRational)>,
}

impl PlancherelEnsemble {
    pub fn exact(n: usize) -> Self {
        let support = enumerate_partitions(n)
            .map(|l| {
                let p = plancherel_pmf(&l);
                (l, p)
            })
            .collect();
        PlancherelEnsemble { n, support }
    }

    /// Exact expectation of an exact-valued function.
    pub fn expect(&self, mut f: impl FnMut(&Partition) -> BigRational) -> BigRational {
        self.support
            .iter()
            .fold(BigRational::zero(), |acc, (l, p)| acc + p * f(l))
    }

    /// Expectation of a float-valued function.
    pub fn expect_f64(&self, mut f: impl FnMut(&Partition) -> f64) -> f64 {
        self.support
            .iter()
            .map(|(l, p)| p.to_f64().unwrap() * f(l))
            .sum()
    }
}

/// The RNG of sample `index` in a run seeded with `seed`. Each sample has
/// its own stream, so results do not depend on how work is split across
/// threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape of the RSK insertion tableau of a uniform random permutation of
/// `n`, which is Plancherel distributed.
///
/// Values are inserted in a uniformly random order; only row contents are
/// kept, and each bump is a binary search.
pub fn sample_plancherel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
    let mut word: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        word.swap(i, j);
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for mut x in word {
        let mut b = 0;
        loop {
            if b == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[b];
            let pos = row.partition_point(|&y| y < x);
            if pos == row.len() {
                row.push(x);
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
            b += 1;
        }
    }
    Partition::from_unsorted(rows.iter().map(Vec::len).collect())
}

/// Plancherel growth: add a box at inner corner `x_j` with probability
/// `dim Lambda_j / ((m + 1) dim lambda)` at every step.
pub fn sample_plancherel_growth<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
    let mut lambda = Partition::empty();
    for _ in 0..n {
        let mut sups = lambda.superpartitions();
        let m = lambda.size() as f64;
        let mut t: f64 = rng.random();
        let mut chosen = sups.len() - 1;
        for (j, (big, _)) in sups.iter().enumerate() {
            let w = 1.0 / ((m + 1.0) * big.dimension_ratio_f64(&lambda));
            if t < w {
                chosen = j;
                break;
            }
            t -= w;
        }
        lambda = sups.swap_remove(chosen).0;
    }
    lambda
}

/// Right-continuous step distribution function.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDistribution {
    pub jump_points: Vec<f64>,
    /// Cumulative weight up to and including each jump.
    pub cumulative: Vec<BigRational>,
}

impl StepDistribution {
    pub fn cdf(&self, v: f64) -> f64 {
        match self.jump_points.iter().rposition(|&x| x <= v) {
            Some(j) => self.cumulative[j].to_f64().unwrap(),
            None => 0.0,
        }
    }

    pub fn weights(&self) -> Vec<BigRational> {
        let mut prev = BigRational::zero();
        self.cumulative
            .iter()
            .map(|c| {
                let w = c - &prev;
                prev = c.clone();
                w
            })
            .collect()
    }

    pub fn total_mass(&self) -> BigRational {
        self.cumulative.last().cloned().unwrap_or_else(BigRational::zero)
    }
}

fn cumulative(weights: impl Iterator<Item = BigRational>) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    weights
        .map(|w| {
            acc += w;
            acc.clone()
        })
        .collect()
}

/// Jumps `dim mu_j / dim lambda` at `y_j / sqrt(n)`.
pub fn co_transition_cdf(lambda: &Partition) -> StepDistribution {
    let sqrt_n = (lambda.size() as f64).sqrt();
    let subs = lambda.subpartitions();
    StepDistribution {
        jump_points: subs.iter().map(|(_, y)| *y as f64 / sqrt_n).collect(),
        cumulative: cumulative(subs.iter().map(|(mu, _)| lambda.dimension_ratio(mu))),
    }
}

/// Jumps `dim Lambda_j / ((n + 1) dim lambda)` at `x_j / sqrt(n)`.
pub fn transition_cdf(lambda: &Partition) -> StepDistribution {
    let n = lambda.size();
    let sqrt_n = (n.max(1) as f64).sqrt();
    let sups = lambda.superpartitions();
    let scale = BigRational::from_integer((n + 1).into());
    StepDistribution {
        jump_points: sups.iter().map(|(_, x)| *x as f64 / sqrt_n).collect(),
        cumulative: cumulative(
            sups.iter()
                .map(|(big, _)| big.dimension_ratio(lambda).recip() / &scale),
        ),
    }
}

/// `(F_ct)^*(u) = sup { z : F_ct(z) <= u }` together with the 1-based
/// index `bar_j` of the jump it lands on.
///
/// The comparison is exact: `bar_j = 1 + #{ j : dim mu_1 + ... + dim mu_j <= u dim lambda }`,
/// capped at `d` for `u = 1`.
pub fn quantile_ct(lambda: &Partition, u: &BigRational) -> Result<(f64, usize)> {
    if u < &BigRational::zero() || u > &BigRational::one() {
        return Err(Error::OutOfRange {
            what: "u",
            value: u.to_string(),
            range: "[0, 1]".into(),
        });
    }
    let subs = lambda.subpartitions();
    let k = index_bound(u, &lambda.dimension());
    let mut cum = BigUint::zero();
    let mut count = 0;
    for (mu, _) in &subs {
        cum += mu.dimension();
        if cum <= k {
            count += 1;
        }
    }
    let bar_j = (count + 1).min(subs.len());
    let v = subs[bar_j - 1].1 as f64 / (lambda.size() as f64).sqrt();
    Ok((v, bar_j))
}

fn check_pole(u: f64, points: &[i64], what: &str) -> Result<()> {
    if points.iter().any(|&p| (u - p as f64).abs() < 1e-12) {
        return Err(Error::Pole(format!("{what} has a pole at {u}")));
    }
    Ok(())
}

/// Scales evaluation point and atoms: with `scaled` the atoms sit at
/// `content / sqrt(n)`.
fn atoms(lambda: &Partition, scaled: bool) -> (f64, Vec<i64>, Vec<i64>) {
    let c = lambda.corners();
    let s = if scaled { (lambda.size() as f64).sqrt() } else { 1.0 };
    (s, c.outer_contents, c.inner_contents)
}

/// `sum_j (dim mu_j / dim lambda) / (u - y_j)`.
pub fn stieltjes_ct(lambda: &Partition, u: f64, scaled: bool) -> Result<f64> {
    let (s, ys, _) = atoms(lambda, scaled);
    check_pole(u * s, &ys, "ST_ct")?;
    let weights = co_transition_cdf(lambda).weights();
    Ok(ys
        .iter()
        .zip(weights)
        .map(|(&y, w)| w.to_f64().unwrap() / (u - y as f64 / s))
        .sum())
}

/// `sum_j (dim Lambda_j / ((n+1) dim lambda)) / (u - x_j)`.
pub fn stieltjes_tr(lambda: &Partition, u: f64, scaled: bool) -> Result<f64> {
    let (s, _, xs) = atoms(lambda, scaled);
    check_pole(u * s, &xs, "ST_tr")?;
    let weights = transition_cdf(lambda).weights();
    Ok(xs
        .iter()
        .zip(weights)
        .map(|(&x, w)| w.to_f64().unwrap() / (u - x as f64 / s))
        .sum())
}

fn poly(z: f64, roots: &[i64]) -> f64 {
    roots.iter().map(|&r| z - r as f64).product()
}

/// Kerov's closed form of [`stieltjes_ct`]: `u - P(u)/Q(u)` with
/// `P = prod (u - x_j / sqrt n)` and `Q = prod (u - y_j / sqrt n)`.
///
/// That identity is exact in scaled coordinates. With unscaled contents it
/// becomes `(z - P(z)/Q(z)) / n`, which is what `scaled = false` returns.
pub fn stieltjes_ct_rational(lambda: &Partition, u: f64, scaled: bool) -> Result<f64> {
    let (s, ys, xs) = atoms(lambda, scaled);
    check_pole(u * s, &ys, "ST_ct")?;
    let z = u * s;
    let n = lambda.size() as f64;
    // sum w/(u - y/s) = s * sum w/(z - y) = s * (z - P(z)/Q(z)) / n.
    Ok(s * (z - poly(z, &xs) / poly(z, &ys)) / n)
}

/// Kerov's closed form of [`stieltjes_tr`]: `Q(u) / P(u)`.
pub fn stieltjes_tr_rational(lambda: &Partition, u: f64, scaled: bool) -> Result<f64> {
    let (s, ys, xs) = atoms(lambda, scaled);
    check_pole(u * s, &xs, "ST_tr")?;
    let z = u * s;
    Ok(s * poly(z, &ys) / poly(z, &xs))
}

/// Distribution function of the semicircle law on `[-2, 2]`.
pub fn semicircle_cdf(v: f64) -> f64 {
    let v = v.clamp(-2.0, 2.0);
    0.5 + (v * (4.0 - v * v).sqrt() / 4.0 + (v / 2.0).asin()) / std::f64::consts::PI
}

/// Sup-distance between `F_ct^lambda` and the semicircle CDF, taken over the
/// jump points (both one-sided limits) and the ends of the support.
pub fn co_transition_sup_distance(lambda: &Partition) -> f64 {
    let f = co_transition_cdf(lambda);
    let mut worst: f64 = 0.0;
    let mut before = 0.0;
    for (x, c) in f.jump_points.iter().zip(&f.cumulative) {
        let sc = semicircle_cdf(*x);
        let after = c.to_f64().unwrap();
        worst = worst.max((sc - before).abs()).max((sc - after).abs());
        before = after;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(plancherel_pmf(&p("1")), q(1, 1));
        assert_eq!(plancherel_pmf(&p("3,2")), q(25, 120));
        for n in 0..=8 {
            let total = PlancherelEnsemble::exact(n).expect(|_| BigRational::one());
            assert_eq!(total, q(1, 1));
        }
    }

    #[test]
    fn samplers_small() {
        let mut rng = sample_rng(1, 0);
        assert_eq!(sample_plancherel(1, &mut rng), p("1"));
        assert_eq!(sample_plancherel_growth(1, &mut rng), p("1"));
        for _ in 0..20 {
            assert_eq!(sample_plancherel(9, &mut rng).size(), 9);
            assert_eq!(sample_plancherel_growth(9, &mut rng).size(), 9);
        }
    }

    #[test]
    fn streams_differ() {
        let a = sample_plancherel(50, &mut sample_rng(3, 0));
        let b = sample_plancherel(50, &mut sample_rng(3, 0));
        assert_eq!(a, b);
        let shapes: Vec<Partition> = (0..10).map(|i| sample_plancherel(50, &mut sample_rng(3, i))).collect();
        assert!(shapes.iter().any(|s| s != &shapes[0]));
    }

    #[test]
    fn co_transition_examples() {
        let f = co_transition_cdf(&p("1"));
        assert_eq!(f.jump_points, vec![0.0]);
        assert_eq!(f.cumulative, vec![q(1, 1)]);

        let f = co_transition_cdf(&p("2,2"));
        assert_eq!(f.jump_points, vec![0.0]);
        assert_eq!(f.total_mass(), q(1, 1));

        // (3,2): corners of content 0 (leaving (3,1)) and 2 (leaving (2,2)).
        let f = co_transition_cdf(&p("3,2"));
        let s5 = 5f64.sqrt();
        assert_eq!(f.jump_points, vec![0.0, 2.0 / s5]);
        assert_eq!(f.weights(), vec![q(3, 5), q(2, 5)]);

        let t = transition_cdf(&p("2,1"));
        assert_eq!(t.weights(), vec![q(3, 8), q(1, 4), q(3, 8)]);
        for n in 1..=10 {
            for l in enumerate_partitions(n) {
                assert_eq!(co_transition_cdf(&l).total_mass(), q(1, 1));
                assert_eq!(transition_cdf(&l).total_mass(), q(1, 1));
            }
        }
    }

    #[test]
    fn quantiles() {
        let lambda = p("3,2");
        assert_eq!(quantile_ct(&lambda, &q(0, 1)).unwrap().1, 1);
        assert_eq!(quantile_ct(&lambda, &q(1, 1)).unwrap().1, 2);
        assert_eq!(quantile_ct(&lambda, &q(1, 2)).unwrap().1, 1);
        // Exactly at the first cumulative weight the quantile moves on.
        assert_eq!(quantile_ct(&lambda, &q(3, 5)).unwrap().1, 2);
        assert!(quantile_ct(&lambda, &q(3, 2)).is_err());
    }

    #[test]
    fn stieltjes_forms_agree() {
        let one = p("1");
        assert!((stieltjes_ct(&one, 2.5, false).unwrap() - 0.4).abs() < 1e-15);
        assert!((stieltjes_ct_rational(&one, 2.5, false).unwrap() - 0.4).abs() < 1e-15);
        // (2,2): one atom at content 0; x = -2, 2.
        let sq = p("2,2");
        let direct = 1.0 / 5.0;
        assert!((stieltjes_ct(&sq, 5.0, false).unwrap() - direct).abs() < 1e-15);
        assert!((stieltjes_ct_rational(&sq, 5.0, false).unwrap() - direct).abs() < 1e-12);
        let scaled = 1.0 / 5.0;
        let (ps, qs) = ((5.0f64 - 1.0) * (5.0 + 1.0), 5.0);
        assert!((stieltjes_ct(&sq, 5.0, true).unwrap() - scaled).abs() < 1e-15);
        assert!((5.0 - ps / qs - scaled).abs() < 1e-12);
        assert!(stieltjes_ct(&sq, 0.0, false).is_err());
        let lambda = p("4,2,1,1");
        for u in [-3.3, 0.5, 7.25] {
            for scaled in [false, true] {
                let a = stieltjes_ct(&lambda, u, scaled).unwrap();
                let b = stieltjes_ct_rational(&lambda, u, scaled).unwrap();
                assert!((a - b).abs() < 1e-9);
                let a = stieltjes_tr(&lambda, u, scaled).unwrap();
                let b = stieltjes_tr_rational(&lambda, u, scaled).unwrap();
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn semicircle_values() {
        assert!((semicircle_cdf(2.0) - 1.0).abs() < 1e-15);
        assert!((semicircle_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!(semicircle_cdf(-2.0).abs() < 1e-15);
        assert_eq!(semicircle_cdf(5.0), 1.0);
    }

    #[test]
    fn column_is_far_from_semicircle() {
        // All mass sits at -99/10, left of the semicircle's support.
        let d = co_transition_sup_distance(&Partition::column(100));
        assert!((d - 1.0).abs() < 1e-12, "{d}");
    }
}
