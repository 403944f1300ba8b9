//! Reproducible experiments: the exact `(m, v)` constants, finite identity
//! suites, Monte Carlo checks of the limit theorems and the probe of the
//! dimension-ratio conjecture.
//!
//! Sample `i` of a run always draws from `sample_rng(seed, i)`, and per-sample
//! values are collected in index order before any reduction, so results are
//! bit-for-bit identical for every degree of parallelism.

use std::collections::BTreeSet;
use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::characters::{character, normalized_character, normalized_character_f64};
use crate::error::{Error, Result};
use crate::jm_algebra;
use crate::partitions::{enumerate_partitions, factorial, skew_dimension, Partition};
use crate::permutation::{CycleType, Permutation};
use crate::plancherel::{
    co_transition_sup_distance, plancherel_pmf, sample_plancherel, sample_rng, stieltjes_ct,
    stieltjes_ct_rational, stieltjes_tr, stieltjes_tr_rational, PlancherelEnsemble,
};
use crate::seminormal::{
    block_restriction_check, decompose_partial_sum, decompose_partial_trace, exact_unit,
    iterated_decomposition, partial_sum, partial_sum_dense, partial_trace_dense, rep_matrix_in,
    total_sum_exact, SeminormalForm, TotalSumExpansion, DEFAULT_MATRIX_CAP,
};

fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Sampling controls shared by the Monte Carlo experiments.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RunOptions {
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { samples: 2000, seed: 1, jobs: 0 }
    }
}

/// Runs `f` inside a pool of `jobs` threads (or the global pool for 0).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::OutOfRange { what: "jobs", value: jobs.to_string(), range: e.to_string() })?;
    Ok(pool.install(f))
}

/// Applies `f` to `opts.samples` Plancherel partitions of `n`, in sample order.
pub fn map_samples<T, F>(n: usize, opts: &RunOptions, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Partition) -> T + Sync + Send,
{
    with_jobs(opts.jobs, || {
        (0..opts.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(opts.seed, i as u64);
                f(&sample_plancherel(n, &mut rng))
            })
            .collect()
    })
}

/// Summary statistics of a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub max_abs: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Stats {
        let count = xs.len();
        if count == 0 {
            return Stats::default();
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let variance = if count > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        let max_abs = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Stats { count, mean, variance, max_abs }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Pearson correlation of two equally long samples.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (sa, sb) = (Stats::of(a), Stats::of(b));
    let cov = a.iter().zip(b).map(|(x, y)| (x - sa.mean) * (y - sb.mean)).sum::<f64>()
        / (a.len() as f64 - 1.0);
    cov / (sa.std_dev() * sb.std_dev())
}

/// Kolmogorov–Smirnov distance between a sample and `N(0, variance)`.
pub fn ks_normal(xs: &[f64], variance: f64) -> f64 {
    let normal = Normal::new(0.0, variance.sqrt()).expect("positive variance");
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut worst) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}

/// Pearson chi-square statistic, degrees of freedom and upper-tail p-value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> ChiSquareTest {
    let total: u64 = counts.iter().sum();
    let statistic = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let df = counts.len().saturating_sub(1).max(1);
    let p_value = 1.0 - ChiSquared::new(df as f64).expect("df > 0").cdf(statistic);
    ChiSquareTest { statistic, df, p_value }
}

/// Chi-square test of the RSK sampler against the exact Plancherel pmf.
pub fn sampler_goodness_of_fit(n: usize, opts: &RunOptions) -> Result<ChiSquareTest> {
    let ens = PlancherelEnsemble::exact(n);
    let shapes = map_samples(n, opts, |l| l.clone())?;
    let counts: Vec<u64> = ens
        .support
        .iter()
        .map(|(l, _)| shapes.iter().filter(|s| *s == l).count() as u64)
        .collect();
    let probs: Vec<f64> = ens.support.iter().map(|(_, p)| p.to_f64().unwrap()).collect();
    Ok(chi_square_gof(&counts, &probs))
}

/// Probabilists' Hermite polynomial by `x H_m = H_{m+1} + m H_{m-1}`.
pub fn hermite(m: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return prev;
    }
    for k in 1..m {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// One draw of `prod_{k >= 2} k^{m_k/2} H_{m_k}(xi_k)`, the limit law of
/// `n^{wt/2} chi-hat_rho`.
pub fn character_limit_draw<R: Rng + ?Sized>(rho: &CycleType, rng: &mut R) -> f64 {
    let max = rho.partition().parts().first().copied().unwrap_or(1);
    (2..=max)
        .map(|k| {
            let m = rho.multiplicity(k);
            let xi: f64 = rng.sample(StandardNormal);
            if m == 0 {
                1.0
            } else {
                (k as f64).powf(m as f64 / 2.0) * hermite(m, xi)
            }
        })
        .product()
}

/// Variance of the limit law, `prod_k k^{m_k} m_k!` (0 for the identity).
pub fn character_limit_variance(rho: &CycleType) -> f64 {
    if rho.weight() == 0 {
        return 0.0;
    }
    let max = rho.partition().parts()[0];
    (2..=max)
        .map(|k| {
            let m = rho.multiplicity(k);
            (k as f64).powi(m as i32) * factorial(m).to_f64().unwrap()
        })
        .product()
}

/// `E_r[TS^nu(sigma)]` and `C(r,2) E_r[chi-hat^nu_(2) TS^nu(sigma)]` for
/// `sigma` in `S_r`, `r` the degree of `sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MVRecord {
    #[serde(serialize_with = "ser_display")]
    pub sigma: Permutation,
    #[serde(serialize_with = "ser_display")]
    pub m: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub v: BigRational,
}

/// Largest `r` accepted by [`mv_table`].
pub const MV_MAX_R: usize = 6;

/// Exact `(m, v)` for one permutation, computed in the rational form.
pub fn mv_record(sigma: &Permutation) -> Result<MVRecord> {
    let r = sigma.degree().max(1);
    if r > MV_MAX_R + 2 {
        return Err(Error::OutOfRange { what: "r", value: r.to_string(), range: format!("1..={}", MV_MAX_R + 2) });
    }
    let transposition = CycleType::new(vec![2]).expect("valid");
    let mut m = BigRational::zero();
    let mut v = BigRational::zero();
    for nu in enumerate_partitions(r) {
        let w = plancherel_pmf(&nu);
        let ts = total_sum_exact(&nu, sigma)?;
        if r >= 2 {
            v += &w * normalized_character(&nu, &transposition.padded(r))? * &ts;
        }
        m += w * ts;
    }
    let pairs = BigRational::from_integer(BigInt::from(r * (r - 1) / 2));
    Ok(MVRecord { sigma: sigma.clone(), m, v: v * pairs })
}

/// `(m_sigma, v_sigma)` for every `sigma` in `S_r`, in lexicographic order
/// of one-line notation.
pub fn mv_table(r: usize) -> Result<Vec<MVRecord>> {
    if r == 0 || r > MV_MAX_R {
        return Err(Error::OutOfRange { what: "r", value: r.to_string(), range: format!("1..={MV_MAX_R}") });
    }
    let perms = Permutation::all(r);
    perms.par_iter().map(mv_record).collect()
}

/// Result of checking that `(r-1, r)` has `m > 0` and `v = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjacentCheck {
    pub r: usize,
    #[serde(serialize_with = "ser_display")]
    pub m: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub v: BigRational,
    pub holds: bool,
}

pub fn adjacent_transposition_mv_check(r: usize) -> Result<AdjacentCheck> {
    if !(3..=MV_MAX_R).contains(&r) {
        return Err(Error::OutOfRange { what: "r", value: r.to_string(), range: format!("3..={MV_MAX_R}") });
    }
    let rec = mv_record(&Permutation::transposition(r - 1, r, r))?;
    let holds = rec.m.is_positive() && rec.v.is_one();
    Ok(AdjacentCheck { r, m: rec.m, v: rec.v, holds })
}

/// Report row of [`clt_characters`].
#[derive(Clone, Debug, Serialize)]
pub struct CltCharacterRow {
    #[serde(serialize_with = "ser_display")]
    pub rho: CycleType,
    pub n: usize,
    pub samples: usize,
    pub weight: usize,
    /// Statistics of `n^{wt/2} chi-hat^lambda_rho`.
    pub mean: f64,
    pub variance: f64,
    pub limit_variance: f64,
    /// Two-sample KS distance to draws from the limit law.
    pub ks: f64,
}

const LIMIT_DRAWS: usize = 20_000;

fn limit_sample(rho: &CycleType, seed: u64) -> Vec<f64> {
    // Limit draws use a stream far from the sample streams.
    let mut rng = sample_rng(seed, u64::MAX / 2);
    (0..LIMIT_DRAWS).map(|_| character_limit_draw(rho, &mut rng)).collect()
}

/// Samples of `n^{wt/2} chi-hat^lambda_rho` for Plancherel `lambda`.
pub fn character_statistics(n: usize, rho: &CycleType, opts: &RunOptions) -> Result<Vec<f64>> {
    if rho.size() > n {
        return Err(Error::DegreeTooLarge { degree: rho.size(), n });
    }
    let scale = (n as f64).powf(rho.weight() as f64 / 2.0);
    let full = rho.padded(n);
    map_samples(n, opts, |l| scale * normalized_character_f64(l, &full).expect("sizes match"))
}

pub fn clt_characters(n: usize, rhos: &[CycleType], opts: &RunOptions) -> Result<Vec<CltCharacterRow>> {
    rhos.iter()
        .map(|rho| {
            let xs = character_statistics(n, rho, opts)?;
            let st = Stats::of(&xs);
            Ok(CltCharacterRow {
                rho: rho.clone(),
                n,
                samples: st.count,
                weight: rho.weight(),
                mean: st.mean,
                variance: st.variance,
                limit_variance: character_limit_variance(rho),
                ks: ks_two_sample(&xs, &limit_sample(rho, opts.seed)),
            })
        })
        .collect()
}

/// Report row of [`clt_total_sum`].
#[derive(Clone, Debug, Serialize)]
pub struct CltTotalSumRow {
    #[serde(serialize_with = "ser_display")]
    pub sigma: Permutation,
    pub n: usize,
    pub samples: usize,
    #[serde(serialize_with = "ser_display")]
    pub m: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub v: BigRational,
    pub mean_ts: f64,
    /// Variance of `n (TS - m)`; the limit is `2 v^2`.
    pub variance: f64,
    pub limit_variance: f64,
    /// KS distance of `n (TS - m)` to `N(0, 2 v^2)`; absent when `v = 0`.
    pub ks: Option<f64>,
    /// `max |sqrt(n) (TS - m)|` over the samples.
    pub max_abs_sqrt_n: f64,
}

/// Samples of `TS^lambda(sigma)` through the character expansion.
pub fn total_sum_samples(n: usize, sigma: &Permutation, form: SeminormalForm, opts: &RunOptions) -> Result<Vec<f64>> {
    if sigma.max_moved() > n {
        return Err(Error::DegreeTooLarge { degree: sigma.max_moved(), n });
    }
    let exp = TotalSumExpansion::new(sigma, form);
    map_samples(n, opts, |l| exp.evaluate(l))
}

pub fn clt_total_sum(
    n: usize,
    sigmas: &[Permutation],
    form: SeminormalForm,
    opts: &RunOptions,
) -> Result<Vec<CltTotalSumRow>> {
    sigmas
        .iter()
        .map(|sigma| {
            let rec = mv_record(&sigma.extend(sigma.max_moved().max(1)))?;
            let m = rec.m.to_f64().unwrap();
            let v = rec.v.to_f64().unwrap();
            let ts = total_sum_samples(n, sigma, form, opts)?;
            let stat: Vec<f64> = ts.iter().map(|t| n as f64 * (t - m)).collect();
            let st = Stats::of(&stat);
            let limit_variance = 2.0 * v * v;
            Ok(CltTotalSumRow {
                sigma: sigma.clone(),
                n,
                samples: st.count,
                m: rec.m,
                v: rec.v,
                mean_ts: Stats::of(&ts).mean,
                variance: st.variance,
                limit_variance,
                ks: (limit_variance > 0.0).then(|| ks_normal(&stat, limit_variance)),
                max_abs_sqrt_n: st.max_abs / (n as f64).sqrt(),
            })
        })
        .collect()
}

/// Which main term to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MainKind {
    /// `MT`: blocks weighted by `chi-hat^{mu_j}(sigma)`.
    Trace,
    /// `MS`: blocks weighted by `TS^{mu_j}(sigma)`.
    Sum,
}

/// `sum_{j < bar_j} (dim mu_j / dim lambda) f(mu_j)` together with the
/// included weight `W = sum_{j < bar_j} dim mu_j / dim lambda`.
///
/// Block inclusion is decided exactly; at `u = 1` every block is included.
pub fn main_term_with<F: Fn(&Partition) -> f64>(lambda: &Partition, u: &BigRational, f: F) -> (f64, f64) {
    let target = u * BigRational::from_integer(lambda.dimension().into());
    let mut cum = BigUint::zero();
    let (mut value, mut weight) = (0.0, 0.0);
    for (mu, _) in lambda.subpartitions() {
        cum += mu.dimension();
        if BigRational::from_integer(cum.clone().into()) > target && !u.is_one() {
            break;
        }
        let w = lambda.dimension_ratio_f64(&mu);
        value += w * f(&mu);
        weight += w;
    }
    (value, weight)
}

/// Report row of [`main_term_experiment`].
#[derive(Clone, Debug, Serialize)]
pub struct MainTermRow {
    #[serde(serialize_with = "ser_display")]
    pub sigma: Permutation,
    pub u: f64,
    pub n: usize,
    pub samples: usize,
    /// Variance of `n^{wt/2} MT_u`; the limit is `u^2` times the character limit.
    pub mt_variance: f64,
    pub mt_limit_variance: f64,
    /// Correlation of `MT_u` with `u chi-hat^lambda(sigma)`.
    pub correlation: f64,
    pub ms_mean: f64,
    /// `u m_sigma`.
    pub ms_limit_mean: f64,
    /// Variance of `n (MS_u - W m_sigma)`; the limit is `2 u^2 v^2`.
    pub ms_variance: f64,
    pub ms_limit_variance: f64,
}

/// Per-sample values `(n^{wt/2} MT, n^{wt/2} chi-hat^lambda, MS, W)`.
pub fn main_term_samples(
    n: usize,
    sigma: &Permutation,
    u: &BigRational,
    form: SeminormalForm,
    opts: &RunOptions,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    if sigma.max_moved() >= n {
        return Err(Error::DegreeTooLarge { degree: sigma.max_moved(), n: n - 1 });
    }
    let rho = sigma.cycle_type().reduced();
    let scale = (n as f64).powf(rho.weight() as f64 / 2.0);
    let exp = TotalSumExpansion::new(sigma, form);
    map_samples(n, opts, |l| {
        let small = rho.padded(n - 1);
        let (mt, w) = main_term_with(l, u, |mu| normalized_character_f64(mu, &small).expect("size"));
        let (ms, _) = main_term_with(l, u, |mu| exp.evaluate(mu));
        let full = normalized_character_f64(l, &rho.padded(n)).expect("size");
        (scale * mt, scale * full, ms, w)
    })
}

pub fn main_term_experiment(
    n: usize,
    cases: &[(Permutation, f64)],
    form: SeminormalForm,
    opts: &RunOptions,
) -> Result<Vec<MainTermRow>> {
    cases
        .iter()
        .map(|(sigma, u)| {
            let ue = exact_unit(*u);
            let rec = mv_record(&sigma.extend(sigma.max_moved().max(1)))?;
            let (m, v) = (rec.m.to_f64().unwrap(), rec.v.to_f64().unwrap());
            let rows = main_term_samples(n, sigma, &ue, form, opts)?;
            let mt: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let ch: Vec<f64> = rows.iter().map(|r| u * r.1).collect();
            let ms: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let ms_stat: Vec<f64> = rows.iter().map(|r| n as f64 * (r.2 - r.3 * m)).collect();
            let rho = sigma.cycle_type().reduced();
            Ok(MainTermRow {
                sigma: sigma.clone(),
                u: *u,
                n,
                samples: rows.len(),
                mt_variance: Stats::of(&mt).variance,
                mt_limit_variance: u * u * character_limit_variance(&rho),
                correlation: correlation(&mt, &ch),
                ms_mean: Stats::of(&ms).mean,
                ms_limit_mean: u * m,
                ms_variance: Stats::of(&ms_stat).variance,
                ms_limit_variance: 2.0 * u * u * v * v,
            })
        })
        .collect()
}

/// Report row of [`partial_sum_lln`].
#[derive(Clone, Debug, Serialize)]
pub struct PartialSumRow {
    #[serde(serialize_with = "ser_display")]
    pub sigma: Permutation,
    pub u: f64,
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// `u m_sigma`.
    pub limit: f64,
}

pub fn partial_sum_samples(
    n: usize,
    sigma: &Permutation,
    u: f64,
    form: SeminormalForm,
    opts: &RunOptions,
) -> Result<Vec<f64>> {
    if sigma.max_moved() > n {
        return Err(Error::DegreeTooLarge { degree: sigma.max_moved(), n });
    }
    partial_sum(&Partition::row(n), sigma, u, form)?;
    map_samples(n, opts, |l| partial_sum(l, sigma, u, form).expect("validated"))
}

pub fn partial_sum_lln(
    ns: &[usize],
    cases: &[(Permutation, f64)],
    form: SeminormalForm,
    opts: &RunOptions,
) -> Result<Vec<PartialSumRow>> {
    let mut rows = Vec::new();
    for (sigma, u) in cases {
        let m = mv_record(&sigma.extend(sigma.max_moved().max(1)))?.m.to_f64().unwrap();
        for &n in ns {
            let st = Stats::of(&partial_sum_samples(n, sigma, *u, form, opts)?);
            rows.push(PartialSumRow {
                sigma: sigma.clone(),
                u: *u,
                n,
                samples: st.count,
                mean: st.mean,
                std_dev: st.std_dev(),
                limit: u * m,
            });
        }
    }
    Ok(rows)
}

/// Largest `n` for exact enumeration in [`conjecture_probe_exact`].
pub const CONJECTURE_EXACT_MAX_N: usize = 40;

/// `max dim mu / dim lambda` over `mu` inside `lambda` with `s` fewer boxes.
pub fn max_ratio_after_removal(lambda: &Partition, s: usize) -> f64 {
    let mut level: BTreeSet<Partition> = BTreeSet::from([lambda.clone()]);
    for _ in 0..s {
        level = level.iter().flat_map(|l| l.subpartitions().into_iter().map(|(m, _)| m)).collect();
    }
    level.iter().map(|mu| lambda.dimension_ratio_f64(mu)).fold(0.0, f64::max)
}

fn exceeds_threshold(lambda: &Partition, alpha: f64, s: usize) -> bool {
    let n = lambda.size() as f64;
    max_ratio_after_removal(lambda, s) > n.powf(-alpha * s as f64)
}

/// Report row of the conjecture probe.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub alpha: f64,
    pub s: usize,
    /// Exact probability as a fraction (exact mode only).
    pub exact: Option<String>,
    pub probability: f64,
    /// Standard error (Monte Carlo mode only).
    pub std_error: Option<f64>,
}

/// `P_PL(max dim mu / dim lambda > n^{-alpha s})` by full enumeration.
///
/// The comparison with the irrational threshold is done in floating point
/// on the hook-ratio product, which is accurate to a few ulps.
pub fn conjecture_probe_exact(n: usize, alpha: f64, s: usize) -> Result<ConjectureRow> {
    if n > CONJECTURE_EXACT_MAX_N || s == 0 || s > n {
        return Err(Error::OutOfRange {
            what: "n",
            value: format!("{n} (s = {s})"),
            range: format!("1..={CONJECTURE_EXACT_MAX_N} with 1 <= s <= n"),
        });
    }
    let shapes: Vec<Partition> = enumerate_partitions(n).collect();
    let mass: BigUint = shapes
        .par_iter()
        .filter(|l| exceeds_threshold(l, alpha, s))
        .map(|l| {
            let d = l.dimension();
            &d * &d
        })
        .reduce(BigUint::zero, |a, b| a + b);
    let p = BigRational::new(mass.into(), factorial(n).into());
    Ok(ConjectureRow {
        n,
        alpha,
        s,
        probability: p.to_f64().unwrap(),
        exact: Some(p.to_string()),
        std_error: None,
    })
}

/// Monte Carlo version of the probe: exact per sample, random over `lambda`.
pub fn conjecture_probe_mc(n: usize, alpha: f64, s: usize, opts: &RunOptions) -> Result<ConjectureRow> {
    if s == 0 || s > n {
        return Err(Error::OutOfRange { what: "s", value: s.to_string(), range: format!("1..={n}") });
    }
    let hits = map_samples(n, opts, |l| exceeds_threshold(l, alpha, s))?;
    let p = hits.iter().filter(|&&h| h).count() as f64 / hits.len().max(1) as f64;
    Ok(ConjectureRow {
        n,
        alpha,
        s,
        exact: None,
        probability: p,
        std_error: Some((p * (1.0 - p) / hits.len().max(1) as f64).sqrt()),
    })
}

/// Report row of [`cotransition_semicircle`].
#[derive(Clone, Debug, Serialize)]
pub struct CotransitionRow {
    pub n: usize,
    pub samples: usize,
    pub mean_distance: f64,
    pub max_distance: f64,
}

pub fn cotransition_semicircle(ns: &[usize], opts: &RunOptions) -> Result<Vec<CotransitionRow>> {
    ns.iter()
        .map(|&n| {
            let d = map_samples(n, opts, co_transition_sup_distance)?;
            let st = Stats::of(&d);
            Ok(CotransitionRow { n, samples: st.count, mean_distance: st.mean, max_distance: st.max_abs })
        })
        .collect()
}

/// Sup-distance for every partition of `n` with its Plancherel weight.
pub fn cotransition_exact(n: usize) -> Vec<(Partition, f64, f64)> {
    PlancherelEnsemble::exact(n)
        .support
        .into_iter()
        .map(|(l, p)| {
            let d = co_transition_sup_distance(&l);
            (l, p.to_f64().unwrap(), d)
        })
        .collect()
}

/// Outcome of one family of finite identities.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest absolute deviation seen (0 for exact checks).
    pub max_error: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    max_error: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, max_error: 0.0 }
    }

    fn exact(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }

    fn close(&mut self, a: f64, b: f64, tol: f64) {
        let e = (a - b).abs();
        self.max_error = self.max_error.max(e);
        self.exact(e <= tol);
    }

    fn done(self) -> IdentityCheck {
        IdentityCheck { name: self.name.into(), cases: self.cases, failures: self.failures, max_error: self.max_error }
    }
}

/// Float tolerance of the identity suite.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Ten fixed elements of `S_4` used by the total-sum checks.
pub fn sample_s4() -> Vec<Permutation> {
    ["(3,4)", "(2,4,3)", "(2,4)", "(1,2)(3,4)", "(1,2,3,4)", "(1,2,4,3)", "(1,3,4,2)", "(1,3)(2,4)", "(1,4,2)", "(1,4)(2,3)"]
        .iter()
        .map(|s| s.parse::<Permutation>().expect("valid cycle").extend(4))
        .collect()
}

fn shapes_up_to(max_n: usize, min_n: usize) -> Vec<Partition> {
    (min_n..=max_n).flat_map(enumerate_partitions).collect()
}

fn check_homomorphism(max_n: usize, seed: u64) -> Result<IdentityCheck> {
    let mut t = Tally::new("homomorphism");
    for (i, lambda) in shapes_up_to(max_n, 1).iter().enumerate() {
        let n = lambda.size();
        let mut rng = sample_rng(seed, i as u64);
        for _ in 0..4 {
            let (a, b) = (Permutation::random(n, &mut rng), Permutation::random(n, &mut rng));
            for form in [SeminormalForm::Orthogonal, SeminormalForm::Rational] {
                let lhs = rep_matrix_in(lambda, &(&a * &b), form, DEFAULT_MATRIX_CAP)?;
                let rhs = rep_matrix_in(lambda, &a, form, DEFAULT_MATRIX_CAP)?
                    .mul(&rep_matrix_in(lambda, &b, form, DEFAULT_MATRIX_CAP)?);
                t.close(lhs.max_abs_diff(&rhs), 0.0, IDENTITY_TOL);
            }
        }
    }
    Ok(t.done())
}

fn check_trace_character(max_n: usize, seed: u64) -> Result<IdentityCheck> {
    let mut t = Tally::new("trace equals character");
    for (i, lambda) in shapes_up_to(max_n, 1).iter().enumerate() {
        let n = lambda.size();
        let mut rng = sample_rng(seed ^ 0x5eed, i as u64);
        for _ in 0..6 {
            let s = Permutation::random(n, &mut rng);
            let chi = character(lambda, &s.cycle_type())?.to_f64().unwrap();
            for form in [SeminormalForm::Orthogonal, SeminormalForm::Rational] {
                t.close(rep_matrix_in(lambda, &s, form, DEFAULT_MATRIX_CAP)?.trace(), chi, IDENTITY_TOL);
            }
        }
    }
    Ok(t.done())
}

fn check_blocks_bands_entries(max_n: usize, seed: u64) -> Result<[IdentityCheck; 3]> {
    let mut blocks = Tally::new("block restriction");
    let mut bands = Tally::new("band structure exact zeros");
    let mut entries = Tally::new("entry bound 2^l(sigma)");
    for (i, lambda) in shapes_up_to(max_n, 2).iter().enumerate() {
        let n = lambda.size();
        let mut rng = sample_rng(seed ^ 0xb10c, i as u64);
        for r in 1..n.min(5) {
            let s = Permutation::random(r, &mut rng);
            for form in [SeminormalForm::Orthogonal, SeminormalForm::Rational] {
                blocks.exact(block_restriction_check(lambda, &s, r, form)?);
                let m = rep_matrix_in(lambda, &s, form, DEFAULT_MATRIX_CAP)?;
                let band = factorial(r).to_usize().unwrap();
                let bound = 2f64.powi(s.coxeter_length() as i32);
                let mut zeros_ok = true;
                let mut worst: f64 = 0.0;
                for a in 0..m.dim() {
                    for b in 0..m.dim() {
                        if a.abs_diff(b) > band && m.get(a, b) != 0.0 {
                            zeros_ok = false;
                        }
                        worst = worst.max(m.get(a, b).abs());
                    }
                }
                bands.exact(zeros_ok);
                entries.exact(worst <= bound + IDENTITY_TOL);
            }
        }
    }
    Ok([blocks.done(), bands.done(), entries.done()])
}

fn units() -> Vec<BigRational> {
    (0..=10).map(|k| exact_unit(k as f64 / 10.0)).collect()
}

fn check_decompositions(max_n: usize) -> Result<[IdentityCheck; 3]> {
    let mut pt = Tally::new("partial trace decomposition");
    let mut ps = Tally::new("partial sum decomposition");
    let mut it = Tally::new("iterated decomposition");
    let s3 = Permutation::all(3);
    for lambda in shapes_up_to(max_n, 4) {
        for sigma in &s3 {
            for u in units() {
                let uf = u.to_f64().unwrap();
                let d = decompose_partial_trace(&lambda, sigma, &u)?;
                pt.close(d.total(), partial_trace_dense(&lambda, sigma, uf)?, IDENTITY_TOL);
                for form in [SeminormalForm::Orthogonal, SeminormalForm::Rational] {
                    let d = decompose_partial_sum(&lambda, sigma, &u, form)?;
                    ps.close(d.total(), partial_sum_dense(&lambda, sigma, uf, form)?, IDENTITY_TOL);
                }
                let s = (lambda.size() - 3).min(3);
                let id = iterated_decomposition(&lambda, sigma, &u, s)?;
                it.close(id.total(), partial_trace_dense(&lambda, sigma, uf)?, IDENTITY_TOL);
            }
        }
    }
    Ok([pt.done(), ps.done(), it.done()])
}

fn check_total_sum_expansions(max_n: usize) -> Result<[IdentityCheck; 2]> {
    let mut exp = Tally::new("total sum character expansion");
    let mut cor = Tally::new("total sum skew-dimension formula");
    let mut sigmas: Vec<Permutation> = Permutation::all(3);
    sigmas.extend(sample_s4());
    for sigma in &sigmas {
        let r = sigma.degree();
        for form in [SeminormalForm::Orthogonal, SeminormalForm::Rational] {
            let e = TotalSumExpansion::new(sigma, form);
            let small: Vec<(Partition, f64)> = enumerate_partitions(r)
                .map(|nu| {
                    let m = rep_matrix_in(&nu, sigma, form, DEFAULT_MATRIX_CAP).expect("small");
                    let ts = m.sum() / m.dim() as f64;
                    (nu, ts)
                })
                .collect();
            for lambda in shapes_up_to(max_n, r) {
                let m = rep_matrix_in(&lambda, sigma, form, DEFAULT_MATRIX_CAP)?;
                let direct = m.sum() / m.dim() as f64;
                exp.close(e.evaluate(&lambda), direct, IDENTITY_TOL);
                let dl = lambda.dimension().to_f64().unwrap();
                let via_skew: f64 = small
                    .iter()
                    .map(|(nu, ts)| {
                        ts * nu.dimension().to_f64().unwrap() * skew_dimension(&lambda, nu).to_f64().unwrap() / dl
                    })
                    .sum();
                cor.close(via_skew, direct, IDENTITY_TOL);
            }
        }
    }
    Ok([exp.done(), cor.done()])
}

/// `(1/r!) sum_{tau in S_r} chi^nu(tau) chi^lambda(tau)`, summed by classes.
pub fn skew_dimension_by_characters(lambda: &Partition, nu: &Partition) -> Result<BigInt> {
    let (n, r) = (lambda.size(), nu.size());
    let mut total = BigInt::zero();
    for rho in enumerate_partitions(r).map(CycleType) {
        total += BigInt::from(rho.class_size()) * character(nu, &rho)? * character(lambda, &rho.padded(n))?;
    }
    Ok(total / BigInt::from(factorial(r)))
}

fn check_skew_dimension(max_n: usize) -> Result<IdentityCheck> {
    let mut t = Tally::new("skew dimension");
    for lambda in shapes_up_to(max_n, 1) {
        for r in 0..=lambda.size() {
            for nu in enumerate_partitions(r) {
                t.exact(BigInt::from(skew_dimension(&lambda, &nu)) == skew_dimension_by_characters(&lambda, &nu)?);
            }
        }
    }
    Ok(t.done())
}

fn check_branching(max_n: usize) -> IdentityCheck {
    let mut t = Tally::new("branching rule sums");
    for lambda in shapes_up_to(max_n, 1) {
        let d = lambda.dimension();
        let down: BigUint = lambda.subpartitions().iter().map(|(m, _)| m.dimension()).sum();
        let up: BigUint = lambda.superpartitions().iter().map(|(m, _)| m.dimension()).sum();
        t.exact(down == d && up == &d * BigUint::from(lambda.size() + 1));
    }
    t.done()
}

fn check_stieltjes(max_n: usize, seed: u64) -> Result<IdentityCheck> {
    let mut t = Tally::new("Stieltjes closed forms");
    for (i, lambda) in shapes_up_to(max_n, 1).iter().enumerate() {
        let mut rng = sample_rng(seed ^ 0x57, i as u64);
        let n = lambda.size() as f64;
        for _ in 0..20 {
            // Points off the real axis segment holding the atoms.
            let u = n + 1.0 + rng.random::<f64>() * 10.0;
            let u = if rng.random::<bool>() { u } else { -u };
            for scaled in [false, true] {
                let v = if scaled { u / n.sqrt() } else { u };
                let a = stieltjes_ct(lambda, v, scaled)?;
                t.close(a, stieltjes_ct_rational(lambda, v, scaled)?, IDENTITY_TOL * a.abs().max(1.0));
                let b = stieltjes_tr(lambda, v, scaled)?;
                t.close(b, stieltjes_tr_rational(lambda, v, scaled)?, IDENTITY_TOL * b.abs().max(1.0));
            }
        }
    }
    Ok(t.done())
}

fn check_jucys(max_n: usize) -> Result<IdentityCheck> {
    let mut t = Tally::new("Jucys content identity");
    let nus: Vec<CycleType> = (1..=4)
        .flat_map(enumerate_partitions)
        .map(CycleType)
        .filter(|nu| nu.length_degree() <= 6)
        .collect();
    for n in 1..=max_n.min(6) {
        for nu in &nus {
            let a = jm_algebra::to_alpha(&jm_algebra::power_sum_jm(nu, n)?)?;
            for lambda in enumerate_partitions(n) {
                let lhs = BigRational::from_integer(jm_algebra::content_eval(nu, &lambda));
                t.exact(jm_algebra::phi_n(&a, &lambda)? == lhs);
            }
        }
    }
    Ok(t.done())
}

/// Runs every finite identity family on all partitions of size at most
/// `max_n`. Random instances are drawn from `seed`.
pub fn identity_suite(max_n: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let mut out = vec![
        check_homomorphism(max_n, seed)?,
        check_trace_character(max_n, seed)?,
    ];
    out.extend(check_blocks_bands_entries(max_n, seed)?);
    out.extend(check_decompositions(max_n)?);
    out.extend(check_total_sum_expansions(max_n)?);
    out.push(check_skew_dimension(max_n)?);
    out.push(check_branching(max_n));
    out.push(check_stieltjes(max_n, seed)?);
    out.push(check_jucys(max_n)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, r: usize) -> Permutation {
        s.parse::<Permutation>().unwrap().extend(r)
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.3), 1.0);
        assert_eq!(hermite(1, 3.5), 3.5);
        for x in [-1.5, 0.0, 0.7, 2.0] {
            assert!((hermite(2, x) - (x * x - 1.0)).abs() < 1e-12);
            assert!((hermite(3, x) - (x * x * x - 3.0 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_variances() {
        let ct = |p: &[usize]| CycleType::new(p.to_vec()).unwrap();
        assert_eq!(character_limit_variance(&ct(&[1, 1, 1])), 0.0);
        assert_eq!(character_limit_variance(&ct(&[2])), 2.0);
        assert_eq!(character_limit_variance(&ct(&[3])), 3.0);
        assert_eq!(character_limit_variance(&ct(&[2, 2])), 8.0);
        assert_eq!(character_limit_variance(&ct(&[3, 2])), 6.0);
    }

    #[test]
    fn mv_examples() {
        let rec = mv_record(&perm("(2,4)", 4)).unwrap();
        assert_eq!((rec.m, rec.v), (q(-1, 4), q(13, 6)));
        let rec = mv_record(&Permutation::identity(4)).unwrap();
        assert_eq!((rec.m, rec.v), (q(1, 1), q(0, 1)));
        let rec = mv_record(&perm("(1,4,2)", 4)).unwrap();
        assert_eq!((rec.m, rec.v), (q(0, 1), q(-4, 3)));
        assert!(mv_table(7).is_err());
    }

    #[test]
    fn adjacent_transpositions() {
        for r in 3..=5 {
            let c = adjacent_transposition_mv_check(r).unwrap();
            assert!(c.holds, "r = {r}: m = {}, v = {}", c.m, c.v);
        }
        assert_eq!(adjacent_transposition_mv_check(4).unwrap().m, q(1, 2));
    }

    #[test]
    fn stats_and_ks() {
        let s = Stats::of(&[1.0, 2.0, 3.0, -4.0]);
        assert_eq!(s.mean, 0.5);
        assert!((s.variance - 29.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.max_abs, 4.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[0.0, 0.0], &[1.0, 1.0]), 1.0);
        assert!(ks_normal(&[0.0], 1.0) - 0.5 < 1e-12);
    }

    #[test]
    fn chi_square_matches_table() {
        // 3.841 is the 95% quantile of chi-square with one degree of freedom.
        let t = chi_square_gof(&[60, 40], &[0.5, 0.5]);
        assert_eq!(t.df, 1);
        assert!((t.statistic - 4.0).abs() < 1e-12);
        assert!(t.p_value < 0.05 && t.p_value > 0.04);
    }

    #[test]
    fn main_term_boundaries() {
        let lambda = Partition::new(vec![4, 3, 1]).unwrap();
        let s = CycleType::new(vec![2]).unwrap();
        let (mt, w) = main_term_with(&lambda, &BigRational::one(), |mu| {
            normalized_character_f64(mu, &s.padded(7)).unwrap()
        });
        assert!((w - 1.0).abs() < 1e-12);
        let full = normalized_character_f64(&lambda, &s.padded(8)).unwrap();
        assert!((mt - full).abs() < 1e-12);
        let (mt0, w0) = main_term_with(&lambda, &BigRational::zero(), |_| 1.0);
        assert_eq!((mt0, w0), (0.0, 0.0));
    }

    #[test]
    fn main_term_agrees_with_decomposition() {
        let sigma = perm("(1,2)", 2);
        for lambda in enumerate_partitions(7) {
            for u in units() {
                let d = decompose_partial_trace(&lambda, &sigma, &u).unwrap();
                let s = CycleType::new(vec![2]).unwrap().padded(6);
                let (mt, _) = main_term_with(&lambda, &u, |mu| normalized_character_f64(mu, &s).unwrap());
                assert!((mt - d.main_term()).abs() < 1e-12, "{lambda} u = {u}");
            }
        }
    }

    #[test]
    fn sampling_is_independent_of_jobs() {
        let ct = CycleType::new(vec![2]).unwrap();
        let a = character_statistics(30, &ct, &RunOptions { samples: 40, seed: 3, jobs: 1 }).unwrap();
        let b = character_statistics(30, &ct, &RunOptions { samples: 40, seed: 3, jobs: 3 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn conjecture_small_cases() {
        // n = 1: the only ratio is 1 > 1^{-alpha} fails (1 is not > 1).
        assert_eq!(conjecture_probe_exact(1, 0.2, 1).unwrap().probability, 0.0);
        // n = 2: both shapes have dimension 1, so the ratio 1 exceeds 2^{-0.2}.
        assert_eq!(conjecture_probe_exact(2, 0.2, 1).unwrap().probability, 1.0);
        assert!(conjecture_probe_exact(41, 0.2, 1).is_err());
        let row = conjecture_probe_exact(6, 0.2, 2).unwrap();
        assert!(row.probability >= 0.0 && row.probability <= 1.0);
    }

    #[test]
    fn max_ratio_two_steps() {
        // (2,1) -> size 1: the only mu is (1), ratio 1/2.
        let l = Partition::new(vec![2, 1]).unwrap();
        assert!((max_ratio_after_removal(&l, 2) - 0.5).abs() < 1e-15);
        assert!((max_ratio_after_removal(&l, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cotransition_exact_n4() {
        let rows = cotransition_exact(4);
        assert_eq!(rows.len(), 5);
        let mass: f64 = rows.iter().map(|r| r.1).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.2 > 0.0 && r.2 <= 1.0));
    }

    #[test]
    fn skew_dimension_example() {
        let l = Partition::new(vec![3, 2]).unwrap();
        let nu = Partition::new(vec![2]).unwrap();
        // Fillings of (3,2)/(2) with 1,2,3: row one has one box, row two two.
        assert_eq!(skew_dimension_by_characters(&l, &nu).unwrap(), BigInt::from(3));
    }

    #[test]
    fn small_identity_suite_passes() {
        for check in identity_suite(5, 11).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
    }
}
