//! Irreducible characters of the symmetric group, normalized characters and
//! shifted power sums.
//!
//! Characters use the Murnaghan–Nakayama rule on beta-sets. Only the parts
//! of the cycle type larger than 1 are stripped as rim hooks; what remains
//! is `sum_mu c_mu chi^mu(id) = sum_mu c_mu dim mu`, which keeps the cost
//! independent of `n` and lets the normalized value be formed from exact
//! dimension ratios.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, falling_factorial, Partition};
use crate::permutation::CycleType;

/// Shapes reachable by removing rim hooks of the given lengths in order,
/// with their signed multiplicities. Zero multiplicities are dropped.
pub fn rim_hook_expansion(lambda: &Partition, hooks: &[usize]) -> Vec<(Partition, i64)> {
    let l = lambda.len();
    // Beta-set: distinct first-column hook lengths, stored as a bitmap.
    let mut start = vec![false; lambda.row_len(1) + l];
    for (i, &p) in lambda.parts().iter().enumerate() {
        start[p + l - 1 - i] = true;
    }
    let mut states: HashMap<Vec<bool>, i64> = HashMap::from([(start, 1)]);
    for &h in hooks {
        let mut next: HashMap<Vec<bool>, i64> = HashMap::new();
        for (beta, coeff) in states {
            for b in h..beta.len() {
                if !beta[b] || beta[b - h] {
                    continue;
                }
                let between = beta[b - h + 1..b].iter().filter(|&&x| x).count();
                let sign = if between % 2 == 0 { 1 } else { -1 };
                let mut moved = beta.clone();
                moved[b] = false;
                moved[b - h] = true;
                *next.entry(moved).or_insert(0) += sign * coeff;
            }
        }
        next.retain(|_, c| *c != 0);
        states = next;
    }
    let mut out: Vec<(Partition, i64)> = states
        .into_iter()
        .map(|(beta, c)| (beta_to_partition(&beta, l), c))
        .collect();
    out.sort();
    out
}

fn beta_to_partition(beta: &[bool], l: usize) -> Partition {
    let mut parts = Vec::with_capacity(l);
    let mut seen = 0;
    for b in (0..beta.len()).rev() {
        if beta[b] {
            parts.push(b + seen + 1 - l);
            seen += 1;
        }
    }
    Partition::from_unsorted(parts)
}

fn check_sizes(lambda: &Partition, rho: &CycleType) -> Result<()> {
    if rho.size() > lambda.size() {
        return Err(Error::DegreeTooLarge {
            degree: rho.size(),
            n: lambda.size(),
        });
    }
    Ok(())
}

type CharacterCache = Mutex<HashMap<(Partition, Vec<usize>), BigInt>>;

fn cache() -> &'static CharacterCache {
    static CACHE: OnceLock<CharacterCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shapes above this size are not memoized; their values are only ever
/// needed once per sample.
const CACHE_MAX_N: usize = 16;

/// `chi^lambda` at a permutation of type `rho`, padded with fixed points.
pub fn character(lambda: &Partition, rho: &CycleType) -> Result<BigInt> {
    check_sizes(lambda, rho)?;
    let hooks = rho.nontrivial_parts();
    let key = (lambda.clone(), hooks.clone());
    if lambda.size() <= CACHE_MAX_N {
        if let Some(v) = cache().lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
    }
    let mut total = BigInt::zero();
    for (mu, c) in rim_hook_expansion(lambda, &hooks) {
        total += BigInt::from(c) * BigInt::from(mu.dimension());
    }
    if lambda.size() <= CACHE_MAX_N {
        cache().lock().expect("cache poisoned").insert(key, total.clone());
    }
    Ok(total)
}

/// `chi^lambda_rho / dim lambda`, exact.
pub fn normalized_character(lambda: &Partition, rho: &CycleType) -> Result<BigRational> {
    check_sizes(lambda, rho)?;
    let mut total = BigRational::zero();
    for (mu, c) in rim_hook_expansion(lambda, &rho.nontrivial_parts()) {
        total += BigRational::from_integer(c.into()) * lambda.dimension_ratio(&mu);
    }
    Ok(total)
}

/// Floating-point `chi^lambda_rho / dim lambda` without big integers.
pub fn normalized_character_f64(lambda: &Partition, rho: &CycleType) -> Result<f64> {
    check_sizes(lambda, rho)?;
    let hooks = rho.nontrivial_parts();
    if hooks == [2] {
        // Frobenius: chi-hat of a transposition is 2 * sum of contents / n(n-1).
        let n = lambda.size() as f64;
        let s: i64 = lambda.contents_multiset().iter().sum();
        return Ok(2.0 * s as f64 / (n * (n - 1.0)));
    }
    Ok(rim_hook_expansion(lambda, &hooks)
        .into_iter()
        .map(|(mu, c)| c as f64 * lambda.dimension_ratio_f64(&mu))
        .sum())
}

/// `p#_rho(lambda) = n^{down r} chi-hat^lambda_rho` for `n >= r`, else 0.
pub fn shifted_power_sum(rho: &CycleType, lambda: &Partition) -> BigRational {
    let (n, r) = (lambda.size(), rho.size());
    if n < r {
        return BigRational::zero();
    }
    let chi = normalized_character(lambda, rho).expect("sizes checked");
    BigRational::from_integer(falling_factorial(n, r).into()) * chi
}

/// Every cycle type `rho` (including the empty one) with
/// `|rho| + m_1(rho) <= d`, ordered by size then decreasing-lex.
pub fn kerov_basis(d: usize) -> Vec<CycleType> {
    (0..=d)
        .flat_map(enumerate_partitions)
        .map(CycleType)
        .filter(|rho| rho.kerov_degree() <= d)
        .collect()
}

/// Coefficients `c_rho` with `sum c_rho p#_rho = values` on every supplied
/// partition, over the basis of [`kerov_basis`]`(d)`.
///
/// Supplying all partitions of size `<= d` makes the system injective:
/// `p#_rho` vanishes below `|rho|`, and at size `|rho|` its values form
/// columns of the invertible character table.
pub fn expand_in_shifted_basis(
    values: &BTreeMap<Partition, BigRational>,
    d: usize,
) -> Result<BTreeMap<CycleType, BigRational>> {
    let basis = kerov_basis(d);
    let rows: Vec<Vec<BigRational>> = values
        .keys()
        .map(|lambda| basis.iter().map(|rho| shifted_power_sum(rho, lambda)).collect())
        .collect();
    let rhs: Vec<BigRational> = values.values().cloned().collect();
    let solution = solve_exact(rows, rhs, basis.len())?;
    Ok(basis
        .into_iter()
        .zip(solution)
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// Solves `A x = b` exactly by Gauss–Jordan elimination. Requires full
/// column rank and a consistent system.
pub fn solve_exact(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
    unknowns: usize,
) -> Result<Vec<BigRational>> {
    let m = a.len();
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let Some(p) = (pivot_row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        b.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for v in a[pivot_row][col..].iter_mut() {
            *v *= &inv;
        }
        b[pivot_row] *= &inv;
        for i in 0..m {
            if i == pivot_row || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..unknowns {
                let t = &f * &a[pivot_row][j];
                a[i][j] -= t;
            }
            let t = &f * &b[pivot_row];
            b[i] -= t;
        }
        pivot_row += 1;
    }
    if pivot_row < unknowns {
        return Err(Error::Underdetermined {
            rank: pivot_row,
            unknowns,
        });
    }
    if b[pivot_row..].iter().any(|v| !v.is_zero()) {
        return Err(Error::Inconsistent);
    }
    Ok(b.into_iter().take(unknowns).collect())
}
