//! Integer partitions drawn as Young diagrams in English notation.
//!
//! A box is a pair `(a, b)` with `a` the column and `b` the row, both
//! 1-based. Its content is `a - b` (column minus row), so the box right of
//! the origin has content `1` and the box below it has content `-1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

/// Contents of the removable (outer) and addable (inner) corners of a
/// partition, both sorted increasingly. They interlace:
/// `x_1 < y_1 < x_2 < ... < y_d < x_{d+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerData {
    pub outer_contents: Vec<i64>,
    pub inner_contents: Vec<i64>,
}

impl CornerData {
    pub fn interlaces(&self) -> bool {
        let (x, y) = (&self.inner_contents, &self.outer_contents);
        if x.len() != y.len() + 1 {
            return false;
        }
        y.iter()
            .enumerate()
            .all(|(j, &yj)| x[j] < yj && yj < x[j + 1])
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not nonincreasing")));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    /// Builds a partition from parts that may contain zeros or be unsorted.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn row(n: usize) -> Self {
        Partition::from_unsorted(vec![n])
    }

    pub fn column(n: usize) -> Self {
        Partition::from_unsorted(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of nonzero parts (rows).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `b` (1-based); zero past the last row.
    pub fn row_len(&self, b: usize) -> usize {
        if b == 0 {
            return 0;
        }
        self.parts.get(b - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|a| self.parts.iter().take_while(|&&p| p >= a).count())
            .collect();
        Partition { parts, size: self.size }
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len()
            && other.parts.iter().zip(&self.parts).all(|(o, s)| o <= s)
    }

    /// Multiplicity of the part `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&p| p == k).count()
    }

    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |a| (a, i + 1)))
    }

    /// Hook length of the box in column `a`, row `b`.
    pub fn hook(&self, a: usize, b: usize) -> usize {
        let arm = self.row_len(b) - a;
        let leg = self.parts.iter().skip(b).take_while(|&&p| p >= a).count();
        arm + leg + 1
    }

    fn hooks(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (1..=p).map(|a| p - a + conj.parts[a - 1] - (i + 1) + 1).collect())
            .collect()
    }

    /// Number of standard Young tableaux of this shape, by the hook length
    /// formula.
    pub fn dimension(&self) -> BigUint {
        let mut hooks = BigUint::one();
        for row in self.hooks() {
            for h in row {
                hooks *= h;
            }
        }
        factorial(self.size) / hooks
    }

    pub fn contents_multiset(&self) -> Vec<i64> {
        self.boxes().map(|(a, b)| a as i64 - b as i64).collect()
    }

    pub fn corners(&self) -> CornerData {
        let l = self.len();
        // Walking rows bottom-up gives increasing contents.
        let mut outer = Vec::new();
        for b in (1..=l).rev() {
            if self.row_len(b) > self.row_len(b + 1) {
                outer.push(self.row_len(b) as i64 - b as i64);
            }
        }
        let mut inner = Vec::new();
        for b in (1..=l + 1).rev() {
            if b == 1 || self.row_len(b - 1) > self.row_len(b) {
                inner.push(self.row_len(b) as i64 + 1 - b as i64);
            }
        }
        CornerData {
            outer_contents: outer,
            inner_contents: inner,
        }
    }

    /// Partitions obtained by removing one outer corner, paired with the
    /// content of the removed box, in increasing content order.
    pub fn subpartitions(&self) -> Vec<(Partition, i64)> {
        let l = self.len();
        (1..=l)
            .rev()
            .filter(|&b| self.row_len(b) > self.row_len(b + 1))
            .map(|b| {
                let mut parts = self.parts.clone();
                parts[b - 1] -= 1;
                if parts[b - 1] == 0 {
                    parts.pop();
                }
                let content = self.row_len(b) as i64 - b as i64;
                (Partition { parts, size: self.size - 1 }, content)
            })
            .collect()
    }

    /// Partitions obtained by adding one inner corner, paired with the
    /// content of the added box, in increasing content order.
    pub fn superpartitions(&self) -> Vec<(Partition, i64)> {
        let l = self.len();
        (1..=l + 1)
            .rev()
            .filter(|&b| b == 1 || self.row_len(b - 1) > self.row_len(b))
            .map(|b| {
                let mut parts = self.parts.clone();
                if b > l {
                    parts.push(1);
                } else {
                    parts[b - 1] += 1;
                }
                let content = self.row_len(b) as i64 + 1 - b as i64;
                (Partition { parts, size: self.size + 1 }, content)
            })
            .collect()
    }

    /// Exact ratio `dim(mu) / dim(self)` for `mu` contained in `self`.
    ///
    /// Only boxes whose hook changes between the two shapes enter the
    /// product, so this stays cheap for large diagrams with a few boxes
    /// removed.
    pub fn dimension_ratio(&self, mu: &Partition) -> BigRational {
        assert!(self.contains(mu), "{mu} is not contained in {self}");
        let lambda_conj = self.conjugate();
        let mu_conj = mu.conjugate();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (i, &p) in mu.parts.iter().enumerate() {
            let b = i + 1;
            for a in 1..=p {
                let h_mu = p - a + mu_conj.parts[a - 1] - b + 1;
                let h_lambda = self.parts[i] - a + lambda_conj.parts[a - 1] - b + 1;
                if h_mu != h_lambda {
                    num *= h_lambda;
                    den *= h_mu;
                }
            }
        }
        for (i, &p) in self.parts.iter().enumerate() {
            let b = i + 1;
            for a in (mu.row_len(b) + 1)..=p {
                num *= p - a + lambda_conj.parts[a - 1] - b + 1;
            }
        }
        for k in (mu.size + 1)..=self.size {
            den *= k;
        }
        BigRational::new(num.into(), den.into())
    }

    /// Floating-point `dim(mu) / dim(self)`, computed as a product of hook
    /// ratios (no large intermediates).
    pub fn dimension_ratio_f64(&self, mu: &Partition) -> f64 {
        assert!(self.contains(mu), "{mu} is not contained in {self}");
        let lambda_conj = self.conjugate();
        let mu_conj = mu.conjugate();
        let mut ratio = 1.0f64;
        for (i, &p) in mu.parts.iter().enumerate() {
            let b = i + 1;
            for a in 1..=p {
                let h_mu = p - a + mu_conj.parts[a - 1] - b + 1;
                let h_lambda = self.parts[i] - a + lambda_conj.parts[a - 1] - b + 1;
                if h_mu != h_lambda {
                    ratio *= h_lambda as f64 / h_mu as f64;
                }
            }
        }
        let mut k = self.size;
        for (i, &p) in self.parts.iter().enumerate() {
            let b = i + 1;
            for a in (mu.row_len(b) + 1)..=p {
                ratio *= (p - a + lambda_conj.parts[a - 1] - b + 1) as f64 / k as f64;
                k -= 1;
            }
        }
        ratio
    }

    /// Set-wise union of parts, e.g. `(3,1) ∪ (2) = (3,2,1)`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of standard fillings of the skew shape `lambda / nu`; zero when
/// `nu` is not contained in `lambda`.
///
/// Counts saturated chains from `nu` up to `lambda` in Young's lattice by
/// removing corners of `lambda` while staying above `nu`.
pub fn skew_dimension(lambda: &Partition, nu: &Partition) -> BigUint {
    if !lambda.contains(nu) {
        return BigUint::zero();
    }
    let mut memo = HashMap::new();
    chains_down(lambda, nu, &mut memo)
}

fn chains_down(
    lambda: &Partition,
    nu: &Partition,
    memo: &mut HashMap<Partition, BigUint>,
) -> BigUint {
    if lambda.size == nu.size {
        return BigUint::one();
    }
    if let Some(v) = memo.get(lambda) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for (mu, _) in lambda.subpartitions() {
        if mu.contains(nu) {
            total += chains_down(&mu, nu, memo);
        }
    }
    memo.insert(lambda.clone(), total.clone());
    total
}

/// Iterator over the partitions of `n` in decreasing lexicographic order,
/// starting from `(n)` and ending at `(1^n)`.
pub struct PartitionIter {
    current: Option<Vec<usize>>,
    n: usize,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let parts = self.current.take()?;
        let out = Partition {
            parts: parts.clone(),
            size: self.n,
        };
        // Successor: decrement the rightmost part larger than one and refill
        // greedily with parts no larger than it.
        let mut next = parts;
        let mut ones = 0;
        while next.last() == Some(&1) {
            next.pop();
            ones += 1;
        }
        if let Some(last) = next.pop() {
            let k = last - 1;
            let mut rest = ones + 1 + k;
            while rest > 0 {
                let p = k.min(rest);
                next.push(p);
                rest -= p;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn enumerate_partitions(n: usize) -> PartitionIter {
    let start = if n == 0 { Vec::new() } else { vec![n] };
    PartitionIter {
        current: Some(start),
        n,
    }
}

/// All partitions of every size `0..=n`, smallest sizes first.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(enumerate_partitions).collect()
}

/// Number of partitions of `n`, as f64-safe `u128` for `n` up to a few
/// hundred.
pub fn partition_count(n: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p[n]
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"6,4,3,3,2"`; surrounding parentheses are accepted and the
    /// empty string (or `"()"`) is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if trimmed.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, m| acc * m)
}

#[cfg(test)]
pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Counts standard fillings by placing 1..n one at a time.
    fn brute_force_syt(shape: &[usize]) -> u64 {
        fn go(filled: &mut Vec<usize>, shape: &[usize], left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            let mut total = 0;
            for r in 0..shape.len() {
                let ok_row = filled[r] < shape[r];
                let ok_above = r == 0 || filled[r - 1] > filled[r];
                if ok_row && ok_above {
                    filled[r] += 1;
                    total += go(filled, shape, left - 1);
                    filled[r] -= 1;
                }
            }
            total
        }
        let mut filled = vec![0; shape.len()];
        go(&mut filled, shape, shape.iter().sum())
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(p("3,2").dimension(), BigUint::from(5u32));
        assert_eq!(p("7").dimension(), BigUint::one());
        assert_eq!(Partition::empty().dimension(), BigUint::one());
        let oracle = brute_force_syt(&[6, 4, 3, 3, 2]);
        assert_eq!(p("6,4,3,3,2").dimension(), BigUint::from(oracle));
    }

    #[test]
    fn corners_of_figure_partition() {
        let c = p("6,4,3,3,2").corners();
        assert_eq!(c.outer_contents, vec![-3, -1, 2, 5]);
        assert_eq!(c.inner_contents, vec![-5, -2, 1, 3, 6]);
        assert!(c.interlaces());

        let c = p("1").corners();
        assert_eq!(c.outer_contents, vec![0]);
        assert_eq!(c.inner_contents, vec![-1, 1]);
    }

    #[test]
    fn corners_match_box_scan() {
        let lambda = p("3,3,3");
        let inside = |a: usize, b: usize| a >= 1 && b >= 1 && a <= lambda.row_len(b);
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for b in 1..=5usize {
            for a in 1..=5usize {
                let c = a as i64 - b as i64;
                if inside(a, b) && !inside(a + 1, b) && !inside(a, b + 1) {
                    outer.push(c);
                }
                if !inside(a, b) && (a == 1 || inside(a - 1, b)) && (b == 1 || inside(a, b - 1)) {
                    inner.push(c);
                }
            }
        }
        outer.sort();
        inner.sort();
        let c = lambda.corners();
        assert_eq!(c.outer_contents, outer);
        assert_eq!(c.inner_contents, inner);
    }

    #[test]
    fn sub_and_superpartitions() {
        let subs = p("6,4,3,3,2").subpartitions();
        assert_eq!(subs[2], (p("6,3,3,3,2"), 2));
        assert_eq!(p("1").subpartitions(), vec![(Partition::empty(), 0)]);
        assert_eq!(p("2,2").subpartitions(), vec![(p("2,1"), 0)]);

        let sups = p("6,4,3,3,2").superpartitions();
        assert_eq!(sups[1], (p("6,4,3,3,3"), -2));
        assert_eq!(Partition::empty().superpartitions(), vec![(p("1"), 0)]);
        let total: BigUint = p("2,1").superpartitions().iter().map(|(l, _)| l.dimension()).sum();
        assert_eq!(total, BigUint::from(8u32));
    }

    #[test]
    fn contents() {
        let mut c = p("3,2").contents_multiset();
        c.sort();
        assert_eq!(c, vec![-1, 0, 0, 1, 2]);
        assert_eq!(p("1").contents_multiset(), vec![0]);
        assert_eq!(p("4").contents_multiset(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn skew_dimension_examples() {
        assert_eq!(skew_dimension(&p("3,2"), &p("3,2")), BigUint::one());
        assert_eq!(skew_dimension(&p("3,2"), &p("1,1,1")), BigUint::zero());
        // (3,2)/(2): the box (3,1) and the row (1,2),(2,2); brute force gives 3.
        assert_eq!(skew_dimension(&p("3,2"), &p("2")), BigUint::from(3u32));
        assert_eq!(skew_dimension(&p("3,2"), &Partition::empty()), BigUint::from(5u32));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitions(4).count(), 5);
        assert_eq!(enumerate_partitions(0).collect::<Vec<_>>(), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(40).count(), 37338);
        let order: Vec<String> = enumerate_partitions(4).map(|l| l.to_string()).collect();
        assert_eq!(order, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("2,3".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(p("6,4,3,3,2").to_string(), "(6,4,3,3,2)");
    }

    #[test]
    fn dimension_ratio_matches_dimensions() {
        let lambda = p("5,3,3,1");
        for (mu, _) in lambda.subpartitions() {
            let expect = BigRational::new(mu.dimension().into(), lambda.dimension().into());
            assert_eq!(lambda.dimension_ratio(&mu), expect);
            let f = lambda.dimension_ratio_f64(&mu);
            assert!((f - ratio_to_f64(&expect)).abs() < 1e-14);
        }
        let nu = p("2,1");
        let expect = BigRational::new(nu.dimension().into(), lambda.dimension().into());
        assert_eq!(lambda.dimension_ratio(&nu), expect);
    }
}
