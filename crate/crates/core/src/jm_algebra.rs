//! Partial permutations, Jucys–Murphy elements and their power sums.
//!
//! A partial permutation is a bijection of a finite support set `d`. The
//! product `(s, d) * (t, e)` extends both factors by fixed points to `d ∪ e`
//! and composes right to left. Sums of partial permutations form an algebra
//! whose conjugation-invariant part has the basis `alpha_{rho;n}`: the sum
//! of every partial permutation of type `rho` (fixed points inside the
//! support count as parts equal to 1).
//!
//! The projection to the group algebra of `S_n` followed by a normalized
//! irreducible character is evaluated in closed form by [`phi_n`], so the
//! Jucys identity `chi-hat^lambda(p_nu(xi)) = p_nu(contents of lambda)` can be
//! checked without building any group-algebra element of `S_n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::characters::normalized_character;
use crate::error::{Error, Result};
use crate::partitions::{falling_factorial, Partition};
use crate::permutation::{CycleType, Permutation};

/// Default bound on the number of term products formed by one expansion.
pub const DEFAULT_TERM_CAP: usize = 5_000_000;

/// A bijection of a finite set of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    // Sorted support and the image of each support point, index-aligned.
    support: Vec<usize>,
    images: Vec<usize>,
}

impl PartialPermutation {
    /// Builds `(s, d)` from a support and the images of its points.
    pub fn new(support: Vec<usize>, images: Vec<usize>) -> Result<Self> {
        if support.len() != images.len() {
            return Err(Error::InvalidPermutation(
                "support and images differ in length".into(),
            ));
        }
        let mut pairs: Vec<(usize, usize)> = support.into_iter().zip(images).collect();
        pairs.sort_unstable();
        let support: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut targets: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let images = targets.clone();
        targets.sort_unstable();
        if support.contains(&0) || support.windows(2).any(|w| w[0] == w[1]) || targets != support {
            return Err(Error::InvalidPermutation(
                "images must be a bijection of a set of positive integers".into(),
            ));
        }
        Ok(PartialPermutation { support, images })
    }

    /// The identity on `d`.
    pub fn identity_on(mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        support.dedup();
        PartialPermutation { images: support.clone(), support }
    }

    /// The transposition `(i j)` with support `{i, j}`.
    pub fn transposition(i: usize, j: usize) -> Self {
        assert!(i != j && i > 0 && j > 0, "transposition needs two distinct points");
        let (a, b) = (i.min(j), i.max(j));
        PartialPermutation { support: vec![a, b], images: vec![b, a] }
    }

    /// Transports a permutation of `{1..r}` onto the sorted set `points`.
    pub fn from_permutation_on(sigma: &Permutation, points: &[usize]) -> Result<Self> {
        if sigma.degree() != points.len() {
            return Err(Error::InvalidPermutation("degree does not match the support".into()));
        }
        let images = (1..=points.len()).map(|i| points[sigma.apply(i) - 1]).collect();
        PartialPermutation::new(points.to_vec(), images)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Image of `x`, which is `x` itself off the support.
    pub fn apply(&self, x: usize) -> usize {
        match self.support.binary_search(&x) {
            Ok(i) => self.images[i],
            Err(_) => x,
        }
    }

    /// Cycle type of the bijection on its support, fixed points included.
    pub fn cycle_type(&self) -> CycleType {
        let mut seen = vec![false; self.support.len()];
        let mut parts = Vec::new();
        for start in 0..self.support.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.support.binary_search(&self.images[i]).expect("closed support");
            }
            parts.push(len);
        }
        CycleType(Partition::from_unsorted(parts))
    }

    /// `g * self * g^{-1}`, with `g` acting on points `1..=deg g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PartialPermutation {
        let act = |x: usize| if x <= g.degree() { g.apply(x) } else { x };
        let support = self.support.iter().map(|&x| act(x)).collect();
        let images = self.images.iter().map(|&x| act(x)).collect();
        PartialPermutation::new(support, images).expect("conjugation preserves bijectivity")
    }

    /// The product `self * other` on the union of supports.
    pub fn multiply(&self, other: &PartialPermutation) -> PartialPermutation {
        let mut support = Vec::with_capacity(self.support.len() + other.support.len());
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() || j < other.support.len() {
            let a = self.support.get(i).copied().unwrap_or(usize::MAX);
            let b = other.support.get(j).copied().unwrap_or(usize::MAX);
            support.push(a.min(b));
            i += usize::from(a <= b);
            j += usize::from(b <= a);
        }
        let images = support.iter().map(|&x| self.apply(other.apply(x))).collect();
        PartialPermutation { support, images }
    }
}

/// `(s, d) * (t, e)`, composing right to left on `d ∪ e`.
pub fn pp_multiply(a: &PartialPermutation, b: &PartialPermutation) -> PartialPermutation {
    a.multiply(b)
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.support.len()];
        let mut wrote = false;
        for start in 0..self.support.len() {
            if seen[start] || self.images[start] == self.support[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(self.support[i].to_string());
                i = self.support.binary_search(&self.images[i]).expect("closed support");
            }
            write!(f, "({})", cycle.join(","))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("id")?;
        }
        let d: Vec<String> = self.support.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", d.join(","))
    }
}

/// A finite combination of partial permutations with supports in `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum {
    n: usize,
    terms: HashMap<PartialPermutation, BigRational>,
}

impl FormalSum {
    pub fn zero(n: usize) -> Self {
        FormalSum { n, terms: HashMap::new() }
    }

    /// The unit `(id, ∅)`.
    pub fn one(n: usize) -> Self {
        FormalSum::single(n, PartialPermutation::identity_on(Vec::new()), BigRational::one())
    }

    pub fn single(n: usize, p: PartialPermutation, c: BigRational) -> Self {
        let mut s = FormalSum::zero(n);
        s.add_term(p, c);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PartialPermutation) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PartialPermutation, &BigRational)> {
        self.terms.iter()
    }

    /// Adds `c * p`, dropping the entry if it cancels.
    ///
    /// Panics if the support of `p` leaves `{1..n}`.
    pub fn add_term(&mut self, p: PartialPermutation, c: BigRational) {
        assert!(
            p.support.last().is_none_or(|&m| m <= self.n),
            "support exceeds the ambient n"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        self.add_scaled(other, &BigRational::one())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &FormalSum, c: &BigRational) -> FormalSum {
        assert_eq!(self.n, other.n, "ambient n differs");
        let mut out = self.clone();
        for (p, a) in &other.terms {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> FormalSum {
        let mut out = FormalSum::zero(self.n);
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    /// Product in the partial-permutation algebra, refusing to form more
    /// than `cap` term products.
    pub fn mul_capped(&self, other: &FormalSum, cap: usize) -> Result<FormalSum> {
        assert_eq!(self.n, other.n, "ambient n differs");
        if self.terms.len().saturating_mul(other.terms.len()) > cap {
            return Err(Error::ExpansionTooLarge { cap });
        }
        let mut out = FormalSum::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.multiply(q), a * b);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &FormalSum) -> Result<FormalSum> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Conjugates every term by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> FormalSum {
        let mut out = FormalSum::zero(self.n);
        for (p, a) in &self.terms {
            out.add_term(p.conjugate_by(g), a.clone());
        }
        out
    }
}

/// Coefficients `c_rho` of an invariant element in the basis `alpha_{rho;n}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlphaExpansion {
    pub n: usize,
    pub coefficients: BTreeMap<CycleType, BigRational>,
}

impl AlphaExpansion {
    pub fn coefficient(&self, rho: &CycleType) -> BigRational {
        self.coefficients.get(rho).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The single basis element `alpha_{rho;n}`.
    pub fn basis(rho: CycleType, n: usize) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(rho, BigRational::one());
        AlphaExpansion { n, coefficients }
    }
}

/// The Jucys–Murphy element `xi_i = sum_{j<i} ((j i), {j, i})`.
pub fn jm_element(i: usize, n: usize) -> Result<FormalSum> {
    if i == 0 || i > n {
        return Err(Error::OutOfRange { what: "i", value: i.to_string(), range: format!("1..={n}") });
    }
    let mut s = FormalSum::zero(n);
    for j in 1..i {
        s.add_term(PartialPermutation::transposition(j, i), BigRational::one());
    }
    Ok(s)
}

/// `p_k(xi_1, ..., xi_n) = sum_i xi_i^k`.
fn power_sum_single(k: usize, n: usize, cap: usize) -> Result<FormalSum> {
    let mut total = FormalSum::zero(n);
    for i in 1..=n {
        let xi = jm_element(i, n)?;
        let mut pow = FormalSum::one(n);
        for _ in 0..k {
            pow = pow.mul_capped(&xi, cap)?;
        }
        total = total.add(&pow);
    }
    Ok(total)
}

fn product_over_parts<F>(nu: &CycleType, n: usize, cap: usize, mut factor: F) -> Result<FormalSum>
where
    F: FnMut(usize) -> Result<FormalSum>,
{
    let mut out = FormalSum::one(n);
    let mut cache: HashMap<usize, FormalSum> = HashMap::new();
    for &k in nu.partition().parts() {
        if !cache.contains_key(&k) {
            cache.insert(k, factor(k)?);
        }
        out = out.mul_capped(&cache[&k], cap)?;
    }
    Ok(out)
}

/// `p_nu(xi) = prod_i (xi_1^{nu_i} + ... + xi_n^{nu_i})` expanded in full.
pub fn power_sum_jm(nu: &CycleType, n: usize) -> Result<FormalSum> {
    power_sum_jm_capped(nu, n, DEFAULT_TERM_CAP)
}

pub fn power_sum_jm_capped(nu: &CycleType, n: usize, cap: usize) -> Result<FormalSum> {
    product_over_parts(nu, n, cap, |k| power_sum_single(k, n, cap))
}

/// `Cat(k/2) * (k/2)!` for even `k`, zero for odd `k`.
pub fn catalan_correction(k: usize) -> BigUint {
    if k % 2 == 1 {
        return BigUint::zero();
    }
    let m = k / 2;
    catalan(m) * falling_factorial(m, m)
}

/// The Catalan number `C(2m, m) / (m + 1)`.
pub fn catalan(m: usize) -> BigUint {
    falling_factorial(2 * m, m) / falling_factorial(m + 1, m + 1)
}

/// `prod_i (p_{nu_i}(xi) - Cat(nu_i/2) (nu_i/2)! alpha_{(1^{nu_i/2+1});n})`.
pub fn modified_power_sum_jm(nu: &CycleType, n: usize) -> Result<FormalSum> {
    modified_power_sum_jm_capped(nu, n, DEFAULT_TERM_CAP)
}

pub fn modified_power_sum_jm_capped(nu: &CycleType, n: usize, cap: usize) -> Result<FormalSum> {
    product_over_parts(nu, n, cap, |k| {
        let p = power_sum_single(k, n, cap)?;
        let corr = catalan_correction(k);
        if corr.is_zero() || k / 2 + 1 > n {
            return Ok(p);
        }
        let ones = CycleType(Partition::from_unsorted(vec![1; k / 2 + 1]));
        let c = -BigRational::from_integer(BigInt::from(corr));
        Ok(p.add_scaled(&alpha_element(&ones, n)?, &c))
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// `alpha_{rho;n}`: every partial permutation of type `rho` with support in
/// `{1..n}`, each with coefficient 1.
pub fn alpha_element(rho: &CycleType, n: usize) -> Result<FormalSum> {
    let r = rho.size();
    if r > n {
        return Err(Error::DegreeTooLarge { degree: r, n });
    }
    let count = falling_factorial(n, r) / rho.z();
    if count > BigUint::from(DEFAULT_TERM_CAP) {
        return Err(Error::ExpansionTooLarge { cap: DEFAULT_TERM_CAP });
    }
    let shapes: Vec<Permutation> =
        Permutation::all(r).into_iter().filter(|s| s.cycle_type() == *rho).collect();
    let mut out = FormalSum::zero(n);
    for d in combinations(n, r) {
        for s in &shapes {
            out.add_term(PartialPermutation::from_permutation_on(s, &d)?, BigRational::one());
        }
    }
    Ok(out)
}

/// Rewrites an invariant formal sum in the basis `alpha_{rho;n}`.
///
/// Each type class must be fully present (`n^{down |rho|} / z_rho` terms)
/// with a single common coefficient; otherwise the sum is not invariant.
pub fn to_alpha(x: &FormalSum) -> Result<AlphaExpansion> {
    let mut classes: BTreeMap<CycleType, (BigRational, usize)> = BTreeMap::new();
    for (p, c) in x.terms() {
        let rho = p.cycle_type();
        match classes.get_mut(&rho) {
            Some((c0, count)) => {
                if c0 != c {
                    return Err(Error::NotInvariant(format!(
                        "coefficients {c0} and {c} both occur on type {rho}"
                    )));
                }
                *count += 1;
            }
            None => {
                classes.insert(rho, (c.clone(), 1));
            }
        }
    }
    let mut coefficients = BTreeMap::new();
    for (rho, (c, count)) in classes {
        let expected = falling_factorial(x.n(), rho.size()) / rho.z();
        if BigUint::from(count) != expected {
            return Err(Error::NotInvariant(format!(
                "type {rho} has {count} terms, a full class has {expected}"
            )));
        }
        coefficients.insert(rho, c);
    }
    Ok(AlphaExpansion { n: x.n(), coefficients })
}

/// `chi-hat^lambda` of the projection of `x` to the centre of `C[S_n]`:
/// `sum_rho c_rho n^{down |rho|} / z_rho * chi-hat^lambda_rho`.
pub fn phi_n(x: &AlphaExpansion, lambda: &Partition) -> Result<BigRational> {
    let n = lambda.size();
    if x.n != n {
        return Err(Error::DegreeTooLarge { degree: x.n, n });
    }
    let mut total = BigRational::zero();
    for (rho, c) in &x.coefficients {
        if rho.size() > n {
            continue;
        }
        let count = BigRational::new(
            BigInt::from(falling_factorial(n, rho.size())),
            BigInt::from(rho.z()),
        );
        total += c * count * normalized_character(lambda, &rho.padded(n))?;
    }
    Ok(total)
}

/// `p_nu` of the content multiset: `prod_i sum_{boxes} c^{nu_i}`.
pub fn content_eval(nu: &CycleType, lambda: &Partition) -> BigInt {
    let contents = lambda.contents_multiset();
    nu.partition()
        .parts()
        .iter()
        .map(|&k| content_power_sum(&contents, k))
        .product()
}

fn content_power_sum(contents: &[i64], k: usize) -> BigInt {
    contents.iter().map(|&c| BigInt::from(c).pow(k as u32)).sum()
}

/// `p~_k(contents) = p_k(contents) - Cat(k/2) n^{down (k/2+1)} / (k/2 + 1)`.
pub fn modified_content_power_sum(k: usize, lambda: &Partition) -> BigRational {
    let n = lambda.size();
    let p = BigRational::from_integer(content_power_sum(&lambda.contents_multiset(), k));
    if k % 2 == 1 {
        return p;
    }
    let m = k / 2;
    let corr = BigRational::new(
        BigInt::from(catalan(m) * falling_factorial(n, m + 1)),
        BigInt::from(m + 1),
    );
    p - corr
}

/// `prod_i p~_{nu_i}(contents of lambda)`.
pub fn modified_content_eval(nu: &CycleType, lambda: &Partition) -> BigRational {
    nu.partition()
        .parts()
        .iter()
        .map(|&k| modified_content_power_sum(k, lambda))
        .product()
}

/// One removal step of the modified power sum: for the corner `mu = lambda
/// minus a box of content y`, returns
/// `p~_k(lambda) - p~_k(mu) - (y^k - Cat(k/2) (n-1)^{down k/2})`, which is zero.
pub fn modified_recurrence_residual(lambda: &Partition, mu: &Partition, y: i64, k: usize) -> BigRational {
    let n = lambda.size();
    let diff = modified_content_power_sum(k, lambda) - modified_content_power_sum(k, mu);
    let cat_term = if k % 2 == 0 && n >= 1 {
        BigInt::from(catalan(k / 2) * falling_factorial(n - 1, k / 2))
    } else {
        BigInt::zero()
    };
    diff - BigRational::from_integer(BigInt::from(y).pow(k as u32) - cat_term)
}

/// Largest Kerov-type degree `|rho| + m_1(rho)` carried by the expansion.
pub fn max_kerov_degree(x: &AlphaExpansion) -> usize {
    x.coefficients.keys().map(|r| r.kerov_degree()).max().unwrap_or(0)
}

/// Coefficients as `(type, integer)` pairs when all are integral.
pub fn integral_coefficients(x: &AlphaExpansion) -> Option<Vec<(CycleType, i64)>> {
    x.coefficients
        .iter()
        .map(|(r, c)| {
            if c.is_integer() && c.abs() < BigRational::from_integer(BigInt::from(i64::MAX)) {
                c.to_integer().to_i64().map(|v| (r.clone(), v))
            } else {
                None
            }
        })
        .collect()
}
