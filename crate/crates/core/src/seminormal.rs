//! Young's seminormal representation and the trace and sum functionals
//! built on it.
//!
//! The generator `s_k = (k, k+1)` acts on the tableau basis with diagonal
//! entry `r_T = -1 / d_k(T)` and an off-diagonal entry linking `T` to
//! `s_k T`. Two normalizations of the off-diagonal entry are provided:
//!
//! * [`SeminormalForm::Orthogonal`]: `sqrt(1 - r_T^2)`, giving orthogonal
//!   matrices;
//! * [`SeminormalForm::Rational`]: `1 - r_T`, giving rational matrices.
//!
//! The two are conjugate by a diagonal matrix, so diagonals (hence partial
//! traces and characters) agree, while sums of entries differ.
//!
//! Because the tableaux are in last-letter order, for `sigma` in `S_r` with
//! `r < n` the matrix of `sigma` is block diagonal along the subpartitions
//! `mu_1, ..., mu_d` of `lambda`, each block being the matrix for `mu_j`.
//! [`partial_trace`] and [`partial_sum`] use this to descend to one block
//! per level, so they never build a matrix larger than the base case and
//! work for dimensions far beyond memory.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::normalized_character_f64;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, factorial, Partition};
use crate::permutation::{CycleType, Permutation};
use crate::tableaux::{enumerate_last_letter, StandardTableau};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeminormalForm {
    #[default]
    Orthogonal,
    Rational,
}

/// Largest dimension for which a dense matrix is built.
pub const DEFAULT_MATRIX_CAP: usize = 20_000;

/// Largest dimension for which vector-based sums are evaluated directly.
pub const VECTOR_CAP: usize = 2_000_000;

/// Below this dimension the block recursion stops and works explicitly.
const BASE_DIM: usize = 64;

/// Tableaux of one shape with, for every generator, the axial distances
/// and the index of the swapped tableau.
pub struct ShapeTables {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    /// `dist[k - 1][i] = d_k(T_i)`.
    dist: Vec<Vec<i64>>,
    /// `partner[k - 1][i]` is the index of `s_k T_i`, if standard.
    partner: Vec<Vec<Option<usize>>>,
}

impl ShapeTables {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = enumerate_last_letter(shape);
        let index: HashMap<&[(usize, usize)], usize> = tableaux
            .iter()
            .enumerate()
            .map(|(i, t)| (t.positions(), i))
            .collect();
        let n = shape.size();
        let mut dist = Vec::with_capacity(n.saturating_sub(1));
        let mut partner = Vec::with_capacity(n.saturating_sub(1));
        for k in 1..n {
            dist.push(tableaux.iter().map(|t| t.axial_distance(k).expect("k < n")).collect());
            partner.push(
                tableaux
                    .iter()
                    .map(|t| t.adjacent_swap(k).map(|s| index[s.positions()]))
                    .collect(),
            );
        }
        ShapeTables {
            shape: shape.clone(),
            tableaux,
            dist,
            partner,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    /// Diagonal entry at `T_i` and the entry `(T_i, s_k T_i)` of `s_k`.
    fn coeffs(&self, k: usize, i: usize, form: SeminormalForm) -> (f64, f64) {
        let r = -1.0 / self.dist[k - 1][i] as f64;
        let off = match form {
            SeminormalForm::Orthogonal => (1.0 - r * r).sqrt(),
            SeminormalForm::Rational => 1.0 - r,
        };
        (r, off)
    }

    fn exact_coeffs(&self, k: usize, i: usize) -> (BigRational, BigRational) {
        let r = BigRational::new((-1).into(), self.dist[k - 1][i].into());
        let off = BigRational::one() - &r;
        (r, off)
    }

    /// `v <- S_k v`.
    pub fn apply_left(&self, k: usize, v: &mut [f64], form: SeminormalForm) {
        for i in 0..v.len() {
            match self.partner[k - 1][i] {
                None => v[i] *= self.coeffs(k, i, form).0,
                Some(j) if i < j => {
                    let (ri, oi) = self.coeffs(k, i, form);
                    let (rj, oj) = self.coeffs(k, j, form);
                    let (a, b) = (v[i], v[j]);
                    v[i] = ri * a + oi * b;
                    v[j] = oj * a + rj * b;
                }
                Some(_) => {}
            }
        }
    }

    /// `v^T <- v^T S_k`.
    pub fn apply_right(&self, k: usize, v: &mut [f64], form: SeminormalForm) {
        for i in 0..v.len() {
            match self.partner[k - 1][i] {
                None => v[i] *= self.coeffs(k, i, form).0,
                Some(j) if i < j => {
                    let (ri, oi) = self.coeffs(k, i, form);
                    let (rj, oj) = self.coeffs(k, j, form);
                    let (a, b) = (v[i], v[j]);
                    v[i] = a * ri + b * oj;
                    v[j] = a * oi + b * rj;
                }
                Some(_) => {}
            }
        }
    }

    /// `v <- S_k v` in the rational form, exactly.
    pub fn apply_left_exact(&self, k: usize, v: &mut [BigRational]) {
        for i in 0..v.len() {
            match self.partner[k - 1][i] {
                None => v[i] *= self.exact_coeffs(k, i).0,
                Some(j) if i < j => {
                    let (ri, oi) = self.exact_coeffs(k, i);
                    let (rj, oj) = self.exact_coeffs(k, j);
                    let a = std::mem::take(&mut v[i]);
                    let b = std::mem::take(&mut v[j]);
                    v[i] = &ri * &a + &oi * &b;
                    v[j] = oj * a + rj * b;
                }
                Some(_) => {}
            }
        }
    }

    /// `pi(sigma) v`.
    pub fn act(&self, sigma: &Permutation, v: &mut [f64], form: SeminormalForm) {
        for &k in sigma.reduced_word().iter().rev() {
            self.apply_left(k, v, form);
        }
    }

    /// `v^T pi(sigma)`.
    pub fn act_right(&self, sigma: &Permutation, v: &mut [f64], form: SeminormalForm) {
        for &k in &sigma.reduced_word() {
            self.apply_right(k, v, form);
        }
    }
}

/// Dense square matrix indexed by last-letter ranks (0-based here).
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    shape: Partition,
    dim: usize,
    data: Vec<f64>,
}

impl RepMatrix {
    pub fn identity(shape: &Partition, dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        RepMatrix {
            shape: shape.clone(),
            dim,
            data,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry in row `i`, column `j`, both 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn transpose(&self) -> RepMatrix {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j];
            }
        }
        RepMatrix {
            shape: self.shape.clone(),
            dim: d,
            data,
        }
    }

    pub fn mul(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for l in 0..d {
                let a = self.data[i * d + l];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[l * d + j];
                }
            }
        }
        RepMatrix {
            shape: self.shape.clone(),
            dim: d,
            data,
        }
    }

    pub fn max_abs_diff(&self, other: &RepMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// One row per line, entries in scientific notation with 17
    /// significant digits, separated by single spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:.16e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

fn check_degree(lambda: &Partition, sigma: &Permutation) -> Result<()> {
    if sigma.max_moved() > lambda.size() {
        return Err(Error::DegreeTooLarge {
            degree: sigma.max_moved(),
            n: lambda.size(),
        });
    }
    Ok(())
}

fn check_cap(lambda: &Partition, cap: usize) -> Result<usize> {
    let dim = lambda.dimension();
    match dim.to_usize() {
        Some(d) if d <= cap => Ok(d),
        _ => Err(Error::MatrixTooLarge {
            dim: dim.to_string(),
            cap,
        }),
    }
}

fn check_unit(what: &'static str, u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::OutOfRange {
            what,
            value: u.to_string(),
            range: "[0, 1]".into(),
        });
    }
    Ok(())
}

/// The matrix of `(k, k+1)` on `lambda`.
pub fn adjacent_matrix(lambda: &Partition, k: usize, form: SeminormalForm) -> Result<RepMatrix> {
    if k == 0 || k >= lambda.size() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k.to_string(),
            range: format!("1..={}", lambda.size().saturating_sub(1)),
        });
    }
    rep_matrix_in(lambda, &Permutation::transposition(k, k + 1, k + 1), form, DEFAULT_MATRIX_CAP)
}

/// `pi^lambda(sigma)` in the orthogonal form.
pub fn rep_matrix(lambda: &Partition, sigma: &Permutation) -> Result<RepMatrix> {
    rep_matrix_in(lambda, sigma, SeminormalForm::Orthogonal, DEFAULT_MATRIX_CAP)
}

/// `pi^lambda(sigma)` as the product of generator matrices along the
/// bubble-sort reduced word of `sigma`.
pub fn rep_matrix_in(
    lambda: &Partition,
    sigma: &Permutation,
    form: SeminormalForm,
    cap: usize,
) -> Result<RepMatrix> {
    check_degree(lambda, sigma)?;
    let dim = check_cap(lambda, cap)?;
    let tables = ShapeTables::new(lambda);
    let mut m = RepMatrix::identity(lambda, dim);
    let word = sigma.reduced_word();
    for i in 0..dim {
        let row = &mut m.data[i * dim..(i + 1) * dim];
        for &k in &word {
            tables.apply_right(k, row, form);
        }
    }
    Ok(m)
}

/// Exact total sum `sum_{i,j} pi(sigma)_{ij} / dim` in the rational form.
pub fn total_sum_exact(lambda: &Partition, sigma: &Permutation) -> Result<BigRational> {
    check_degree(lambda, sigma)?;
    let tables = ShapeTables::new(lambda);
    let mut v = vec![BigRational::one(); tables.dim()];
    for &k in sigma.reduced_word().iter().rev() {
        tables.apply_left_exact(k, &mut v);
    }
    let dim = BigRational::from_integer(tables.dim().into());
    Ok(v.into_iter().fold(BigRational::zero(), |a, b| a + b) / dim)
}

/// `floor(u * dim)` computed exactly from the binary value of `u`.
pub fn index_bound(u: &BigRational, dim: &BigUint) -> BigUint {
    let scaled = u * BigRational::from_integer(dim.clone().into());
    scaled.floor().to_integer().to_biguint().unwrap_or_default()
}

/// Exact rational value of a float in `[0, 1]`.
pub fn exact_unit(u: f64) -> BigRational {
    BigRational::from_float(u).expect("finite")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Trace,
    Sum,
}

/// `TS^mu(sigma) = sum_rho c_rho chi-hat^mu_rho`, valid for every `mu` of
/// size at least `r`, with `c_rho = |class rho| * E_r[chi-hat^nu_rho TS^nu(sigma)]`
/// the Plancherel average over `nu` of size `r`.
pub struct TotalSumExpansion {
    r: usize,
    form: SeminormalForm,
    sigma: Permutation,
    coeffs: Vec<(CycleType, f64)>,
}

impl TotalSumExpansion {
    pub fn new(sigma: &Permutation, form: SeminormalForm) -> Self {
        let r = sigma.max_moved().max(1);
        let rfact = factorial(r).to_f64().expect("small r");
        let shapes: Vec<(Partition, f64, f64)> = enumerate_partitions(r)
            .map(|nu| {
                let w = nu.dimension().to_f64().unwrap().powi(2) / rfact;
                let ts = total_sum_explicit(&ShapeTables::new(&nu), sigma, form);
                (nu, w, ts)
            })
            .collect();
        let coeffs = enumerate_partitions(r)
            .map(CycleType)
            .map(|rho| {
                let class = rho.class_size().to_f64().unwrap();
                let avg: f64 = shapes
                    .iter()
                    .map(|(nu, w, ts)| w * ts * normalized_character_f64(nu, &rho).unwrap())
                    .sum();
                (rho, class * avg)
            })
            .collect();
        TotalSumExpansion {
            r,
            form,
            sigma: sigma.clone(),
            coeffs,
        }
    }

    /// Degree `r` of the symmetric group the expansion was built in.
    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn form(&self) -> SeminormalForm {
        self.form
    }

    pub fn coefficients(&self) -> &[(CycleType, f64)] {
        &self.coeffs
    }

    pub fn evaluate(&self, mu: &Partition) -> f64 {
        self.coeffs
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(rho, c)| c * normalized_character_f64(mu, rho).unwrap())
            .sum()
    }
}

fn total_sum_explicit(tables: &ShapeTables, sigma: &Permutation, form: SeminormalForm) -> f64 {
    let mut v = vec![1.0; tables.dim()];
    tables.act(sigma, &mut v, form);
    v.iter().sum::<f64>() / tables.dim() as f64
}

/// Normalized sum over the rectangle `i < k1, j < k2` (0-based ranks).
fn rect_sum_explicit(
    tables: &ShapeTables,
    sigma: &Permutation,
    form: SeminormalForm,
    k1: usize,
    k2: usize,
) -> f64 {
    let mut v = vec![0.0; tables.dim()];
    v[..k2].iter_mut().for_each(|x| *x = 1.0);
    tables.act(sigma, &mut v, form);
    v[..k1].iter().sum::<f64>() / tables.dim() as f64
}

fn prefix_trace_explicit(tables: &ShapeTables, sigma: &Permutation, k: usize) -> f64 {
    let mut total = 0.0;
    let mut e = vec![0.0; tables.dim()];
    for i in 0..k {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[i] = 1.0;
        tables.act(sigma, &mut e, SeminormalForm::Orthogonal);
        total += e[i];
    }
    total / tables.dim() as f64
}

/// Evaluates prefix functionals by descending through subpartition blocks.
struct Evaluator<'a> {
    sigma: &'a Permutation,
    rho: CycleType,
    r: usize,
    form: SeminormalForm,
    kind: Kind,
    expansion: Option<TotalSumExpansion>,
}

impl<'a> Evaluator<'a> {
    fn new(sigma: &'a Permutation, form: SeminormalForm, kind: Kind) -> Self {
        let expansion = (kind == Kind::Sum).then(|| TotalSumExpansion::new(sigma, form));
        Evaluator {
            sigma,
            rho: sigma.cycle_type().reduced(),
            r: sigma.max_moved().max(1),
            form,
            kind,
            expansion,
        }
    }

    /// The full functional: `chi-hat^mu(sigma)` or `TS^mu(sigma)`.
    fn full(&self, mu: &Partition) -> f64 {
        match self.kind {
            Kind::Trace => normalized_character_f64(mu, &self.rho).expect("degree checked"),
            Kind::Sum => {
                if mu.size() <= self.r {
                    total_sum_explicit(&ShapeTables::new(mu), self.sigma, self.form)
                } else {
                    self.expansion.as_ref().expect("sum kind").evaluate(mu)
                }
            }
        }
    }

    /// The functional restricted to the first `k` indices, normalized by
    /// `dim lambda`.
    fn prefix(&self, lambda: &Partition, k: &BigUint) -> f64 {
        let dim = lambda.dimension();
        if k.is_zero() {
            return 0.0;
        }
        if *k >= dim {
            return self.full(lambda);
        }
        let small = dim.to_usize().is_some_and(|d| d <= BASE_DIM);
        if lambda.size() <= self.r || small {
            let tables = ShapeTables::new(lambda);
            let k = k.to_usize().expect("k < dim");
            return match self.kind {
                Kind::Trace => prefix_trace_explicit(&tables, self.sigma, k),
                Kind::Sum => rect_sum_explicit(&tables, self.sigma, self.form, k, k),
            };
        }
        let mut cum = BigUint::zero();
        let mut total = 0.0;
        for (mu, _) in lambda.subpartitions() {
            let d_mu = mu.dimension();
            let w = lambda.dimension_ratio_f64(&mu);
            if &cum + &d_mu <= *k {
                total += w * self.full(&mu);
                cum += d_mu;
            } else {
                total += w * self.prefix(&mu, &(k - &cum));
                break;
            }
        }
        total
    }
}

/// `PT_u^lambda(sigma) = sum_{i <= u dim} pi(sigma)_{ii} / dim`.
///
/// The index set is `1..=floor(u * dim lambda)`, inclusive at an exact
/// integer boundary. Independent of the normalization form.
pub fn partial_trace(lambda: &Partition, sigma: &Permutation, u: f64) -> Result<f64> {
    check_unit("u", u)?;
    partial_trace_exact_u(lambda, sigma, &exact_unit(u))
}

pub fn partial_trace_exact_u(lambda: &Partition, sigma: &Permutation, u: &BigRational) -> Result<f64> {
    check_degree(lambda, sigma)?;
    let ev = Evaluator::new(sigma, SeminormalForm::Orthogonal, Kind::Trace);
    Ok(ev.prefix(lambda, &index_bound(u, &lambda.dimension())))
}

/// `TS^lambda(sigma)`, the sum of all entries over `dim lambda`.
pub fn total_sum(lambda: &Partition, sigma: &Permutation, form: SeminormalForm) -> Result<f64> {
    check_degree(lambda, sigma)?;
    let ev = Evaluator::new(sigma, form, Kind::Sum);
    Ok(ev.prefix(lambda, &lambda.dimension()))
}

/// `PS_u^lambda(sigma)`, the sum over the top-left `floor(u dim)` square.
pub fn partial_sum(lambda: &Partition, sigma: &Permutation, u: f64, form: SeminormalForm) -> Result<f64> {
    check_unit("u", u)?;
    partial_sum_exact_u(lambda, sigma, &exact_unit(u), form)
}

pub fn partial_sum_exact_u(
    lambda: &Partition,
    sigma: &Permutation,
    u: &BigRational,
    form: SeminormalForm,
) -> Result<f64> {
    check_degree(lambda, sigma)?;
    let ev = Evaluator::new(sigma, form, Kind::Sum);
    Ok(ev.prefix(lambda, &index_bound(u, &lambda.dimension())))
}

/// `PS_{u1,u2}^lambda(sigma)`: rows up to `u1 dim`, columns up to `u2 dim`.
/// Evaluated directly on vectors, so `dim lambda` must be below
/// [`VECTOR_CAP`].
pub fn partial_sum_rect(
    lambda: &Partition,
    sigma: &Permutation,
    u1: f64,
    u2: f64,
    form: SeminormalForm,
) -> Result<f64> {
    check_unit("u1", u1)?;
    check_unit("u2", u2)?;
    check_degree(lambda, sigma)?;
    let dim = check_cap(lambda, VECTOR_CAP)?;
    let big = BigUint::from(dim);
    let k1 = index_bound(&exact_unit(u1), &big).to_usize().unwrap();
    let k2 = index_bound(&exact_unit(u2), &big).to_usize().unwrap();
    Ok(rect_sum_explicit(&ShapeTables::new(lambda), sigma, form, k1, k2))
}

/// Partial trace computed from the dense matrix; a test oracle for the
/// block recursion.
pub fn partial_trace_dense(lambda: &Partition, sigma: &Permutation, u: f64) -> Result<f64> {
    check_unit("u", u)?;
    let m = rep_matrix(lambda, sigma)?;
    let k = index_bound(&exact_unit(u), &BigUint::from(m.dim())).to_usize().unwrap();
    Ok((0..k).map(|i| m.get(i, i)).sum::<f64>() / m.dim() as f64)
}

/// Partial sum computed from the dense matrix; a test oracle.
pub fn partial_sum_dense(lambda: &Partition, sigma: &Permutation, u: f64, form: SeminormalForm) -> Result<f64> {
    check_unit("u", u)?;
    let m = rep_matrix_in(lambda, sigma, form, DEFAULT_MATRIX_CAP)?;
    let k = index_bound(&exact_unit(u), &BigUint::from(m.dim())).to_usize().unwrap();
    let mut s = 0.0;
    for i in 0..k {
        s += m.row(i)[..k].iter().sum::<f64>();
    }
    Ok(s / m.dim() as f64)
}

/// One subpartition block of a decomposition.
#[derive(Clone, Debug)]
pub struct MainTerm {
    pub shape: Partition,
    /// Content `y_j` of the removed corner.
    pub content: i64,
    /// `dim mu_j / dim lambda`.
    pub weight: BigRational,
    /// `chi-hat^{mu_j}(sigma)` or `TS^{mu_j}(sigma)`.
    pub value: f64,
}

/// Splitting of `PT_u` (or `PS_u`) into full blocks before the quantile
/// block and a rescaled partial functional on the quantile block.
#[derive(Clone, Debug)]
pub struct TraceDecomposition {
    pub main_terms: Vec<MainTerm>,
    /// 1-based index of the block containing the cut.
    pub bar_j: usize,
    pub bar_u: BigRational,
    pub remainder_shape: Partition,
    pub remainder_weight: BigRational,
    /// `weight * PT^{mu_bar_j}_{bar_u}(sigma)`, already weighted.
    pub remainder_value: f64,
}

impl TraceDecomposition {
    /// `sum_{j < bar_j} weight_j * value_j`.
    pub fn main_term(&self) -> f64 {
        self.main_terms
            .iter()
            .map(|t| t.weight.to_f64().unwrap() * t.value)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.main_term() + self.remainder_value
    }

    pub fn bar_u_f64(&self) -> f64 {
        self.bar_u.to_f64().unwrap()
    }
}

fn decompose(
    lambda: &Partition,
    sigma: &Permutation,
    u: &BigRational,
    form: SeminormalForm,
    kind: Kind,
) -> Result<TraceDecomposition> {
    if u < &BigRational::zero() || u > &BigRational::one() {
        return Err(Error::OutOfRange {
            what: "u",
            value: u.to_string(),
            range: "[0, 1]".into(),
        });
    }
    if sigma.max_moved() >= lambda.size() {
        return Err(Error::DegreeTooLarge {
            degree: sigma.max_moved(),
            n: lambda.size().saturating_sub(1),
        });
    }
    let ev = Evaluator::new(sigma, form, kind);
    let dim = BigRational::from_integer(lambda.dimension().into());
    let subs = lambda.subpartitions();
    let target = u * &dim;
    let mut main_terms = Vec::new();
    let mut cum = BigRational::zero();
    let last = subs.len() - 1;
    for (j, (mu, y)) in subs.iter().enumerate() {
        let d_mu = BigRational::from_integer(mu.dimension().into());
        let weight = &d_mu / &dim;
        let full_block = &cum + &d_mu <= target;
        if full_block && !(j == last && u.is_one()) {
            main_terms.push(MainTerm {
                shape: mu.clone(),
                content: *y,
                weight,
                value: ev.full(mu),
            });
            cum += d_mu;
            continue;
        }
        if u.is_one() {
            // The quantile would sit past the last block; keep every block
            // in the main term and leave nothing over.
            main_terms.push(MainTerm {
                shape: mu.clone(),
                content: *y,
                weight: weight.clone(),
                value: ev.full(mu),
            });
            return Ok(TraceDecomposition {
                main_terms,
                bar_j: subs.len(),
                bar_u: BigRational::one(),
                remainder_shape: mu.clone(),
                remainder_weight: weight,
                remainder_value: 0.0,
            });
        }
        let bar_u = (&target - &cum) / &d_mu;
        let inner = ev.prefix(mu, &index_bound(&bar_u, &mu.dimension()));
        let remainder_value = weight.to_f64().unwrap() * inner;
        return Ok(TraceDecomposition {
            main_terms,
            bar_j: j + 1,
            bar_u,
            remainder_shape: mu.clone(),
            remainder_weight: weight,
            remainder_value,
        });
    }
    unreachable!("u < 1 leaves the cut inside some block")
}

pub fn decompose_partial_trace(lambda: &Partition, sigma: &Permutation, u: &BigRational) -> Result<TraceDecomposition> {
    decompose(lambda, sigma, u, SeminormalForm::Orthogonal, Kind::Trace)
}

pub fn decompose_partial_sum(
    lambda: &Partition,
    sigma: &Permutation,
    u: &BigRational,
    form: SeminormalForm,
) -> Result<TraceDecomposition> {
    decompose(lambda, sigma, u, form, Kind::Sum)
}

/// One level of an iterated decomposition.
#[derive(Clone, Debug)]
pub struct DecompositionLevel {
    pub shape: Partition,
    pub u: BigRational,
    /// `dim shape / dim lambda`.
    pub weight: BigRational,
    /// Main term `MT^{shape}_u(sigma)`.
    pub main_term: f64,
}

#[derive(Clone, Debug)]
pub struct IteratedDecomposition {
    /// Levels from `lambda` downwards.
    pub levels: Vec<DecompositionLevel>,
    pub terminal_shape: Partition,
    pub terminal_u: BigRational,
    pub terminal_weight: BigRational,
    /// `PT^{terminal}_{terminal_u}(sigma)`, unweighted.
    pub terminal_value: f64,
}

impl IteratedDecomposition {
    pub fn total(&self) -> f64 {
        let main: f64 = self
            .levels
            .iter()
            .map(|l| l.weight.to_f64().unwrap() * l.main_term)
            .sum();
        main + self.terminal_weight.to_f64().unwrap() * self.terminal_value
    }
}

/// Applies the partial-trace decomposition `s` times, each time to the
/// remainder block.
pub fn iterated_decomposition(
    lambda: &Partition,
    sigma: &Permutation,
    u: &BigRational,
    s: usize,
) -> Result<IteratedDecomposition> {
    if s > 0 && sigma.max_moved().max(1) + s > lambda.size() {
        return Err(Error::OutOfRange {
            what: "s",
            value: s.to_string(),
            range: format!("0..={}", lambda.size().saturating_sub(sigma.max_moved().max(1))),
        });
    }
    let mut levels = Vec::with_capacity(s);
    let mut shape = lambda.clone();
    let mut cur_u = u.clone();
    let mut weight = BigRational::one();
    for _ in 0..s {
        let dec = decompose_partial_trace(&shape, sigma, &cur_u)?;
        levels.push(DecompositionLevel {
            shape: shape.clone(),
            u: cur_u.clone(),
            weight: weight.clone(),
            main_term: dec.main_term(),
        });
        if cur_u.is_one() {
            return Ok(IteratedDecomposition {
                levels,
                terminal_shape: dec.remainder_shape,
                terminal_u: BigRational::zero(),
                terminal_weight: BigRational::zero(),
                terminal_value: 0.0,
            });
        }
        weight *= &dec.remainder_weight;
        shape = dec.remainder_shape;
        cur_u = dec.bar_u;
    }
    let terminal_value = partial_trace_exact_u(&shape, sigma, &cur_u)?;
    Ok(IteratedDecomposition {
        levels,
        terminal_shape: shape,
        terminal_u: cur_u,
        terminal_weight: weight,
        terminal_value,
    })
}

/// Checks entrywise that `pi^lambda(sigma)` vanishes between tableaux whose
/// parts above `r` differ, and equals `pi^nu(sigma)` on the straight parts
/// otherwise.
pub fn block_restriction_check(
    lambda: &Partition,
    sigma: &Permutation,
    r: usize,
    form: SeminormalForm,
) -> Result<bool> {
    if sigma.max_moved() > r || r > lambda.size() {
        return Err(Error::DegreeTooLarge {
            degree: sigma.max_moved(),
            n: r,
        });
    }
    let big = rep_matrix_in(lambda, sigma, form, DEFAULT_MATRIX_CAP)?;
    let tabs = enumerate_last_letter(lambda);
    let splits: Vec<_> = tabs.iter().map(|t| t.split(r).expect("r <= n")).collect();
    let mut small: HashMap<Partition, (RepMatrix, HashMap<StandardTableau, usize>)> = HashMap::new();
    for (u, _) in &splits {
        let nu = u.shape().clone();
        small.entry(nu.clone()).or_insert_with(|| {
            let m = rep_matrix_in(&nu, sigma, form, DEFAULT_MATRIX_CAP).expect("nu within cap");
            let index = enumerate_last_letter(&nu)
                .into_iter()
                .enumerate()
                .map(|(i, t)| (t, i))
                .collect();
            (m, index)
        });
    }
    for (i, (u1, v1)) in splits.iter().enumerate() {
        for (j, (u2, v2)) in splits.iter().enumerate() {
            let entry = big.get(i, j);
            if v1 != v2 {
                if entry != 0.0 {
                    return Ok(false);
                }
                continue;
            }
            let (m, index) = &small[u1.shape()];
            let expect = m.get(index[u1], index[u2]);
            if (entry - expect).abs() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
