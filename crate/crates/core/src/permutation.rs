//! Permutations of `{1, ..., r}` and their cycle types.
//!
//! Composition is right to left: `(s * t)(i) = s(t(i))`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{factorial, Partition};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    /// `images[i - 1] = sigma(i)`.
    images: Vec<usize>,
}

/// Cycle type of a permutation, including its fixed points as parts `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CycleType(pub Partition);

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (1..=r).collect(),
        }
    }

    /// From one-line notation `[sigma(1), ..., sigma(r)]`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r + 1];
        for &x in &images {
            if x == 0 || x > r || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From disjoint cycles; `degree` is raised to the largest point used.
    pub fn from_cycles(cycles: &[Vec<usize>], degree: usize) -> Result<Self> {
        let r = cycles.iter().flatten().copied().max().unwrap_or(0).max(degree);
        let mut images: Vec<usize> = (1..=r).collect();
        let mut used = vec![false; r + 1];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x == 0 || used[x] {
                    return Err(Error::InvalidPermutation(format!("cycles {cycles:?} are not disjoint")));
                }
                used[x] = true;
                images[x - 1] = c[(i + 1) % c.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition `(i, j)` in `S_degree`.
    pub fn transposition(i: usize, j: usize, degree: usize) -> Self {
        Permutation::from_cycles(&[vec![i, j]], degree).expect("distinct points")
    }

    pub fn random<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (1..=r).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// All permutations of `S_r` in lexicographic one-line order.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=r).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // Next lexicographic permutation.
            let Some(i) = (1..r).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..r).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        if i == 0 || i > self.degree() {
            i
        } else {
            self.images[i - 1]
        }
    }

    /// Largest moved point, or 0 for the identity. This is the smallest `r`
    /// with `sigma` in `S_r`.
    pub fn max_moved(&self) -> usize {
        (1..=self.degree()).rev().find(|&i| self.images[i - 1] != i).unwrap_or(0)
    }

    /// Embeds into `S_r` by adding fixed points.
    pub fn extend(&self, r: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.degree() + 1..=r.max(self.degree()));
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.max_moved() == 0
    }

    /// Disjoint cycles, each starting at its smallest point; fixed points
    /// omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree() + 1];
        let mut out = Vec::new();
        for start in 1..=self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = parts.iter().sum();
        parts.extend(std::iter::repeat_n(1, self.degree() - moved));
        CycleType(Partition::from_unsorted(parts))
    }

    pub fn support(&self) -> Vec<usize> {
        (1..=self.degree()).filter(|&i| self.apply(i) != i).collect()
    }

    /// Number of inversions, which is the Coxeter length.
    pub fn coxeter_length(&self) -> usize {
        let q = &self.images;
        (0..q.len())
            .map(|i| (i + 1..q.len()).filter(|&j| q[i] > q[j]).count())
            .sum()
    }

    /// Reduced word `[k_1, ..., k_l]` with `sigma = s_{k_1} s_{k_2} ... s_{k_l}`
    /// where `s_k = (k, k+1)`.
    ///
    /// Found by bubble sort of the one-line notation: each swap of positions
    /// `k, k+1` multiplies on the right by `s_k`, so the swaps read backwards
    /// give the word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut q = self.images.clone();
        let mut swaps = Vec::new();
        'outer: loop {
            for k in 1..q.len() {
                if q[k - 1] > q[k] {
                    q.swap(k - 1, k);
                    swaps.push(k);
                    continue 'outer;
                }
            }
            break;
        }
        swaps.reverse();
        swaps
    }

    /// Conjugation `g sigma g^{-1}`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let r = self.degree().max(g.degree());
        let (s, g) = (self.extend(r), g.extend(r));
        &(&g * &s) * &g.inverse()
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        let r = self.degree().max(rhs.degree());
        Permutation {
            images: (1..=r).map(|i| self.apply(rhs.apply(i))).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation such as `(1,2)(3,4)`; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts cycle notation `(2,4,3)`, `(1,2)(3,4)`, `id`, or one-line
    /// notation in brackets `[2,1,3]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidPermutation(format!("cannot parse {s:?}"));
        if s == "id" || s == "()" || s.is_empty() {
            return Ok(Permutation::identity(0));
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let images = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Permutation::from_images(images);
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = body.find(')').ok_or_else(bad)?;
            let cycle = body[..end]
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = body[end + 1..].trim_start();
        }
        Permutation::from_cycles(&cycles, 0)
    }
}

impl CycleType {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        Ok(CycleType(Partition::new(parts)?))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn multiplicity(&self, k: usize) -> usize {
        self.0.multiplicity(k)
    }

    /// Centralizer order `prod rho_i * prod m_i!`.
    pub fn z(&self) -> BigUint {
        let parts = self.0.parts();
        let mut z = BigUint::one();
        for &p in parts {
            z *= p;
        }
        let mut i = 0;
        while i < parts.len() {
            let run = parts[i..].iter().take_while(|&&q| q == parts[i]).count();
            z *= factorial(run);
            i += run;
        }
        z
    }

    /// Size of the conjugacy class, `r! / z`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.size()) / self.z()
    }

    /// Number of moved points, `|rho| - m_1(rho)`.
    pub fn weight(&self) -> usize {
        self.size() - self.multiplicity(1)
    }

    /// Kerov degree `|rho| + m_1(rho)`.
    pub fn kerov_degree(&self) -> usize {
        self.size() + self.multiplicity(1)
    }

    /// `|rho| + l(rho)`.
    pub fn length_degree(&self) -> usize {
        self.size() + self.0.len()
    }

    /// The parts different from 1.
    pub fn nontrivial_parts(&self) -> Vec<usize> {
        self.0.parts().iter().copied().filter(|&p| p > 1).collect()
    }

    /// Same type with every fixed point dropped.
    pub fn reduced(&self) -> CycleType {
        CycleType(Partition::from_unsorted(self.nontrivial_parts()))
    }

    /// Pads with fixed points up to size `n`.
    pub fn padded(&self, n: usize) -> CycleType {
        let mut parts = self.0.parts().to_vec();
        parts.extend(std::iter::repeat_n(1, n.saturating_sub(self.size())));
        CycleType(Partition::from_unsorted(parts))
    }

    /// A permutation of this type, with cycles on consecutive points.
    pub fn representative(&self) -> Permutation {
        let mut cycles = Vec::new();
        let mut next = 1;
        for &p in self.0.parts() {
            cycles.push((next..next + p).collect());
            next += p;
        }
        Permutation::from_cycles(&cycles, self.size()).expect("disjoint")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(CycleType(s.parse()?))
    }
}
