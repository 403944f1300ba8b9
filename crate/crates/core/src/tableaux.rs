//! Standard Young tableaux in last-letter order, and the splitting of a
//! tableau into a straight part and a skew part.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// A standard filling of a partition. `positions[k - 1]` is the box
/// `(column, row)` holding `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    positions: Vec<(usize, usize)>,
}

/// A standard filling of the skew shape `outer / inner` with `1..=m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SkewTableau {
    outer: Partition,
    inner: Partition,
    positions: Vec<(usize, usize)>,
}

impl StandardTableau {
    /// Builds a tableau from box positions, checking standardness.
    pub fn from_positions(shape: Partition, positions: Vec<(usize, usize)>) -> Result<Self> {
        check_filling(&shape, &Partition::empty(), &positions)?;
        Ok(StandardTableau { shape, positions })
    }

    pub fn empty() -> Self {
        StandardTableau {
            shape: Partition::empty(),
            positions: Vec::new(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    /// Box `(column, row)` containing `k`.
    pub fn position(&self, k: usize) -> Result<(usize, usize)> {
        if k == 0 || k > self.size() {
            return Err(out_of_range("k", k, self.size()));
        }
        Ok(self.positions[k - 1])
    }

    /// Row index of `k`; used as the last-letter sort key.
    pub fn row_of(&self, k: usize) -> usize {
        self.positions[k - 1].1
    }

    pub fn content_of(&self, k: usize) -> Result<i64> {
        let (a, b) = self.position(k)?;
        Ok(a as i64 - b as i64)
    }

    /// Signed distance `c_k - c_{k+1}`. Never zero.
    pub fn axial_distance(&self, k: usize) -> Result<i64> {
        if k == 0 || k >= self.size() {
            return Err(out_of_range("k", k, self.size().saturating_sub(1)));
        }
        Ok(self.content_of(k)? - self.content_of(k + 1)?)
    }

    /// Exchanges `k` and `k + 1` when they are in different rows and
    /// columns; `None` when the result would not be standard.
    pub fn adjacent_swap(&self, k: usize) -> Option<StandardTableau> {
        if k == 0 || k >= self.size() {
            return None;
        }
        let (p, q) = (self.positions[k - 1], self.positions[k]);
        if p.0 == q.0 || p.1 == q.1 {
            return None;
        }
        let mut positions = self.positions.clone();
        positions.swap(k - 1, k);
        Some(StandardTableau {
            shape: self.shape.clone(),
            positions,
        })
    }

    /// Entries as rows of numbers.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.shape.len()];
        for (i, &(_, b)) in self.positions.iter().enumerate() {
            rows[b - 1].push(i + 1);
        }
        rows
    }

    /// Splits into the entries `<= r` (a straight tableau of some shape
    /// `nu` of size `r`) and the rest, renumbered from 1, on `shape / nu`.
    pub fn split(&self, r: usize) -> Result<(StandardTableau, SkewTableau)> {
        if r > self.size() {
            return Err(out_of_range("r", r, self.size()));
        }
        let head = &self.positions[..r];
        let mut rows = vec![0usize; self.shape.len()];
        for &(_, b) in head {
            rows[b - 1] += 1;
        }
        let nu = Partition::from_unsorted(rows);
        let u = StandardTableau {
            shape: nu.clone(),
            positions: head.to_vec(),
        };
        let v = SkewTableau {
            outer: self.shape.clone(),
            inner: nu,
            positions: self.positions[r..].to_vec(),
        };
        Ok((u, v))
    }

    /// Inverse of [`StandardTableau::split`].
    pub fn join(u: &StandardTableau, v: &SkewTableau) -> Result<StandardTableau> {
        if u.shape != v.inner {
            return Err(Error::InvalidTableau(format!(
                "inner shape {} does not match {}",
                v.inner, u.shape
            )));
        }
        let mut positions = u.positions.clone();
        positions.extend_from_slice(&v.positions);
        StandardTableau::from_positions(v.outer.clone(), positions)
    }
}

impl SkewTableau {
    pub fn new(outer: Partition, inner: Partition, positions: Vec<(usize, usize)>) -> Result<Self> {
        check_filling(&outer, &inner, &positions)?;
        Ok(SkewTableau {
            outer,
            inner,
            positions,
        })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }
}

fn out_of_range(what: &'static str, value: usize, max: usize) -> Error {
    Error::OutOfRange {
        what,
        value: value.to_string(),
        range: format!("1..={max}"),
    }
}

/// Checks that `positions` fills `outer / inner` exactly once, increasing
/// along rows and columns.
fn check_filling(outer: &Partition, inner: &Partition, positions: &[(usize, usize)]) -> Result<()> {
    if !outer.contains(inner) || positions.len() != outer.size() - inner.size() {
        return Err(Error::InvalidTableau(format!(
            "{} entries cannot fill {outer}/{inner}",
            positions.len()
        )));
    }
    let mut filled: Vec<usize> = (1..=outer.len()).map(|b| inner.row_len(b)).collect();
    for (i, &(a, b)) in positions.iter().enumerate() {
        // Entries are placed in order, so standardness means each new box
        // extends its row and sits under an already-filled box.
        let ok = b >= 1
            && b <= outer.len()
            && a == filled[b - 1] + 1
            && a <= outer.row_len(b)
            && (b == 1 || filled[b - 2] >= a);
        if !ok {
            return Err(Error::InvalidTableau(format!(
                "entry {} at ({a},{b}) breaks standardness",
                i + 1
            )));
        }
        filled[b - 1] += 1;
    }
    Ok(())
}

/// All standard tableaux of shape `lambda` in last-letter order: the tableau
/// whose largest differing entry sits in the lower row comes first.
///
/// Generated by removing outer corners bottom-up, so the tableaux with `n`
/// in the corner of content `y_1` form the first block, and so on.
pub fn enumerate_last_letter(lambda: &Partition) -> Vec<StandardTableau> {
    if lambda.is_empty() {
        return vec![StandardTableau::empty()];
    }
    let n = lambda.size();
    let mut out = Vec::new();
    for (mu, _) in lambda.subpartitions() {
        let b = (1..=lambda.len())
            .find(|&b| lambda.row_len(b) != mu.row_len(b))
            .expect("subpartition differs in one row");
        let corner = (lambda.row_len(b), b);
        for t in enumerate_last_letter(&mu) {
            let mut positions = t.positions;
            positions.push(corner);
            debug_assert_eq!(positions.len(), n);
            out.push(StandardTableau {
                shape: lambda.clone(),
                positions,
            });
        }
    }
    out
}

/// Last-letter comparison of two tableaux of the same shape.
pub fn last_letter_cmp(t: &StandardTableau, s: &StandardTableau) -> Ordering {
    for k in (1..=t.size()).rev() {
        match t.row_of(k).cmp(&s.row_of(k)) {
            Ordering::Equal => continue,
            // Lower row (larger index) first.
            other => return other.reverse(),
        }
    }
    Ordering::Equal
}

impl fmt::Display for StandardTableau {
    /// Rows separated by `/`; entries run together unless some entry has
    /// two digits, in which case they are comma-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.size() >= 10 { "," } else { "" };
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", rows.join("/"))
    }
}

impl fmt::Debug for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for StandardTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(StandardTableau::empty());
        }
        let commas = s.contains(',');
        let rows: Vec<Vec<usize>> = s
            .split('/')
            .map(|row| {
                let row = row.trim();
                let entries: Option<Vec<usize>> = if commas {
                    row.split(',').map(|t| t.trim().parse().ok()).collect()
                } else {
                    row.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
                };
                entries.ok_or_else(|| Error::InvalidTableau(format!("bad row {row:?}")))
            })
            .collect::<Result<_>>()?;
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.size();
        let mut positions = vec![(0, 0); n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                if k == 0 || k > n || positions[k - 1] != (0, 0) {
                    return Err(Error::InvalidTableau(format!("entry {k} invalid in {s:?}")));
                }
                positions[k - 1] = (j + 1, i + 1);
            }
        }
        StandardTableau::from_positions(shape, positions)
    }
}
