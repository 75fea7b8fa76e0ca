//! Young diagrams, box operations and the two counting formulas.
//!
//! A [`Partition`] `μ ⊢ p` labels an irrep of the symmetric group `S_p`.
//! Its hook-length formula gives the irrep dimension `d_μ`, and its
//! hook-content formula gives the multiplicity `m_μ` of that irrep inside
//! `(C^d)^{⊗p}`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A Young diagram: a non-increasing list of positive row lengths.
///
/// The empty partition (weight 0) is a valid value; it is what
/// [`Partition::remove_box`] returns for the single box `(1)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, validating that the parts are positive and non-increasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let valid = parts.iter().all(|&x| x > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if valid {
            Ok(Self { parts })
        } else {
            Err(Error::InvalidPartition(parts))
        }
    }

    /// The empty partition of weight zero.
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// The one-row diagram `(p)` (symmetric irrep).
    pub fn row(p: usize) -> Self {
        if p == 0 {
            Self::empty()
        } else {
            Self { parts: vec![p] }
        }
    }

    /// The one-column diagram `(1^p)` (antisymmetric irrep).
    pub fn column(p: usize) -> Self {
        Self { parts: vec![1; p] }
    }

    /// Row lengths.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes `p`.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.parts.len()
    }

    /// Whether this is the empty diagram.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of column `j` (0-based).
    fn column_len(&self, j: usize) -> usize {
        self.parts.iter().take_while(|&&r| r > j).count()
    }

    /// Cells `(row, col)` of the diagram, 0-based, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
    }

    /// Hook length of cell `(i, j)`.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        (self.parts[i] - j) + (self.column_len(j) - i) - 1
    }

    /// All diagrams obtained by adding one box, ordered top row first
    /// (which coincides with the canonical lexicographically decreasing order).
    pub fn add_box(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.parts.len() {
            let addable = i == self.parts.len() || i == 0 || self.parts[i - 1] > self.parts[i];
            if addable {
                let mut parts = self.parts.clone();
                if i == parts.len() {
                    parts.push(1);
                } else {
                    parts[i] += 1;
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// All diagrams obtained by removing one corner box, ordered by the row of
    /// the removed box, top row first.
    pub fn remove_box(&self) -> Vec<Partition> {
        let n = self.parts.len();
        let mut out = Vec::new();
        for i in 0..n {
            if i == n - 1 || self.parts[i] > self.parts[i + 1] {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// Row index of the single box by which `self` exceeds `smaller`, if any.
    pub fn added_row(&self, smaller: &Partition) -> Option<usize> {
        if self.weight() != smaller.weight() + 1 {
            return None;
        }
        let mut row = None;
        for i in 0..self.parts.len() {
            let s = smaller.parts.get(i).copied().unwrap_or(0);
            match self.parts[i].checked_sub(s) {
                Some(0) => {}
                Some(1) if row.is_none() => row = Some(i),
                _ => return None,
            }
        }
        if smaller.parts.len() > self.parts.len() {
            return None;
        }
        row
    }

    /// Irrep dimension `d_μ = p! / Π hooks`.
    pub fn irrep_dimension(&self) -> usize {
        let p = self.weight();
        let fact: u128 = (1..=p as u128).product();
        let hooks: u128 = self.cells().map(|(i, j)| self.hook(i, j) as u128).product();
        (fact / hooks) as usize
    }

    /// Multiplicity `m_μ` of the irrep in `(C^d)^{⊗p}`, by the hook-content
    /// formula `Π (d + j − i) / hook(i, j)`. Zero exactly when `height > d`.
    pub fn multiplicity(&self, d: usize) -> u64 {
        if self.height() > d {
            return 0;
        }
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for (i, j) in self.cells() {
            num *= (d + j - i) as u128;
            den *= self.hook(i, j) as u128;
        }
        (num / den) as u64
    }

    /// Multiplicity as a float, for use in coefficient formulas.
    pub fn mult_f64(&self, d: usize) -> f64 {
        self.multiplicity(d) as f64
    }
}

impl Ord for Partition {
    /// Canonical order: lexicographically *decreasing* parts sort first, so
    /// `(3) < (2,1) < (1,1,1)` in this ordering.
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// All partitions of `p` in canonical (lexicographically decreasing) order.
pub fn enumerate_partitions(p: usize) -> Result<Vec<Partition>> {
    if p == 0 {
        return Err(Error::EmptyWeight);
    }
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, p, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Common children `μ−□ ∩ ν−□` in canonical order.
pub fn common_children(mu: &Partition, nu: &Partition) -> Vec<Partition> {
    let theirs = nu.remove_box();
    let mut out: Vec<Partition> = mu.remove_box().into_iter().filter(|a| theirs.contains(a)).collect();
    out.sort();
    out
}

/// The relation `μ ∼□ ν`: `μ ≠ ν` and a unique `τ ⊢ p−1` with `τ = μ−□ = ν−□`.
pub fn box_related(mu: &Partition, nu: &Partition) -> Result<bool> {
    Ok(common_child(mu, nu)?.is_some())
}

/// The unique common child of two box-related diagrams, or `None` when the
/// relation does not hold.
pub fn common_child(mu: &Partition, nu: &Partition) -> Result<Option<Partition>> {
    if mu.weight() != nu.weight() {
        return Err(Error::WeightMismatch { left: mu.weight(), right: nu.weight() });
    }
    if mu == nu {
        return Ok(None);
    }
    let mut kids = common_children(mu, nu);
    Ok(if kids.len() == 1 { kids.pop() } else { None })
}
