//! Permutations of `S_p` and Young–Yamanouchi orthogonal irreps.
//!
//! Conventions used everywhere in the crate:
//!
//! * points are numbered `0..p` internally; the one-line notation exposed for
//!   serialization is 1-based, e.g. `[2,1,3]` for the transposition `(1 2)`;
//! * composition is right-to-left: `(σ∘τ)(i) = σ(τ(i))`;
//! * irreps are adapted to the chain `S_1 ⊂ S_2 ⊂ … ⊂ S_p`, rows and columns are
//!   indexed by [`BranchPath`]s grouped by their penultimate diagram in canonical
//!   order, and adjacent transpositions act by the axial-distance rule.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Largest `p` for which the full group is ever enumerated.
pub const MAX_GROUP_DEGREE: usize = 8;

/// A bijection of `{0, …, p−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// The identity on `p` points.
    pub fn identity(p: usize) -> Self {
        Self { images: (0..p).collect() }
    }

    /// Builds from 0-based images, validating bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let p = images.len();
        let mut seen = vec![false; p];
        for &x in &images {
            if x >= p || seen[x] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds from 1-based one-line notation such as `[2,1,3]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation(one_line.to_vec()));
        }
        Self::from_images(one_line.iter().map(|&x| x - 1).collect())
    }

    /// The transposition of points `a` and `b` (0-based) in `S_p`.
    pub fn transposition(p: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..p).collect();
        images.swap(a, b);
        Self { images }
    }

    /// Number of points.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    /// Image of point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        let p = self.images.len();
        let mut seen = vec![false; p];
        let mut cycles = 0;
        for s in 0..p {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = self.images[x];
                }
            }
        }
        cycles
    }

    /// Position of this permutation in [`enumerate_group`] (lexicographic rank).
    pub fn rank(&self) -> usize {
        let p = self.images.len();
        let mut rank = 0;
        let mut fact: usize = (1..p).product::<usize>().max(1);
        for i in 0..p {
            let smaller = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank += smaller * fact;
            fact = fact.checked_div(p - 1 - i).unwrap_or(fact);
        }
        rank
    }

    /// Extends to `n ≥ p` points by fixing `p..n`.
    pub fn extend(&self, n: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len()..n);
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.one_line(), s)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        Permutation::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

/// All `p!` permutations of `S_p` in lexicographic order of their images.
pub fn enumerate_group(p: usize) -> Result<Vec<Permutation>> {
    if p == 0 {
        return Err(Error::EmptyWeight);
    }
    if p > MAX_GROUP_DEGREE {
        return Err(Error::GroupTooLarge(p));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(Permutation { images: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (0..p.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..p).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    Ok(out)
}

/// The involution `k ↦ p+1−k` (1-based), i.e. `1 ↔ p, 2 ↔ p−1, …`.
pub fn reversal(p: usize) -> Permutation {
    Permutation { images: (0..p).rev().collect() }
}

/// Direction in which the Young–Yamanouchi chain is attached to the tensor slots.
///
/// `LeftToRight` adapts the basis to `S_1 ⊂ … ⊂ S_p` acting on slots
/// `1, 1..2, …, 1..p`; `RightToLeft` is its conjugate by [`reversal`], so the
/// chain grows from the last slot towards the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Orientation {
    /// Chain grows from slot 1 towards slot `p`.
    #[cfg_attr(feature = "serde", serde(rename = "LR"))]
    LeftToRight,
    /// Chain grows from slot `p` towards slot 1.
    #[cfg_attr(feature = "serde", serde(rename = "RL"))]
    RightToLeft,
}

impl Orientation {
    /// Short tag `"LR"` / `"RL"`.
    pub fn tag(self) -> &'static str {
        match self {
            Orientation::LeftToRight => "LR",
            Orientation::RightToLeft => "RL",
        }
    }

    /// The opposite orientation.
    pub fn flipped(self) -> Self {
        match self {
            Orientation::LeftToRight => Orientation::RightToLeft,
            Orientation::RightToLeft => Orientation::LeftToRight,
        }
    }
}

/// A chain `(1) = μ^(1) ⊂ μ^(2) ⊂ … ⊂ μ^(p)`, each step adding one box.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct BranchPath {
    chain: Vec<Partition>,
}

impl BranchPath {
    /// Validates and wraps a chain.
    pub fn new(chain: Vec<Partition>) -> Result<Self> {
        let ok = chain.first().is_some_and(|c| c.parts() == [1])
            && chain.windows(2).all(|w| w[1].added_row(&w[0]).is_some());
        if ok {
            Ok(Self { chain })
        } else {
            Err(Error::InvalidArgument(alloc::format!("not a branching path: {chain:?}")))
        }
    }

    /// The diagrams of the chain.
    pub fn chain(&self) -> &[Partition] {
        &self.chain
    }

    /// Length of the chain (the weight of its final diagram).
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    /// Whether the chain is empty (never true for constructed paths).
    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Final diagram `μ`.
    pub fn shape(&self) -> &Partition {
        self.chain.last().expect("non-empty path")
    }

    /// Penultimate diagram `α` (the `S_{p−1}` irrep this basis vector restricts to),
    /// or the empty diagram for `p = 1`.
    pub fn penultimate(&self) -> Partition {
        if self.chain.len() >= 2 {
            self.chain[self.chain.len() - 2].clone()
        } else {
            Partition::empty()
        }
    }

    /// The path with its last diagram removed (a path of the penultimate diagram).
    pub fn truncated(&self) -> BranchPath {
        BranchPath { chain: self.chain[..self.chain.len().saturating_sub(1)].to_vec() }
    }

    /// The path extended by one more diagram.
    pub fn extended(&self, mu: Partition) -> BranchPath {
        let mut chain = self.chain.clone();
        chain.push(mu);
        BranchPath { chain }
    }

    /// Content `col − row` of the box added at (0-based) step `t`.
    fn content(&self, t: usize) -> isize {
        let cur = &self.chain[t];
        let row = if t == 0 { 0 } else { cur.added_row(&self.chain[t - 1]).expect("valid chain") };
        (cur.parts()[row] as isize - 1) - row as isize
    }
}

impl fmt::Debug for BranchPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.chain.iter().enumerate() {
            if k > 0 {
                f.write_str("→")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// All branching paths ending at `mu`, grouped by penultimate diagram in
/// canonical order (recursively).
pub fn branching_paths(mu: &Partition) -> Vec<BranchPath> {
    match mu.weight() {
        0 => Vec::new(),
        1 => vec![BranchPath { chain: vec![mu.clone()] }],
        _ => {
            let mut children = mu.remove_box();
            children.sort();
            children
                .iter()
                .flat_map(|a| branching_paths(a).into_iter().map(|pth| pth.extended(mu.clone())))
                .collect()
        }
    }
}

/// Orthogonal irrep of `S_p` in the Young–Yamanouchi basis.
#[derive(Clone, Debug)]
pub struct IrrepTable {
    mu: Partition,
    orientation: Orientation,
    paths: Vec<BranchPath>,
    /// Indexed by [`Permutation::rank`].
    matrices: Vec<DMatrix<f64>>,
}

impl IrrepTable {
    /// The diagram.
    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    /// Orientation of the table.
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Degree `p` of the group.
    pub fn degree(&self) -> usize {
        self.mu.weight()
    }

    /// Irrep dimension `d_μ`.
    pub fn dimension(&self) -> usize {
        self.paths.len()
    }

    /// Row/column labels.
    pub fn paths(&self) -> &[BranchPath] {
        &self.paths
    }

    /// Representation matrix `φ(σ)`.
    pub fn phi(&self, sigma: &Permutation) -> &DMatrix<f64> {
        &self.matrices[sigma.rank()]
    }

    /// Matrix element `φ_ij(σ)`.
    pub fn entry(&self, sigma: &Permutation, i: usize, j: usize) -> f64 {
        self.phi(sigma)[(i, j)]
    }

    /// Index of a branching path among the rows.
    pub fn path_index(&self, path: &BranchPath) -> Result<usize> {
        self.paths.iter().position(|q| q == path).ok_or_else(|| Error::ForeignPath(self.mu.clone()))
    }

    /// Branching path of row `i`.
    pub fn index_path(&self, i: usize) -> Result<&BranchPath> {
        self.paths.get(i).ok_or_else(|| Error::ForeignPath(self.mu.clone()))
    }

    /// The pair `(α, i_α)`: penultimate diagram of row `i` and its index
    /// within the `α` block.
    pub fn block_index(&self, i: usize) -> (Partition, usize) {
        let alpha = self.paths[i].penultimate();
        let within = self.paths[..i].iter().filter(|q| q.penultimate() == alpha).count();
        (alpha, within)
    }
}

/// Matrix of the adjacent transposition swapping points `k−1, k` (0-based `k ≥ 1`).
fn yy_generator(paths: &[BranchPath], k: usize) -> DMatrix<f64> {
    let n = paths.len();
    let mut m = DMatrix::zeros(n, n);
    for (a, t) in paths.iter().enumerate() {
        let r = (t.content(k) - t.content(k - 1)) as f64;
        m[(a, a)] = 1.0 / r;
        if libm::fabs(r) > 1.0 {
            // The tableau with boxes k and k+1 exchanged.
            let before = if k >= 2 { t.chain[k - 2].clone() } else { Partition::empty() };
            let row = t.chain[k].added_row(&t.chain[k - 1]).expect("valid chain");
            let mut parts = before.parts().to_vec();
            if row < parts.len() {
                parts[row] += 1;
            } else {
                parts.push(1);
            }
            let mut chain = t.chain.clone();
            chain[k - 1] = Partition::new(parts).expect("valid diagram");
            let b = paths.iter().position(|q| q.chain == chain).expect("swapped tableau exists");
            m[(a, b)] = libm::sqrt(1.0 - 1.0 / (r * r));
        }
    }
    m
}

/// Builds the orthogonal Young–Yamanouchi irrep of `mu` in the given orientation.
///
/// Right-to-left tables are the left-to-right table conjugated by [`reversal`]:
/// `φ_RL(σ) = φ_LR(w σ w)`.
pub fn young_yamanouchi(mu: &Partition, orientation: Orientation) -> Result<IrrepTable> {
    let p = mu.weight();
    if p == 0 {
        return Err(Error::EmptyWeight);
    }
    if p > MAX_GROUP_DEGREE {
        return Err(Error::GroupTooLarge(p));
    }
    let paths = branching_paths(mu);
    let n = paths.len();
    let gens: Vec<(Permutation, DMatrix<f64>)> =
        (1..p).map(|k| (Permutation::transposition(p, k - 1, k), yy_generator(&paths, k))).collect();
    let order: usize = (1..=p).product();
    let mut lr: Vec<Option<DMatrix<f64>>> = vec![None; order];
    let id = Permutation::identity(p);
    lr[id.rank()] = Some(DMatrix::identity(n, n));
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let mg = lr[g.rank()].clone().expect("visited");
        for (s, ms) in &gens {
            let h = s.compose(&g);
            let slot = &mut lr[h.rank()];
            if slot.is_none() {
                *slot = Some(ms * &mg);
                queue.push_back(h);
            }
        }
    }
    let lr: Vec<DMatrix<f64>> = lr.into_iter().map(|m| m.expect("generators span S_p")).collect();
    let matrices = match orientation {
        Orientation::LeftToRight => lr,
        Orientation::RightToLeft => {
            let w = reversal(p);
            enumerate_group(p)?.iter().map(|s| lr[w.compose(s).compose(&w).rank()].clone()).collect()
        }
    };
    Ok(IrrepTable { mu: mu.clone(), orientation, paths, matrices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn group_enumeration() {
        assert_eq!(enumerate_group(1).unwrap(), vec![Permutation::identity(1)]);
        assert_eq!(enumerate_group(3).unwrap().len(), 6);
        assert_eq!(enumerate_group(4).unwrap().len(), 24);
        assert_eq!(enumerate_group(9), Err(Error::GroupTooLarge(9)));
        for p in 1..=5 {
            for (k, s) in enumerate_group(p).unwrap().iter().enumerate() {
                assert_eq!(s.rank(), k);
            }
        }
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(reversal(2).one_line(), vec![2, 1]);
        assert_eq!(reversal(3).one_line(), vec![3, 2, 1]);
        assert!(reversal(1).is_identity());
    }

    #[test]
    fn permutation_algebra() {
        let s = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        let t = Permutation::from_one_line(&[2, 1, 3]).unwrap();
        // (s∘t)(1) = s(t(1)) = s(2) = 3
        assert_eq!(s.compose(&t).one_line(), vec![3, 2, 1]);
        assert!(s.compose(&s.inverse()).is_identity());
        assert_eq!(s.cycle_count(), 1);
        assert_eq!(Permutation::identity(4).cycle_count(), 4);
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
    }

    #[test]
    fn paths_grouped_by_penultimate() {
        let ps = branching_paths(&pt(&[2, 1]));
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].chain(), &[pt(&[1]), pt(&[2]), pt(&[2, 1])]);
        assert_eq!(ps[1].chain(), &[pt(&[1]), pt(&[1, 1]), pt(&[2, 1])]);
        for p in 1..=6 {
            for mu in enumerate_partitions(p).unwrap() {
                let ps = branching_paths(&mu);
                assert_eq!(ps.len(), mu.irrep_dimension());
                // contiguous blocks by penultimate
                let pens: Vec<Partition> = ps.iter().map(|q| q.penultimate()).collect();
                let mut seen: Vec<Partition> = Vec::new();
                for (k, a) in pens.iter().enumerate() {
                    if k == 0 || *a != pens[k - 1] {
                        assert!(!seen.contains(a));
                        seen.push(a.clone());
                    }
                }
            }
        }
    }

    #[test]
    fn standard_examples() {
        let t = young_yamanouchi(&pt(&[2, 1]), Orientation::LeftToRight).unwrap();
        let s12 = Permutation::from_one_line(&[2, 1, 3]).unwrap();
        assert_eq!(t.phi(&s12), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let c = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        assert!((t.phi(&c).trace() + 1.0).abs() < 1e-12);
        let triv = young_yamanouchi(&pt(&[3]), Orientation::LeftToRight).unwrap();
        for s in enumerate_group(3).unwrap() {
            assert_eq!(triv.phi(&s)[(0, 0)], 1.0);
        }
    }

    /// Character table of S_3 recomputed from the matrices.
    #[test]
    fn characters_of_s3() {
        let g = enumerate_group(3).unwrap();
        let expected = |mu: &[usize], s: &Permutation| -> f64 {
            let c = s.cycle_count();
            match (mu, c) {
                ([3], _) => 1.0,
                ([1, 1, 1], c) => if (3 - c) % 2 == 0 { 1.0 } else { -1.0 },
                ([2, 1], 3) => 2.0,
                ([2, 1], 2) => 0.0,
                ([2, 1], 1) => -1.0,
                _ => unreachable!(),
            }
        };
        for mu in enumerate_partitions(3).unwrap() {
            for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
                let t = young_yamanouchi(&mu, o).unwrap();
                for s in &g {
                    assert!((t.phi(s).trace() - expected(mu.parts(), s)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn homomorphism_and_orthogonality() {
        for p in 1..=4 {
            let g = enumerate_group(p).unwrap();
            for mu in enumerate_partitions(p).unwrap() {
                for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
                    let t = young_yamanouchi(&mu, o).unwrap();
                    let n = t.dimension();
                    assert_eq!(t.phi(&Permutation::identity(p)), &DMatrix::identity(n, n));
                    for s in &g {
                        let ps = t.phi(s);
                        assert!((ps.transpose() * ps - DMatrix::identity(n, n)).amax() < 1e-12);
                        for u in &g {
                            let lhs = t.phi(&s.compose(u));
                            assert!((lhs - ps * t.phi(u)).amax() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    /// For σ fixing the last point, φ^μ(σ) is block diagonal with blocks φ^α.
    #[test]
    fn restriction_is_block_diagonal() {
        for p in 2..=5 {
            let g = enumerate_group(p - 1).unwrap();
            for mu in enumerate_partitions(p).unwrap() {
                let t = young_yamanouchi(&mu, Orientation::LeftToRight).unwrap();
                for s in &g {
                    let big = t.phi(&s.extend(p));
                    for i in 0..t.dimension() {
                        for j in 0..t.dimension() {
                            let (ai, ii) = t.block_index(i);
                            let (aj, jj) = t.block_index(j);
                            let want = if ai == aj {
                                young_yamanouchi(&ai, Orientation::LeftToRight).unwrap().entry(s, ii, jj)
                            } else {
                                0.0
                            };
                            assert!((big[(i, j)] - want).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn path_index_round_trip() {
        let t = young_yamanouchi(&pt(&[3, 2]), Orientation::LeftToRight).unwrap();
        for i in 0..t.dimension() {
            let q = t.index_path(i).unwrap().clone();
            assert_eq!(t.path_index(&q).unwrap(), i);
            assert_eq!(t.block_index(i).0, q.chain()[q.len() - 2]);
        }
        let foreign = branching_paths(&pt(&[2, 1]))[0].clone();
        assert!(t.path_index(&foreign).is_err());
        assert!(t.index_path(99).is_err());
    }
}
