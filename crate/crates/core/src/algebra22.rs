//! The algebra `A^d_{2,2}` in full: matrix bases of its three ideals,
//! their projectors and traces, and the block decomposition.
//!
//! With `E_S = (1 + SWAP)/2`, `E_A = (1 − SWAP)/2` on each side of the wall the
//! ideals are spanned by
//!
//! ```text
//! G^(2)_kl       = (m_k m_l)^{-1/2} (E_k ⊗ 1) V^(2) (E_l ⊗ 1)
//! G^(1)_[ij][kl] = (B̂^(1)_[ij][ij])^{-1} (E_i ⊗ E_j) Q^(1) (E_k ⊗ E_l)
//! G^(0)_ij       = E_i ⊗ E_j − G^(1)_[ij][ij] − δ_ij G^(2)_ii
//! ```
//!
//! with `B̂^(1) = (1/4d) diag(d+2, d, d, d−2)` in the order `[SS],[SA],[AS],[AA]`.
//! Units whose normalization vanishes (`[AA]` at `d = 2`) and units that are
//! identically zero are kept with a flag rather than dropped.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gram::FlaggedOperator;
use crate::matrixunits::UnitRegistry;
use crate::oracle::{normalized_deviation, scalar_deviation, span_rank, VerificationReport, RANK_CUTOFF};
use crate::partitions::Partition;
use crate::symgroup::Orientation;
use crate::tensor::{re, DenseOperator};
use crate::walled::{arc_operator, partially_transposed_permutations, q_projector, ArcConfig};

/// Threshold below which a constructed unit counts as identically zero.
const ZERO_TOL: f64 = 1e-12;

/// Irrep of `S_2`: symmetric or antisymmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sym2 {
    /// `(2)`, projector `E_S`.
    S,
    /// `(1,1)`, projector `E_A`.
    A,
}

impl Sym2 {
    /// Both labels, symmetric first.
    pub const ALL: [Sym2; 2] = [Sym2::S, Sym2::A];

    /// The corresponding diagram.
    pub fn partition(self) -> Partition {
        match self {
            Sym2::S => Partition::row(2),
            Sym2::A => Partition::column(2),
        }
    }

    /// Label of a weight-two diagram.
    pub fn from_partition(mu: &Partition) -> Result<Self> {
        if *mu == Partition::row(2) {
            Ok(Sym2::S)
        } else if *mu == Partition::column(2) {
            Ok(Sym2::A)
        } else {
            Err(Error::InvalidArgument(format!("{mu} is not a diagram of weight 2")))
        }
    }

    /// `m_S = d(d+1)/2`, `m_A = d(d−1)/2`.
    pub fn mult(self, d: usize) -> f64 {
        self.partition().mult_f64(d)
    }

    /// `+1` for `S`, `−1` for `A`.
    pub fn sign(self) -> f64 {
        match self {
            Sym2::S => 1.0,
            Sym2::A => -1.0,
        }
    }

    fn index(self) -> usize {
        match self {
            Sym2::S => 0,
            Sym2::A => 1,
        }
    }
}

impl fmt::Display for Sym2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sym2::S => "S",
            Sym2::A => "A",
        })
    }
}

/// The four pairs `[SS], [SA], [AS], [AA]` in that order.
pub const PAIRS: [(Sym2, Sym2); 4] = [(Sym2::S, Sym2::S), (Sym2::S, Sym2::A), (Sym2::A, Sym2::S), (Sym2::A, Sym2::A)];

fn pair_index(p: (Sym2, Sym2)) -> usize {
    2 * p.0.index() + p.1.index()
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Unsupported(format!("A^d_(2,2) needs d ≥ 2, got {d}")));
    }
    Ok(())
}

/// `E_k` on two slots (left-to-right construction).
pub fn e2(k: Sym2, d: usize) -> Result<DenseOperator> {
    let reg = UnitRegistry::new(2, d)?;
    Ok(reg.lookup(&reg.label(reg.irrep_index(&k.partition())?, 0, 0, Orientation::LeftToRight))?.clone())
}

/// Entry `B̂^(1)_[ij][ij]`.
pub fn b1_entry(pair: (Sym2, Sym2), d: usize) -> f64 {
    let df = d as f64;
    let num = match pair {
        (Sym2::S, Sym2::S) => df + 2.0,
        (Sym2::A, Sym2::A) => df - 2.0,
        _ => df,
    };
    num / (4.0 * df)
}

/// `B̂^(1) = (1/4d) diag(d+2, d, d, d−2)`.
pub fn b1_matrix(d: usize) -> Result<DMatrix<f64>> {
    check_d(d)?;
    Ok(DMatrix::from_fn(4, 4, |a, b| if a == b { b1_entry(PAIRS[a], d) } else { 0.0 }))
}

/// Matrix of `Q^(2)` in the `G^(2)` basis (order `S, A`):
/// `(1/2d) [[d+1, √(d²−1)], [√(d²−1), d−1]]`.
pub fn q2_rep_matrix(d: usize) -> Result<DMatrix<f64>> {
    check_d(d)?;
    let df = d as f64;
    let off = libm::sqrt(df * df - 1.0);
    Ok(DMatrix::from_row_slice(2, 2, &[df + 1.0, off, off, df - 1.0]) / (2.0 * df))
}

/// Closed-form traces `Tr G^(0)_ij`: `(1/4)d²(d−1)(d+3)` for `SS`,
/// `(1/4)(d²−4)(d²−1)` for `i ≠ j`, `(1/4)d²(d+1)(d−3)` for `AA`. Valid for
/// `d ≥ 3`; at `d = 2` the vanishing units have trace zero instead.
pub fn g0_trace_formula(pair: (Sym2, Sym2), d: usize) -> f64 {
    let df = d as f64;
    let d2 = df * df;
    match pair {
        (Sym2::S, Sym2::S) => d2 * (df - 1.0) * (df + 3.0) / 4.0,
        (Sym2::A, Sym2::A) => d2 * (df + 1.0) * (df - 3.0) / 4.0,
        _ => (d2 - 4.0) * (d2 - 1.0) / 4.0,
    }
}

/// All matrix units of `A^d_{2,2}`, built once.
#[derive(Clone, Debug)]
pub struct Basis22 {
    d: usize,
    e: [DenseOperator; 2],
    g2: Vec<FlaggedOperator>,
    g1: Vec<FlaggedOperator>,
    g0: Vec<FlaggedOperator>,
}

impl Basis22 {
    /// Builds the three families for `d ≥ 2`.
    pub fn new(d: usize) -> Result<Self> {
        check_d(d)?;
        let reg = UnitRegistry::new(2, d)?;
        let unit = |k: Sym2, o: Orientation| -> Result<DenseOperator> {
            Ok(reg.lookup(&reg.label(reg.irrep_index(&k.partition())?, 0, 0, o))?.clone())
        };
        let e = [unit(Sym2::S, Orientation::LeftToRight)?, unit(Sym2::A, Orientation::LeftToRight)?];
        let id = DenseOperator::identity(d, 2);
        let v2 = arc_operator(&ArcConfig::new(2, d, 2)?);
        let q1 = q_projector(1, 2, d)?;
        let side = |k: Sym2| e[k.index()].kron(&id);
        let two = |p: (Sym2, Sym2)| -> Result<DenseOperator> {
            Ok(e[p.0.index()].kron(&unit(p.1, Orientation::RightToLeft)?))
        };

        let mut g2 = Vec::with_capacity(4);
        for k in Sym2::ALL {
            for l in Sym2::ALL {
                let norm = libm::sqrt(k.mult(d) * l.mult(d));
                let op = if norm > 0.0 {
                    (&(&side(k) * &v2) * &side(l)).scale_re(1.0 / norm)
                } else {
                    DenseOperator::zeros(d, 4)
                };
                let vanishes = op.is_zero(ZERO_TOL);
                g2.push(FlaggedOperator { op, vanishes });
            }
        }
        let mut g1 = Vec::with_capacity(16);
        for a in PAIRS {
            for b in PAIRS {
                let ba = b1_entry(a, d);
                let bb = b1_entry(b, d);
                let op = if ba.abs() > ZERO_TOL && bb.abs() > ZERO_TOL {
                    (&(&two(a)? * &q1) * &two(b)?).scale_re(1.0 / ba)
                } else {
                    DenseOperator::zeros(d, 4)
                };
                let vanishes = op.is_zero(ZERO_TOL);
                g1.push(FlaggedOperator { op, vanishes });
            }
        }
        let mut g0 = Vec::with_capacity(4);
        for a in PAIRS {
            let mut op = two(a)?;
            let k = pair_index(a);
            op = &op - &g1[5 * k].op;
            if a.0 == a.1 {
                op = &op - &g2[3 * a.0.index()].op;
            }
            let vanishes = op.is_zero(ZERO_TOL);
            g0.push(FlaggedOperator { op, vanishes });
        }
        Ok(Self { d, e, g2, g1, g0 })
    }

    /// Local dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `E_k` on two slots.
    pub fn e(&self, k: Sym2) -> &DenseOperator {
        &self.e[k.index()]
    }

    /// `G^(2)_kl`.
    pub fn g2(&self, k: Sym2, l: Sym2) -> &FlaggedOperator {
        &self.g2[2 * k.index() + l.index()]
    }

    /// `G^(1)_[ij][kl]`; flagged when either pair has vanishing `B̂^(1)`.
    pub fn g1(&self, ij: (Sym2, Sym2), kl: (Sym2, Sym2)) -> &FlaggedOperator {
        &self.g1[4 * pair_index(ij) + pair_index(kl)]
    }

    /// `G^(0)_ij`.
    pub fn g0(&self, i: Sym2, j: Sym2) -> &FlaggedOperator {
        &self.g0[pair_index((i, j))]
    }

    /// Pairs labelling the `G^(1)` block (those with `B̂^(1)_[ij][ij] ≠ 0`).
    pub fn g1_pairs(&self) -> Vec<(Sym2, Sym2)> {
        PAIRS.iter().copied().filter(|&a| b1_entry(a, self.d).abs() > ZERO_TOL).collect()
    }

    /// Pairs with a non-vanishing `G^(0)` unit.
    pub fn g0_pairs(&self) -> Vec<(Sym2, Sym2)> {
        PAIRS.iter().copied().filter(|&a| !self.g0(a.0, a.1).vanishes).collect()
    }

    /// Projectors `(G^(2), G^(1), G^(0))` onto the three ideals.
    pub fn projectors(&self) -> (DenseOperator, DenseOperator, DenseOperator) {
        let mut p2 = DenseOperator::zeros(self.d, 4);
        for k in Sym2::ALL {
            p2.add_scaled(re(1.0), &self.g2(k, k).op);
        }
        let mut p1 = DenseOperator::zeros(self.d, 4);
        for a in self.g1_pairs() {
            p1.add_scaled(re(1.0), &self.g1(a, a).op);
        }
        let p0 = &(&DenseOperator::identity(self.d, 4) - &p1) - &p2;
        (p2, p1, p0)
    }

    /// All non-vanishing units of the three families, with printable labels.
    pub fn units(&self) -> Vec<(String, &DenseOperator)> {
        let mut out = Vec::new();
        for k in Sym2::ALL {
            for l in Sym2::ALL {
                let g = self.g2(k, l);
                if !g.vanishes {
                    out.push((format!("G2[{k}{l}]"), &g.op));
                }
            }
        }
        let pairs = self.g1_pairs();
        for &a in &pairs {
            for &b in &pairs {
                out.push((format!("G1[{}{}][{}{}]", a.0, a.1, b.0, b.1), &self.g1(a, b).op));
            }
        }
        for a in self.g0_pairs() {
            out.push((format!("G0[{}{}]", a.0, a.1), &self.g0(a.0, a.1).op));
        }
        out
    }
}

/// `G^(2)_kl` for `k, l ∈ {S, A}`.
pub fn g2_unit(k: Sym2, l: Sym2, d: usize) -> Result<FlaggedOperator> {
    Ok(Basis22::new(d)?.g2(k, l).clone())
}

/// `G^(1)_[ij][kl]`; zero and flagged for `[AA]` at `d = 2`.
pub fn g1_unit(ij: (Sym2, Sym2), kl: (Sym2, Sym2), d: usize) -> Result<FlaggedOperator> {
    Ok(Basis22::new(d)?.g1(ij, kl).clone())
}

/// `G^(0)_ij`, flagged when it vanishes.
pub fn g0_unit(i: Sym2, j: Sym2, d: usize) -> Result<FlaggedOperator> {
    Ok(Basis22::new(d)?.g0(i, j).clone())
}

/// Projectors `(G^(2), G^(1), G^(0))`.
pub fn projectors(d: usize) -> Result<(DenseOperator, DenseOperator, DenseOperator)> {
    Ok(Basis22::new(d)?.projectors())
}

/// Which ideal a block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Ideal22 {
    /// `M̃^(2)`, carried by `Q^(2)`.
    M2,
    /// `M̃^(1)`, carried by `Q^(1)`.
    M1,
    /// `M^(0)`, the one-dimensional ideals `G^(0)_ij`.
    M0,
}

/// Full matrix block or one-dimensional block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BlockKind {
    /// `M(n, C)`.
    Matrix,
    /// `C`.
    Scalar,
}

/// One simple block of the decomposition.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Block22 {
    /// Owning ideal.
    pub ideal: Ideal22,
    /// Matrix or scalar block.
    pub kind: BlockKind,
    /// Matrix size `n` (`1` for scalars).
    pub size: usize,
    /// Labels of the diagonal units of the block.
    pub labels: Vec<String>,
}

/// Decomposition of `A^d_{2,2}` into simple blocks.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decomposition22 {
    /// Local dimension.
    pub d: usize,
    /// Blocks in the order `M̃^(2)`, `M̃^(1)`, then the scalars.
    pub blocks: Vec<Block22>,
    /// `Σ size²` over the blocks.
    pub dim: usize,
    /// Dense span rank of the 24 partially transposed permutations.
    pub generator_rank: usize,
    /// Dense span rank of the constructed units.
    pub basis_rank: usize,
    /// Dimension of the irrep carried by `M̃^(1)` (its matrix size).
    pub m1_irrep_dimension: usize,
    /// Dimension of the `M̃^(1)` block as an algebra (size squared).
    pub m1_block_dimension: usize,
    /// Units dropped because they vanish at this `d`.
    pub excluded: Vec<String>,
}

impl Decomposition22 {
    /// Block structure in the usual notation, e.g. `M(2)⊕M(4)⊕C^3`.
    pub fn structure(&self) -> String {
        let mut parts = Vec::new();
        let mut scalars = 0;
        for b in &self.blocks {
            match b.kind {
                BlockKind::Matrix => parts.push(format!("M({})", b.size)),
                BlockKind::Scalar => scalars += 1,
            }
        }
        if scalars > 0 {
            parts.push(format!("C^{scalars}"));
        }
        parts.join("⊕")
    }
}

/// Decomposes `A^d_{2,2}` from the constructed units and cross-checks the
/// dimension against the dense span of the defining permutations.
pub fn decompose_22(d: usize) -> Result<Decomposition22> {
    let basis = Basis22::new(d)?;
    let mut blocks = Vec::new();
    let mut excluded = Vec::new();
    let live2: Vec<Sym2> = Sym2::ALL.iter().copied().filter(|&k| !basis.g2(k, k).vanishes).collect();
    for k in Sym2::ALL {
        if !live2.contains(&k) {
            excluded.push(format!("G2[{k}{k}]"));
        }
    }
    blocks.push(Block22 {
        ideal: Ideal22::M2,
        kind: BlockKind::Matrix,
        size: live2.len(),
        labels: live2.iter().map(|k| format!("G2[{k}{k}]")).collect(),
    });
    let pairs1 = basis.g1_pairs();
    for a in PAIRS {
        if !pairs1.contains(&a) {
            excluded.push(format!("G1[{}{}][{}{}]", a.0, a.1, a.0, a.1));
        }
    }
    blocks.push(Block22 {
        ideal: Ideal22::M1,
        kind: BlockKind::Matrix,
        size: pairs1.len(),
        labels: pairs1.iter().map(|a| format!("G1[{}{}][{}{}]", a.0, a.1, a.0, a.1)).collect(),
    });
    for a in PAIRS {
        let label = format!("G0[{}{}]", a.0, a.1);
        if basis.g0(a.0, a.1).vanishes {
            excluded.push(label);
        } else {
            blocks.push(Block22 { ideal: Ideal22::M0, kind: BlockKind::Scalar, size: 1, labels: alloc::vec![label] });
        }
    }
    let dim = blocks.iter().map(|b| b.size * b.size).sum();
    let generator_rank = span_rank(&partially_transposed_permutations(2, d)?, RANK_CUTOFF)?;
    let units: Vec<DenseOperator> = basis.units().into_iter().map(|(_, op)| op.clone()).collect();
    let basis_rank = span_rank(&units, RANK_CUTOFF)?;
    Ok(Decomposition22 {
        d,
        blocks,
        dim,
        generator_rank,
        basis_rank,
        m1_irrep_dimension: pairs1.len(),
        m1_block_dimension: pairs1.len() * pairs1.len(),
        excluded,
    })
}

/// Non-ideality of `N^(0)` and its two product identities.
#[derive(Clone, Debug, PartialEq)]
pub struct N0Witness {
    /// Both identities, with the corrected scalar in the second.
    pub report: VerificationReport,
    /// Deviation of the second identity with the scalar `(m_i m_j − m_i δ_ij)/d`.
    pub literal_deviation: f64,
    /// Norm of `G^(1) · Q^(0) (E_S ⊗ E_S) Q^(1)`: the part of a product
    /// with `M̃^(1)` that leaves `N^(0)`.
    pub leak_norm: f64,
}

/// Verifies
///
/// ```text
/// Q^(0) (E_i ⊗ E_j) Q^(2) = δ_ij (E_i ⊗ 1 − (d ± 1)/(2d)) Q^(2)
/// Q^(0) (E_i ⊗ E_j) Q^(1) = (E_i ⊗ E_j − (m_i m_j − m_i δ_ij)/(d²(d²−1))) Q^(1)
/// ```
///
/// (sign `+` for `S`) and exhibits the leaked component.
pub fn n0_not_ideal_witness(d: usize, tol: f64) -> Result<N0Witness> {
    let basis = Basis22::new(d)?;
    let df = d as f64;
    let q0 = q_projector(0, 2, d)?;
    let q1 = q_projector(1, 2, d)?;
    let q2 = q_projector(2, 2, d)?;
    let id2 = DenseOperator::identity(d, 2);
    let id4 = DenseOperator::identity(d, 4);
    let mut report = VerificationReport::new("a22.n0_identities", 2, d, tol);
    let mut literal_deviation = 0.0f64;
    for i in Sym2::ALL {
        for j in Sym2::ALL {
            let x = basis.e(i).kron(basis.e(j));
            let lhs = &(&q0 * &x) * &q2;
            let rhs = if i == j {
                let shift = (df + i.sign()) / (2.0 * df);
                &(&basis.e(i).kron(&id2) - &id4.scale_re(shift)) * &q2
            } else {
                DenseOperator::zeros(d, 4)
            };
            report.record(normalized_deviation(&lhs, &rhs), || format!("Q0 E{i}⊗E{j} Q2"));
            let lhs = &(&q0 * &x) * &q1;
            let diag = if i == j { i.mult(d) } else { 0.0 };
            let num = i.mult(d) * j.mult(d) - diag;
            let rhs = &(&x - &id4.scale_re(num / (df * df * (df * df - 1.0)))) * &q1;
            report.record(normalized_deviation(&lhs, &rhs), || format!("Q0 E{i}⊗E{j} Q1"));
            let literal = &(&x - &id4.scale_re(num / df)) * &q1;
            literal_deviation = literal_deviation.max(normalized_deviation(&lhs, &literal));
        }
    }
    let (_, p1, _) = basis.projectors();
    let leak = &(&(&q0 * &basis.e(Sym2::S).kron(basis.e(Sym2::S))) * &q1) * &DenseOperator::identity(d, 4);
    let leak_norm = (&p1 * &leak).frobenius_norm();
    Ok(N0Witness { report, literal_deviation, leak_norm })
}

/// Checks `n − G^(1) n G^(1) − G^(2) n G^(2) = δ_ik δ_jl G^(0)_ij` for every
/// generator `n = (E_i ⊗ E_j) Q^(0) (E_k ⊗ E_l)`.
pub fn x_decomposition_check(d: usize, tol: f64) -> Result<VerificationReport> {
    let basis = Basis22::new(d)?;
    let q0 = q_projector(0, 2, d)?;
    let (p2, p1, _) = basis.projectors();
    let mut rep = VerificationReport::new("a22.x_decomposition", 2, d, tol);
    for a in PAIRS {
        for b in PAIRS {
            let n = &(&basis.e(a.0).kron(basis.e(a.1)) * &q0) * &basis.e(b.0).kron(basis.e(b.1));
            let x = &(&n - &(&(&p1 * &n) * &p1)) - &(&(&p2 * &n) * &p2);
            let want = if a == b { basis.g0(a.0, a.1).op.clone() } else { DenseOperator::zeros(d, 4) };
            rep.record(normalized_deviation(&x, &want), || format!("[{}{}][{}{}]", a.0, a.1, b.0, b.1));
        }
    }
    Ok(rep)
}

fn law_check(family: &[(String, &DenseOperator)], n: usize, claim: &str, d: usize, tol: f64) -> VerificationReport {
    // family is an n × n grid of units in row-major order
    let mut rep = VerificationReport::new(claim, 2, d, tol);
    let zero = DenseOperator::zeros(d, 4);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let lhs = family[a * n + b].1 * family[c * n + e].1;
                    let rhs = if b == c { family[a * n + e].1 } else { &zero };
                    rep.record(normalized_deviation(&lhs, rhs), || {
                        format!("{}·{}", family[a * n + b].0, family[c * n + e].0)
                    });
                }
            }
        }
    }
    rep
}

/// Every `A^d_{2,2}` check: matrix-unit laws of the three families, mutual
/// annihilation, projector resolution, `B̂^(1)` against the measured Gram
/// matrix, the `Q^(2)` representation matrix, all trace identities, the
/// `N^(0)` identities and the x-decomposition.
pub fn a22_checks(d: usize, tol: f64) -> Result<Vec<VerificationReport>> {
    let basis = Basis22::new(d)?;
    let df = d as f64;
    let mut out = Vec::new();

    let g2: Vec<(String, &DenseOperator)> = Sym2::ALL
        .iter()
        .flat_map(|&k| Sym2::ALL.iter().map(move |&l| (k, l)))
        .map(|(k, l)| (format!("G2[{k}{l}]"), &basis.g2(k, l).op))
        .collect();
    out.push(law_check(&g2, 2, "a22.g2_law", d, tol));
    let pairs1 = basis.g1_pairs();
    let g1: Vec<(String, &DenseOperator)> = pairs1
        .iter()
        .flat_map(|&a| pairs1.iter().map(move |&b| (a, b)))
        .map(|(a, b)| (format!("G1[{}{}][{}{}]", a.0, a.1, b.0, b.1), &basis.g1(a, b).op))
        .collect();
    out.push(law_check(&g1, pairs1.len(), "a22.g1_law", d, tol));

    let mut rep = VerificationReport::new("a22.g0_law", 2, d, tol);
    for a in PAIRS {
        for b in PAIRS {
            let x = &basis.g0(a.0, a.1).op;
            let y = &basis.g0(b.0, b.1).op;
            let want = if a == b { x.clone() } else { DenseOperator::zeros(d, 4) };
            rep.record(normalized_deviation(&(x * y), &want), || format!("G0[{}{}]·G0[{}{}]", a.0, a.1, b.0, b.1));
        }
    }
    out.push(rep);

    let units = basis.units();
    let ideal = |label: &str| label.as_bytes()[1];
    let mut rep = VerificationReport::new("a22.annihilation", 2, d, tol);
    for (la, a) in &units {
        for (lb, b) in &units {
            if ideal(la) != ideal(lb) {
                rep.record((*a * *b).max_abs(), || format!("{la}·{lb}"));
            }
        }
    }
    out.push(rep);

    let (p2, p1, p0) = basis.projectors();
    let mut rep = VerificationReport::new("a22.projectors", 2, d, tol);
    let ps = [&p2, &p1, &p0];
    for (x, a) in ps.iter().enumerate() {
        for (y, b) in ps.iter().enumerate() {
            let want = if x == y { (*a).clone() } else { DenseOperator::zeros(d, 4) };
            rep.record(normalized_deviation(&(*a * *b), &want), || format!("P{}·P{}", 2 - x, 2 - y));
        }
    }
    let sum = &(&p2 + &p1) + &p0;
    rep.record(normalized_deviation(&sum, &DenseOperator::identity(d, 4)), || "sum".into());
    out.push(rep);

    // traces: Tr G^(2) = 2, Tr G^(1) = (d²−1)·#pairs, Tr G^(1)_[kl][kl] = d²−1, Tr G^(2)_kk = 1, Tr G^(0)_ij
    let mut rep = VerificationReport::new("a22.traces", 2, d, tol);
    rep.record(scalar_deviation(p2.trace().re, 2.0), || "Tr G2".into());
    rep.record(scalar_deviation(p1.trace().re, (df * df - 1.0) * pairs1.len() as f64), || "Tr G1".into());
    for k in Sym2::ALL {
        rep.record(scalar_deviation(basis.g2(k, k).op.trace().re, 1.0), || format!("Tr G2[{k}{k}]"));
    }
    for &a in &pairs1 {
        rep.record(scalar_deviation(basis.g1(a, a).op.trace().re, df * df - 1.0), || {
            format!("Tr G1[{}{}][{}{}]", a.0, a.1, a.0, a.1)
        });
    }
    for a in PAIRS {
        let g = basis.g0(a.0, a.1);
        let want = if d >= 3 { g0_trace_formula(a, d) } else if g.vanishes { 0.0 } else { g.op.trace().re };
        rep.record(scalar_deviation(g.op.trace().re, want), || format!("Tr G0[{}{}]", a.0, a.1));
        // a unit vanishes exactly when its trace does
        rep.record(if g.vanishes == (want.abs() < 1e-9) { 0.0 } else { 1.0 }, || {
            format!("vanishing G0[{}{}]", a.0, a.1)
        });
    }
    out.push(rep);

    // B̂^(1) from the quasi-multiplication law of Ĝ^(1) = E_i⊗E_j Q^(1) E_k⊗E_l
    let fam = crate::gram::GhatFamily::new(2, d)?;
    let measured = fam.measured_gram();
    let mut rep = VerificationReport::new("a22.b1_matrix", 2, d, tol);
    rep.record((measured - b1_matrix(d)?).amax(), || "B1 measured vs closed form".into());
    out.push(rep);

    // φ(Q^(2)) with entries Tr(G^(2)_lk Q^(2))
    let q2 = q_projector(2, 2, d)?;
    let want = q2_rep_matrix(d)?;
    let mut rep = VerificationReport::new("a22.q2_representation", 2, d, tol);
    for k in Sym2::ALL {
        for l in Sym2::ALL {
            let c = basis.g2(l, k).op.trace_product(&q2).re;
            rep.record(scalar_deviation(c, want[(k.index(), l.index())]), || format!("φ(Q2)[{k}{l}]"));
        }
    }
    let mut rebuilt = DenseOperator::zeros(d, 4);
    for k in Sym2::ALL {
        for l in Sym2::ALL {
            rebuilt.add_scaled(re(want[(k.index(), l.index())]), &basis.g2(k, l).op);
        }
    }
    rep.record(normalized_deviation(&rebuilt, &q2), || "Q2 = Σ φ G2".into());
    out.push(rep);

    let w = n0_not_ideal_witness(d, tol)?;
    let mut r = w.report.clone();
    r.record(if w.leak_norm > 1e-6 { 0.0 } else { 1.0 }, || "leak".into());
    out.push(r);
    out.push(x_decomposition_check(d, tol)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym2_basics() {
        assert_eq!(Sym2::S.mult(3), 6.0);
        assert_eq!(Sym2::A.mult(3), 3.0);
        assert_eq!(Sym2::from_partition(&Partition::column(2)).unwrap(), Sym2::A);
        assert!(Sym2::from_partition(&Partition::row(3)).is_err());
        assert!(Basis22::new(1).is_err());
    }

    #[test]
    fn orientations_coincide_at_two_slots() {
        let reg = UnitRegistry::new(2, 3).unwrap();
        for mu in 0..2 {
            let lr = reg.unit(mu, 0, 0, Orientation::LeftToRight);
            let rl = reg.unit(mu, 0, 0, Orientation::RightToLeft);
            assert_eq!(lr.max_abs_diff(rl), 0.0);
        }
    }

    #[test]
    fn closed_form_matrices() {
        let b = b1_matrix(3).unwrap();
        for (k, v) in [5.0, 3.0, 3.0, 1.0].iter().enumerate() {
            assert!((b[(k, k)] - v / 12.0).abs() < 1e-15);
        }
        assert_eq!(b1_matrix(2).unwrap()[(3, 3)], 0.0);
        let q = q2_rep_matrix(2).unwrap();
        let s3 = libm::sqrt(3.0);
        let want = DMatrix::from_row_slice(2, 2, &[3.0, s3, s3, 1.0]) / 4.0;
        assert!((q - want).amax() < 1e-15);
        for d in 2..6 {
            assert!((q2_rep_matrix(d).unwrap().trace() - 1.0).abs() < 1e-15);
        }
        assert_eq!(g0_trace_formula((Sym2::S, Sym2::A), 3), 10.0);
        assert_eq!(g0_trace_formula((Sym2::S, Sym2::S), 3), 27.0);
        assert_eq!(g0_trace_formula((Sym2::A, Sym2::A), 3), 0.0);
    }

    #[test]
    fn all_checks_pass() {
        for d in [2, 3, 4] {
            for rep in a22_checks(d, 1e-10).unwrap() {
                assert!(rep.pass, "d={d}: {rep:?}");
            }
        }
    }

    #[test]
    fn traces_and_vanishing() {
        let b = Basis22::new(3).unwrap();
        assert!(b.g0(Sym2::A, Sym2::A).vanishes);
        assert!((b.g0(Sym2::S, Sym2::A).op.trace().re - 10.0).abs() < 1e-10);
        let (p2, p1, _) = b.projectors();
        assert!((p1.trace().re - 32.0).abs() < 1e-10);
        assert!((p2.trace().re - 2.0).abs() < 1e-12);
        assert!((&p2 * &p1).max_abs() < 1e-12);
        let b = Basis22::new(2).unwrap();
        assert!(b.g1((Sym2::A, Sym2::A), (Sym2::S, Sym2::S)).vanishes);
        assert!(b.g0(Sym2::S, Sym2::A).vanishes && b.g0(Sym2::A, Sym2::S).vanishes && b.g0(Sym2::A, Sym2::A).vanishes);
        assert!((b.g0(Sym2::S, Sym2::S).op.trace().re - 5.0).abs() < 1e-10);
        let b = Basis22::new(4).unwrap();
        assert_eq!(b.g0_pairs().len(), 4);
        assert!((b.g0(Sym2::A, Sym2::A).op.trace().re - 20.0).abs() < 1e-10);
        // G^(1) prefactors 4d/(d+2) and 4d/(d−2) at d = 3
        assert!((1.0 / b1_entry((Sym2::S, Sym2::S), 3) - 12.0 / 5.0).abs() < 1e-14);
        assert!((1.0 / b1_entry((Sym2::A, Sym2::A), 3) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn decompositions() {
        let dec = decompose_22(3).unwrap();
        assert_eq!((dec.dim, dec.generator_rank, dec.basis_rank), (23, 23, 23));
        assert_eq!(dec.structure(), "M(2)⊕M(4)⊕C^3");
        let dec = decompose_22(4).unwrap();
        assert_eq!((dec.dim, dec.generator_rank), (24, 24));
        assert_eq!(dec.structure(), "M(2)⊕M(4)⊕C^4");
        // at d = 2 the surviving units span the full 14-dimensional algebra
        let dec = decompose_22(2).unwrap();
        assert_eq!((dec.dim, dec.generator_rank, dec.basis_rank), (14, 14, 14));
        assert_eq!((dec.m1_irrep_dimension, dec.m1_block_dimension), (3, 9));
        assert_eq!(dec.structure(), "M(2)⊕M(3)⊕C^1");
        assert_eq!(dec.excluded.len(), 4);
    }

    #[test]
    fn n0_witness_and_literal_scalar() {
        let w = n0_not_ideal_witness(3, 1e-10).unwrap();
        assert!(w.report.pass, "{:?}", w.report);
        assert!(w.literal_deviation > 1e-2, "{}", w.literal_deviation);
        assert!(w.leak_norm > 1e-3);
        // the δ_ij selection in the first identity
        let b = Basis22::new(3).unwrap();
        let q0 = q_projector(0, 2, 3).unwrap();
        let q2 = q_projector(2, 2, 3).unwrap();
        let x = &(&q0 * &b.e(Sym2::S).kron(b.e(Sym2::A))) * &q2;
        assert!(x.max_abs() < 1e-12);
    }

    #[test]
    fn g0_variant_with_swapped_side() {
        // the δ_ij term can equally be written (1 ⊗ E_i) Q^(2) (E_j ⊗ 1) · d²/m_i
        let d = 3;
        let b = Basis22::new(d).unwrap();
        let q2 = q_projector(2, 2, d).unwrap();
        let id = DenseOperator::identity(d, 2);
        for i in Sym2::ALL {
            let alt = (&(&id.kron(b.e(i)) * &q2) * &b.e(i).kron(&id)).scale_re((d * d) as f64 / i.mult(d));
            assert!(alt.max_abs_diff(&b.g2(i, i).op) < 1e-12);
        }
    }
}
