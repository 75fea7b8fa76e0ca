//! The generators `Ĝ_ΓΔ` of the ideal carried by `Q^(p−1)`, their Gram matrix
//! `B̂`, invertibility, the pure matrix basis, and the two-path overlap.
//!
//! A [`MultiIndex`] `Γ = [ξ, η; I, K; κ]` selects
//!
//! ```text
//! X_Γ = E^ξ_{I A_κ} ⊗ E^η_{K A_κ},      Ĝ_ΓΔ = X_Γ Q^(p−1) X_Δ†,
//! ```
//!
//! where `κ` is a common child of `ξ` and `η` and the free column `A_κ` is the
//! first branching path of `κ` extended to `ξ` (resp. `η`); the result does not
//! depend on that choice. Units are far-ending (see [`crate::walled`]).
//!
//! Because `Q^(p−1)` has rank `d²−1` it factors as `W W†` with orthonormal
//! columns `W`, so `Ĝ_ΓΔ = U_Γ U_Δ†` with `U_Γ = X_Γ W`. The quasi-matrix law
//! `Ĝ_ΓΔ Ĝ_ΛΠ = B̂_ΔΛ Ĝ_ΓΠ` is then the statement `U_Δ† U_Λ = B̂_ΔΛ · 1`, and every
//! basis element is stored as a pair of thin factors.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrixunits::{UnitLabel, UnitRegistry};
use crate::oracle::{normalized_deviation, rank_of_psd, VerificationReport, RANK_CUTOFF};
use crate::partitions::{common_children, enumerate_partitions, Partition};
use crate::symgroup::{branching_paths, BranchPath, Orientation};
use crate::tensor::{re, DenseOperator, C64};
use crate::walled::{arc_pair_trace, arc_operator, contract, q_projector, ArcConfig, PairLabel, FAR_ENDING, WALL_ENDING};

/// Largest operator dimension for which dense `Ĝ` operators are materialized.
pub const DENSE_LIMIT: usize = 729;

/// Label `Γ = [ξ, η; I, K; κ]` of a `Ĝ` generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiIndex {
    /// Left irrep.
    pub xi: Partition,
    /// Right irrep.
    pub eta: Partition,
    /// Row of the left unit (0-based position among the paths of `ξ`).
    pub row_left: usize,
    /// Row of the right unit (0-based position among the paths of `η`).
    pub row_right: usize,
    /// Common child `κ ∈ (ξ−□) ∩ (η−□)`.
    pub kappa: Partition,
}

impl MultiIndex {
    /// Validated index.
    pub fn new(xi: Partition, eta: Partition, row_left: usize, row_right: usize, kappa: Partition) -> Result<Self> {
        if xi.weight() != eta.weight() {
            return Err(Error::WeightMismatch { left: xi.weight(), right: eta.weight() });
        }
        if !common_children(&xi, &eta).contains(&kappa) {
            return Err(Error::Unrelated(xi, eta));
        }
        if row_left >= xi.irrep_dimension() {
            return Err(Error::ForeignPath(xi));
        }
        if row_right >= eta.irrep_dimension() {
            return Err(Error::ForeignPath(eta));
        }
        Ok(Self { xi, eta, row_left, row_right, kappa })
    }

    /// Degree `p`.
    pub fn p(&self) -> usize {
        self.xi.weight()
    }

    /// The `(ξ, η)` block this index belongs to.
    pub fn pair(&self) -> (&Partition, &Partition) {
        (&self.xi, &self.eta)
    }

    /// Left and right unit labels of `X_Γ` with the free column fixed by
    /// `free`, a branching path of `κ`.
    pub fn units_with(&self, free: &BranchPath) -> Result<(UnitLabel, UnitLabel)> {
        if free.shape() != &self.kappa {
            return Err(Error::ForeignPath(self.kappa.clone()));
        }
        let (lo, ro) = FAR_ENDING;
        let row_l = branching_paths(&self.xi)[self.row_left].clone();
        let row_r = branching_paths(&self.eta)[self.row_right].clone();
        Ok((
            UnitLabel::new(self.xi.clone(), row_l, free.extended(self.xi.clone()), lo)?,
            UnitLabel::new(self.eta.clone(), row_r, free.extended(self.eta.clone()), ro)?,
        ))
    }

    /// Unit labels of `X_Γ` with the canonical free column.
    pub fn units(&self) -> (UnitLabel, UnitLabel) {
        let free = branching_paths(&self.kappa).remove(0);
        self.units_with(&free).expect("validated index")
    }

    /// `X_Γ` as a [`PairLabel`].
    pub fn pair_label(&self) -> PairLabel {
        let (l, r) = self.units();
        PairLabel { mu: l.mu, i: l.row, j: l.col, nu: r.mu, k: r.row, l: r.col }
    }
}

/// All indices for `S_p × S_p`: pairs `(ξ, η)` in canonical order, then rows, then children.
pub fn index_set(p: usize) -> Result<Vec<MultiIndex>> {
    if p < 2 {
        return Err(Error::Unsupported("the Ĝ family needs p ≥ 2".into()));
    }
    let parts = enumerate_partitions(p)?;
    let mut out = Vec::new();
    for xi in &parts {
        for eta in &parts {
            let kids = common_children(xi, eta);
            if kids.is_empty() {
                continue;
            }
            for i in 0..xi.irrep_dimension() {
                for k in 0..eta.irrep_dimension() {
                    for kappa in &kids {
                        out.push(MultiIndex {
                            xi: xi.clone(),
                            eta: eta.clone(),
                            row_left: i,
                            row_right: k,
                            kappa: kappa.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_pd(p: usize, d: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::Unsupported("the Ĝ family needs p ≥ 2".into()));
    }
    if d < 2 {
        return Err(Error::Unsupported("the Ĝ family needs d ≥ 2".into()));
    }
    Ok(())
}

/// Closed-form Gram entry
/// `B̂_ΔΛ = δ^{μμ'} δ^{νν'} δ_{JI'} δ_{LK'} (d m_μ m_ν δ^{τω}/m_τ − m_ν δ^{μν}) / (d^p (d²−1))`
/// with `Δ = [μ, ν; J, L; τ]`, `Λ = [μ', ν'; I', K'; ω]`.
pub fn gram_entry(delta: &MultiIndex, lambda: &MultiIndex, d: usize) -> Result<f64> {
    let p = delta.p();
    check_pd(p, d)?;
    if lambda.p() != p {
        return Err(Error::WeightMismatch { left: p, right: lambda.p() });
    }
    if delta.xi != lambda.xi
        || delta.eta != lambda.eta
        || delta.row_left != lambda.row_left
        || delta.row_right != lambda.row_right
    {
        return Ok(0.0);
    }
    Ok(block_entry(&delta.xi, &delta.eta, &delta.kappa, &lambda.kappa, p, d))
}

fn block_entry(mu: &Partition, nu: &Partition, tau: &Partition, omega: &Partition, p: usize, d: usize) -> f64 {
    let df = d as f64;
    let (mm, mn, mt) = (mu.mult_f64(d), nu.mult_f64(d), tau.mult_f64(d));
    let first = if tau == omega && mt > 0.0 { df * mm * mn / mt } else { 0.0 };
    let second = if mu == nu { mn } else { 0.0 };
    (first - second) / (libm::pow(df, p as f64) * (df * df - 1.0))
}

/// Inner block `B_μν` over the common children of `μ` and `ν` (returned alongside).
pub fn gram_block(mu: &Partition, nu: &Partition, d: usize) -> Result<(Vec<Partition>, DMatrix<f64>)> {
    if mu.weight() != nu.weight() {
        return Err(Error::WeightMismatch { left: mu.weight(), right: nu.weight() });
    }
    let p = mu.weight();
    check_pd(p, d)?;
    let kids = common_children(mu, nu);
    if kids.is_empty() || (mu != nu && kids.len() != 1) {
        return Err(Error::Unrelated(mu.clone(), nu.clone()));
    }
    let n = kids.len();
    let m = DMatrix::from_fn(n, n, |a, b| block_entry(mu, nu, &kids[a], &kids[b], p, d));
    Ok((kids, m))
}

/// Closed-form Gram matrix over [`index_set`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GramMatrix {
    /// Degree.
    pub p: usize,
    /// Local dimension.
    pub d: usize,
    /// Row/column labels.
    pub index_set: Vec<MultiIndex>,
    /// Entries, row-major.
    pub entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    /// Entries as a matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.index_set.len();
        DMatrix::from_fn(n, n, |a, b| self.entries[a][b])
    }
}

/// Assembles `B̂^(p−1)` from [`gram_entry`].
pub fn gram_matrix(p: usize, d: usize) -> Result<GramMatrix> {
    check_pd(p, d)?;
    let index_set = index_set(p)?;
    let entries = index_set
        .iter()
        .map(|a| index_set.iter().map(|b| gram_entry(a, b, d)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(GramMatrix { p, d, index_set, entries })
}

/// Outcome of the invertibility criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invertibility {
    /// `true` iff `d·m_μ ≠ Σ_{α=μ−□} m_α` for every diagram with `m_μ > 0`.
    pub invertible: bool,
    /// Diagrams violating the criterion.
    pub witnesses: Vec<Partition>,
}

/// Invertibility of `B̂^(p−1)`: fails exactly for diagrams `μ` (with `m_μ > 0`)
/// where `d·m_μ = Σ_{α=μ−□} m_α`. Diagrams taller than `d` carry only vanishing
/// generators and are excluded from the criterion.
pub fn is_invertible(p: usize, d: usize) -> Result<Invertibility> {
    check_pd(p, d)?;
    let mut witnesses = Vec::new();
    for mu in enumerate_partitions(p)? {
        let m = mu.multiplicity(d);
        if m == 0 {
            continue;
        }
        let kids: u64 = mu.remove_box().iter().map(|a| a.multiplicity(d)).sum();
        if d as u64 * m == kids {
            witnesses.push(mu);
        }
    }
    Ok(Invertibility { invertible: witnesses.is_empty(), witnesses })
}

/// Orthonormal basis of the range of `Q^(p−1)` (`d^{2p} × (d²−1)`): the
/// normalized maximally entangled vector on the `p−1` wall arcs tensored with
/// the traceless part of the outer pair `(1, 1')`.
pub fn q_range_basis(p: usize, d: usize) -> Result<DMatrix<C64>> {
    check_pd(p, d)?;
    let n = 2 * p;
    let st: Vec<usize> = (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect();
    let arcs = p - 1;
    let norm = 1.0 / libm::sqrt(libm::pow(d as f64, arcs as f64));
    let arc_offsets: Vec<usize> = (0..d.pow(arcs as u32))
        .map(|u| {
            let mut rest = u;
            let mut off = 0;
            for t in 0..arcs {
                off += (rest % d) * (st[p - 1 - t] + st[p + t]);
                rest /= d;
            }
            off
        })
        .collect();
    let dim = d.pow(n as u32);
    // outer-pair vectors: |a b⟩ for a ≠ b, then Helmert-type traceless diagonals
    let mut outer: Vec<Vec<(usize, usize, f64)>> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if a != b {
                outer.push(vec![(a, b, 1.0)]);
            }
        }
    }
    for k in 1..d {
        let s = 1.0 / libm::sqrt((k * (k + 1)) as f64);
        let mut v: Vec<(usize, usize, f64)> = (0..k).map(|a| (a, a, s)).collect();
        v.push((k, k, -(k as f64) * s));
        outer.push(v);
    }
    let mut w = DMatrix::zeros(dim, outer.len());
    for (c, vec) in outer.iter().enumerate() {
        for &(a, b, x) in vec {
            let base = a * st[0] + b * st[n - 1];
            for &off in &arc_offsets {
                w[(base + off, c)] = re(x * norm);
            }
        }
    }
    Ok(w)
}

/// `(A ⊗ B) · W` for `p`-slot operators `A`, `B` without forming the Kronecker product.
pub fn kron_apply(a: &DenseOperator, b: &DenseOperator, w: &DMatrix<C64>) -> DMatrix<C64> {
    let (da, db) = (a.dim(), b.dim());
    assert_eq!(da * db, w.nrows(), "shape mismatch");
    let mut out = DMatrix::zeros(w.nrows(), w.ncols());
    let bt = b.matrix().transpose();
    for c in 0..w.ncols() {
        // column c as a da × db matrix M with w[i·db + j] = M[i, j]
        let m = DMatrix::from_fn(da, db, |i, j| w[(i * db + j, c)]);
        let y = crate::tensor::matmul(&crate::tensor::matmul(a.matrix(), &m), &bt);
        for i in 0..da {
            for j in 0..db {
                out[(i * db + j, c)] = y[(i, j)];
            }
        }
    }
    out
}

/// A dense generator together with its vanishing flag.
#[derive(Clone, Debug, PartialEq)]
pub struct FlaggedOperator {
    /// The operator.
    pub op: DenseOperator,
    /// `true` when the operator is identically zero (up to round-off).
    pub vanishes: bool,
}

/// The `Ĝ` family in factored form, with the unit registry, `W` and the `U_Γ`.
#[derive(Clone, Debug)]
pub struct GhatFamily {
    p: usize,
    d: usize,
    reg: UnitRegistry,
    indices: Vec<MultiIndex>,
    w: DMatrix<C64>,
    u: Vec<DMatrix<C64>>,
    q: Option<DenseOperator>,
}

impl GhatFamily {
    /// Builds the registry, `W` and every `U_Γ`; the dense `Q^(p−1)` is kept
    /// when `d^{2p} ≤` [`DENSE_LIMIT`].
    pub fn new(p: usize, d: usize) -> Result<Self> {
        check_pd(p, d)?;
        let reg = UnitRegistry::new(p, d)?;
        let indices = index_set(p)?;
        let w = q_range_basis(p, d)?;
        let u = indices
            .iter()
            .map(|g| {
                let (l, r) = g.units();
                Ok(kron_apply(reg.lookup(&l)?, reg.lookup(&r)?, &w))
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = d.pow(2 * p as u32);
        let q = if dim <= DENSE_LIMIT { Some(q_projector(p - 1, p, d)?) } else { None };
        Ok(Self { p, d, reg, indices, w, u, q })
    }

    /// Degree.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Local dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Index set.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// Unit registry.
    pub fn registry(&self) -> &UnitRegistry {
        &self.reg
    }

    /// Orthonormal range basis `W` of `Q^(p−1)`.
    pub fn range_basis(&self) -> &DMatrix<C64> {
        &self.w
    }

    /// Thin factor `U_Γ = X_Γ W`.
    pub fn factor(&self, gamma: usize) -> &DMatrix<C64> {
        &self.u[gamma]
    }

    fn dense_q(&self) -> Result<&DenseOperator> {
        self.q.as_ref().ok_or_else(|| {
            Error::Unsupported(format!("dense operators above dimension {DENSE_LIMIT} (p={}, d={})", self.p, self.d))
        })
    }

    /// Dense `X_1 Q^(p−1) X_2†` for arbitrary two-sided unit products.
    pub fn ghat_labels(&self, x1: &PairLabel, x2: &PairLabel) -> Result<FlaggedOperator> {
        let q = self.dense_q()?;
        let a = x1.operator(&self.reg, FAR_ENDING)?;
        let b = x2.operator(&self.reg, FAR_ENDING)?;
        let op = &(&a * q) * &b.adjoint();
        let vanishes = op.is_zero(1e-12);
        Ok(FlaggedOperator { op, vanishes })
    }

    /// Dense `Ĝ_ΓΔ` with the free columns of both indices fixed by the given paths.
    pub fn ghat_with_free(&self, gamma: usize, delta: usize, free_g: &BranchPath, free_d: &BranchPath) -> Result<DenseOperator> {
        let q = self.dense_q()?;
        let (l1, r1) = self.indices[gamma].units_with(free_g)?;
        let (l2, r2) = self.indices[delta].units_with(free_d)?;
        let a = self.reg.lookup(&l1)?.kron(self.reg.lookup(&r1)?);
        let b = self.reg.lookup(&l2)?.kron(self.reg.lookup(&r2)?);
        Ok(&(&a * q) * &b.adjoint())
    }

    /// Dense `Ĝ_ΓΔ` (canonical free columns).
    pub fn ghat_dense(&self, gamma: usize, delta: usize) -> Result<DenseOperator> {
        let fg = branching_paths(&self.indices[gamma].kappa).remove(0);
        let fd = branching_paths(&self.indices[delta].kappa).remove(0);
        self.ghat_with_free(gamma, delta, &fg, &fd)
    }

    /// `Ĝ_ΓΔ = U_Γ U_Δ†` assembled from the thin factors.
    pub fn ghat_factored(&self, gamma: usize, delta: usize) -> DenseOperator {
        let m = crate::tensor::matmul(&self.u[gamma], &self.u[delta].adjoint());
        DenseOperator::from_matrix(self.d, 2 * self.p, m).expect("square factor product")
    }

    /// Measured Gram matrix `U_Δ† U_Λ`, reduced to its scalar part
    /// `Tr(U_Δ† U_Λ)/(d²−1)` (equal to `Tr(Q X_Δ† X_Λ)/Tr Q`).
    pub fn measured_gram(&self) -> DMatrix<f64> {
        let n = self.indices.len();
        let r = (self.d * self.d - 1) as f64;
        DMatrix::from_fn(n, n, |a, b| (self.u[a].adjoint() * &self.u[b]).trace().re / r)
    }

    /// Checks `U_Δ† U_Λ = B̂_ΔΛ · 1` for every pair (hence the quasi-matrix law
    /// for every quadruple) and the block structure of `B̂`.
    pub fn quasi_law_check(&self, tol: f64) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new("gram.quasi_law", self.p, self.d, tol);
        let n = self.indices.len();
        let k = self.w.ncols();
        let scale = libm::pow(self.d as f64, self.p as f64);
        for a in 0..n {
            for b in 0..n {
                let m = self.u[a].adjoint() * &self.u[b];
                let want = gram_entry(&self.indices[a], &self.indices[b], self.d)?;
                let dev = (m - DMatrix::<C64>::identity(k, k) * re(want)).camax();
                // the entries are O(1/d^p); compare on that scale
                rep.record(dev * scale / scale.max(1.0), || {
                    format!("U†U {:?} / {:?}", self.indices[a], self.indices[b])
                });
            }
        }
        Ok(rep)
    }

    /// Dense check of `Ĝ_ΓΔ Ĝ_ΛΠ = B̂_ΔΛ Ĝ_ΓΠ` for the given quadruples, plus
    /// agreement of the dense and factored forms.
    pub fn quasi_law_dense(&self, quads: &[(usize, usize, usize, usize)], tol: f64) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new("gram.quasi_law_dense", self.p, self.d, tol);
        for &(g, dl, l, pi) in quads {
            let a = self.ghat_dense(g, dl)?;
            let b = self.ghat_dense(l, pi)?;
            let c = self.ghat_dense(g, pi)?;
            let coeff = gram_entry(&self.indices[dl], &self.indices[l], self.d)?;
            let lhs = &a * &b;
            rep.record(normalized_deviation(&lhs, &c.scale_re(coeff)), || format!("{g},{dl},{l},{pi}"));
            rep.record(normalized_deviation(&a, &self.ghat_factored(g, dl)), || format!("factored {g},{dl}"));
        }
        Ok(rep)
    }

    /// Pure basis; degenerate blocks are reduced to their regular part when
    /// `allow_reduced`, otherwise a singular Gram matrix is an error.
    pub fn pure_basis(&self, allow_reduced: bool) -> Result<PureBasis> {
        let inv = is_invertible(self.p, self.d)?;
        if !inv.invertible && !allow_reduced {
            return Err(Error::SingularGram(inv.witnesses));
        }
        // group indices by (ξ, η, I, K): B̂ restricted there is the inner block B_ξη
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (a, g) in self.indices.iter().enumerate() {
            match groups.iter_mut().find(|grp| {
                let h = &self.indices[grp[0]];
                h.xi == g.xi && h.eta == g.eta && h.row_left == g.row_left && h.row_right == g.row_right
            }) {
                Some(grp) => grp.push(a),
                None => groups.push(vec![a]),
            }
        }
        let blocks: Vec<DMatrix<f64>> = groups
            .iter()
            .map(|grp| DMatrix::from_fn(grp.len(), grp.len(), |x, y| block_entry_of(&self.indices, grp, x, y, self.d)))
            .collect();
        let top = blocks
            .iter()
            .flat_map(|b| nalgebra::SymmetricEigen::new(b.clone()).eigenvalues.iter().map(|v| v.abs()).collect::<Vec<_>>())
            .fold(0.0f64, f64::max);
        let mut labels = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut dropped = Vec::new();
        for (grp, b) in groups.iter().zip(&blocks) {
            let eig = nalgebra::SymmetricEigen::new(b.clone());
            let regular = eig.eigenvalues.iter().all(|v| v.abs() > RANK_CUTOFF * top);
            if regular {
                let binv = b.clone().try_inverse().ok_or_else(|| Error::SingularGram(vec![self.indices[grp[0]].xi.clone()]))?;
                for (x, &a) in grp.iter().enumerate() {
                    let mut l = DMatrix::zeros(self.u[a].nrows(), self.u[a].ncols());
                    for (y, &c) in grp.iter().enumerate() {
                        l += &self.u[c] * re(binv[(y, x)]);
                    }
                    labels.push(BasisLabel::Index(self.indices[a].clone()));
                    left.push(l);
                    right.push(self.u[a].clone());
                }
            } else {
                let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
                for (mode, &e) in order.iter().enumerate() {
                    let lam = eig.eigenvalues[e];
                    let h = &self.indices[grp[0]];
                    if lam.abs() <= RANK_CUTOFF * top {
                        dropped.push(BasisLabel::Eigen {
                            xi: h.xi.clone(),
                            eta: h.eta.clone(),
                            row_left: h.row_left,
                            row_right: h.row_right,
                            mode,
                            eigenvalue: lam,
                        });
                        continue;
                    }
                    let mut ut = DMatrix::zeros(self.u[grp[0]].nrows(), self.u[grp[0]].ncols());
                    for (y, &c) in grp.iter().enumerate() {
                        ut += &self.u[c] * re(eig.eigenvectors[(y, e)]);
                    }
                    let s = ut * re(1.0 / libm::sqrt(lam));
                    labels.push(BasisLabel::Eigen {
                        xi: h.xi.clone(),
                        eta: h.eta.clone(),
                        row_left: h.row_left,
                        row_right: h.row_right,
                        mode,
                        eigenvalue: lam,
                    });
                    left.push(s.clone());
                    right.push(s);
                }
            }
        }
        Ok(PureBasis { p: self.p, d: self.d, labels, left, right, dropped })
    }

    /// Gram matrix (Frobenius) of the whole `Ĝ` family, computed from the factors.
    pub fn family_gram(&self) -> DMatrix<C64> {
        lowrank_gram(&self.u, &self.u, &all_pairs(self.u.len()))
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
}

fn block_entry_of(ix: &[MultiIndex], grp: &[usize], x: usize, y: usize, d: usize) -> f64 {
    gram_entry(&ix[grp[x]], &ix[grp[y]], d).expect("validated indices")
}

/// Frobenius Gram matrix of the operators `L_a R_b†` for the listed `(a, b)`:
/// `⟨L_a R_b†, L_c R_e†⟩ = Tr[(L_a† L_c)(R_e† R_b)]`. The thin products are
/// formed once per factor pair.
pub fn lowrank_gram(left: &[DMatrix<C64>], right: &[DMatrix<C64>], pairs: &[(usize, usize)]) -> DMatrix<C64> {
    let ll: Vec<Vec<DMatrix<C64>>> = left.iter().map(|a| left.iter().map(|c| a.adjoint() * c).collect()).collect();
    let rr: Vec<Vec<DMatrix<C64>>> = right.iter().map(|e| right.iter().map(|b| e.adjoint() * b).collect()).collect();
    let n = pairs.len();
    let mut g = DMatrix::zeros(n, n);
    for x in 0..n {
        let (a, b) = pairs[x];
        for y in x..n {
            let (c, e) = pairs[y];
            let v = ll[a][c].component_mul(&rr[e][b].transpose()).sum();
            g[(x, y)] = v;
            g[(y, x)] = v.conj();
        }
    }
    g
}

/// Label of a pure-basis row/column.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BasisLabel {
    /// An original index (its block of `B̂` is regular).
    Index(MultiIndex),
    /// Eigenvector `mode` of a degenerate inner block `B_ξη` at rows `(I, K)`.
    Eigen {
        /// Left irrep.
        xi: Partition,
        /// Right irrep.
        eta: Partition,
        /// Left row.
        row_left: usize,
        /// Right row.
        row_right: usize,
        /// Eigenvector position, largest eigenvalue first.
        mode: usize,
        /// Its eigenvalue.
        eigenvalue: f64,
    },
}

/// Pure matrix basis `G_ab = L_a R_b†` with `G_ab G_cd = δ_bc G_ad`.
#[derive(Clone, Debug)]
pub struct PureBasis {
    p: usize,
    d: usize,
    labels: Vec<BasisLabel>,
    left: Vec<DMatrix<C64>>,
    right: Vec<DMatrix<C64>>,
    dropped: Vec<BasisLabel>,
}

impl PureBasis {
    /// Number of labels (the basis has `len()²` elements).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// `true` for an empty basis.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Row/column labels.
    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// Null directions removed from degenerate blocks.
    pub fn dropped(&self) -> &[BasisLabel] {
        &self.dropped
    }

    /// Dense `G_ab`.
    pub fn element(&self, a: usize, b: usize) -> DenseOperator {
        let m = crate::tensor::matmul(&self.left[a], &self.right[b].adjoint());
        DenseOperator::from_matrix(self.d, 2 * self.p, m).expect("square factor product")
    }

    /// Exhaustive law check in factored form: `R_b† L_c = δ_bc · 1`.
    pub fn law_check(&self, tol: f64) -> VerificationReport {
        let mut rep = VerificationReport::new("gram.pure_law", self.p, self.d, tol);
        for b in 0..self.len() {
            for c in 0..self.len() {
                let m = self.right[b].adjoint() * &self.left[c];
                let k = m.nrows();
                let want = if b == c { DMatrix::<C64>::identity(k, k) } else { DMatrix::zeros(k, k) };
                rep.record((m - want).camax(), || format!("{:?} / {:?}", self.labels[b], self.labels[c]));
            }
        }
        rep
    }

    /// Dense law check `G_ab G_cd = δ_bc G_ad` on the given quadruples.
    pub fn law_check_dense(&self, quads: &[(usize, usize, usize, usize)], tol: f64) -> Result<VerificationReport> {
        let dim = self.d.pow(2 * self.p as u32);
        if dim > DENSE_LIMIT {
            return Err(Error::Unsupported(format!("dense operators above dimension {DENSE_LIMIT}")));
        }
        let mut rep = VerificationReport::new("gram.pure_law_dense", self.p, self.d, tol);
        let zero = DenseOperator::zeros(self.d, 2 * self.p);
        for &(a, b, c, e) in quads {
            let lhs = &self.element(a, b) * &self.element(c, e);
            let rhs = if b == c { self.element(a, e) } else { zero.clone() };
            rep.record(normalized_deviation(&lhs, &rhs), || format!("{a},{b},{c},{e}"));
        }
        Ok(rep)
    }

    /// Frobenius Gram matrix of all `len()²` elements.
    pub fn family_gram(&self) -> DMatrix<C64> {
        lowrank_gram(&self.left, &self.right, &all_pairs(self.len()))
    }

    /// Dimension of the span of the basis, of the `Ĝ` family, and of both together.
    pub fn span_ranks(&self, family: &GhatFamily) -> (usize, usize, usize) {
        let n = self.len();
        let m = family.u.len();
        let mut left = self.left.clone();
        left.extend(family.u.iter().cloned());
        let mut right = self.right.clone();
        right.extend(family.u.iter().cloned());
        let pure = all_pairs(n);
        let ghat: Vec<(usize, usize)> = all_pairs(m).into_iter().map(|(a, b)| (a + n, b + n)).collect();
        let both: Vec<(usize, usize)> = pure.iter().chain(&ghat).copied().collect();
        let rank = |pairs: &[(usize, usize)]| rank_of_psd(&lowrank_gram(&left, &right, pairs), RANK_CUTOFF);
        (rank(&pure), rank(&ghat), rank(&both))
    }
}

/// Convenience: `pure_basis` for `(p, d)`.
pub fn pure_basis(p: usize, d: usize, allow_reduced: bool) -> Result<PureBasis> {
    GhatFamily::new(p, d)?.pure_basis(allow_reduced)
}

/// Convenience: dense `Ĝ_ΓΔ` for `(p, d)`.
pub fn ghat(gamma: &MultiIndex, delta: &MultiIndex, d: usize) -> Result<DenseOperator> {
    let fam = GhatFamily::new(gamma.p(), d)?;
    let g = fam.indices.iter().position(|x| x == gamma).ok_or_else(|| Error::InvalidArgument(format!("{gamma:?}")))?;
    let h = fam.indices.iter().position(|x| x == delta).ok_or_else(|| Error::InvalidArgument(format!("{delta:?}")))?;
    fam.ghat_dense(g, h)
}

/// Labels of `Tr[(A1 V^(r) B1)(A2 V^(s) B2)]`, each a two-sided unit product.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapLabels {
    /// Left factor of the first sandwich.
    pub a1: PairLabel,
    /// Right factor of the first sandwich.
    pub b1: PairLabel,
    /// Left factor of the second sandwich.
    pub a2: PairLabel,
    /// Right factor of the second sandwich.
    pub b2: PairLabel,
    /// Orientation of all units.
    pub orient: (Orientation, Orientation),
}

/// The overlap computed two ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overlap {
    /// Direct dense trace.
    pub dense: C64,
    /// Via unit products, arc contraction and the ping-pong trace.
    pub reduced: C64,
}

/// Product of two-sided unit labels by the unit law (`None` when it vanishes).
pub fn pair_product(x: &PairLabel, y: &PairLabel) -> Option<PairLabel> {
    if x.mu != y.mu || x.nu != y.nu || x.j != y.i || x.l != y.k {
        return None;
    }
    Some(PairLabel { mu: x.mu.clone(), i: x.i.clone(), j: y.j.clone(), nu: x.nu.clone(), k: x.k.clone(), l: y.l.clone() })
}

/// `Tr[(A1 V^(r) B1)(A2 V^(s) B2)]`, `0 ≤ r < s ≤ p`, computed densely and by
/// reduction: with `Z1 = B1 A2`, `Z2 = B2 A1` (unit law) the overlap equals
/// `Tr[V^(r) Z1 V^(s) Z2] = Tr[(X ⊗ 1) V^(s) Z2]` with `X = contract(Z1, r)`;
/// expanding `X = Σ e_ab ⊗ X_ab` across the wall, each term is an
/// [`arc_pair_trace`].
pub fn overlap(reg: &UnitRegistry, labels: &OverlapLabels, r: usize, s: usize) -> Result<Overlap> {
    let p = reg.p();
    let d = reg.d();
    if r >= s || s > p {
        return Err(Error::InvalidArgument(format!("need r < s ≤ p, got r={r}, s={s}, p={p}")));
    }
    let op = |x: &PairLabel| x.operator(reg, labels.orient);
    let vr = arc_operator(&ArcConfig::new(p, d, r)?);
    let vs = arc_operator(&ArcConfig::new(p, d, s)?);
    let first = &(&op(&labels.a1)? * &vr) * &op(&labels.b1)?;
    let second = &(&op(&labels.a2)? * &vs) * &op(&labels.b2)?;
    let dense = first.trace_product(&second);

    let (z1, z2) = match (pair_product(&labels.b1, &labels.a2), pair_product(&labels.b2, &labels.a1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Overlap { dense, reduced: re(0.0) }),
    };
    let x = contract(&op(&z1)?, r)?;
    let (zl, zr) = z2.units(labels.orient)?;
    let el = reg.lookup(&zl)?;
    let er = reg.lookup(&zr)?;
    let outer = p - r;
    let dl = d.pow(outer as u32);
    let mut reduced = re(0.0);
    for a in 0..dl {
        for b in 0..dl {
            // X_ab: the right block of X at left row a, left column b
            let xab = DenseOperator::from_fn(d, outer, |u, v| x.get(a * dl + u, b * dl + v));
            if xab.max_abs() == 0.0 {
                continue;
            }
            let mut eab = DenseOperator::zeros(d, outer);
            eab.matrix_mut()[(a, b)] = re(1.0);
            let left_slots: Vec<usize> = (0..outer).collect();
            let right_slots: Vec<usize> = (r..p).collect();
            let pl = el * &eab.embed(&left_slots, p)?;
            let pr = er * &xab.embed(&right_slots, p)?;
            reduced += arc_pair_trace(&pl, &pr, s)?;
        }
    }
    Ok(Overlap { dense, reduced })
}

/// Deterministic label sample for [`overlap_check`]: `n` quadruples per
/// orientation, every other one chained so that the cyclic product
/// `A1·B1·A2·B2` survives the unit law.
pub fn overlap_samples(p: usize, n: usize) -> Result<Vec<OverlapLabels>> {
    let all = PairLabel::enumerate(p)?;
    let m = all.len();
    let mut out = Vec::with_capacity(2 * n);
    for orient in [FAR_ENDING, WALL_ENDING] {
        for k in 0..n {
            let a1 = all[(k * 7) % m].clone();
            let b1 = if k % 2 == 0 {
                let after_a1: Vec<&PairLabel> = all.iter().filter(|x| pair_product(&a1, x).is_some()).collect();
                after_a1[(k / 2) % after_a1.len()].clone()
            } else {
                all[(k * 13 + 1) % m].clone()
            };
            let (a2, b2) = if k % 2 == 0 {
                let after_b1: Vec<&PairLabel> = all.iter().filter(|x| pair_product(&b1, x).is_some()).collect();
                let before_a1: Vec<&PairLabel> = all.iter().filter(|x| pair_product(x, &a1).is_some()).collect();
                (after_b1[k % after_b1.len()].clone(), before_a1[(k / 2) % before_a1.len()].clone())
            } else {
                (all[(k * 5) % m].clone(), all[(k * 3 + 2) % m].clone())
            };
            out.push(OverlapLabels { a1, b1, a2, b2, orient });
        }
    }
    Ok(out)
}

/// Compares the dense and reduced overlap for every sample and every arc
/// pair `r < s` with `r ≥ r_min`. Returns the report and the number of
/// overlaps that were non-zero (so a pass is never vacuous).
pub fn overlap_check(reg: &UnitRegistry, samples: &[OverlapLabels], r_min: usize, tol: f64) -> Result<(VerificationReport, usize)> {
    let p = reg.p();
    let mut rep = VerificationReport::new("gram.overlap", p, reg.d(), tol);
    let mut nonzero = 0;
    for (idx, labels) in samples.iter().enumerate() {
        for s in 1..=p {
            for r in r_min..s {
                let o = overlap(reg, labels, r, s)?;
                if o.dense.norm() > tol {
                    nonzero += 1;
                }
                let scale = o.dense.norm().max(1.0);
                rep.record((o.dense - o.reduced).norm() / scale, || format!("sample {idx}, r={r}, s={s}"));
            }
        }
    }
    Ok((rep, nonzero))
}

/// Human-readable summary of a [`BasisLabel`].
pub fn describe(label: &BasisLabel) -> String {
    match label {
        BasisLabel::Index(m) => format!("[{},{};{},{};{}]", m.xi, m.eta, m.row_left + 1, m.row_right + 1, m.kappa),
        BasisLabel::Eigen { xi, eta, row_left, row_right, mode, eigenvalue } => {
            format!("[{xi},{eta};{},{};#{mode} λ={eigenvalue:.3e}]", row_left + 1, row_right + 1)
        }
    }
}

/// Column-vector helper used by tests and the CLI: `W†·v`.
pub fn project_on_range(w: &DMatrix<C64>, v: &DVector<C64>) -> DVector<C64> {
    w.adjoint() * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::span_rank;
    use crate::symgroup::Orientation;
    use crate::walled::q_projector;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn index_set_sizes() {
        assert_eq!(index_set(2).unwrap().len(), 4);
        assert_eq!(index_set(3).unwrap().len(), 18);
        assert!(index_set(1).is_err());
        assert!(MultiIndex::new(part(&[3]), part(&[1, 1, 1]), 0, 0, part(&[2])).is_err());
        assert!(MultiIndex::new(part(&[2, 1]), part(&[2, 1]), 2, 0, part(&[2])).is_err());
        assert!(MultiIndex::new(part(&[2, 1]), part(&[2, 1]), 1, 0, part(&[1, 1])).is_ok());
    }

    #[test]
    fn range_basis_factors_q() {
        for (p, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let w = q_range_basis(p, d).unwrap();
            assert_eq!(w.ncols(), d * d - 1);
            let q = q_projector(p - 1, p, d).unwrap();
            assert!((&w * w.adjoint() - q.matrix()).camax() < 1e-14);
            assert!((w.adjoint() * &w - DMatrix::identity(d * d - 1, d * d - 1)).camax() < 1e-14);
        }
    }

    #[test]
    fn kron_apply_matches_dense() {
        let reg = UnitRegistry::new(2, 3).unwrap();
        let a = reg.unit(1, 0, 0, Orientation::LeftToRight);
        let b = reg.unit(0, 0, 0, Orientation::RightToLeft);
        let w = q_range_basis(2, 3).unwrap();
        let dense = a.kron(b).matrix() * &w;
        assert!((kron_apply(a, b, &w) - dense).camax() < 1e-14);
    }

    #[test]
    fn gram_entry_example_and_blocks() {
        let s = part(&[2]);
        let one = part(&[1]);
        let g = MultiIndex::new(s.clone(), s.clone(), 0, 0, one.clone()).unwrap();
        assert!((gram_entry(&g, &g, 3).unwrap() - 5.0 / 12.0).abs() < 1e-15);
        let a = part(&[1, 1]);
        let h = MultiIndex::new(a.clone(), s.clone(), 0, 0, one.clone()).unwrap();
        assert_eq!(gram_entry(&g, &h, 3).unwrap(), 0.0);
        // p = 2 reproduces (1/4d) diag(d+2, d, d, d−2)
        for d in [2, 3, 4, 5] {
            let gm = gram_matrix(2, d).unwrap();
            let df = d as f64;
            let want = [df + 2.0, df, df, df - 2.0];
            for (k, w) in want.iter().enumerate() {
                assert!((gm.entries[k][k] - w / (4.0 * df)).abs() < 1e-15);
            }
        }
        // off-diagonal blocks are one-dimensional with m_μ m_ν/(d^{p−1}(d²−1) m_ω)
        let c = part(&[2, 1]);
        let (kids, b) = gram_block(&part(&[3]), &c, 3).unwrap();
        assert_eq!(kids, vec![part(&[2])]);
        let want = 10.0 * 8.0 / (9.0 * 8.0 * 6.0);
        assert!((b[(0, 0)] - want).abs() < 1e-15);
        let (kids, b) = gram_block(&c, &c, 3).unwrap();
        assert_eq!(kids.len(), 2);
        assert!((&b - b.transpose()).amax() == 0.0);
        assert!(gram_block(&part(&[3]), &part(&[1, 1, 1]), 3).is_err());
    }

    #[test]
    fn invertibility_criterion() {
        let r = is_invertible(2, 2).unwrap();
        assert!(!r.invertible);
        assert_eq!(r.witnesses, vec![part(&[1, 1])]);
        assert!(is_invertible(2, 3).unwrap().invertible);
        let r = is_invertible(3, 3).unwrap();
        assert_eq!(r.witnesses, vec![part(&[1, 1, 1])]);
        assert!(is_invertible(3, 4).unwrap().invertible);
        assert_eq!(is_invertible(3, 2).unwrap().witnesses, vec![part(&[2, 1])]);
        // the criterion agrees with the spectrum of the assembled matrix
        for (p, d) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
            let m = gram_matrix(p, d).unwrap().matrix();
            let eig = nalgebra::SymmetricEigen::new(m.clone());
            let top = eig.eigenvalues.amax();
            let singular = eig.eigenvalues.iter().any(|v| v.abs() < 1e-9 * top);
            assert_eq!(singular, !is_invertible(p, d).unwrap().invertible, "p={p} d={d}");
        }
    }

    #[test]
    fn measured_gram_matches_closed_form() {
        for (p, d) in [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4)] {
            let fam = GhatFamily::new(p, d).unwrap();
            let gm = gram_matrix(p, d).unwrap().matrix();
            assert!((fam.measured_gram() - &gm).amax() < 1e-13, "p={p} d={d}");
            let rep = fam.quasi_law_check(1e-12).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_eq!(rep.n_cases, fam.indices().len().pow(2));
        }
    }

    #[test]
    fn dense_quasi_law_and_free_index_independence() {
        let fam = GhatFamily::new(3, 3).unwrap();
        let n = fam.indices().len();
        let quads: Vec<_> = (0..40).map(|k| (k % n, (k * 7 + 1) % n, (k * 5 + 2) % n, (k * 11 + 3) % n)).collect();
        let rep = fam.quasi_law_dense(&quads, 1e-10).unwrap();
        assert!(rep.pass, "{rep:?}");
        // free columns: every path of κ gives the same operator
        for g in 0..n {
            let kappa = fam.indices()[g].kappa.clone();
            let paths = branching_paths(&kappa);
            let reference = fam.ghat_dense(g, (g + 3) % n).unwrap();
            let fd = branching_paths(&fam.indices()[(g + 3) % n].kappa).remove(0);
            for free in &paths {
                let other = fam.ghat_with_free(g, (g + 3) % n, free, &fd).unwrap();
                assert!(other.max_abs_diff(&reference) < 1e-11);
            }
            // adjoint symmetry
            let back = fam.ghat_dense((g + 3) % n, g).unwrap();
            assert!(back.max_abs_diff(&reference.adjoint()) < 1e-12);
        }
    }

    #[test]
    fn unrelated_pairs_vanish() {
        let fam = GhatFamily::new(3, 3).unwrap();
        let row = part(&[3]);
        let col = part(&[1, 1, 1]);
        let rp = branching_paths(&row).remove(0);
        let cp = branching_paths(&col).remove(0);
        let x = PairLabel { mu: row, i: rp.clone(), j: rp, nu: col, k: cp.clone(), l: cp };
        let g = fam.ghat_labels(&x, &x).unwrap();
        assert!(g.vanishes);
        let y = fam.indices()[0].pair_label();
        assert!(!fam.ghat_labels(&y, &y).unwrap().vanishes);
    }

    #[test]
    fn pure_basis_regular_cases() {
        for (p, d) in [(2, 3), (2, 4), (3, 4)] {
            let fam = GhatFamily::new(p, d).unwrap();
            let pb = fam.pure_basis(false).unwrap();
            assert_eq!(pb.len(), fam.indices().len());
            assert!(pb.dropped().is_empty());
            let rep = pb.law_check(1e-10);
            assert!(rep.pass, "{rep:?}");
            if d.pow(2 * p as u32) <= DENSE_LIMIT {
                let n = pb.len();
                let quads: Vec<_> = (0..n * n).map(|k| (k % n, (k / n) % n, (k * 3) % n, (k * 5 + 1) % n)).collect();
                assert!(pb.law_check_dense(&quads, 1e-10).unwrap().pass);
                // idempotents
                for a in 0..n {
                    let g = pb.element(a, a);
                    assert!((&g * &g).max_abs_diff(&g) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pure_basis_degenerate_cases() {
        assert_eq!(pure_basis(2, 2, false).unwrap_err(), Error::SingularGram(vec![part(&[1, 1])]));
        let pb = pure_basis(2, 2, true).unwrap();
        assert_eq!(pb.len(), 3);
        assert_eq!(pb.dropped().len(), 1);
        assert!(pb.law_check(1e-10).pass);
        let fam = GhatFamily::new(3, 3).unwrap();
        let pb = fam.pure_basis(true).unwrap();
        assert_eq!(pb.len(), 17);
        assert!(pb.law_check(1e-10).pass);
        let (a, b, c) = pb.span_ranks(&fam);
        assert_eq!((a, b, c), (17 * 17, 17 * 17, 17 * 17));
    }

    #[test]
    fn p2_pure_basis_matches_explicit_family() {
        let d = 3;
        let fam = GhatFamily::new(2, d).unwrap();
        let pb = fam.pure_basis(false).unwrap();
        let q1 = q_projector(1, 2, d).unwrap();
        let reg = fam.registry();
        let b1 = [(d as f64 + 2.0), d as f64, d as f64, d as f64 - 2.0].map(|x| x / (4.0 * d as f64));
        // indices: (S,S), (S,A), (A,S), (A,A); the unit on a side is E_S (μ index 0) or E_A (index 1)
        let e = |k: usize| reg.unit(k, 0, 0, Orientation::LeftToRight).clone();
        let lab = [(0, 0), (0, 1), (1, 0), (1, 1)];
        for (x, &(i, j)) in lab.iter().enumerate() {
            for (y, &(k, l)) in lab.iter().enumerate() {
                let explicit = &(&e(i).kron(&e(j)) * &q1) * &e(k).kron(&e(l));
                let g = pb.element(x, y);
                assert!(g.max_abs_diff(&explicit.scale_re(1.0 / b1[x])) < 1e-12);
            }
        }
        let fam_ops: Vec<DenseOperator> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| pb.element(a, b)).collect();
        assert_eq!(span_rank(&fam_ops, 1e-9).unwrap(), 16);
    }

    #[test]
    fn overlaps_agree() {
        for (p, d) in [(2, 2), (2, 3), (3, 2)] {
            let reg = UnitRegistry::new(p, d).unwrap();
            let samples = overlap_samples(p, 30).unwrap();
            let (rep, nonzero) = overlap_check(&reg, &samples, 0, 1e-9).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(nonzero > rep.n_cases / 10, "{nonzero} of {}", rep.n_cases);
            let l = PairLabel::enumerate(p).unwrap().remove(0);
            let labels = OverlapLabels { a1: l.clone(), b1: l.clone(), a2: l.clone(), b2: l, orient: FAR_ENDING };
            assert!(overlap(&reg, &labels, 1, 1).is_err());
        }
    }
}
