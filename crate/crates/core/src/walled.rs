//! Arc operators, the projectors `Q^(k)`, arc contraction and the closed-form
//! trace/sandwich coefficients of `E ⊗ E` against arcs.
//!
//! Operators live on `2p` flat slots: labels `1, …, p` on slots `0..p` and the
//! primed labels `p', …, 1'` on slots `p..2p` (see [`crate::tensor`]). An arc
//! joins `k` and `k'`, i.e. flat slots `k−1` and `2p−k`; `V^(r)` carries the `r`
//! arcs nearest the wall, `k = p−r+1, …, p`, each acting as `d·P⁺`.
//!
//! Two-sided unit products `E^μ_IJ ⊗ E^ν_KL` enter the closed forms below with
//! both Young–Yamanouchi chains *ending at the slots farthest from the wall*
//! (slots `1` and `1'`), which are exactly the slots not covered by the
//! `p−1` wall arcs: the left factor uses [`Orientation::RightToLeft`] and the
//! right factor (whose slot order runs `p', …, 1'`) uses
//! [`Orientation::LeftToRight`]. See [`FAR_ENDING`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrixunits::{UnitLabel, UnitRegistry};
use crate::oracle::{normalized_deviation, scalar_deviation, VerificationReport};
use crate::partitions::{enumerate_partitions, Partition};
use crate::symgroup::{branching_paths, enumerate_group, BranchPath, Orientation, Permutation};
use crate::tensor::{perm_operator, re, DenseOperator};

/// Orientations `(left, right)` under which the chains end at the far slots `1`, `1'`.
pub const FAR_ENDING: (Orientation, Orientation) = (Orientation::RightToLeft, Orientation::LeftToRight);

/// Orientations `(left, right)` under which the chains end at the wall slots `p`, `p'`.
pub const WALL_ENDING: (Orientation, Orientation) = (Orientation::LeftToRight, Orientation::RightToLeft);

/// Number of wall-adjacent arcs on a `2p`-slot system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcConfig {
    p: usize,
    d: usize,
    r: usize,
}

impl ArcConfig {
    /// Validated configuration, `0 ≤ r ≤ p`, `d ≥ 1`.
    pub fn new(p: usize, d: usize, r: usize) -> Result<Self> {
        if r > p {
            return Err(Error::InvalidArgument(format!("{r} arcs on {p} pairs")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("local dimension must be positive".into()));
        }
        Ok(Self { p, d, r })
    }

    /// Pairs per side.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Local dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of arcs.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Arc labels `k` (joined to `k'`), innermost first.
    pub fn arc_labels(&self) -> Vec<usize> {
        (0..self.r).map(|t| self.p - t).collect()
    }

    /// Flat slot pairs of the arcs, innermost first.
    pub fn slot_pairs(&self) -> Vec<(usize, usize)> {
        self.arc_labels().into_iter().map(|k| (k - 1, 2 * self.p - k)).collect()
    }
}

fn strides(d: usize, n: usize) -> Vec<usize> {
    (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect()
}

/// Operator with an arc `k — k'` for every label in `labels` and identity
/// elsewhere, on `2p` slots.
pub fn arc_set_operator(p: usize, d: usize, labels: &[usize]) -> Result<DenseOperator> {
    let n = 2 * p;
    let mut pairs = Vec::with_capacity(labels.len());
    for &k in labels {
        if k == 0 || k > p {
            return Err(Error::SlotOutOfRange { slot: k, arity: p });
        }
        if pairs.iter().any(|&(a, _)| a == k - 1) {
            return Err(Error::InvalidArgument(format!("arc {k} listed twice")));
        }
        pairs.push((k - 1, 2 * p - k));
    }
    let st = strides(d, n);
    let mut op = DenseOperator::zeros(d, n);
    let dim = op.dim();
    let narcs = pairs.len();
    let combos = d.pow(narcs as u32);
    let m = op.matrix_mut();
    for b in 0..dim {
        let digit = |x: usize, s: usize| (x / st[s]) % d;
        if pairs.iter().any(|&(x, y)| digit(b, x) != digit(b, y)) {
            continue;
        }
        // clear the arc digits of b, then enumerate every assignment for the row
        let base = b - pairs.iter().map(|&(x, y)| digit(b, x) * (st[x] + st[y])).sum::<usize>();
        for u in 0..combos {
            let mut a = base;
            let mut rest = u;
            for &(x, y) in &pairs {
                a += (rest % d) * (st[x] + st[y]);
                rest /= d;
            }
            m[(a, b)] = re(1.0);
        }
    }
    Ok(op)
}

/// `V^(r)`: the `r` wall-adjacent arcs.
pub fn arc_operator(cfg: &ArcConfig) -> DenseOperator {
    arc_set_operator(cfg.p, cfg.d, &cfg.arc_labels()).expect("validated configuration")
}

/// `V^(s∖r)`: arcs `k = p−s+1, …, p−r`, the ones of `V^(s)` not in `V^(r)`.
pub fn arc_complement_operator(p: usize, d: usize, r: usize, s: usize) -> Result<DenseOperator> {
    if r > s || s > p {
        return Err(Error::InvalidArgument(format!("need r ≤ s ≤ p, got r={r}, s={s}, p={p}")));
    }
    let labels: Vec<usize> = (p - s + 1..=p - r).collect();
    arc_set_operator(p, d, &labels)
}

/// `Q^(k) = V^(k)/d^k − V^(k+1)/d^{k+1}` for `k < p`, `Q^(p) = V^(p)/d^p`.
pub fn q_projector(k: usize, p: usize, d: usize) -> Result<DenseOperator> {
    let cfg = ArcConfig::new(p, d, k)?;
    let df = d as f64;
    let v = arc_operator(&cfg).scale_re(libm::pow(df, -(k as f64)));
    if k == p {
        return Ok(v);
    }
    let next = arc_operator(&ArcConfig::new(p, d, k + 1)?).scale_re(libm::pow(df, -((k + 1) as f64)));
    Ok(&v - &next)
}

/// Every permutation operator of `S_{2p}` partially transposed on the primed
/// slots — the defining spanning set of the algebra.
pub fn partially_transposed_permutations(p: usize, d: usize) -> Result<Vec<DenseOperator>> {
    let primed: Vec<usize> = (p..2 * p).collect();
    enumerate_group(2 * p)?
        .iter()
        .map(|s| perm_operator(s, d, 2 * p)?.partial_transpose(&primed))
        .collect()
}

/// Positions `row · D + col` (sorted) of the unit entries of the partially
/// transposed permutation operator of `σ ∈ S_{2p}`. Every such operator has
/// exactly `D = d^{2p}` unit entries and no others.
pub fn pt_permutation_support(sigma: &Permutation, p: usize, d: usize) -> Result<Vec<usize>> {
    let n = 2 * p;
    if sigma.degree() != n {
        return Err(Error::WeightMismatch { left: sigma.degree(), right: n });
    }
    let st = strides(d, n);
    let dim = d.pow(n as u32);
    let mut out = Vec::with_capacity(dim);
    let mut x = vec![0usize; n];
    let mut y = vec![0usize; n];
    for b in 0..dim {
        for i in 0..n {
            x[i] = (b / st[i]) % d;
        }
        for i in 0..n {
            y[sigma.apply(i)] = x[i];
        }
        // entry (y, x) of V_σ; the transpose trades row and column digits on primed slots
        let (mut row, mut col) = (0, 0);
        for s in 0..n {
            let (r, c) = if s < p { (y[s], x[s]) } else { (x[s], y[s]) };
            row += r * st[s];
            col += c * st[s];
        }
        out.push(row * dim + col);
    }
    out.sort_unstable();
    Ok(out)
}

/// Dimension of `A^d_{p,p}`: the rank of the Frobenius Gram matrix of all
/// partially transposed permutations, whose entries count shared unit entries.
pub fn algebra_dimension(p: usize, d: usize) -> Result<usize> {
    let supports: Vec<Vec<usize>> =
        enumerate_group(2 * p)?.iter().map(|s| pt_permutation_support(s, p, d)).collect::<Result<_>>()?;
    let n = supports.len();
    let mut g = nalgebra::DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let (x, y) = (&supports[a], &supports[b]);
            let (mut i, mut j, mut c) = (0, 0, 0usize);
            while i < x.len() && j < y.len() {
                match x[i].cmp(&y[j]) {
                    core::cmp::Ordering::Less => i += 1,
                    core::cmp::Ordering::Greater => j += 1,
                    core::cmp::Ordering::Equal => {
                        c += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            g[(a, b)] = c as f64;
            g[(b, a)] = c as f64;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(g);
    let top = eig.eigenvalues.amax();
    Ok(eig.eigenvalues.iter().filter(|&&v| v > crate::oracle::RANK_CUTOFF * top).count())
}

/// Arc contraction `X_{p∖r} = ⟨Φ_r| X |Φ_r⟩` with `|Φ_r⟩ = Σ_u |u⟩` the
/// unnormalized maximally entangled vector on the `r` wall arcs.
///
/// Equivalently `X_{p∖r} = tr_arcs(V^(r) X V^(r)) / d^r`, and for elements of
/// the algebra `V^(r) X V^(r) = X_{p∖r} ⊗ V^(r)`. The result acts on the
/// `2(p−r)` outer slots in their original order. `r = 0` returns `X`.
pub fn contract(x: &DenseOperator, r: usize) -> Result<DenseOperator> {
    let n = x.arity();
    if n % 2 != 0 {
        return Err(Error::ShapeMismatch(format!("contraction needs an even arity, got {n}")));
    }
    let p = n / 2;
    let d = x.local_dim();
    if r > p {
        return Err(Error::InvalidArgument(format!("{r} arcs on {p} pairs")));
    }
    if r == 0 {
        return Ok(x.clone());
    }
    let st = strides(d, n);
    let outer: Vec<usize> = (0..p - r).chain(p + r..n).collect();
    let m = 2 * (p - r);
    let base: Vec<usize> = (0..d.pow(m as u32))
        .map(|o| {
            let ost = strides(d, m);
            outer.iter().enumerate().map(|(q, &s)| ((o / ost[q]) % d) * st[s]).sum()
        })
        .collect();
    let arc: Vec<usize> = (0..d.pow(r as u32))
        .map(|u| {
            let mut rest = u;
            let mut off = 0;
            for t in 0..r {
                off += (rest % d) * (st[p - 1 - t] + st[p + t]);
                rest /= d;
            }
            off
        })
        .collect();
    let xm = x.matrix();
    Ok(DenseOperator::from_fn(d, m, |o1, o2| {
        let mut acc = re(0.0);
        for &u in &arc {
            for &v in &arc {
                acc += xm[(base[o1] + u, base[o2] + v)];
            }
        }
        acc
    }))
}

/// Literal definition of [`contract`]: `tr_arcs(V^(r) X V^(r)) / d^r`.
pub fn contract_by_partial_trace(x: &DenseOperator, r: usize) -> Result<DenseOperator> {
    let p = x.arity() / 2;
    let d = x.local_dim();
    let v = arc_operator(&ArcConfig::new(p, d, r)?);
    let slots: Vec<usize> = (p - r..p + r).collect();
    Ok((&(&v * x) * &v).partial_trace(&slots)?.scale_re(libm::pow(d as f64, -(r as f64))))
}

/// Re-embeds a contracted operator: `Y ⊗ V^(r)` on `2p` slots.
pub fn with_arcs(y: &DenseOperator, r: usize) -> Result<DenseOperator> {
    let p = y.arity() / 2 + r;
    let d = y.local_dim();
    let outer: Vec<usize> = (0..p - r).chain(p + r..2 * p).collect();
    let emb = y.embed(&outer, 2 * p)?;
    Ok(&emb * &arc_operator(&ArcConfig::new(p, d, r)?))
}

/// `Tr[(P ⊗ R) V^(s)]` for `P` on the left slots and `R` on the right slots,
/// by the ping-pong identity `Tr[(A ⊗ B) dP⁺] = Tr[A Bᵀ]` applied arc by arc:
/// `Tr[tr_out(P) · Φ(tr_out(R))ᵀ]`, where `tr_out` removes the slots without
/// arcs and `Φ` reverses the remaining right slots (the arc partner of right
/// slot `t` is left slot `p−1−t`).
pub fn arc_pair_trace(left: &DenseOperator, right: &DenseOperator, s: usize) -> Result<crate::tensor::C64> {
    let p = left.arity();
    if right.arity() != p || right.local_dim() != left.local_dim() {
        return Err(Error::ShapeMismatch("left and right factors must match".into()));
    }
    if s > p {
        return Err(Error::InvalidArgument(format!("{s} arcs on {p} pairs")));
    }
    let pl = left.partial_trace(&(0..p - s).collect::<Vec<_>>())?;
    let rr = right.partial_trace(&(s..p).collect::<Vec<_>>())?;
    let rev = Permutation::from_images((0..s).rev().collect())?;
    let phi = rr.permute_slots(&rev)?;
    Ok(pl.trace_product(&phi.transpose()))
}

/// Labels `(μ, I, J; ν, K, L)` of a two-sided unit product `E^μ_IJ ⊗ E^ν_KL`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairLabel {
    /// Left irrep.
    pub mu: Partition,
    /// Left row path.
    pub i: BranchPath,
    /// Left column path.
    pub j: BranchPath,
    /// Right irrep.
    pub nu: Partition,
    /// Right row path.
    pub k: BranchPath,
    /// Right column path.
    pub l: BranchPath,
}

impl PairLabel {
    /// All label tuples for `S_p × S_p` in canonical order.
    pub fn enumerate(p: usize) -> Result<Vec<PairLabel>> {
        let singles: Vec<(Partition, BranchPath, BranchPath)> = enumerate_partitions(p)?
            .into_iter()
            .flat_map(|mu| {
                let paths = branching_paths(&mu);
                let mut out = Vec::new();
                for a in &paths {
                    for b in &paths {
                        out.push((mu.clone(), a.clone(), b.clone()));
                    }
                }
                out
            })
            .collect();
        let mut out = Vec::with_capacity(singles.len() * singles.len());
        for (mu, i, j) in &singles {
            for (nu, k, l) in &singles {
                out.push(PairLabel {
                    mu: mu.clone(),
                    i: i.clone(),
                    j: j.clone(),
                    nu: nu.clone(),
                    k: k.clone(),
                    l: l.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Degree `p`.
    pub fn p(&self) -> usize {
        self.mu.weight()
    }

    /// Left and right unit labels for the given orientations.
    pub fn units(&self, orient: (Orientation, Orientation)) -> Result<(UnitLabel, UnitLabel)> {
        Ok((
            UnitLabel::new(self.mu.clone(), self.i.clone(), self.j.clone(), orient.0)?,
            UnitLabel::new(self.nu.clone(), self.k.clone(), self.l.clone(), orient.1)?,
        ))
    }

    /// Dense `E^μ_IJ ⊗ E^ν_KL` from a registry.
    pub fn operator(&self, reg: &UnitRegistry, orient: (Orientation, Orientation)) -> Result<DenseOperator> {
        let (a, b) = self.units(orient)?;
        Ok(reg.lookup(&a)?.kron(reg.lookup(&b)?))
    }

    /// `δ_{I_α K_β} δ_{J_α' L_β'}`: the truncated paths agree pairwise.
    pub fn truncations_match(&self) -> bool {
        self.i.truncated() == self.k.truncated() && self.j.truncated() == self.l.truncated()
    }

    fn validate(&self, d: usize) -> Result<()> {
        if self.nu.weight() != self.p() {
            return Err(Error::WeightMismatch { left: self.p(), right: self.nu.weight() });
        }
        if self.p() < 2 {
            return Err(Error::Unsupported("closed forms need p ≥ 2".into()));
        }
        if d < 2 {
            return Err(Error::Unsupported("closed forms need d ≥ 2".into()));
        }
        self.units(FAR_ENDING).map(|_| ())
    }
}

/// `m_μ m_ν / m_α · δ^{αα'}`, read as zero when `m_α = 0` (then `m_μ = 0` too).
fn mm_over(mu: &Partition, nu: &Partition, alpha: &Partition, same: bool, d: usize) -> f64 {
    let ma = alpha.mult_f64(d);
    if !same || ma == 0.0 {
        0.0
    } else {
        mu.mult_f64(d) * nu.mult_f64(d) / ma
    }
}

/// Closed form of `Tr[(E^μ_IJ ⊗ E^ν_KL) V^(p−1)]` for far-ending units:
/// `(m_μ m_ν / m_α) δ^{αβ'} δ_{I_α K_β} δ_{J_α' L_β'}`.
pub fn appendix_trace(label: &PairLabel, d: usize) -> Result<f64> {
    label.validate(d)?;
    if !label.truncations_match() {
        return Ok(0.0);
    }
    let alpha = label.i.penultimate();
    let beta_col = label.l.penultimate();
    Ok(mm_over(&label.mu, &label.nu, &alpha, alpha == beta_col, d))
}

/// Coefficients `(a, b)` with `V^(p−1) (E^μ_IJ ⊗ E^ν_KL) V^(p−1) = a V^(p) + b V^(p−1)`
/// for far-ending units.
pub fn appendix_sandwich_coeffs(label: &PairLabel, d: usize) -> Result<(f64, f64)> {
    label.validate(d)?;
    if !label.truncations_match() {
        return Ok((0.0, 0.0));
    }
    let df = d as f64;
    let alpha = label.i.penultimate();
    let t = mm_over(&label.mu, &label.nu, &alpha, alpha == label.j.penultimate(), d);
    let same = if label.mu == label.nu { label.nu.mult_f64(d) } else { 0.0 };
    let den = df * (df * df - 1.0);
    Ok(((df * same - t) / den, (df * t - same) / den))
}

/// Coefficient `c` with `Q^(p−1) (E ⊗ E) Q^(p−1) = c Q^(p−1)` for far-ending units:
/// `δ_{IK} δ_{JL} (d m_μ m_ν δ^{αα'}/m_α − m_ν δ^{μν}) / (d^p (d²−1))`.
pub fn q_sandwich_coeff(label: &PairLabel, d: usize) -> Result<f64> {
    let (_, b) = appendix_sandwich_coeffs(label, d)?;
    Ok(b / libm::pow(d as f64, (label.p() - 1) as f64))
}

/// Dense check of [`appendix_trace`] and [`appendix_sandwich_coeffs`] over all labels.
pub fn appendix_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let reg = UnitRegistry::new(p, d)?;
    let v1 = arc_operator(&ArcConfig::new(p, d, p - 1)?);
    let vp = arc_operator(&ArcConfig::new(p, d, p)?);
    let mut rep = VerificationReport::new("appendix.trace_and_sandwich", p, d, tol);
    for lab in PairLabel::enumerate(p)? {
        let x = lab.operator(&reg, FAR_ENDING)?;
        let t = (&x * &v1).trace().re;
        rep.record(scalar_deviation(t, appendix_trace(&lab, d)?), || format!("trace {lab:?}"));
        let (a, b) = appendix_sandwich_coeffs(&lab, d)?;
        let lhs = &(&v1 * &x) * &v1;
        let mut rhs = vp.scale_re(a);
        rhs.add_scaled(re(b), &v1);
        rep.record(normalized_deviation(&lhs, &rhs), || format!("sandwich {lab:?}"));
    }
    Ok(rep)
}

/// Dense check of `Q^(p−1) (E ⊗ E) Q^(p−1) = c Q^(p−1)` over all labels.
pub fn q_sandwich_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let reg = UnitRegistry::new(p, d)?;
    let q = q_projector(p - 1, p, d)?;
    let mut rep = VerificationReport::new("q.sandwich", p, d, tol);
    for lab in PairLabel::enumerate(p)? {
        let x = lab.operator(&reg, FAR_ENDING)?;
        let lhs = &(&q * &x) * &q;
        let rhs = q.scale_re(q_sandwich_coeff(&lab, d)?);
        rep.record(normalized_deviation(&lhs, &rhs), || format!("{lab:?}"));
    }
    Ok(rep)
}

/// Orthogonality, completeness and traces of the `Q^(k)`, `0 ≤ k ≤ p`.
pub fn q_projector_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let qs: Vec<DenseOperator> = (0..=p).map(|k| q_projector(k, p, d)).collect::<Result<_>>()?;
    let mut rep = VerificationReport::new("q.projectors", p, d, tol);
    let zero = DenseOperator::zeros(d, 2 * p);
    let mut sum = zero.clone();
    let df = d as f64;
    for (k, qk) in qs.iter().enumerate() {
        sum = &sum + qk;
        for (l, ql) in qs.iter().enumerate() {
            let expect = if k == l { qk } else { &zero };
            rep.record(normalized_deviation(&(qk * ql), expect), || format!("Q{k}·Q{l}"));
        }
        let tr = if k == p { 1.0 } else { libm::pow(df, (2 * (p - k - 1)) as f64) * (df * df - 1.0) };
        rep.record(scalar_deviation(qk.trace().re, tr), || format!("Tr Q{k}"));
        rep.record(normalized_deviation(qk, &qk.adjoint()), || format!("Q{k} hermitian"));
    }
    rep.record(normalized_deviation(&sum, &DenseOperator::identity(d, 2 * p)), || "completeness".into());
    Ok(rep)
}

/// Arc algebra: `V^(l) V^(s) = d^l V^(s)` for `l ≤ s`, `[V^(r), V^(s∖r)] = 0`
/// and `V^(r) V^(s∖r) = V^(s)`.
pub fn arc_algebra_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let vs: Vec<DenseOperator> =
        (0..=p).map(|r| ArcConfig::new(p, d, r).map(|c| arc_operator(&c))).collect::<Result<_>>()?;
    let mut rep = VerificationReport::new("walled.arc_algebra", p, d, tol);
    for s in 0..=p {
        for l in 0..=s {
            let lhs = &vs[l] * &vs[s];
            let rhs = vs[s].scale_re(libm::pow(d as f64, l as f64));
            rep.record(normalized_deviation(&lhs, &rhs), || format!("V{l}·V{s}"));
            rep.record(normalized_deviation(&(&vs[s] * &vs[l]), &rhs), || format!("V{s}·V{l}"));
            let c = arc_complement_operator(p, d, l, s)?;
            rep.record(normalized_deviation(&(&vs[l] * &c), &(&c * &vs[l])), || format!("[V{l}, V{s}∖{l}]"));
            rep.record(normalized_deviation(&(&vs[l] * &c), &vs[s]), || format!("V{l}·V{s}∖{l}"));
        }
    }
    Ok(rep)
}
