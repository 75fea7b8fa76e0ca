//! Irreducible matrix units `E^μ_ij` of the group algebra `C[S_p]` acting on
//! `(C^d)^{⊗p}`.
//!
//! With orthogonal Young–Yamanouchi matrices `φ^μ` the units are
//!
//! ```text
//! E^μ_ij = (d_μ / p!) Σ_σ φ^μ_ji(σ⁻¹) V_σ = (d_μ / p!) Σ_σ φ^μ_ij(σ) V_σ,
//! ```
//!
//! and satisfy `E^μ_ij E^ν_kl = δ^{μν} δ_jk E^μ_il`, `Σ_{μ,i} E^μ_ii = 1`,
//! `(E^μ_ij)† = E^μ_ji`. Units of diagrams with more than `d` rows vanish.
//! Right-to-left units are the left-to-right ones conjugated by the slot
//! reversal.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracle::{normalized_deviation, scalar_deviation, VerificationReport};
use crate::partitions::{enumerate_partitions, Partition};
use crate::symgroup::{enumerate_group, young_yamanouchi, BranchPath, IrrepTable, Orientation, Permutation};
use crate::tensor::{perm_operator, re, DenseOperator};

/// Fully qualified label of a matrix unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitLabel {
    /// The irrep.
    pub mu: Partition,
    /// Row branching path.
    pub row: BranchPath,
    /// Column branching path.
    pub col: BranchPath,
    /// Orientation of the underlying irrep table.
    pub orient: Orientation,
}

impl UnitLabel {
    /// Validated label.
    pub fn new(mu: Partition, row: BranchPath, col: BranchPath, orient: Orientation) -> Result<Self> {
        if row.shape() != &mu || col.shape() != &mu {
            return Err(Error::ForeignPath(mu));
        }
        Ok(Self { mu, row, col, orient })
    }

    /// Label of row/column indices `(i, j)` of a table.
    pub fn from_table(table: &IrrepTable, i: usize, j: usize) -> Result<Self> {
        Ok(Self {
            mu: table.mu().clone(),
            row: table.index_path(i)?.clone(),
            col: table.index_path(j)?.clone(),
            orient: table.orientation(),
        })
    }

    /// Compact text form such as `E^[2,1]_{12}(LR)` using 1-based indices.
    pub fn display_with(&self, table: &IrrepTable) -> String {
        let i = table.path_index(&self.row).map(|x| x + 1).unwrap_or(0);
        let j = table.path_index(&self.col).map(|x| x + 1).unwrap_or(0);
        format!("E^{}_{{{i}{j}}}({})", self.mu, self.orient.tag())
    }
}

/// Precomputed basis-state maps of all `V_σ`, `σ ∈ S_p`, on `(C^d)^{⊗p}`.
struct PermMaps {
    group: Vec<Permutation>,
    /// `maps[k][b] = a` with `V_σ |b⟩ = |a⟩`.
    maps: Vec<Vec<usize>>,
}

impl PermMaps {
    fn new(p: usize, d: usize) -> Result<Self> {
        let group = enumerate_group(p)?;
        let dim = d.pow(p as u32);
        let strides: Vec<usize> = (0..p).map(|s| d.pow((p - 1 - s) as u32)).collect();
        let maps = group
            .iter()
            .map(|s| {
                (0..dim)
                    .map(|b| (0..p).map(|i| ((b / strides[i]) % d) * strides[s.apply(i)]).sum())
                    .collect()
            })
            .collect();
        Ok(Self { group, maps })
    }

    /// `Σ_σ c(σ) V_σ`.
    fn combine(&self, p: usize, d: usize, coeff: impl Fn(&Permutation) -> f64) -> DenseOperator {
        let mut op = DenseOperator::zeros(d, p);
        for (s, map) in self.group.iter().zip(&self.maps) {
            let c = coeff(s);
            if c != 0.0 {
                let m = op.matrix_mut();
                for (b, &a) in map.iter().enumerate() {
                    m[(a, b)] += re(c);
                }
            }
        }
        op
    }
}

fn factorial(p: usize) -> f64 {
    (1..=p).map(|k| k as f64).product()
}

fn unit_from_maps(maps: &PermMaps, table: &IrrepTable, i: usize, j: usize, d: usize) -> DenseOperator {
    let p = table.degree();
    if table.mu().multiplicity(d) == 0 {
        return DenseOperator::zeros(d, p);
    }
    let w = table.dimension() as f64 / factorial(p);
    maps.combine(p, d, |s| w * table.entry(s, i, j))
}

/// Builds one matrix unit on `(C^d)^{⊗p}`; exactly zero when `μ` has more than `d` rows.
pub fn matrix_unit(label: &UnitLabel, d: usize) -> Result<DenseOperator> {
    let table = young_yamanouchi(&label.mu, label.orient)?;
    let i = table.path_index(&label.row)?;
    let j = table.path_index(&label.col)?;
    let maps = PermMaps::new(table.degree(), d)?;
    Ok(unit_from_maps(&maps, &table, i, j, d))
}

/// All irrep tables and matrix units of `S_p` on `(C^d)^{⊗p}`, in both orientations.
///
/// Irreps are indexed by their position in the canonical order of
/// [`enumerate_partitions`]; rows and columns by table index.
#[derive(Clone, Debug)]
pub struct UnitRegistry {
    p: usize,
    d: usize,
    irreps: Vec<Partition>,
    tables: [Vec<IrrepTable>; 2],
    /// `units[o][μ][i·d_μ + j]`.
    units: [Vec<Vec<DenseOperator>>; 2],
}

fn oidx(o: Orientation) -> usize {
    match o {
        Orientation::LeftToRight => 0,
        Orientation::RightToLeft => 1,
    }
}

impl UnitRegistry {
    /// Builds every unit eagerly.
    pub fn new(p: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("local dimension must be positive".into()));
        }
        let irreps = enumerate_partitions(p)?;
        let maps = PermMaps::new(p, d)?;
        let mut tables: [Vec<IrrepTable>; 2] = [Vec::new(), Vec::new()];
        let mut units: [Vec<Vec<DenseOperator>>; 2] = [Vec::new(), Vec::new()];
        for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
            for mu in &irreps {
                let t = young_yamanouchi(mu, o)?;
                let n = t.dimension();
                let us = (0..n * n).map(|k| unit_from_maps(&maps, &t, k / n, k % n, d)).collect();
                units[oidx(o)].push(us);
                tables[oidx(o)].push(t);
            }
        }
        Ok(Self { p, d, irreps, tables, units })
    }

    /// Degree `p`.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Local dimension `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Irreps in canonical order.
    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    /// Position of a diagram among [`UnitRegistry::irreps`].
    pub fn irrep_index(&self, mu: &Partition) -> Result<usize> {
        self.irreps.iter().position(|m| m == mu).ok_or_else(|| Error::ForeignPath(mu.clone()))
    }

    /// Irrep table of irrep `mu` (by index).
    pub fn table(&self, mu: usize, o: Orientation) -> &IrrepTable {
        &self.tables[oidx(o)][mu]
    }

    /// The unit `E^μ_ij` (indices into the table of `mu`).
    pub fn unit(&self, mu: usize, i: usize, j: usize, o: Orientation) -> &DenseOperator {
        let n = self.tables[oidx(o)][mu].dimension();
        &self.units[oidx(o)][mu][i * n + j]
    }

    /// Looks a unit up by its full label.
    pub fn lookup(&self, label: &UnitLabel) -> Result<&DenseOperator> {
        let mu = self.irrep_index(&label.mu)?;
        let t = self.table(mu, label.orient);
        Ok(self.unit(mu, t.path_index(&label.row)?, t.path_index(&label.col)?, label.orient))
    }

    /// Full label of unit `(mu, i, j)`.
    pub fn label(&self, mu: usize, i: usize, j: usize, o: Orientation) -> UnitLabel {
        UnitLabel::from_table(self.table(mu, o), i, j).expect("indices in range")
    }

    /// All index triples `(μ, i, j)`.
    pub fn keys(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (m, t) in self.tables[0].iter().enumerate() {
            let n = t.dimension();
            for i in 0..n {
                for j in 0..n {
                    out.push((m, i, j));
                }
            }
        }
        out
    }

    /// Multiplicity `m_μ` of irrep `mu` as a float.
    pub fn mult(&self, mu: usize) -> f64 {
        self.irreps[mu].mult_f64(self.d)
    }
}

/// `V_σ = Σ_{μ,i,j} φ^μ_ij(σ) E^μ_ij`, returned as `(label, coefficient)` pairs
/// with non-zero coefficients.
pub fn expand_permutation(sigma: &Permutation, orient: Orientation) -> Result<Vec<(UnitLabel, f64)>> {
    let mut out = Vec::new();
    for mu in enumerate_partitions(sigma.degree())? {
        let t = young_yamanouchi(&mu, orient)?;
        let n = t.dimension();
        for i in 0..n {
            for j in 0..n {
                let c = t.entry(sigma, i, j);
                if c != 0.0 {
                    out.push((UnitLabel::from_table(&t, i, j)?, c));
                }
            }
        }
    }
    Ok(out)
}

/// `V_σ E^μ_ij V_σ† = Σ_{k,l} φ^μ_ki(σ) φ^μ_lj(σ) E^μ_kl`, as `(label, coefficient)`
/// pairs with non-zero coefficients.
pub fn conjugate_unit(sigma: &Permutation, label: &UnitLabel) -> Result<Vec<(UnitLabel, f64)>> {
    let t = young_yamanouchi(&label.mu, label.orient)?;
    if t.degree() != sigma.degree() {
        return Err(Error::WeightMismatch { left: t.degree(), right: sigma.degree() });
    }
    let i = t.path_index(&label.row)?;
    let j = t.path_index(&label.col)?;
    let phi = t.phi(sigma);
    let n = t.dimension();
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n {
            let c = phi[(k, i)] * phi[(l, j)];
            if c != 0.0 {
                out.push((UnitLabel::from_table(&t, k, l)?, c));
            }
        }
    }
    Ok(out)
}

/// Result of tracing out the last slot of a left-to-right unit.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceLast {
    /// Penultimate diagram of the row path.
    pub alpha_row: Partition,
    /// Penultimate diagram of the column path.
    pub alpha_col: Partition,
    /// The unit of `S_{p−1}` the trace is proportional to (`None` when the
    /// penultimate diagrams differ and the trace vanishes).
    pub reduced: Option<UnitLabel>,
    /// Measured proportionality constant; `m_μ / m_α` whenever `m_α > 0`.
    pub scalar: f64,
    /// Largest entry of `tr_p E − scalar · E^α`.
    pub residual: f64,
}

/// Traces out slot `p` of `E^μ_ij` (left-to-right units only): the result is
/// `δ_{αα'} (m_μ / m_α) E^α_{i_α j_α}` with `α, α'` the penultimate diagrams.
///
/// Right-to-left units attach the last chain step to slot 1, so tracing slot
/// `p` does not reduce them and [`Error::TraceOrientation`] is returned.
pub fn trace_last_unit(label: &UnitLabel, d: usize) -> Result<TraceLast> {
    if label.orient != Orientation::LeftToRight {
        return Err(Error::TraceOrientation);
    }
    let p = label.mu.weight();
    let e = matrix_unit(label, d)?;
    let t = e.partial_trace(&[p - 1])?;
    let alpha_row = label.row.penultimate();
    let alpha_col = label.col.penultimate();
    if alpha_row != alpha_col {
        return Ok(TraceLast { alpha_row, alpha_col, reduced: None, scalar: 0.0, residual: t.max_abs() });
    }
    let (reduced_op, reduced) = if p == 1 {
        (DenseOperator::identity(d, 0), None)
    } else {
        let r = UnitLabel::new(alpha_row.clone(), label.row.truncated(), label.col.truncated(), label.orient)?;
        (matrix_unit(&r, d)?, Some(r))
    };
    // ⟨E^α_ij, E^α_ij⟩ = Tr E^α_jj = m_α
    let norm = reduced_op.inner(&reduced_op).re;
    let scalar = if norm > 0.0 { reduced_op.inner(&t).re / norm } else { 0.0 };
    let residual = (&t - &reduced_op.scale_re(scalar)).max_abs();
    Ok(TraceLast { alpha_row, alpha_col, reduced, scalar, residual })
}

/// Checks product law, traces, completeness, Hermiticity and the vanishing of units
/// with more than `d` rows, in both orientations.
pub fn unit_product_law_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let reg = UnitRegistry::new(p, d)?;
    let mut rep = VerificationReport::new("units.product_law", p, d, tol);
    let zero = DenseOperator::zeros(d, p);
    for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
        let keys = reg.keys();
        let mut sum = DenseOperator::zeros(d, p);
        for &(mu, i, j) in &keys {
            let e = reg.unit(mu, i, j, o);
            let name = || format!("{} {}", reg.label(mu, i, j, o).display_with(reg.table(mu, o)), "adjoint");
            rep.record(normalized_deviation(&e.adjoint(), reg.unit(mu, j, i, o)), name);
            if i == j {
                sum = &sum + e;
            }
            let tr = if i == j { reg.mult(mu) } else { 0.0 };
            rep.record(scalar_deviation(e.trace().re, tr), || {
                format!("Tr {}", reg.label(mu, i, j, o).display_with(reg.table(mu, o)))
            });
            if reg.irreps()[mu].multiplicity(d) == 0 {
                rep.record(e.max_abs(), || format!("{} vanishing", reg.label(mu, i, j, o).display_with(reg.table(mu, o))));
            }
            for &(nu, k, l) in &keys {
                let prod = e * reg.unit(nu, k, l, o);
                let expect = if mu == nu && j == k { reg.unit(mu, i, l, o) } else { &zero };
                rep.record(normalized_deviation(&prod, expect), || {
                    format!(
                        "{} · {}",
                        reg.label(mu, i, j, o).display_with(reg.table(mu, o)),
                        reg.label(nu, k, l, o).display_with(reg.table(nu, o))
                    )
                });
            }
        }
        rep.record(normalized_deviation(&sum, &DenseOperator::identity(d, p)), || format!("completeness {}", o.tag()));
    }
    Ok(rep)
}

/// Dense check of [`expand_permutation`] over the whole group.
pub fn expansion_check(p: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let reg = UnitRegistry::new(p, d)?;
    let mut rep = VerificationReport::new("units.expansion", p, d, tol);
    for sigma in enumerate_group(p)? {
        let v = perm_operator(&sigma, d, p)?;
        for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
            let mut acc = DenseOperator::zeros(d, p);
            for (lab, c) in expand_permutation(&sigma, o)? {
                acc.add_scaled(re(c), reg.lookup(&lab)?);
            }
            rep.record(normalized_deviation(&acc, &v), || format!("{:?} {}", sigma, o.tag()));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::span_rank;
    use crate::symgroup::{branching_paths, reversal};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn product_law_holds() {
        for (p, d) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (3, 4)] {
            let r = unit_product_law_check(p, d, 1e-12).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.n_cases > 0);
        }
    }

    #[test]
    fn expansion_recovers_permutations() {
        for (p, d) in [(2, 2), (3, 2), (3, 3)] {
            let r = expansion_check(p, d, 1e-12).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn conjugation_formula() {
        let reg = UnitRegistry::new(3, 3).unwrap();
        for sigma in enumerate_group(3).unwrap() {
            let v = perm_operator(&sigma, 3, 3).unwrap();
            for (mu, i, j) in reg.keys() {
                for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
                    let lab = reg.label(mu, i, j, o);
                    let lhs = &(&v * reg.unit(mu, i, j, o)) * &v.adjoint();
                    let mut rhs = DenseOperator::zeros(3, 3);
                    for (l, c) in conjugate_unit(&sigma, &lab).unwrap() {
                        rhs.add_scaled(re(c), reg.lookup(&l).unwrap());
                    }
                    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn orientations_related_by_reversal() {
        let reg = UnitRegistry::new(3, 3).unwrap();
        let w = perm_operator(&reversal(3), 3, 3).unwrap();
        for (mu, i, j) in reg.keys() {
            let lr = reg.unit(mu, i, j, Orientation::LeftToRight);
            let rl = reg.unit(mu, i, j, Orientation::RightToLeft);
            assert!((&(&w * lr) * &w).max_abs_diff(rl) < 1e-12);
        }
    }

    #[test]
    fn ranks_and_traces_match_multiplicities() {
        for d in [2, 3, 4] {
            let reg = UnitRegistry::new(3, d).unwrap();
            for (mu, i, j) in reg.keys() {
                let e = reg.unit(mu, i, j, Orientation::LeftToRight);
                let expect = if i == j { reg.mult(mu) } else { 0.0 };
                assert!((e.trace() - re(expect)).norm() < 1e-10);
            }
            // the units span the commutant of U^{⊗3}: dimension Σ d_μ² over m_μ > 0
            let family: Vec<DenseOperator> =
                reg.keys().iter().map(|&(m, i, j)| reg.unit(m, i, j, Orientation::LeftToRight).clone()).collect();
            let expect = if d == 2 { 5 } else { 6 };
            assert_eq!(span_rank(&family, 1e-9).unwrap(), expect);
        }
    }

    #[test]
    fn antisymmetric_unit_vanishes_below_its_height() {
        let col = part(&[1, 1, 1]);
        let path = branching_paths(&col).remove(0);
        let lab = UnitLabel::new(col, path.clone(), path, Orientation::LeftToRight).unwrap();
        assert!(matrix_unit(&lab, 2).unwrap().is_zero(0.0));
        assert!(!matrix_unit(&lab, 3).unwrap().is_zero(1e-12));
    }

    #[test]
    fn two_slot_units_are_symmetrizers() {
        let d = 3;
        let v = perm_operator(&Permutation::transposition(2, 0, 1), d, 2).unwrap();
        let id = DenseOperator::identity(d, 2);
        for (mu, sign) in [(part(&[2]), 1.0), (part(&[1, 1]), -1.0)] {
            let path = branching_paths(&mu).remove(0);
            let e = matrix_unit(&UnitLabel::new(mu, path.clone(), path, Orientation::LeftToRight).unwrap(), d).unwrap();
            let expect = (&id + &v.scale_re(sign)).scale_re(0.5);
            assert!(e.max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn last_slot_trace() {
        for d in [2, 3, 4] {
            for mu in enumerate_partitions(3).unwrap() {
                let t = young_yamanouchi(&mu, Orientation::LeftToRight).unwrap();
                for i in 0..t.dimension() {
                    for j in 0..t.dimension() {
                        let lab = UnitLabel::from_table(&t, i, j).unwrap();
                        let r = trace_last_unit(&lab, d).unwrap();
                        assert!(r.residual < 1e-12, "{lab:?} d={d}");
                        if r.alpha_row == r.alpha_col && r.alpha_row.multiplicity(d) > 0 {
                            let expect = mu.mult_f64(d) / r.alpha_row.mult_f64(d);
                            assert!((r.scalar - expect).abs() < 1e-12);
                        }
                    }
                }
            }
        }
        let t = young_yamanouchi(&part(&[2, 1]), Orientation::RightToLeft).unwrap();
        let lab = UnitLabel::from_table(&t, 0, 0).unwrap();
        assert_eq!(trace_last_unit(&lab, 3), Err(Error::TraceOrientation));
    }

    #[test]
    fn label_validation() {
        let p21 = part(&[2, 1]);
        let foreign = branching_paths(&part(&[3])).remove(0);
        let own = branching_paths(&p21).remove(0);
        assert!(UnitLabel::new(p21.clone(), foreign, own.clone(), Orientation::LeftToRight).is_err());
        assert!(UnitLabel::new(p21, own.clone(), own, Orientation::RightToLeft).is_ok());
    }
}
