//! Brute-force verification layer: dense Gram matrices, span ranks and
//! structured pass/fail reports.
//!
//! Deviations are absolute on the largest entry after dividing both sides by
//! their largest entry whenever that entry exceeds one, so that operators whose
//! natural scale is `d^p` are compared on the same footing as projectors.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tensor::{DenseOperator, C64};

/// Default relative eigenvalue cutoff for ranks and pseudo-inverses.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Outcome of one verified claim.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    /// Stable identifier of the claim, e.g. `"units.product_law"`.
    pub claim_id: String,
    /// Number of slots on each side of the wall (or the `S_p` degree).
    pub p: usize,
    /// Local dimension.
    pub d: usize,
    /// Largest deviation over all checked cases.
    pub max_abs_deviation: f64,
    /// Tolerance the deviation is compared against.
    pub tolerance: f64,
    /// `max_abs_deviation ≤ tolerance` (false for NaN).
    pub pass: bool,
    /// Number of cases checked.
    pub n_cases: usize,
    /// Label of the case attaining the maximum deviation.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
    pub worst_case: String,
}

impl VerificationReport {
    /// Empty report; records are added with [`VerificationReport::record`].
    pub fn new(claim_id: impl Into<String>, p: usize, d: usize, tolerance: f64) -> Self {
        Self {
            claim_id: claim_id.into(),
            p,
            d,
            max_abs_deviation: 0.0,
            tolerance,
            pass: true,
            n_cases: 0,
            worst_case: String::new(),
        }
    }

    /// Records one case. The label closure is only evaluated when the case
    /// becomes the worst offender.
    pub fn record(&mut self, deviation: f64, label: impl FnOnce() -> String) {
        self.n_cases += 1;
        let worse = deviation.is_nan() || (!self.max_abs_deviation.is_nan() && deviation > self.max_abs_deviation);
        if worse || self.n_cases == 1 {
            if worse || self.worst_case.is_empty() {
                self.worst_case = label();
            }
            if worse {
                self.max_abs_deviation = deviation;
            }
        }
        self.pass = self.max_abs_deviation <= self.tolerance;
    }

    /// Records a case without a label.
    pub fn record_plain(&mut self, deviation: f64) {
        self.record(deviation, String::new);
    }

    /// Merges another report's cases into this one.
    pub fn absorb(&mut self, other: &VerificationReport) {
        let cases = other.n_cases;
        let label = other.worst_case.clone();
        self.record(other.max_abs_deviation, || label);
        self.n_cases += cases.saturating_sub(1);
    }
}

/// Deviation between two operators after normalizing by the largest entry
/// (when that entry exceeds one).
pub fn normalized_deviation(lhs: &DenseOperator, rhs: &DenseOperator) -> f64 {
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    lhs.max_abs_diff(rhs) / scale
}

/// Scalar analogue of [`normalized_deviation`].
pub fn scalar_deviation(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    (lhs - rhs).abs() / scale
}

/// Compares two operators and returns a single-case report.
pub fn assert_equal(lhs: &DenseOperator, rhs: &DenseOperator, claim_id: &str, tol: f64) -> Result<VerificationReport> {
    if lhs.local_dim() != rhs.local_dim() || lhs.arity() != rhs.arity() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "{}^{} vs {}^{}",
            lhs.local_dim(),
            lhs.arity(),
            rhs.local_dim(),
            rhs.arity()
        )));
    }
    let mut r = VerificationReport::new(claim_id, lhs.arity() / 2, lhs.local_dim(), tol);
    r.record_plain(normalized_deviation(lhs, rhs));
    Ok(r)
}

/// Matrix of Frobenius inner products `Tr(X_a† X_b)`.
pub fn dense_gram(family: &[DenseOperator]) -> Result<DMatrix<C64>> {
    let first = family.first().ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    if family.iter().any(|x| x.local_dim() != first.local_dim() || x.arity() != first.arity()) {
        return Err(Error::ShapeMismatch("family members differ in shape".into()));
    }
    let n = family.len();
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = family[a].inner(&family[b]);
            g[(a, b)] = v;
            g[(b, a)] = v.conj();
        }
    }
    Ok(g)
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues (ascending) and
/// the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Number of eigenvalues of a Hermitian PSD matrix above `cutoff` times the largest.
pub fn rank_of_psd(m: &DMatrix<C64>, cutoff: f64) -> usize {
    if m.nrows() == 0 {
        return 0;
    }
    let (values, _) = hermitian_eigen(m);
    let top = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if top == 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > cutoff * top).count()
}

/// Dimension of the linear span of a family of operators (rank of its Gram matrix).
pub fn span_rank(family: &[DenseOperator], cutoff: f64) -> Result<usize> {
    Ok(rank_of_psd(&dense_gram(family)?, cutoff))
}

/// Moore–Penrose pseudo-inverse of a Hermitian matrix with relative eigenvalue cutoff.
pub fn hermitian_pinv(m: &DMatrix<C64>, cutoff: f64) -> DMatrix<C64> {
    let n = m.nrows();
    let (values, vectors) = hermitian_eigen(m);
    let top = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut out = DMatrix::zeros(n, n);
    for k in 0..values.len() {
        if values[k].abs() > cutoff * top && top > 0.0 {
            let v = vectors.column(k);
            out += (v * v.adjoint()) * C64::new(1.0 / values[k], 0.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{max_entangled_projector, re};

    #[test]
    fn report_tracks_worst_case_and_nan() {
        let mut r = VerificationReport::new("x", 2, 3, 1e-10);
        r.record(1e-12, || "a".into());
        r.record(1e-11, || "b".into());
        r.record(1e-13, || "c".into());
        assert!(r.pass);
        assert_eq!(r.worst_case, "b");
        assert_eq!(r.n_cases, 3);
        r.record(f64::NAN, || "nan".into());
        assert!(!r.pass);
        r.record(1.0, || "later".into());
        assert!(!r.pass);
        assert_eq!(r.worst_case, "nan");
    }

    #[test]
    fn assert_equal_paths() {
        let x = max_entangled_projector(3);
        let ok = assert_equal(&x, &x, "self", 1e-12).unwrap();
        assert!(ok.pass);
        assert_eq!(ok.max_abs_deviation, 0.0);
        // negative control: a perturbed copy must fail
        let mut y = x.clone();
        y.matrix_mut()[(0, 1)] += re(1e-6);
        assert!(!assert_equal(&x, &y, "perturbed", 1e-9).unwrap().pass);
        assert!(assert_equal(&x, &DenseOperator::identity(3, 1), "shape", 1e-9).is_err());
    }

    #[test]
    fn gram_and_rank_examples() {
        let d = 3;
        let p = max_entangled_projector(d);
        let q = &DenseOperator::identity(d, 2) - &p;
        let g = dense_gram(&[q.clone(), p.clone()]).unwrap();
        assert!((g[(0, 0)] - re(8.0)).norm() < 1e-12);
        assert!((g[(1, 1)] - re(1.0)).norm() < 1e-12);
        assert!(g[(0, 1)].norm() < 1e-12);
        assert_eq!(span_rank(&[q.clone(), p.clone()], RANK_CUTOFF).unwrap(), 2);
        let combo = &q.scale_re(2.0) + &p;
        assert_eq!(span_rank(&[q.clone(), p.clone(), combo, p.clone()], RANK_CUTOFF).unwrap(), 2);
        assert_eq!(span_rank(&[p.clone(), q.clone()], RANK_CUTOFF).unwrap(), 2);
        assert!(dense_gram(&[]).is_err());
    }

    #[test]
    fn pinv_inverts_regular_part() {
        let m = DMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(1.0), re(1.0)]);
        let pi = hermitian_pinv(&m, RANK_CUTOFF);
        assert!((&m * &pi * &m - &m).camax() < 1e-14);
    }
}
