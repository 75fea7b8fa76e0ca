//! Dense complex operators on `(C^d)^{⊗n}`.
//!
//! Slots are numbered `0..n` from the most significant base-`d` digit, so the
//! Kronecker product `A ⊗ B` puts `A` on the leading slots. For the two-sided
//! operators of the walled algebra on `2p` slots the labels map to flat
//! slots as `k ↦ k−1` and `k' ↦ 2p−k` (see [`left_slot`], [`right_slot`]); the
//! primed slots therefore run `p', …, 1'` away from the wall.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::symgroup::Permutation;

/// Complex scalar used by every operator.
pub type C64 = Complex<f64>;

/// Shorthand for a real complex number.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Flat slot of the unprimed label `k` (1-based).
pub fn left_slot(k: usize) -> usize {
    k - 1
}

/// Flat slot of the primed label `k'` (1-based) in a `2p`-slot system.
pub fn right_slot(p: usize, k: usize) -> usize {
    2 * p - k
}

/// Matrix on `(C^d)^{⊗n}` with its local dimension and arity.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    d: usize,
    n: usize,
    mat: DMatrix<C64>,
}

fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Base-`d` digit bookkeeping for `n` slots.
#[derive(Clone, Debug)]
struct Digits {
    d: usize,
    strides: Vec<usize>,
}

impl Digits {
    fn new(d: usize, n: usize) -> Self {
        Self { d, strides: (0..n).map(|s| pow(d, n - 1 - s)).collect() }
    }

    fn digit(&self, index: usize, slot: usize) -> usize {
        (index / self.strides[slot]) % self.d
    }

    /// Offsets of every assignment of digits to `slots`, in row-major order.
    fn offsets(&self, slots: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in slots {
            let mut next = Vec::with_capacity(out.len() * self.d);
            for &o in &out {
                for v in 0..self.d {
                    next.push(o + v * self.strides[s]);
                }
            }
            out = next;
        }
        out
    }
}

impl DenseOperator {
    /// Zero operator.
    pub fn zeros(d: usize, n: usize) -> Self {
        let dim = pow(d, n);
        Self { d, n, mat: DMatrix::zeros(dim, dim) }
    }

    /// Identity operator.
    pub fn identity(d: usize, n: usize) -> Self {
        let dim = pow(d, n);
        Self { d, n, mat: DMatrix::identity(dim, dim) }
    }

    /// The 1×1 operator on zero slots holding `c`.
    pub fn scalar(d: usize, c: C64) -> Self {
        Self { d, n: 0, mat: DMatrix::from_element(1, 1, c) }
    }

    /// Wraps a matrix, checking that it is `d^n × d^n`.
    pub fn from_matrix(d: usize, n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let dim = pow(d, n);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix is not {dim}x{dim} for d={d}, n={n}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { d, n, mat })
    }

    /// Builds entrywise from `f(row, col)`.
    pub fn from_fn(d: usize, n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        let dim = pow(d, n);
        Self { d, n, mat: DMatrix::from_fn(dim, dim, f) }
    }

    /// Local dimension `d`.
    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// Number of slots `n`.
    pub fn arity(&self) -> usize {
        self.n
    }

    /// Matrix size `d^n`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Mutable access to the underlying matrix.
    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.mat
    }

    /// Consumes the operator, returning the matrix.
    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    /// Entry at (row, col).
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.mat[(r, c)]
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "operator on {}^{} vs {}^{}",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    /// Matrix product, erroring on shape mismatch.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self { d: self.d, n: self.n, mat: matmul(&self.mat, &other.mat) })
    }

    /// `c · self`.
    pub fn scale(&self, c: C64) -> Self {
        Self { d: self.d, n: self.n, mat: &self.mat * c }
    }

    /// `c · self` for real `c`.
    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(re(c))
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: C64, other: &Self) {
        assert_eq!((self.d, self.n), (other.d, other.n), "shape mismatch");
        self.mat.zip_apply(&other.mat, |a, b| *a += c * b);
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { d: self.d, n: self.n, mat: self.mat.adjoint() }
    }

    /// Full transpose.
    pub fn transpose(&self) -> Self {
        Self { d: self.d, n: self.n, mat: self.mat.transpose() }
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Frobenius inner product `Tr(X† Y)`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!((self.d, self.n), (other.d, other.n), "shape mismatch");
        self.mat.iter().zip(other.mat.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `Tr(X · Y)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!((self.d, self.n), (other.d, other.n), "shape mismatch");
        let dim = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..dim {
            for k in 0..dim {
                acc += self.mat[(i, k)] * other.mat[(k, i)];
            }
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `‖X − Y‖_max`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.d, self.n), (other.d, other.n), "shape mismatch");
        self.mat.iter().zip(other.mat.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.mat.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Whether every entry is below `tol` in modulus.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// `self ⊗ other`; `self` occupies the leading slots.
    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "local dimension mismatch");
        Self { d: self.d, n: self.n + other.n, mat: self.mat.kronecker(&other.mat) }
    }

    fn check_slots(&self, slots: &[usize]) -> Result<()> {
        for (k, &s) in slots.iter().enumerate() {
            if s >= self.n {
                return Err(Error::SlotOutOfRange { slot: s, arity: self.n });
            }
            if slots[..k].contains(&s) {
                return Err(Error::InvalidArgument(format!("slot {s} listed twice")));
            }
        }
        Ok(())
    }

    /// Transposes the listed slots between row and column digit strings.
    pub fn partial_transpose(&self, slots: &[usize]) -> Result<Self> {
        self.check_slots(slots)?;
        let dg = Digits::new(self.d, self.n);
        let dim = self.dim();
        let swap = |r: usize, c: usize| {
            let (mut r2, mut c2) = (r, c);
            for &s in slots {
                let (a, b) = (dg.digit(r, s), dg.digit(c, s));
                let st = dg.strides[s];
                r2 = r2 - a * st + b * st;
                c2 = c2 - b * st + a * st;
            }
            (r2, c2)
        };
        let mat = DMatrix::from_fn(dim, dim, |r, c| {
            let (r2, c2) = swap(r, c);
            self.mat[(r2, c2)]
        });
        Ok(Self { d: self.d, n: self.n, mat })
    }

    /// Traces out the listed slots; the remaining slots keep their order.
    pub fn partial_trace(&self, slots: &[usize]) -> Result<Self> {
        self.check_slots(slots)?;
        let dg = Digits::new(self.d, self.n);
        let keep: Vec<usize> = (0..self.n).filter(|s| !slots.contains(s)).collect();
        let kept = dg.offsets(&keep);
        let traced = dg.offsets(slots);
        let m = kept.len();
        let mat = DMatrix::from_fn(m, m, |a, b| {
            let (ra, rb) = (kept[a], kept[b]);
            traced.iter().map(|&t| self.mat[(ra + t, rb + t)]).sum()
        });
        Ok(Self { d: self.d, n: keep.len(), mat })
    }

    /// Places `self` on `slots` (its slot `k` goes to `slots[k]`) of an
    /// `n`-slot system, identity elsewhere.
    pub fn embed(&self, slots: &[usize], n: usize) -> Result<Self> {
        if slots.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "{} target slots for an operator of arity {}",
                slots.len(),
                self.n
            )));
        }
        let host = DenseOperator::zeros(self.d, n);
        host.check_slots(slots)?;
        let dg = Digits::new(self.d, n);
        let rest: Vec<usize> = (0..n).filter(|s| !slots.contains(s)).collect();
        let inner = dg.offsets(slots);
        let outer = dg.offsets(&rest);
        let mut mat = host.mat;
        for &o in &outer {
            for (a, &ia) in inner.iter().enumerate() {
                for (b, &ib) in inner.iter().enumerate() {
                    mat[(o + ia, o + ib)] = self.mat[(a, b)];
                }
            }
        }
        Ok(Self { d: self.d, n, mat })
    }

    /// `V_σ X V_σ†`: relabels slot `i` as slot `σ(i)`.
    pub fn permute_slots(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.degree() > self.n {
            return Err(Error::ShapeMismatch(format!(
                "permutation of degree {} on {} slots",
                sigma.degree(),
                self.n
            )));
        }
        let sigma = sigma.extend(self.n);
        let dg = Digits::new(self.d, self.n);
        let dim = self.dim();
        // pull-back index: digit i of the source is digit σ(i) of the target
        let pull: Vec<usize> = (0..dim)
            .map(|a| (0..self.n).map(|i| dg.digit(a, sigma.apply(i)) * dg.strides[i]).sum())
            .collect();
        let mat = DMatrix::from_fn(dim, dim, |a, b| self.mat[(pull[a], pull[b])]);
        Ok(Self { d: self.d, n: self.n, mat })
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.try_mul(rhs).expect("operator shape mismatch")
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!((self.d, self.n), (rhs.d, rhs.n), "shape mismatch");
        DenseOperator { d: self.d, n: self.n, mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!((self.d, self.n), (rhs.d, rhs.n), "shape mismatch");
        DenseOperator { d: self.d, n: self.n, mat: &self.mat - &rhs.mat }
    }
}

/// The permutation operator `V_σ` on `n ≥ deg σ` slots: the vector in slot `i`
/// moves to slot `σ(i)`, so `V_{στ} = V_σ V_τ`.
pub fn perm_operator(sigma: &Permutation, d: usize, n: usize) -> Result<DenseOperator> {
    if sigma.degree() > n {
        return Err(Error::ShapeMismatch(format!("permutation of degree {} on {n} slots", sigma.degree())));
    }
    let sigma = sigma.extend(n);
    let dg = Digits::new(d, n);
    let mut op = DenseOperator::zeros(d, n);
    for b in 0..op.dim() {
        let a: usize = (0..n).map(|i| dg.digit(b, i) * dg.strides[sigma.apply(i)]).sum();
        op.mat[(a, b)] = re(1.0);
    }
    Ok(op)
}

/// Projector `P⁺ = |ψ⁺⟩⟨ψ⁺|` onto `(1/√d) Σ_i |ii⟩`.
pub fn max_entangled_projector(d: usize) -> DenseOperator {
    let w = 1.0 / d as f64;
    DenseOperator::from_fn(d, 2, |r, c| if r % (d + 1) == 0 && c % (d + 1) == 0 { re(w) } else { re(0.0) })
}

/// Fraction of structurally non-zero entries.
fn density(m: &DMatrix<C64>) -> f64 {
    let nnz = m.iter().filter(|z| z.re != 0.0 || z.im != 0.0).count();
    nnz as f64 / (m.len().max(1)) as f64
}

/// Dense threshold below which the zero-skipping product is used.
const SPARSE_DENSITY: f64 = 0.1;

/// Complex matrix product. Uses a zero-skipping loop when either factor is
/// mostly zero (arc operators, permutation operators, Kronecker products of
/// units) and a blocked GEMM otherwise. Both paths sum in a fixed order.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimension mismatch");
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let (da, db) = (density(a), density(b));
    if db < SPARSE_DENSITY && db <= da {
        // column j of C = Σ_k B[k,j] · column k of A
        let mut c = DMatrix::zeros(m, n);
        for j in 0..n {
            for kk in 0..k {
                let bkj = b[(kk, j)];
                if bkj.re != 0.0 || bkj.im != 0.0 {
                    let acol = a.column(kk);
                    let mut ccol = c.column_mut(j);
                    for i in 0..m {
                        ccol[i] += acol[i] * bkj;
                    }
                }
            }
        }
        return c;
    }
    if da < SPARSE_DENSITY {
        let cols: Vec<Vec<(usize, C64)>> = (0..k)
            .map(|kk| {
                a.column(kk).iter().enumerate().filter(|(_, z)| z.re != 0.0 || z.im != 0.0).map(|(i, z)| (i, *z)).collect()
            })
            .collect();
        let mut c = DMatrix::zeros(m, n);
        for j in 0..n {
            let mut ccol = c.column_mut(j);
            for (kk, col) in cols.iter().enumerate() {
                let bkj = b[(kk, j)];
                if bkj.re != 0.0 || bkj.im != 0.0 {
                    for &(i, z) in col {
                        ccol[i] += z * bkj;
                    }
                }
            }
        }
        return c;
    }
    let mut c = DMatrix::<C64>::zeros(m, n);
    // SAFETY: Complex<f64> is #[repr(C)] { re, im }, layout-identical to [f64; 2];
    // nalgebra stores matrices column-major and contiguously.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::enumerate_group;
    use proptest::prelude::*;

    fn random_op(d: usize, n: usize, seed: u64) -> DenseOperator {
        // small deterministic LCG; the tests only need generic matrices
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        DenseOperator::from_fn(d, n, |_, _| C64::new(next(), next()))
    }

    /// Reference product by the textbook triple loop.
    fn naive(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| (0..a.ncols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
    }

    #[test]
    fn matmul_paths_agree_with_naive() {
        let a = random_op(3, 2, 1);
        let b = random_op(3, 2, 2);
        let sw = perm_operator(&Permutation::transposition(2, 0, 1), 3, 2).unwrap();
        for (x, y) in [(&a, &b), (&sw, &a), (&a, &sw), (&sw, &sw)] {
            let got = matmul(x.matrix(), y.matrix());
            assert!((got - naive(x.matrix(), y.matrix())).camax() < 1e-13);
        }
    }

    #[test]
    fn perm_operator_examples() {
        let id = perm_operator(&Permutation::identity(2), 2, 2).unwrap();
        assert_eq!(id, DenseOperator::identity(2, 2));
        let sw = perm_operator(&Permutation::transposition(2, 0, 1), 2, 2).unwrap();
        for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            assert_eq!(sw.get(r, c), re(1.0));
        }
        assert_eq!(sw.matrix().iter().filter(|z| z.re != 0.0).count(), 4);
        assert!(perm_operator(&Permutation::identity(3), 2, 2).is_err());
    }

    #[test]
    fn perm_operator_is_homomorphism_with_cycle_traces() {
        for p in 1..=4 {
            let g = enumerate_group(p).unwrap();
            for d in 1..=3 {
                let ops: Vec<DenseOperator> = g.iter().map(|s| perm_operator(s, d, p).unwrap()).collect();
                for (s, vs) in g.iter().zip(&ops) {
                    assert_eq!(vs.trace().re, (d as f64).powi(s.cycle_count() as i32));
                    if p <= 3 {
                        for (t, vt) in g.iter().zip(&ops) {
                            let st = perm_operator(&s.compose(t), d, p).unwrap();
                            assert_eq!(&(vs * vt), &st);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn permute_slots_is_conjugation() {
        let x = random_op(2, 3, 7);
        for s in enumerate_group(3).unwrap() {
            let v = perm_operator(&s, 2, 3).unwrap();
            let want = &(&v * &x) * &v.adjoint();
            assert!(x.permute_slots(&s).unwrap().max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_examples() {
        for d in 2..=3 {
            let sw = perm_operator(&Permutation::transposition(2, 0, 1), d, 2).unwrap();
            let want = max_entangled_projector(d).scale_re(d as f64);
            assert!(sw.partial_transpose(&[1]).unwrap().max_abs_diff(&want) < 1e-15);
        }
        let x = random_op(2, 3, 3);
        assert_eq!(x.partial_transpose(&[1]).unwrap().partial_transpose(&[1]).unwrap(), x);
        assert_eq!(x.partial_transpose(&[0, 1, 2]).unwrap(), x.transpose());
        assert!(x.partial_transpose(&[3]).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let id = DenseOperator::identity(3, 2);
        assert_eq!(id.partial_trace(&[1]).unwrap(), DenseOperator::identity(3, 1).scale_re(3.0));
        let pp = max_entangled_projector(2).partial_trace(&[1]).unwrap();
        assert!(pp.max_abs_diff(&DenseOperator::identity(2, 1).scale_re(0.5)) < 1e-15);
        let all = random_op(2, 2, 5);
        let s = all.partial_trace(&[0, 1]).unwrap();
        assert_eq!(s.arity(), 0);
        assert!((s.get(0, 0) - all.trace()).norm() < 1e-13);
    }

    #[test]
    fn embed_examples() {
        let one = DenseOperator::scalar(2, re(1.0));
        assert_eq!(one.embed(&[], 2).unwrap(), DenseOperator::identity(2, 2));
        let x = random_op(2, 2, 9);
        let e = x.embed(&[2, 0], 3).unwrap();
        let back = e.partial_trace(&[1]).unwrap();
        // remaining slots are (0, 2) in that order, i.e. X with its slots swapped
        let swapped = x.permute_slots(&Permutation::transposition(2, 0, 1)).unwrap();
        assert!(back.max_abs_diff(&swapped.scale_re(2.0)) < 1e-13);
        assert!(x.embed(&[0], 3).is_err());
        assert!(x.embed(&[0, 0], 3).is_err());
    }

    #[test]
    fn max_entangled_properties() {
        let p = max_entangled_projector(2);
        assert_eq!(p.get(0, 0), re(0.5));
        assert_eq!(p.get(0, 3), re(0.5));
        assert_eq!(p.get(3, 0), re(0.5));
        assert_eq!(p.get(1, 1), re(0.0));
        for d in 2..=4 {
            let p = max_entangled_projector(d);
            assert!((&p * &p).max_abs_diff(&p) < 1e-15);
            assert!((p.trace() - re(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ping_pong_identity() {
        let d = 3;
        let p = max_entangled_projector(d);
        let x = random_op(d, 1, 11);
        let y = random_op(d, 1, 12);
        let id = DenseOperator::identity(d, 1);
        let lhs = &(&id.kron(&x) * &p) * &id.kron(&y);
        let rhs = &(&x.transpose().kron(&id) * &p) * &y.transpose().kron(&id);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partial_trace_preserves_trace(seed in any::<u64>(), mask in 0u8..8) {
            let x = random_op(2, 3, seed);
            let slots: Vec<usize> = (0..3).filter(|s| mask & (1 << s) != 0).collect();
            let t = x.partial_trace(&slots).unwrap();
            prop_assert!((t.trace() - x.trace()).norm() < 1e-12);
        }

        #[test]
        fn trace_and_transpose_commute_on_disjoint_slots(seed in any::<u64>()) {
            let x = random_op(2, 3, seed);
            let a = x.partial_transpose(&[0]).unwrap().partial_trace(&[2]).unwrap();
            let b = x.partial_trace(&[2]).unwrap().partial_transpose(&[0]).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-13);
        }

        #[test]
        fn permutations_are_unitary(seed in any::<u64>(), k in 0usize..6) {
            let s = &enumerate_group(3).unwrap()[k];
            let v = perm_operator(s, 3, 3).unwrap();
            let x = random_op(3, 3, seed);
            let col = x.matrix().column(0).into_owned();
            let moved = v.matrix() * &col;
            prop_assert!((moved.norm() - col.norm()).abs() < 1e-12);
        }

        #[test]
        fn embedding_commutes_with_products(s1 in any::<u64>(), s2 in any::<u64>()) {
            let a = random_op(2, 2, s1);
            let b = random_op(2, 2, s2);
            let slots = [3, 1];
            let lhs = (&a * &b).embed(&slots, 4).unwrap();
            let rhs = &a.embed(&slots, 4).unwrap() * &b.embed(&slots, 4).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
