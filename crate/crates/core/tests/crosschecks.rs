//! Cross-module checks through the public API: closed forms against
//! brute-force counts and dense operators.

use wba_core::oracle::{assert_equal, dense_gram, span_rank, RANK_CUTOFF};
use wba_core::partitions::{enumerate_partitions, Partition};
use wba_core::symgroup::{enumerate_group, young_yamanouchi, Orientation, Permutation};
use wba_core::tensor::{perm_operator, re, DenseOperator};
use wba_core::walled::{algebra_dimension, partially_transposed_permutations, q_projector};

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn weyl_dimension_count() {
    for p in 1..=4 {
        for d in 1..=4usize {
            let total: u64 = enumerate_partitions(p).unwrap().iter().map(|mu| mu.irrep_dimension() as u64 * mu.multiplicity(d)).sum();
            assert_eq!(total, (d as u64).pow(p as u32), "p={p} d={d}");
        }
    }
}

#[test]
fn multiplicity_matches_projector_rank() {
    // isotypic projector Σ_i E_ii has trace d_μ m_μ; build it from characters
    let d = 3;
    let mu = part(&[2, 1]);
    let table = young_yamanouchi(&mu, Orientation::LeftToRight).unwrap();
    let mut proj = DenseOperator::zeros(d, 3);
    for sigma in enumerate_group(3).unwrap() {
        let chi = table.phi(&sigma).trace();
        proj.add_scaled(re(2.0 * chi / 6.0), &perm_operator(&sigma, d, 3).unwrap());
    }
    assert!((proj.trace().re - 2.0 * mu.multiplicity(d) as f64).abs() < 1e-12);
    assert_eq!(mu.multiplicity(d), 8);
}

#[test]
fn character_of_three_cycle() {
    let table = young_yamanouchi(&part(&[2, 1]), Orientation::LeftToRight).unwrap();
    let cycle = Permutation::from_one_line(&[2, 3, 1]).unwrap();
    assert!((table.phi(&cycle).trace() + 1.0).abs() < 1e-12);
}

#[test]
fn permutation_traces_count_cycles() {
    for p in 1..=4 {
        for d in 2..=3usize {
            for sigma in enumerate_group(p).unwrap() {
                let tr = perm_operator(&sigma, d, p).unwrap().trace().re;
                assert_eq!(tr, (d as f64).powi(sigma.cycle_count() as i32));
            }
        }
    }
}

#[test]
fn sparse_dimension_matches_dense_span() {
    for (p, d) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        let dense = span_rank(&partially_transposed_permutations(p, d).unwrap(), RANK_CUTOFF).unwrap();
        assert_eq!(algebra_dimension(p, d).unwrap(), dense, "p={p} d={d}");
    }
    // Σ_{λ ⊢ 6, height ≤ d} d_λ²
    for (d, want) in [(2, 132), (3, 513)] {
        let count: usize = enumerate_partitions(6)
            .unwrap()
            .iter()
            .filter(|l| l.height() <= d)
            .map(|l| l.irrep_dimension().pow(2))
            .sum();
        assert_eq!(count, want);
        assert_eq!(algebra_dimension(3, d).unwrap(), want);
    }
}

#[test]
fn span_rank_invariances() {
    let fam = partially_transposed_permutations(2, 2).unwrap();
    let base = span_rank(&fam, RANK_CUTOFF).unwrap();
    let mut more = fam.clone();
    more.extend(fam.iter().take(5).cloned());
    let mut combo = fam[1].scale_re(2.0);
    combo.add_scaled(re(-0.5), &fam[7]);
    more.push(combo);
    more.reverse();
    assert_eq!(span_rank(&more, RANK_CUTOFF).unwrap(), base);
    let g = dense_gram(&fam).unwrap();
    assert!((&g - g.adjoint()).camax() < 1e-11);
}

#[test]
fn q_orthogonality_and_negative_control() {
    let q1 = q_projector(1, 2, 3).unwrap();
    let q2 = q_projector(2, 2, 3).unwrap();
    let zero = DenseOperator::zeros(3, 4);
    assert!(assert_equal(&(&q1 * &q2), &zero, "q.orthogonal", 1e-11).unwrap().pass);
    let mut broken = q1.clone();
    broken.matrix_mut()[(0, 0)] += re(1e-6);
    assert!(!assert_equal(&(&broken * &broken), &broken, "q.idempotent", 1e-11).unwrap().pass);
}
