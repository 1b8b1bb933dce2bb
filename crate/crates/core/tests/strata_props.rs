use std::collections::HashSet;

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use entrywise_core::oracle::sample;
use entrywise_core::strata::{
    bell_number, kernel_partition_invariance, simultaneous_kernel_report, split_witness, strata_dimension, stratify,
    unit_modulus_structure_check, ANGLE_TOL,
};
use entrywise_core::{GroupTag, HermMatrix, IndexPartition};

fn group() -> impl Strategy<Value = GroupTag> {
    prop::sample::select(GroupTag::ALL.to_vec())
}

/// Every set partition of `0..n`, via restricted growth strings.
fn all_partitions(n: usize) -> Vec<IndexPartition> {
    fn grow(labels: &mut Vec<usize>, n: usize, out: &mut Vec<IndexPartition>) {
        if labels.len() == n {
            out.push(IndexPartition::from_labels(labels));
            return;
        }
        let top = labels.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=top {
            labels.push(l);
            grow(labels, n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reconstruction_and_rank(seed in any::<u64>(), n in 1usize..=6, g in group()) {
        let mut rng = sample::rng(seed);
        let (a, built) = sample::structured(&mut rng, n, g);
        let dec = stratify(&a, g).unwrap();
        let err = (a.as_matrix() - dec.reconstruct().as_matrix()).camax();
        prop_assert!(err <= 1e-10 * a.max_abs());
        prop_assert_eq!(a.rank(), dec.compressed.rank());
        // The maximal partition is at least as coarse as the one used to build A.
        prop_assert!(built.refines(&dec.partition));
    }

    #[test]
    fn refinement_chain(seed in any::<u64>(), n in 1usize..=6, g in group()) {
        let mut rng = sample::rng(seed);
        let (a, _) = sample::structured(&mut rng, n, g);
        let parts: Vec<IndexPartition> = GroupTag::ALL.iter().map(|&h| stratify(&a, h).unwrap().partition).collect();
        prop_assert!(parts[0].refines(&parts[1]));
        prop_assert!(parts[1].refines(&parts[2]));
    }

    #[test]
    fn permutation_equivariance(seed in any::<u64>(), n in 1usize..=6, g in group()) {
        let mut rng = sample::rng(seed);
        let (a, _) = sample::structured(&mut rng, n, g);
        let perm = sample::permutation(&mut rng, n);
        let moved = stratify(&a.permuted(&perm), g).unwrap();
        prop_assert_eq!(moved.partition, stratify(&a, g).unwrap().partition.pull_back(&perm));
    }

    #[test]
    fn kernel_ignores_coefficients(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let (a, _) = sample::structured(&mut rng, n, GroupTag::Trivial);
        let rank = rng.gen_range(1..=n);
        let b = sample::psd(&mut rng, n, rank, true);
        let c1 = sample::coeffs(&mut rng, n);
        let c2 = sample::coeffs(&mut rng, n);
        let r1 = simultaneous_kernel_report(&a, &b, &c1).unwrap();
        let r2 = simultaneous_kernel_report(&a, &b, &c2).unwrap();
        prop_assert!(r1.agree() && r2.agree());
        prop_assert!(r1.direct.same_subspace(&r2.direct, ANGLE_TOL));
    }

    #[test]
    fn coarse_partitions_keep_the_kernel(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let (a, _) = sample::structured(&mut rng, n, GroupTag::Trivial);
        let b = sample::psd_any(&mut rng, n);
        let fine = stratify(&a, GroupTag::Trivial).unwrap().partition;
        for pi in [IndexPartition::whole(n), fine] {
            let r = kernel_partition_invariance(&a, &b, &pi).unwrap();
            prop_assert!(r.coarser && r.equal);
        }
    }

    #[test]
    fn dimension_formula(n in 1usize..=7, seed in any::<u64>(), g in group()) {
        let mut rng = sample::rng(seed);
        let pi = sample::partition(&mut rng, n);
        let k = pi.len();
        prop_assert_eq!(strata_dimension(&pi, g, n).unwrap(), k * k + (n - k) * g.real_dim());
        prop_assert!(strata_dimension(&pi, g, n).unwrap() <= n * n);
    }
}

#[test]
fn bell_numbers_count_partitions() {
    for n in 0..=7 {
        let all = all_partitions(n);
        let distinct: HashSet<Vec<Vec<usize>>> = all.iter().map(|p| p.blocks().to_vec()).collect();
        assert_eq!(distinct.len() as u128, bell_number(n));
    }
    assert_eq!(bell_number(10), 115_975);
}

#[test]
fn observed_strata_stay_within_bell_bound() {
    let n = 4;
    let mut seen = HashSet::new();
    let mut rng = sample::rng(5);
    for _ in 0..400 {
        let (a, _) = sample::structured(&mut rng, n, GroupTag::Trivial);
        seen.insert(stratify(&a, GroupTag::Trivial).unwrap().partition.blocks().to_vec());
    }
    assert!(seen.len() as u128 <= bell_number(n));
    assert!(seen.len() > 5);
}

#[test]
fn splitting_a_block_loses_kernel_for_rank_one_weight() {
    let a = HermMatrix::ones(3);
    let w = DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 1.0),
        Complex64::new(-1.0, 0.5),
    ]);
    let b = HermMatrix::outer(&w);
    let pi = IndexPartition::new(vec![vec![0], vec![1, 2]]).unwrap();
    let r = kernel_partition_invariance(&a, &b, &pi).unwrap();
    assert!(!r.coarser);
    assert!(!r.equal);
    assert!(r.witness.is_some());
    let v = split_witness(&b, 0, 1);
    assert!((b.as_matrix() * &v).norm() < 1e-12);
    let proj = r.partitioned_kernel.projector();
    assert!((&v - &proj * &v).norm() > 1e-3 * v.norm());
}

#[test]
fn unit_modulus_matrices_conjugate_to_ones_blocks() {
    let mut rng = sample::rng(9);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let pi = sample::partition(&mut rng, n);
        let labels = pi.labels();
        let phase: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let a = HermMatrix::from_fn(n, |i, j| {
            if labels[i] == labels[j] {
                phase[i] * phase[j].conj()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let r = unit_modulus_structure_check(&a).unwrap();
        assert!(r.holds);
        assert_eq!(r.partition.len(), pi.len());
        for i in 0..n {
            for j in 0..n {
                let z = r.conjugated.get(i, j);
                assert!((z - 1.0).norm() < 1e-9 || z.norm() < 1e-9);
            }
        }
    }
}
