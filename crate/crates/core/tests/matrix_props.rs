use num_complex::Complex64;
use proptest::prelude::*;

use entrywise_core::matrix::io::{parse_json, to_json};
use entrywise_core::matrix::{spectral_norm, CMatrix, CVector, DEFAULT_PSD_EPS};
use entrywise_core::oracle::sample;
use entrywise_core::rational::ratio;
use entrywise_core::{HermMatrix, RatMatrix, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn rat_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(rational(), n * n).prop_map(move |v| RatMatrix::from_fn(n, |i, j| v[i * n + j].clone()))
    })
}

fn close(a: &CMatrix, b: &CMatrix, scale: f64) -> bool {
    (a - b).iter().all(|z| z.norm() <= 1e-8 * scale.max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn schur_product_theorem(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let a = sample::psd_any(&mut rng, n);
        let b = sample::psd_any(&mut rng, n);
        prop_assert!(a.hadamard_product(&b).unwrap().psd_check(DEFAULT_PSD_EPS).is_psd);
    }

    #[test]
    fn hadamard_exponents_add(a in rat_matrix(), j in 0u64..4, k in 0u64..4) {
        let lhs = a.hadamard_power(j).hadamard_product(&a.hadamard_power(k)).unwrap();
        prop_assert_eq!(lhs, a.hadamard_power(j + k));
    }

    #[test]
    fn determinant_is_multiplicative_on_scalings(a in rat_matrix(), s in rational()) {
        let n = a.dim() as i32;
        let lhs = a.scale(&s).determinant();
        prop_assert_eq!(lhs, num_traits::Pow::pow(&s, n as u32) * a.determinant());
    }

    #[test]
    fn penrose_identities(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let a = sample::psd_any(&mut rng, n);
        let p = a.pseudo_inverse().unwrap();
        let (am, pm) = (a.as_matrix(), p.as_matrix());
        let scale = spectral_norm(am) * spectral_norm(pm);
        prop_assert!(close(&(am * pm * am), am, scale * spectral_norm(am)));
        prop_assert!(close(&(pm * am * pm), pm, scale * spectral_norm(pm)));
        prop_assert!(close(&(am * pm), &(am * pm).adjoint(), scale));
        prop_assert!(close(&(pm * am), &(pm * am).adjoint(), scale));
    }

    #[test]
    fn kernel_vectors_are_annihilated(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let a = sample::psd_any(&mut rng, n);
        let k = a.kernel_basis();
        prop_assert_eq!(k.dim() + a.rank(), n);
        prop_assert!(k.orthonormality_defect() <= 1e-10);
        let norm = spectral_norm(a.as_matrix());
        for v in &k.vectors {
            prop_assert!((a.as_matrix() * v).norm() <= 1e-8 * norm.max(1.0));
        }
    }

    #[test]
    fn rank_one_round_trip(parts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=6)) {
        let u = CVector::from_iterator(parts.len(), parts.iter().map(|&(r, i)| Complex64::new(r, i)));
        prop_assume!(u.norm() > 1e-3);
        let a = HermMatrix::outer(&u);
        let v = a.rank_one_factor().unwrap();
        let back = HermMatrix::outer(&v);
        prop_assert!(close(back.as_matrix(), a.as_matrix(), a.max_abs()));
    }

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::rng(seed);
        let a = sample::psd_any(&mut rng, n);
        prop_assert_eq!(parse_json(&to_json(&a)).unwrap(), a);
    }
}

#[test]
fn rank_two_matrix_has_no_rank_one_factor() {
    assert!(HermMatrix::identity(2).rank_one_factor().is_err());
}
