//! Seeded random instances for the suites and tests.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{CMatrix, CVector, HermMatrix};
use crate::rational::{ratio, Rational};
use crate::strata::{GroupTag, IndexPartition};
use crate::threshold::CoeffVector;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_normal(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// `p/q` with `|p| <= max_num`, `1 <= q <= max_den`.
pub fn rational(rng: &mut SeededRng, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn rational_vec(rng: &mut SeededRng, n: usize, max_num: i64, max_den: i64) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, max_num, max_den)).collect()
}

/// Strictly positive coefficients `p/q` with `p, q` in `1..=9`.
pub fn coeffs(rng: &mut SeededRng, n: usize) -> CoeffVector {
    CoeffVector::new(
        (0..n)
            .map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=9)))
            .collect(),
    )
    .expect("positive by construction")
}

/// `X X^*` with `X` an `n x rank` Gaussian matrix, scaled so every entry
/// lies in the closed unit disc and the largest diagonal entry is in `[0.2, 1]`.
pub fn psd(rng: &mut SeededRng, n: usize, rank: usize, complex: bool) -> HermMatrix {
    let x = CMatrix::from_fn(n, rank, |_, _| {
        if complex {
            complex_normal(rng)
        } else {
            Complex64::new(normal(rng), 0.0)
        }
    });
    let g = HermMatrix::gram(&x);
    let top = (0..n).map(|i| g.get(i, i).re).fold(0.0, f64::max);
    if top == 0.0 {
        return g;
    }
    g.scale(rng.gen_range(0.2..=1.0) / top)
}

/// Random PSD draw with random rank, real or complex.
pub fn psd_any(rng: &mut SeededRng, n: usize) -> HermMatrix {
    let rank = rng.gen_range(1..=n);
    let complex = rng.gen_bool(0.5);
    psd(rng, n, rank, complex)
}

pub fn partition(rng: &mut SeededRng, n: usize) -> IndexPartition {
    let k = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    IndexPartition::from_labels(&labels)
}

pub fn permutation(rng: &mut SeededRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A block factor whose outer product is homogeneous for `g`.
fn block_factor(rng: &mut SeededRng, len: usize, g: GroupTag) -> CVector {
    let r: f64 = rng.gen_range(0.3..=1.0);
    DVector::from_fn(len, |_, _| match g {
        GroupTag::Trivial => Complex64::new(r, 0.0),
        GroupTag::Modulus => Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)),
        GroupTag::Full => Complex64::from_polar(rng.gen_range(0.3..=1.0), rng.gen_range(0.0..std::f64::consts::TAU)),
    })
}

/// `A` with `A_{I_i x I_j} = c_ij u_i u_j^*` for a random partition, block
/// factors homogeneous for `g` and a random correlation matrix `C` of
/// rank at least two (so that `|c_ij| < 1` off the diagonal). Returns the
/// matrix and the partition it was built on.
pub fn structured(rng: &mut SeededRng, n: usize, g: GroupTag) -> (HermMatrix, IndexPartition) {
    let pi = partition(rng, n);
    let k = pi.len();
    let rank = if k >= 2 { rng.gen_range(2..=k) } else { 1 };
    let x = CMatrix::from_fn(k, rank, |_, _| complex_normal(rng));
    let mut rows: Vec<CVector> = (0..k).map(|i| x.row(i).transpose()).collect();
    for r in &mut rows {
        let s = r.norm();
        *r /= Complex64::new(s, 0.0);
    }
    let c = CMatrix::from_fn(k, k, |i, j| rows[i].dot(&rows[j].conjugate()));
    let factors: Vec<CVector> = pi.blocks().iter().map(|b| block_factor(rng, b.len(), g)).collect();
    let labels = pi.labels();
    let mut pos = vec![0; n];
    for b in pi.blocks() {
        for (t, &i) in b.iter().enumerate() {
            pos[i] = t;
        }
    }
    let data = CMatrix::from_fn(n, n, |a, b| {
        let (i, j) = (labels[a], labels[b]);
        c[(i, j)] * factors[i][pos[a]] * factors[j][pos[b]].conj()
    });
    let data = (&data + data.adjoint()).scale(0.5);
    (HermMatrix::new(data).expect("Hermitian by construction"), pi)
}
