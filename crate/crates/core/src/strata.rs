//! Rank-one block decompositions and simultaneous kernels.
//!
//! Every PSD matrix `A` has a unique coarsest partition of its indices
//! whose diagonal blocks have rank at most one with entries in a single
//! orbit of a group `G`. The blocks factor as `u_j u_j^*` and the cross
//! blocks as `c_ij u_i u_j^*`, with `C = (c_ij)` PSD in the closed unit
//! disc and of the same rank as `A`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{io as mio, CMatrix, CVector, HermMatrix, KernelBasis, DEFAULT_PSD_EPS, KERNEL_CUTOFF};
use crate::pencil::hc_matrix;
use crate::threshold::CoeffVector;

/// Relative tolerance for the orbit and rank tests in the merge step.
pub const ORBIT_TOL: f64 = 1e-8;
/// Principal-angle tolerance when comparing kernels.
pub const ANGLE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupTag {
    /// `G = {1}`: block entries all equal.
    Trivial,
    /// `G = S^1`: block entries of equal modulus.
    Modulus,
    /// `G = C^x`: rank one is the only constraint.
    Full,
}

impl GroupTag {
    pub const ALL: [GroupTag; 3] = [GroupTag::Trivial, GroupTag::Modulus, GroupTag::Full];

    /// Real dimension of `G`.
    pub fn real_dim(self) -> usize {
        match self {
            GroupTag::Trivial => 0,
            GroupTag::Modulus => 1,
            GroupTag::Full => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trivial" => Ok(GroupTag::Trivial),
            "modulus" => Ok(GroupTag::Modulus),
            "full" => Ok(GroupTag::Full),
            _ => Err(Error::InvalidArgument(format!(
                "unknown group {s:?}, expected trivial, modulus or full"
            ))),
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::Trivial => "trivial",
            GroupTag::Modulus => "modulus",
            GroupTag::Full => "full",
        })
    }
}

/// Set partition of `{0, ..., n-1}` in canonical order: each block
/// ascending, blocks ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct IndexPartition {
    blocks: Vec<Vec<usize>>,
}

impl IndexPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(Error::InvalidArgument(format!(
                "blocks {blocks:?} do not partition 0..{}",
                all.len()
            )));
        }
        Ok(Self { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    /// Partition from block labels, one label per index.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(i);
        }
        Self::new(map.into_values().collect()).expect("labels cover every index")
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block label of every index.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                out[i] = k;
            }
        }
        out
    }

    /// True when every block of `self` sits inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let theirs = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&i| theirs[i] == theirs[b[0]]))
    }

    /// The partition seen from `P A P^T`, where index `i` of the permuted
    /// matrix is index `perm[i]` of the original.
    pub fn pull_back(&self, perm: &[usize]) -> Self {
        let labels = self.labels();
        Self::from_labels(&perm.iter().map(|&p| labels[p]).collect::<Vec<_>>())
    }
}

impl TryFrom<Vec<Vec<usize>>> for IndexPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(blocks)
    }
}

impl From<IndexPartition> for Vec<Vec<usize>> {
    fn from(p: IndexPartition) -> Self {
        p.blocks
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub partition: IndexPartition,
    /// One factor per block, local to the block, first entry real `>= 0`.
    pub factors: Vec<CVector>,
    pub compressed: HermMatrix,
    pub group: GroupTag,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    partition: Vec<Vec<usize>>,
    factors: Vec<Vec<[f64; 2]>>,
    compressed: serde_json::Value,
    group: GroupTag,
}

impl BlockDecomposition {
    /// `A_{I_i x I_j} = c_ij u_i u_j^*`.
    pub fn reconstruct(&self) -> HermMatrix {
        let n = self.partition.n();
        let labels = self.partition.labels();
        let mut pos = vec![0; n];
        for b in self.partition.blocks() {
            for (k, &i) in b.iter().enumerate() {
                pos[i] = k;
            }
        }
        let data = CMatrix::from_fn(n, n, |a, b| {
            let (i, j) = (labels[a], labels[b]);
            self.compressed.get(i, j) * self.factors[i][pos[a]] * self.factors[j][pos[b]].conj()
        });
        HermMatrix::new((&data + data.adjoint()).scale(0.5)).expect("Hermitian by construction")
    }

    /// Off-diagonal pairs with `|c_ij|` within `tol` of 1. For the full
    /// group these sit on the boundary of the maximality test.
    pub fn boundary_pairs(&self, tol: f64) -> Vec<(usize, usize)> {
        let k = self.partition.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if (self.compressed.get(i, j).norm() - 1.0).abs() <= tol {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = DecompositionJson {
            partition: self.partition.blocks().to_vec(),
            factors: self
                .factors
                .iter()
                .map(|u| u.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            compressed: mio::to_json_value(&self.compressed),
            group: self.group,
        };
        serde_json::to_value(doc).expect("finite decomposition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DecompositionJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let partition = IndexPartition::new(doc.partition)?;
        let factors: Vec<CVector> = doc
            .factors
            .iter()
            .map(|u| DVector::from_iterator(u.len(), u.iter().map(|p| Complex64::new(p[0], p[1]))))
            .collect();
        if factors.len() != partition.len() || factors.iter().zip(partition.blocks()).any(|(u, b)| u.len() != b.len()) {
            return Err(Error::Parse("factor shapes do not match the partition".into()));
        }
        let compressed = mio::parse_json(&doc.compressed.to_string())?;
        Ok(Self {
            partition,
            factors,
            compressed,
            group: doc.group,
        })
    }
}

fn orbit_homogeneous(block: &HermMatrix, g: GroupTag) -> bool {
    let scale = block.max_abs();
    let k = block.dim();
    let entries = (0..k).flat_map(|i| (0..k).map(move |j| (i, j)));
    match g {
        GroupTag::Full => true,
        GroupTag::Trivial => {
            let alpha = block.get(0, 0);
            entries
                .into_iter()
                .all(|(i, j)| (block.get(i, j) - alpha).norm() <= ORBIT_TOL * scale)
        }
        GroupTag::Modulus => {
            let r = block.get(0, 0).norm();
            entries
                .into_iter()
                .all(|(i, j)| (block.get(i, j).norm() - r).abs() <= ORBIT_TOL * scale)
        }
    }
}

fn rank_at_most_one(block: &HermMatrix) -> bool {
    let v = block.eigenvalues();
    let k = v.len();
    k < 2 || v[k - 2] <= ORBIT_TOL * v[k - 1].max(0.0)
}

/// Coarsest partition with rank-one, `G`-homogeneous diagonal blocks,
/// built by merging indices in ascending order. Indices with zero
/// diagonal form one all-zero block.
pub fn stratify(a: &HermMatrix, g: GroupTag) -> Result<BlockDecomposition> {
    let verdict = a.psd_check(DEFAULT_PSD_EPS);
    if !verdict.is_psd {
        return Err(Error::NotPsd {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let n = a.dim();
    let scale = a.max_abs();
    let is_zero = |i: usize| a.get(i, i).re <= 1e-14 * scale;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut zero_block: Option<usize> = None;
    for i in 0..n {
        if is_zero(i) {
            match zero_block {
                Some(z) => blocks[z].push(i),
                None => {
                    zero_block = Some(blocks.len());
                    blocks.push(vec![i]);
                }
            }
            continue;
        }
        let target = blocks.iter().enumerate().position(|(k, b)| {
            if Some(k) == zero_block {
                return false;
            }
            let mut idx = b.clone();
            idx.push(i);
            let sub = a.principal(&idx);
            rank_at_most_one(&sub) && orbit_homogeneous(&sub, g)
        });
        match target {
            Some(k) => blocks[k].push(i),
            None => blocks.push(vec![i]),
        }
    }
    let partition = IndexPartition::new(blocks)?;
    let mut factors = Vec::with_capacity(partition.len());
    let mut leaders = Vec::with_capacity(partition.len());
    for b in partition.blocks() {
        let f = b[0];
        if is_zero(f) {
            factors.push(CVector::zeros(b.len()));
            leaders.push(None);
            continue;
        }
        let s = a.get(f, f).re.sqrt();
        factors.push(DVector::from_iterator(b.len(), b.iter().map(|&i| a.get(i, f) / s)));
        leaders.push(Some(f));
    }
    let k = partition.len();
    let compressed = HermMatrix::from_fn(k, |i, j| match (leaders[i], leaders[j]) {
        (Some(_), Some(_)) if i == j => Complex64::new(1.0, 0.0),
        (Some(p), Some(q)) => a.get(p, q) / (a.get(p, p).re * a.get(q, q).re).sqrt(),
        _ => Complex64::new(0.0, 0.0),
    })?;
    Ok(BlockDecomposition {
        partition,
        factors,
        compressed,
        group: g,
    })
}

/// `|pi|^2 + (N - |pi|) dim_R(G)`.
pub fn strata_dimension(pi: &IndexPartition, g: GroupTag, n: usize) -> Result<usize> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pi.n(),
        });
    }
    let k = pi.len();
    Ok(k * k + (n - k) * g.real_dim())
}

/// Bell number `B_n`, the number of set partitions of `n` elements.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("non-empty")];
        for x in &row {
            let v = next.last().expect("non-empty") + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[derive(Clone, Debug)]
pub struct SimKernelReport {
    /// `ker(B o h_c[A])`.
    pub direct: KernelBasis,
    /// Intersection of `ker(B o A^{on})` for `n < N`.
    pub stacked: KernelBasis,
    /// Direct sum of `ker B_{I_j}` over the trivial-group partition of `A`.
    pub blockwise: KernelBasis,
    pub partition: IndexPartition,
    /// Largest principal-angle sine between any two of the three.
    pub max_sin_angle: f64,
}

impl SimKernelReport {
    pub fn agree(&self) -> bool {
        self.direct.dim() == self.stacked.dim()
            && self.direct.dim() == self.blockwise.dim()
            && self.max_sin_angle <= ANGLE_TOL
    }
}

fn check_weight(b: &HermMatrix) -> Result<()> {
    let scale = b.max_abs();
    if let Some(i) = (0..b.dim()).find(|&i| b.get(i, i).re <= 1e-14 * scale) {
        return Err(Error::ZeroDiagonal(i));
    }
    Ok(())
}

/// Common kernel of `B o A^{on}` for `n < count`, by SVD of the stacked,
/// individually normalized matrices.
fn stacked_kernel(a: &HermMatrix, b: &HermMatrix, count: usize) -> Result<KernelBasis> {
    let n = a.dim();
    let mut stack = CMatrix::zeros(n * count, n);
    for p in 0..count {
        let m = a.hadamard_power(p as u64).hadamard_product(b)?;
        let s = m.max_abs();
        if s > 0.0 {
            stack.view_mut((p * n, 0), (n, n)).copy_from(&m.as_matrix().unscale(s));
        }
    }
    let svd = stack.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = n as f64 * KERNEL_CUTOFF * sigma_max;
    let vectors = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    Ok(KernelBasis {
        dim_ambient: n,
        vectors,
    })
}

fn embed(n: usize, block: &[usize], local: &KernelBasis) -> Vec<CVector> {
    local
        .vectors
        .iter()
        .map(|v| {
            let mut out = CVector::zeros(n);
            for (k, &i) in block.iter().enumerate() {
                out[i] = v[k];
            }
            out
        })
        .collect()
}

/// The three computations of `ker(B o sum_j c_j A^{oj})`, with their
/// largest mutual principal angle.
pub fn simultaneous_kernel_report(a: &HermMatrix, b: &HermMatrix, c: &CoeffVector) -> Result<SimKernelReport> {
    let n = a.dim();
    if b.dim() != n || c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if b.dim() != n { b.dim() } else { c.len() },
        });
    }
    check_weight(b)?;
    let an = a.normalized();
    let direct = hc_matrix(&an, c)?.hadamard_product(b)?.kernel_basis();
    let stacked = stacked_kernel(&an, b, n)?;
    let dec = stratify(&an, GroupTag::Trivial)?;
    let mut parts = Vec::new();
    for block in dec.partition.blocks() {
        parts.extend(embed(n, block, &b.principal(block).kernel_basis()));
    }
    let blockwise = KernelBasis {
        dim_ambient: n,
        vectors: parts,
    };
    let pairs = [(&direct, &stacked), (&direct, &blockwise), (&stacked, &blockwise)];
    let max_sin_angle = pairs
        .iter()
        .flat_map(|(x, y)| [x.sin_angle_into(y), y.sin_angle_into(x)])
        .fold(0.0, f64::max);
    Ok(SimKernelReport {
        direct,
        stacked,
        blockwise,
        partition: dec.partition,
        max_sin_angle,
    })
}

/// `ker(B o sum_j c_j A^{oj})`, cross-checked three ways.
pub fn simultaneous_kernel(a: &HermMatrix, b: &HermMatrix, c: &CoeffVector) -> Result<KernelBasis> {
    let report = simultaneous_kernel_report(a, b, c)?;
    if !report.agree() {
        return Err(Error::StructureMismatch(format!(
            "dimensions {}/{}/{}, largest principal-angle sine {:e}",
            report.direct.dim(),
            report.stacked.dim(),
            report.blockwise.dim(),
            report.max_sin_angle
        )));
    }
    Ok(report.direct)
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// `K_pi(A, B)` equals the full simultaneous kernel.
    pub equal: bool,
    /// The trivial-group partition of `A` refines `pi`.
    pub coarser: bool,
    pub full_kernel: KernelBasis,
    pub partitioned_kernel: KernelBasis,
    /// A vector of the full kernel far from `K_pi`, when they differ.
    pub witness: Option<CVector>,
}

/// Compares `K_pi(A, B) = (+)_p (^)_n ker(B_{J_p} o A_{J_p}^{on})` with the
/// simultaneous kernel. A `pi` that is not coarser than the trivial-group
/// partition of `A` is evaluated anyway and flagged in `coarser`.
pub fn kernel_partition_invariance(a: &HermMatrix, b: &HermMatrix, pi: &IndexPartition) -> Result<InvarianceReport> {
    let n = a.dim();
    if b.dim() != n || pi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if b.dim() != n { b.dim() } else { pi.n() },
        });
    }
    check_weight(b)?;
    let an = a.normalized();
    let coarser = stratify(&an, GroupTag::Trivial)?.partition.refines(pi);
    let full_kernel = stacked_kernel(&an, b, n)?;
    let mut parts = Vec::new();
    for block in pi.blocks() {
        let local = stacked_kernel(&an.principal(block), &b.principal(block), n)?;
        parts.extend(embed(n, block, &local));
    }
    let partitioned_kernel = KernelBasis {
        dim_ambient: n,
        vectors: parts,
    };
    let equal = full_kernel.same_subspace(&partitioned_kernel, ANGLE_TOL);
    let witness = if equal {
        None
    } else {
        let proj = partitioned_kernel.projector();
        full_kernel
            .vectors
            .iter()
            .map(|v| v - &proj * v)
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .filter(|r| r.norm() > ANGLE_TOL)
            .map(|r| {
                let s = r.norm();
                r / Complex64::new(s, 0.0)
            })
    };
    Ok(InvarianceReport {
        equal,
        coarser,
        full_kernel,
        partitioned_kernel,
        witness,
    })
}

/// The vector with `b_{i1,i2}` at `i1` and `-b_{i1,i1}` at `i2`. It lies in
/// `ker B` for rank-one `B`.
pub fn split_witness(b: &HermMatrix, i1: usize, i2: usize) -> CVector {
    let mut v = CVector::zeros(b.dim());
    v[i1] = b.get(i1, i2);
    v[i2] = -b.get(i1, i1);
    v
}

#[derive(Clone, Debug)]
pub struct UnitModulusReport {
    pub holds: bool,
    /// Indices grouped by block; `perm[k]` is the original index in slot `k`.
    pub permutation: Vec<usize>,
    /// Diagonal of the unitary `D`.
    pub phases: Vec<Complex64>,
    pub partition: IndexPartition,
    /// `(QD)^{-1} A (QD)`, block diagonal with all-ones and all-zero blocks.
    pub conjugated: HermMatrix,
}

/// For `A` with entries of modulus 0 or 1: finds `Q`, `D` with
/// `(QD)^{-1} A (QD)` a direct sum of all-ones and all-zero blocks.
pub fn unit_modulus_structure_check(a: &HermMatrix) -> Result<UnitModulusReport> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let modulus = a.get(i, j).norm();
            if modulus > 1e-9 && (modulus - 1.0).abs() > 1e-9 {
                return Err(Error::BadModulus {
                    row: i,
                    col: j,
                    modulus,
                });
            }
        }
    }
    let fallback = |holds| UnitModulusReport {
        holds,
        permutation: (0..n).collect(),
        phases: vec![Complex64::new(1.0, 0.0); n],
        partition: IndexPartition::singletons(n),
        conjugated: a.clone(),
    };
    if !a.is_psd() {
        return Ok(fallback(false));
    }
    let dec = stratify(a, GroupTag::Modulus)?;
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for (b, u) in dec.partition.blocks().iter().zip(&dec.factors) {
        for (k, &i) in b.iter().enumerate() {
            if u[k].norm() > 0.5 {
                phases[i] = u[k] / u[k].norm();
            }
        }
    }
    let permutation: Vec<usize> = dec.partition.blocks().iter().flatten().copied().collect();
    let conjugated = HermMatrix::from_fn(n, |r, s| {
        let (i, k) = (permutation[r], permutation[s]);
        phases[i].conj() * a.get(i, k) * phases[k]
    })?;
    let labels = dec.partition.labels();
    let holds = (0..n).all(|r| {
        (0..n).all(|s| {
            let (i, k) = (permutation[r], permutation[s]);
            let expect = if labels[i] == labels[k] && a.get(i, i).norm() > 0.5 {
                1.0
            } else {
                0.0
            };
            (conjugated.get(r, s) - Complex64::new(expect, 0.0)).norm() <= 1e-9
        })
    });
    Ok(UnitModulusReport {
        holds,
        permutation,
        phases,
        partition: dec.partition,
        conjugated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> HermMatrix {
        HermMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap()
    }

    #[test]
    fn constant_and_identity() {
        let d = stratify(&HermMatrix::ones(3), GroupTag::Trivial).unwrap();
        assert_eq!(d.partition, IndexPartition::whole(3));
        assert_eq!(d.factors[0].as_slice(), &[c(1.0, 0.0); 3]);
        assert_eq!(d.compressed, HermMatrix::identity(1));
        let d = stratify(&HermMatrix::identity(3), GroupTag::Trivial).unwrap();
        assert_eq!(d.partition, IndexPartition::singletons(3));
        assert_eq!(d.compressed, HermMatrix::identity(3));
    }

    #[test]
    fn unit_modulus_sample() {
        let d = stratify(&sample(), GroupTag::Modulus).unwrap();
        assert_eq!(d.partition, IndexPartition::whole(2));
        assert_eq!(d.factors[0].as_slice(), &[c(1.0, 0.0), c(0.0, -1.0)]);
        let d = stratify(&sample(), GroupTag::Trivial).unwrap();
        assert_eq!(d.partition, IndexPartition::singletons(2));
        assert_eq!(d.compressed, sample());
        let r = unit_modulus_structure_check(&sample()).unwrap();
        assert!(r.holds);
        assert_eq!(r.phases, vec![c(1.0, 0.0), c(0.0, -1.0)]);
        assert!(unit_modulus_structure_check(&HermMatrix::identity(3)).unwrap().holds);
        assert!(unit_modulus_structure_check(&HermMatrix::ones(3)).unwrap().holds);
        assert!(matches!(
            unit_modulus_structure_check(&HermMatrix::ones(2).scale(0.5)),
            Err(Error::BadModulus { .. })
        ));
    }

    #[test]
    fn dimensions() {
        let pi = IndexPartition::new(vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(
            strata_dimension(&IndexPartition::singletons(3), GroupTag::Trivial, 3).unwrap(),
            9
        );
        assert_eq!(
            strata_dimension(&IndexPartition::whole(3), GroupTag::Modulus, 3).unwrap(),
            3
        );
        assert_eq!(strata_dimension(&pi, GroupTag::Full, 3).unwrap(), 6);
        assert_eq!(
            (0..7).map(bell_number).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 15, 52, 203]
        );
    }

    #[test]
    fn partitions() {
        let pi = IndexPartition::new(vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(pi.blocks(), &[vec![0, 1], vec![2]]);
        assert!(IndexPartition::singletons(3).refines(&pi));
        assert!(pi.refines(&IndexPartition::whole(3)));
        assert!(!IndexPartition::whole(3).refines(&pi));
        assert!(IndexPartition::new(vec![vec![0, 1], vec![1]]).is_err());
        assert_eq!(pi.pull_back(&[2, 0, 1]).blocks(), &[vec![0], vec![1, 2]]);
    }

    #[test]
    fn simultaneous_kernels() {
        let a = HermMatrix::from_real_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let k = simultaneous_kernel(&a, &HermMatrix::ones(3), &CoeffVector::ones(3)).unwrap();
        assert_eq!(k.dim(), 1);
        let v = &k.vectors[0];
        assert!((v[0] + v[1]).norm() < 1e-10 && v[2].norm() < 1e-10);
        let k = simultaneous_kernel(&a, &HermMatrix::identity(3), &CoeffVector::ones(3)).unwrap();
        assert!(k.is_empty());
        let k = simultaneous_kernel(&HermMatrix::ones(2), &HermMatrix::ones(2), &CoeffVector::ones(2)).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(matches!(
            simultaneous_kernel(&a, &HermMatrix::diag(&[1.0, 0.0, 1.0]), &CoeffVector::ones(3)),
            Err(Error::ZeroDiagonal(1))
        ));
    }

    #[test]
    fn zero_diagonal_indices_share_a_block() {
        let k = simultaneous_kernel(&HermMatrix::zeros(2), &HermMatrix::ones(2), &CoeffVector::ones(2)).unwrap();
        assert_eq!(k.dim(), 1);
        let d = stratify(&HermMatrix::diag(&[0.0, 1.0, 0.0]), GroupTag::Full).unwrap();
        assert_eq!(d.partition.blocks(), &[vec![0, 2], vec![1]]);
        assert_eq!(d.compressed.get(0, 0), c(0.0, 0.0));
        assert_eq!(d.reconstruct(), HermMatrix::diag(&[0.0, 1.0, 0.0]));
    }

    #[test]
    fn invariance_and_split_witness() {
        let a = HermMatrix::ones(3);
        let w = CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let b = HermMatrix::outer(&w);
        let r = kernel_partition_invariance(&a, &b, &IndexPartition::whole(3)).unwrap();
        assert!(r.equal && r.coarser);
        let split = IndexPartition::new(vec![vec![0], vec![1, 2]]).unwrap();
        let r = kernel_partition_invariance(&a, &b, &split).unwrap();
        assert!(!r.equal && !r.coarser);
        let v = split_witness(&b, 0, 1);
        assert!((b.as_matrix() * &v).norm() < 1e-12);
        let resid = &v - r.partitioned_kernel.projector() * &v;
        assert!(resid.norm() > 1e-3);
    }

    #[test]
    fn json_round_trip() {
        let d = stratify(&sample(), GroupTag::Modulus).unwrap();
        let back = BlockDecomposition::from_json(&d.to_json_value().to_string()).unwrap();
        assert_eq!(back, d);
    }
}
