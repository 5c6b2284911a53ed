//! Jordan-structure fingerprints computed from eigenvalue clusters and the
//! ranks of shifted powers.
//!
//! For an eigenvalue `λ` of algebraic multiplicity `μ`, the sequence
//! `rank (A - λI)^k`, `k = 1..=μ`, determines the number of Jordan blocks of
//! every size. Together with the clustered spectrum this pins down the Jordan
//! normal form without ever building a Jordan basis.

use nalgebra::{linalg::Schur, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::LinearMap;
use crate::error::{Error, Result};

/// Default relative tolerance for Jordan-structure analysis.
///
/// Looser than [`super::DEFAULT_TOL`]: eigenvalues of a defective block of
/// size two split by roughly `sqrt(eps)` relative to the matrix scale.
pub const DEFAULT_JORDAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    /// Cluster representative (mean of the member eigenvalues).
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
    /// `rank (A - λI)^k` for `k = 1..=multiplicity`.
    pub rank_sequence: Vec<usize>,
}

impl EigenCluster {
    /// Jordan block sizes for this eigenvalue, largest first.
    pub fn block_sizes(&self, dim: usize) -> Vec<usize> {
        let mut ranks = Vec::with_capacity(self.rank_sequence.len() + 2);
        ranks.push(dim);
        ranks.extend_from_slice(&self.rank_sequence);
        let last = *ranks.last().unwrap_or(&dim);
        ranks.push(last);
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0].saturating_sub(w[1])).collect();
        let mut sizes = Vec::new();
        for k in (1..at_least.len()).rev() {
            let exactly = at_least[k - 1].saturating_sub(at_least[k]);
            sizes.extend(std::iter::repeat_n(k, exactly));
        }
        sizes
    }

    fn is_real(&self) -> bool {
        self.eigenvalue.im == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanInvariants {
    pub dim: usize,
    /// Sorted by `(re, im)`.
    pub clusters: Vec<EigenCluster>,
    pub total_rank: usize,
    /// Largest singular value of the analysed map.
    pub scale: f64,
    /// Set when some eigenvalue gap lies within a factor of ten of the
    /// clustering threshold.
    pub ambiguous: bool,
}

impl JordanInvariants {
    pub fn eigenvalues(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.clusters.iter().map(|c| (c.eigenvalue, c.multiplicity))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.clusters.len() == 1 && self.clusters[0].eigenvalue == Complex64::new(0.0, 0.0)
    }

    /// True when every cluster is semisimple.
    pub fn is_diagonalizable(&self) -> bool {
        self.clusters
            .iter()
            .all(|c| c.rank_sequence.first() == Some(&(self.dim - c.multiplicity)))
    }
}

/// Singular values, largest first.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    to_faer(a)
        .singular_values()
        .unwrap_or_else(|_| a.clone().svd(false, true).singular_values.as_slice().to_vec())
}

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)])
}

/// Orthonormal basis of the span of the left singular vectors whose singular
/// values exceed `threshold`.
///
/// faer is used here because nalgebra's SVD returns inaccurate factors on
/// some rank-deficient matrices.
fn dominant_left_basis(a: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    if a.is_empty() {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = to_faer(a).thin_svd().expect("svd of a finite matrix");
    let (u, sigma) = (svd.U(), svd.S().column_vector());
    let keep: Vec<usize> = (0..sigma.nrows()).filter(|&i| sigma[i] > threshold).collect();
    DMatrix::from_fn(a.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Number of singular values above `tol` times the largest one.
pub fn numeric_rank(a: &LinearMap, tol: f64) -> usize {
    let sv = singular_values(a.matrix());
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * max).count()
}

/// Rank with an absolute singular-value threshold.
pub(crate) fn rank_above(a: &DMatrix<f64>, threshold: f64) -> usize {
    singular_values(a).iter().filter(|s| **s > threshold).count()
}

pub fn eigenvalues(a: &LinearMap) -> Result<Vec<Complex64>> {
    // The QR iteration can stall when deflating at machine epsilon; retry
    // with slightly looser criteria, all far below any clustering threshold.
    for eps in [f64::EPSILON, 1e-15, 1e-14, 1e-13] {
        if let Some(schur) = Schur::try_new(a.matrix().clone(), eps, 10_000) {
            let (_, t) = schur.unpack();
            let eig = quasi_triangular_eigenvalues(&t);
            if eig.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Ok(eig);
            }
        }
    }
    Err(Error::EigenSolverFailed)
}

/// Eigenvalues of a real Schur factor, reading 1x1 and 2x2 diagonal blocks.
fn quasi_triangular_eigenvalues(t: &DMatrix<f64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mean = (a + d) / 2.0;
            // Discriminant of the block's characteristic polynomial, written
            // to avoid cancellation in (a+d)^2 - 4(ad-bc).
            let disc = ((a - d) / 2.0).powi(2) + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                out.push(Complex64::new(mean + r, 0.0));
                out.push(Complex64::new(mean - r, 0.0));
            } else {
                let r = (-disc).sqrt();
                out.push(Complex64::new(mean, r));
                out.push(Complex64::new(mean, -r));
            }
            i += 2;
        } else {
            out.push(Complex64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn jordan_invariants(a: &LinearMap, tol: f64) -> Result<JordanInvariants> {
    let dim = a.dim();
    let scale = singular_values(a.matrix()).into_iter().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(JordanInvariants {
            dim,
            clusters: vec![EigenCluster {
                eigenvalue: Complex64::new(0.0, 0.0),
                multiplicity: dim,
                rank_sequence: vec![0; dim],
            }],
            total_rank: 0,
            scale,
            ambiguous: false,
        });
    }

    let eig = eigenvalues(a)?;
    let threshold = tol * scale;

    // Single-linkage clustering.
    let mut parent: Vec<usize> = (0..eig.len()).collect();
    let mut ambiguous = false;
    for i in 0..eig.len() {
        for j in (i + 1)..eig.len() {
            let d = (eig[i] - eig[j]).norm();
            if d > 0.0 && d >= threshold / 10.0 && d <= threshold * 10.0 {
                ambiguous = true;
            }
            if d < threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut root_slot = vec![usize::MAX; eig.len()];
    for (i, &e) in eig.iter().enumerate() {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(e);
    }

    let mut centers: Vec<(Complex64, usize)> = groups
        .iter()
        .map(|g| {
            let sum: Complex64 = g.iter().sum();
            let mut mean = sum / g.len() as f64;
            if mean.im.abs() <= threshold {
                mean.im = 0.0;
            }
            (mean, g.len())
        })
        .collect();
    centers.sort_by(|a, b| cmp_complex(&a.0, &b.0));

    let m = a.matrix();
    let mut clusters = Vec::with_capacity(centers.len());
    for (lambda, mult) in &centers {
        if lambda.im < 0.0 {
            continue;
        }
        let rank_sequence = if lambda.im == 0.0 {
            let shifted = m - DMatrix::identity(dim, dim) * lambda.re;
            shifted_rank_sequence(&shifted, *mult, dim - mult, threshold)
        } else {
            // Real form [[A - Re λ, Im λ], [-Im λ, A - Re λ]] of A - λ; every
            // complex rank appears twice.
            let re = m - DMatrix::identity(dim, dim) * lambda.re;
            let im = DMatrix::identity(dim, dim) * lambda.im;
            let mut real_form = DMatrix::zeros(2 * dim, 2 * dim);
            real_form.view_mut((0, 0), (dim, dim)).copy_from(&re);
            real_form.view_mut((dim, dim), (dim, dim)).copy_from(&re);
            real_form.view_mut((0, dim), (dim, dim)).copy_from(&im);
            real_form.view_mut((dim, 0), (dim, dim)).copy_from(&(-im));
            shifted_rank_sequence(&real_form, *mult, 2 * (dim - mult), threshold)
                .into_iter()
                .map(|r| r / 2)
                .collect()
        };
        clusters.push(EigenCluster {
            eigenvalue: *lambda,
            multiplicity: *mult,
            rank_sequence,
        });
    }

    // A real map has a conjugation-symmetric spectrum; mirror the upper
    // half-plane clusters instead of trusting the computed lower ones.
    let mirrored: Vec<EigenCluster> = clusters
        .iter()
        .filter(|c| !c.is_real())
        .map(|c| EigenCluster {
            eigenvalue: c.eigenvalue.conj(),
            multiplicity: c.multiplicity,
            rank_sequence: c.rank_sequence.clone(),
        })
        .collect();
    let upper_count: usize = mirrored.iter().map(|c| c.multiplicity).sum();
    let lower_count: usize = centers
        .iter()
        .filter(|(l, _)| l.im < 0.0)
        .map(|(_, mult)| mult)
        .sum();
    if upper_count != lower_count {
        ambiguous = true;
    }
    clusters.extend(mirrored);
    clusters.sort_by(|a, b| cmp_complex(&a.eigenvalue, &b.eigenvalue));

    let total_rank = rank_above(m, threshold);
    Ok(JordanInvariants {
        dim,
        clusters,
        total_rank,
        scale,
        ambiguous,
    })
}

/// Orthonormal basis of the range of `shifted^steps`, built one application
/// at a time with singular values above `threshold` kept.
pub(crate) fn power_range(shifted: &DMatrix<f64>, steps: usize, threshold: f64) -> DMatrix<f64> {
    let mut basis = DMatrix::identity(shifted.nrows(), shifted.nrows());
    for _ in 0..steps {
        if basis.ncols() == 0 {
            break;
        }
        basis = dominant_left_basis(&(shifted * &basis), threshold);
    }
    basis
}

/// Ranks of `(A - λ)^k` for `k = 1..=len`; once the rank reaches `floor`
/// the remaining entries repeat it.
///
/// Each step applies the shift once to an orthonormal basis of the previous
/// range, so the singular-value threshold stays `tol * |A|` at every power
/// instead of compounding.
fn shifted_rank_sequence(shifted: &DMatrix<f64>, len: usize, floor: usize, threshold: f64) -> Vec<usize> {
    let mut seq = Vec::with_capacity(len);
    let mut basis = DMatrix::identity(shifted.nrows(), shifted.nrows());
    for _ in 0..len {
        basis = dominant_left_basis(&(shifted * &basis), threshold);
        let r = basis.ncols();
        seq.push(r);
        if r <= floor {
            seq.resize(len, r);
            break;
        }
    }
    seq
}

/// Equality of Jordan normal forms up to eigenvalue error `tol` (relative to
/// the larger of the two spectral scales).
pub fn jordan_equivalent(a: &JordanInvariants, b: &JordanInvariants, tol: f64) -> bool {
    if a.dim != b.dim || a.clusters.len() != b.clusters.len() {
        return false;
    }
    let threshold = tol * a.scale.max(b.scale);
    let mut used = vec![false; b.clusters.len()];
    for ca in &a.clusters {
        let nearest = b
            .clusters
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, cb)| (i, (ca.eigenvalue - cb.eigenvalue).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let Some((i, dist)) = nearest else {
            return false;
        };
        let cb = &b.clusters[i];
        if dist > threshold
            || ca.multiplicity != cb.multiplicity
            || ca.rank_sequence != cb.rank_sequence
        {
            return false;
        }
        used[i] = true;
    }
    true
}
