use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::map::{check_dim, LinearMap, Vector};
use crate::error::{Error, Result};

/// Default relative tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `R^(p,q)`: `R^m` with the diagonal form `diag(-1,…,-1,+1,…,+1)`,
/// `p` timelike directions first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearSpace {
    p: usize,
    q: usize,
    tol: f64,
}

/// Causal type of a 2-plane, read off from the signature of its restricted
/// Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneClass {
    Spacelike,
    Timelike,
    Mixed,
    Degenerate,
}

impl PlaneClass {
    pub fn name(self) -> &'static str {
        match self {
            PlaneClass::Spacelike => "spacelike",
            PlaneClass::Timelike => "timelike",
            PlaneClass::Mixed => "mixed",
            PlaneClass::Degenerate => "degenerate",
        }
    }
}

impl BilinearSpace {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        Self::with_tol(p, q, DEFAULT_TOL)
    }

    pub fn with_tol(p: usize, q: usize, tol: f64) -> Result<Self> {
        if p + q < 2 {
            return Err(Error::DimensionTooSmall { p, q });
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        Ok(Self { p, q, tol })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `(e_i, e_i)`.
    #[inline]
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.p {
            -1.0
        } else {
            1.0
        }
    }

    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            if r == c {
                self.sign(r)
            } else {
                0.0
            }
        })
    }

    pub fn gram_map(&self) -> LinearMap {
        LinearMap::from_diagonal(&(0..self.dim()).map(|i| self.sign(i)).collect::<Vec<_>>())
    }

    pub fn same_signature(&self, other: &BilinearSpace) -> bool {
        self.p == other.p && self.q == other.q
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        check_dim(self.dim(), v.len())
    }

    pub fn check_map(&self, a: &LinearMap) -> Result<()> {
        check_dim(self.dim(), a.dim())
    }

    /// `xᵀ G y`.
    pub fn inner(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.inner_unchecked(x, y))
    }

    pub(crate) fn inner_unchecked(&self, x: &Vector, y: &Vector) -> f64 {
        x.iter()
            .zip(y.iter())
            .enumerate()
            .map(|(i, (a, b))| self.sign(i) * a * b)
            .sum()
    }

    /// `G·v`: the covector `(v, ·)` in coordinates.
    pub(crate) fn lower(&self, v: &Vector) -> Vector {
        Vector::from_fn(v.len(), |i, _| self.sign(i) * v[i])
    }

    /// The adjoint `A* = G⁻¹ Aᵀ G`, characterised by `(Av, w) = (v, A*w)`.
    ///
    /// With `G = G⁻¹ = diag(±1)` every entry is a signed copy of an entry of
    /// `Aᵀ`, so the involution `(A*)* = A` holds exactly.
    pub fn adjoint(&self, a: &LinearMap) -> Result<LinearMap> {
        self.check_map(a)?;
        let m = a.matrix();
        let n = self.dim();
        LinearMap::from_matrix(DMatrix::from_fn(n, n, |r, c| {
            self.sign(r) * m[(c, r)] * self.sign(c)
        }))
    }

    /// Largest entry of `|A - εA*|` and its position, for `ε = ±1`.
    pub(crate) fn adjoint_defect(&self, a: &LinearMap, sign: f64) -> Result<(f64, usize, usize)> {
        let adj = self.adjoint(a)?;
        Ok(a.max_abs_diff(&adj.scale(sign)))
    }

    pub fn is_self_adjoint(&self, a: &LinearMap, tol: f64) -> Result<bool> {
        let (dev, _, _) = self.adjoint_defect(a, 1.0)?;
        Ok(dev <= tol * a.max_abs().max(1.0))
    }

    pub fn is_skew_adjoint(&self, a: &LinearMap, tol: f64) -> Result<bool> {
        let (dev, _, _) = self.adjoint_defect(a, -1.0)?;
        Ok(dev <= tol * a.max_abs().max(1.0))
    }

    /// The restricted Gram determinant `(x,x)(y,y) - (x,y)²` and the
    /// threshold below which it counts as zero (`tol·|x|²|y|²`, Euclidean).
    pub fn plane_determinant(&self, x: &Vector, y: &Vector) -> Result<(f64, f64)> {
        let xx = self.inner(x, x)?;
        let yy = self.inner(y, y)?;
        let xy = self.inner(x, y)?;
        let det = xx * yy - xy * xy;
        let threshold = self.tol * x.norm_squared() * y.norm_squared();
        Ok((det, threshold))
    }

    pub fn classify_plane(&self, x: &Vector, y: &Vector) -> Result<PlaneClass> {
        let (det, threshold) = self.plane_determinant(x, y)?;
        if det.abs() <= threshold {
            return Ok(PlaneClass::Degenerate);
        }
        if det < 0.0 {
            return Ok(PlaneClass::Mixed);
        }
        // Definite restriction: the diagonal entries share the sign of the trace.
        let trace = self.inner_unchecked(x, x) + self.inner_unchecked(y, y);
        Ok(if trace > 0.0 {
            PlaneClass::Spacelike
        } else {
            PlaneClass::Timelike
        })
    }
}

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> Vector {
        basis_vector(dim, i)
    }

    #[test]
    fn inner_products_on_basis_vectors() {
        let euclid = BilinearSpace::new(0, 2).unwrap();
        assert_eq!(euclid.inner(&e(2, 0), &e(2, 0)).unwrap(), 1.0);

        let lorentz = BilinearSpace::new(1, 1).unwrap();
        assert_eq!(lorentz.inner(&e(2, 0), &e(2, 0)).unwrap(), -1.0);
        let null = Vector::from_vec(vec![1.0, 1.0]);
        assert_eq!(lorentz.inner(&null, &null).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_wrong_dimension() {
        let s = BilinearSpace::new(1, 2).unwrap();
        assert!(matches!(
            s.inner(&e(2, 0), &e(3, 0)),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn space_rejects_small_dimension_and_bad_tol() {
        assert!(BilinearSpace::new(1, 0).is_err());
        assert!(BilinearSpace::with_tol(0, 2, 0.0).is_err());
        assert!(BilinearSpace::with_tol(0, 2, f64::NAN).is_err());
    }

    #[test]
    fn euclidean_adjoint_is_transpose() {
        let s = BilinearSpace::new(0, 3).unwrap();
        let a = LinearMap::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 9.5],
        ])
        .unwrap();
        assert_eq!(s.adjoint(&a).unwrap(), a.transpose());
    }

    #[test]
    fn lorentzian_adjoint_of_nilpotent() {
        let s = BilinearSpace::new(1, 1).unwrap();
        let a = LinearMap::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let adj = s.adjoint(&a).unwrap();
        assert_eq!(
            adj,
            LinearMap::from_rows(&[vec![0.0, 0.0], vec![-1.0, 0.0]]).unwrap()
        );
        // (Av, w) = (v, A*w) on every basis pair.
        for i in 0..2 {
            for j in 0..2 {
                let lhs = s.inner(&a.apply(&e(2, i)).unwrap(), &e(2, j)).unwrap();
                let rhs = s.inner(&e(2, i), &adj.apply(&e(2, j)).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn gram_is_self_adjoint() {
        let s = BilinearSpace::new(2, 3).unwrap();
        let g = s.gram_map();
        assert_eq!(s.adjoint(&g).unwrap(), g);
    }

    #[test]
    fn plane_classes() {
        let s11 = BilinearSpace::new(1, 1).unwrap();
        assert_eq!(s11.classify_plane(&e(2, 0), &e(2, 1)).unwrap(), PlaneClass::Mixed);
        let x = Vector::from_vec(vec![1.0, 1.0]);
        let y = Vector::from_vec(vec![1.0, -1.0]);
        let (det, _) = s11.plane_determinant(&x, &y).unwrap();
        assert_eq!(det, -4.0);
        assert_eq!(s11.classify_plane(&x, &y).unwrap(), PlaneClass::Mixed);

        let s04 = BilinearSpace::new(0, 4).unwrap();
        assert_eq!(s04.classify_plane(&e(4, 0), &e(4, 1)).unwrap(), PlaneClass::Spacelike);

        let s22 = BilinearSpace::new(2, 2).unwrap();
        assert_eq!(s22.classify_plane(&e(4, 0), &e(4, 1)).unwrap(), PlaneClass::Timelike);
        assert_eq!(s22.classify_plane(&e(4, 0), &e(4, 0)).unwrap(), PlaneClass::Degenerate);
        // A null vector paired with an orthogonal spacelike one spans a degenerate plane.
        let n = Vector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(s22.classify_plane(&n, &e(4, 0)).unwrap(), PlaneClass::Mixed);
        assert_eq!(s22.classify_plane(&n, &e(4, 3)).unwrap(), PlaneClass::Degenerate);
    }
}
