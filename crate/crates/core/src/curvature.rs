//! Algebraic curvature tensors, the `R_φ` constructors and identity checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BilinearSpace, LinearMap, Vector};
use crate::structures::ComplexStructure;

/// A 4-tensor `R(e_a, e_b, e_c, e_d)` over a [`BilinearSpace`], stored densely.
///
/// Tensors built by the constructors in this module satisfy
///
/// * `R(x,y,z,w) = -R(y,x,z,w)`
/// * `R(x,y,z,w) = R(z,w,x,y)`
/// * `R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w) = 0`
///
/// [`CurvatureTensor::from_raw`] accepts arbitrary arrays so that the
/// checks can be exercised on broken input.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    space: BilinearSpace,
    coeffs: Vec<f64>,
}

/// Largest violation of one identity, with the basis quadruple attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Violation {
    pub max: f64,
    pub at: [usize; 4],
}

impl Violation {
    fn record(&mut self, value: f64, at: [usize; 4]) {
        let v = value.abs();
        if v > self.max {
            self.max = v;
            self.at = at;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub antisymmetry: Violation,
    pub pair_symmetry: Violation,
    pub bianchi: Violation,
}

impl SymmetryReport {
    pub fn max(&self) -> f64 {
        self.antisymmetry
            .max
            .max(self.pair_symmetry.max)
            .max(self.bianchi.max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Verdict of an identity check, scaled against `max(1, max |R|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub violation: Violation,
}

impl CurvatureTensor {
    pub fn zero(space: BilinearSpace) -> Self {
        let m = space.dim();
        Self {
            space,
            coeffs: vec![0.0; m * m * m * m],
        }
    }

    /// Wraps a raw coefficient array, indexed `[a][b][c][d]` row-major,
    /// without checking any curvature identity.
    pub fn from_raw(space: BilinearSpace, coeffs: Vec<f64>) -> Result<Self> {
        let m = space.dim();
        if coeffs.len() != m * m * m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m * m * m,
                found: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    /// `R_φ(x,y,z,w) = (φy,z)(φx,w) - (φx,z)(φy,w)` for self-adjoint `φ`.
    pub fn from_self_adjoint(space: &BilinearSpace, phi: &LinearMap) -> Result<Self> {
        require_adjointness(space, phi, 1.0)?;
        Ok(Self::build_phi(space, phi, 0.0))
    }

    /// `R_φ(x,y,z,w) = (φy,z)(φx,w) - (φx,z)(φy,w) - 2(φx,y)(φz,w)` for
    /// skew-adjoint `φ`.
    pub fn from_skew_adjoint(space: &BilinearSpace, phi: &LinearMap) -> Result<Self> {
        require_adjointness(space, phi, -1.0)?;
        Ok(Self::build_phi(space, phi, -2.0))
    }

    fn build_phi(space: &BilinearSpace, phi: &LinearMap, cross: f64) -> Self {
        let m = space.dim();
        let f = phi.matrix();
        // pairing[b][c] = (φ e_b, e_c)
        let pairing: Vec<f64> = (0..m)
            .flat_map(|b| (0..m).map(move |c| (b, c)))
            .map(|(b, c)| space.sign(c) * f[(c, b)])
            .collect();
        let pr = |i: usize, j: usize| pairing[i * m + j];
        let mut coeffs = vec![0.0; m * m * m * m];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let mut v = pr(b, c) * pr(a, d) - pr(a, c) * pr(b, d);
                        if cross != 0.0 {
                            v += cross * pr(a, b) * pr(c, d);
                        }
                        coeffs[((a * m + b) * m + c) * m + d] = v;
                    }
                }
            }
        }
        Self {
            space: *space,
            coeffs,
        }
    }

    /// Entrywise linear combination `Σ c_i R_i`.
    pub fn combine(terms: &[(f64, &CurvatureTensor)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::EmptyCombination)?;
        let mut out = Self::zero(first.space);
        for (c, t) in terms {
            if !t.space.same_signature(&first.space) {
                return Err(Error::SpaceMismatch(
                    first.space.p(),
                    first.space.q(),
                    t.space.p(),
                    t.space.q(),
                ));
            }
            for (o, v) in out.coeffs.iter_mut().zip(&t.coeffs) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let m = self.dim();
        ((a * m + b) * m + c) * m + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.coeffs[self.idx(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, value: f64) {
        let i = self.idx(a, b, c, d);
        self.coeffs[i] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `R(x, y, z, w)` for arbitrary vectors.
    pub fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> Result<f64> {
        for v in [x, y, z, w] {
            self.space.check_vector(v)?;
        }
        let m = self.dim();
        let mut total = 0.0;
        for a in 0..m {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..m {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..m {
                    let xyz = xy * z[c];
                    if xyz == 0.0 {
                        continue;
                    }
                    for d in 0..m {
                        total += xyz * w[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        Ok(total)
    }

    pub fn check_symmetries(&self) -> SymmetryReport {
        let m = self.dim();
        let mut anti = Violation::default();
        let mut pair = Violation::default();
        let mut bianchi = Violation::default();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let r = self.get(a, b, c, d);
                        anti.record(r + self.get(b, a, c, d), [a, b, c, d]);
                        pair.record(r - self.get(c, d, a, b), [a, b, c, d]);
                        bianchi.record(
                            r + self.get(b, c, a, d) + self.get(c, a, b, d),
                            [a, b, c, d],
                        );
                    }
                }
            }
        }
        SymmetryReport {
            antisymmetry: anti,
            pair_symmetry: pair,
            bianchi,
        }
    }

    /// The endomorphism `z ↦ R(x,y)z`, defined by `(R(x,y)z, w) = R(x,y,z,w)`.
    pub fn apply_pair(&self, x: &Vector, y: &Vector) -> Result<LinearMap> {
        self.space.check_vector(x)?;
        self.space.check_vector(y)?;
        let m = self.dim();
        let mut out = nalgebra::DMatrix::zeros(m, m);
        for a in 0..m {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..m {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..m {
                    for d in 0..m {
                        out[(d, c)] += xy * self.get(a, b, c, d);
                    }
                }
            }
        }
        for d in 0..m {
            let s = self.space.sign(d);
            out.row_mut(d).scale_mut(s);
        }
        LinearMap::from_matrix(out)
    }

    /// `(T*R)(x,y,z,w) = R(Tx, Ty, Tz, Tw)`.
    pub fn pullback(&self, t: &LinearMap) -> Result<Self> {
        self.transform_slots(t, [true; 4])
    }

    /// Substitutes `T·` into the slots flagged in `slots`.
    pub fn transform_slots(&self, t: &LinearMap, slots: [bool; 4]) -> Result<Self> {
        self.space.check_map(t)?;
        let mut out = self.clone();
        for (slot, apply) in slots.iter().enumerate() {
            if *apply {
                out = out.contract_slot(t, slot);
            }
        }
        Ok(out)
    }

    fn contract_slot(&self, t: &LinearMap, slot: usize) -> Self {
        let m = self.dim();
        let tm = t.matrix();
        let stride = m.pow(3 - slot as u32);
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for (flat, out) in coeffs.iter_mut().enumerate() {
            let a = (flat / stride) % m;
            let base = flat - a * stride;
            let mut acc = 0.0;
            for k in 0..m {
                let tk = tm[(k, a)];
                if tk != 0.0 {
                    acc += tk * self.coeffs[base + k * stride];
                }
            }
            *out = acc;
        }
        Self {
            space: self.space,
            coeffs,
        }
    }

    fn max_diff(&self, other: &Self) -> Violation {
        let m = self.dim();
        let mut v = Violation::default();
        for (flat, (x, y)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            let at = [flat / (m * m * m), (flat / (m * m)) % m, (flat / m) % m, flat % m];
            v.record(x - y, at);
        }
        v
    }

    fn scaled_tol(&self, tol: f64) -> f64 {
        tol * self.max_abs().max(1.0)
    }

    /// `J*R = R`, entrywise.
    pub fn check_j_invariance(&self, j: &ComplexStructure, tol: f64) -> Result<IdentityCheck> {
        let pulled = self.pullback(j.map())?;
        let violation = pulled.max_diff(self);
        Ok(IdentityCheck {
            holds: violation.max <= self.scaled_tol(tol),
            violation,
        })
    }

    /// The additional Kähler-type identity
    ///
    /// `R(x,y,z,w) + R(Jx,Jy,Jz,Jw) = R(Jx,Jy,z,w) + R(Jx,y,Jz,w) + R(Jx,y,z,Jw)
    ///   + R(x,Jy,Jz,w) + R(x,Jy,z,Jw) + R(x,y,Jz,Jw)`
    ///
    /// checked on all basis quadruples.
    pub fn check_gray_identity(&self, j: &ComplexStructure, tol: f64) -> Result<IdentityCheck> {
        let jm = j.map();
        let mut lhs = Self::combine(&[(1.0, self), (1.0, &self.pullback(jm)?)])?;
        const PAIRS: [[bool; 4]; 6] = [
            [true, true, false, false],
            [true, false, true, false],
            [true, false, false, true],
            [false, true, true, false],
            [false, true, false, true],
            [false, false, true, true],
        ];
        for slots in PAIRS {
            let term = self.transform_slots(jm, slots)?;
            for (o, v) in lhs.coeffs.iter_mut().zip(&term.coeffs) {
                *o -= v;
            }
        }
        let violation = lhs.max_diff(&Self::zero(self.space));
        Ok(IdentityCheck {
            holds: violation.max <= self.scaled_tol(tol),
            violation,
        })
    }
}

fn require_adjointness(space: &BilinearSpace, phi: &LinearMap, sign: f64) -> Result<()> {
    let (deviation, row, col) = space.adjoint_defect(phi, sign)?;
    if deviation > space.tol() * phi.max_abs().max(1.0) {
        return Err(Error::AdjointnessViolated {
            kind: if sign > 0.0 { "self-adjoint" } else { "skew-adjoint" },
            row,
            col,
            deviation,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;
    use crate::structures::{standard_complex_structure, standard_quaternion_structure};

    fn space(p: usize, q: usize) -> BilinearSpace {
        BilinearSpace::new(p, q).unwrap()
    }

    fn r_id(s: &BilinearSpace) -> CurvatureTensor {
        CurvatureTensor::from_self_adjoint(s, &LinearMap::identity(s.dim())).unwrap()
    }

    #[test]
    fn identity_tensor_entries() {
        let s = space(0, 2);
        let r = r_id(&s);
        assert_eq!(r.get(0, 1, 1, 0), 1.0);
        assert_eq!(r.get(0, 1, 0, 1), -1.0);
    }

    #[test]
    fn zero_generator_gives_zero_tensor() {
        let s = space(1, 3);
        let z = LinearMap::zeros(4);
        assert_eq!(CurvatureTensor::from_self_adjoint(&s, &z).unwrap(), CurvatureTensor::zero(s));
        assert_eq!(CurvatureTensor::from_skew_adjoint(&s, &z).unwrap(), CurvatureTensor::zero(s));
    }

    #[test]
    fn skew_constructor_on_rotation() {
        let s = space(0, 2);
        let j = standard_complex_structure(&s).unwrap();
        let r = CurvatureTensor::from_skew_adjoint(&s, j.map()).unwrap();
        assert_eq!(r.get(0, 1, 0, 1), -3.0);

        let s4 = space(0, 4);
        let j4 = standard_complex_structure(&s4).unwrap();
        let r4 = CurvatureTensor::from_skew_adjoint(&s4, j4.map()).unwrap();
        assert_eq!(r4.get(2, 3, 2, 3), -3.0);
    }

    #[test]
    fn constructors_reject_wrong_adjointness() {
        let s = space(0, 2);
        let j = standard_complex_structure(&s).unwrap();
        let err = CurvatureTensor::from_self_adjoint(&s, j.map()).unwrap_err();
        assert!(matches!(err, Error::AdjointnessViolated { kind: "self-adjoint", .. }));
        let err = CurvatureTensor::from_skew_adjoint(&s, &LinearMap::identity(2)).unwrap_err();
        assert!(matches!(err, Error::AdjointnessViolated { kind: "skew-adjoint", .. }));
    }

    #[test]
    fn combine_examples() {
        let s = space(0, 2);
        let rid = r_id(&s);
        let j = standard_complex_structure(&s).unwrap();
        let rj = CurvatureTensor::from_skew_adjoint(&s, j.map()).unwrap();
        assert_eq!(CurvatureTensor::combine(&[(1.0, &rid), (0.0, &rj)]).unwrap(), rid);
        assert_eq!(
            CurvatureTensor::combine(&[(1.0, &rid), (-1.0, &rid)]).unwrap(),
            CurvatureTensor::zero(s)
        );
        let sum = CurvatureTensor::combine(&[(1.0, &rid), (1.0, &rj)]).unwrap();
        assert_eq!(sum.get(0, 1, 1, 0), 4.0);

        let other = r_id(&space(1, 1));
        assert!(matches!(
            CurvatureTensor::combine(&[(1.0, &rid), (1.0, &other)]),
            Err(Error::SpaceMismatch(..))
        ));
        assert_eq!(CurvatureTensor::combine(&[]), Err(Error::EmptyCombination));
    }

    #[test]
    fn symmetry_report_detects_perturbation() {
        let s = space(0, 4);
        let r = r_id(&s);
        assert!(r.check_symmetries().max() <= 1e-12);
        assert_eq!(CurvatureTensor::zero(s).check_symmetries().max(), 0.0);
        let mut broken = r.clone();
        broken.set(0, 1, 2, 3, r.get(0, 1, 2, 3) + 1.0);
        let report = broken.check_symmetries();
        assert!(report.pair_symmetry.max >= 1.0);
    }

    #[test]
    fn apply_pair_on_identity_tensor() {
        let s = space(0, 4);
        let r = r_id(&s);
        let e = |i| basis_vector(4, i);
        let op = r.apply_pair(&e(0), &e(1)).unwrap();
        assert_eq!(op.apply(&e(0)).unwrap(), -e(1));
        assert_eq!(op.apply(&e(1)).unwrap(), e(0));
        assert_eq!(op.apply(&e(2)).unwrap(), Vector::zeros(4));
        assert_eq!(op.apply(&e(3)).unwrap(), Vector::zeros(4));

        let x = Vector::from_vec(vec![0.3, -1.0, 2.0, 0.5]);
        assert!(r.apply_pair(&x, &x).unwrap().max_abs() < 1e-15);
        let y = Vector::from_vec(vec![1.0, 0.2, 0.0, -0.7]);
        let single = r.apply_pair(&x, &y).unwrap();
        let double = r.apply_pair(&(&x * 2.0), &y).unwrap();
        assert!(double.max_abs_diff(&single.scale(2.0)).0 < 1e-14);
    }

    #[test]
    fn apply_pair_matches_eval() {
        let s = space(1, 3);
        let r = r_id(&s);
        let x = Vector::from_vec(vec![0.3, -1.0, 2.0, 0.5]);
        let y = Vector::from_vec(vec![1.0, 0.2, 0.0, -0.7]);
        let z = Vector::from_vec(vec![-0.4, 0.9, 1.1, 0.0]);
        let w = Vector::from_vec(vec![2.0, 0.0, -0.3, 1.5]);
        let lhs = s.inner(&r.apply_pair(&x, &y).unwrap().apply(&z).unwrap(), &w).unwrap();
        let rhs = r.eval(&x, &y, &z, &w).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pullback_examples() {
        let s = space(0, 2);
        let r = r_id(&s);
        assert_eq!(r.pullback(&LinearMap::identity(2)).unwrap(), r);
        assert_eq!(r.pullback(&LinearMap::identity(2).scale(-1.0)).unwrap(), r);
        let j = standard_complex_structure(&s).unwrap();
        assert_eq!(r.pullback(j.map()).unwrap(), r);
    }

    #[test]
    fn identity_tensor_is_j_invariant_and_gray() {
        let s = space(2, 2);
        let j = standard_complex_structure(&s).unwrap();
        let r = r_id(&s);
        assert!(r.check_j_invariance(&j, 1e-12).unwrap().holds);
        assert!(r.check_gray_identity(&j, 1e-12).unwrap().holds);
        assert!(CurvatureTensor::zero(s).check_gray_identity(&j, 1e-12).unwrap().holds);
    }

    #[test]
    fn quaternion_unit_violates_gray() {
        let s = space(0, 8);
        let quat = standard_quaternion_structure(&s).unwrap();
        let j = quat.as_complex_structure();
        let rj = CurvatureTensor::from_skew_adjoint(&s, quat.j()).unwrap();
        assert!(rj.check_j_invariance(&j, 1e-12).unwrap().holds);
        let gray = rj.check_gray_identity(&j, 1e-10).unwrap();
        assert!(!gray.holds);
        assert!(gray.violation.max >= 0.1);
    }
}
