use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use curvlab::generators::{project_commutation, random_adjoint_class, random_map};
use curvlab::jordan_ip::{
    check_almost_complex, curvature_operator, sample_planes, skew_adjoint_defect, CausalType,
    OrientedPlane, PlaneKind,
};
use curvlab::linalg::{
    jordan_equivalent, jordan_invariants, singular_values, BilinearSpace, LinearMap, PlaneClass,
    Vector,
};
use curvlab::structures::{
    check_admissible, check_admissible_pair, nilpotent_null_pair, standard_complex_structure,
    standard_quaternion_structure, PlaneSampler,
};
use curvlab::CurvatureTensor;

const ANY: &[(usize, usize)] = &[(0, 4), (0, 5), (1, 3), (2, 2), (2, 4), (3, 2), (1, 5)];
const EVEN: &[(usize, usize)] = &[(0, 4), (2, 2), (0, 6), (2, 4), (4, 2)];

fn any_signature() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(ANY)
}

fn even_signature() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(EVEN)
}

fn sign() -> impl Strategy<Value = f64> {
    prop::sample::select(&[1.0, -1.0][..])
}

fn gaussian(rng: &mut ChaCha8Rng, m: usize) -> Vector {
    Vector::from_fn(m, |_, _| StandardNormal.sample(rng))
}

fn tensor_from(s: &BilinearSpace, phi: &LinearMap, eps: f64) -> CurvatureTensor {
    if eps > 0.0 {
        CurvatureTensor::from_self_adjoint(s, phi).unwrap()
    } else {
        CurvatureTensor::from_skew_adjoint(s, phi).unwrap()
    }
}

/// A generic algebraic curvature tensor: a random combination of three
/// self-adjoint and skew-adjoint constructor outputs.
fn random_tensor(s: &BilinearSpace, rng: &mut ChaCha8Rng) -> CurvatureTensor {
    let terms: Vec<(f64, CurvatureTensor)> = [1.0, -1.0, 1.0]
        .into_iter()
        .map(|eps| {
            let c: f64 = StandardNormal.sample(rng);
            (c, tensor_from(s, &random_adjoint_class(s, eps, rng).unwrap(), eps))
        })
        .collect();
    let refs: Vec<(f64, &CurvatureTensor)> = terms.iter().map(|(c, t)| (*c, t)).collect();
    CurvatureTensor::combine(&refs).unwrap()
}

fn all_planes(s: &BilinearSpace, n: usize, seed: u64) -> Vec<OrientedPlane> {
    CausalType::ALL
        .into_iter()
        .filter(|c| c.realizable_plane(s))
        .flat_map(|c| sample_planes(s, PlaneKind::RealPlane(c), n, seed).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution((p, q) in any_signature(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_map(s.dim(), &mut rng);
        let back = s.adjoint(&s.adjoint(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn adjoint_moves_across_the_form((p, q) in any_signature(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_map(s.dim(), &mut rng);
        let adj = s.adjoint(&a).unwrap();
        let v = gaussian(&mut rng, s.dim());
        let w = gaussian(&mut rng, s.dim());
        let lhs = s.inner(&a.apply(&v).unwrap(), &w).unwrap();
        let rhs = s.inner(&v, &adj.apply(&w).unwrap()).unwrap();
        let bound = 1e-10 * a.frobenius_norm() * v.norm() * w.norm();
        prop_assert!((lhs - rhs).abs() <= bound, "{lhs} vs {rhs}");
    }

    #[test]
    fn jordan_invariants_are_similarity_invariant(m in 3usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_map(m, &mut rng);
        let psi = DMatrix::identity(m, m) + random_map(m, &mut rng).into_matrix() * (0.3 / m as f64);
        let sv = singular_values(&psi);
        let cond = sv.iter().copied().fold(0.0, f64::max) / sv.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assume!(cond < 100.0);
        let inv = psi.clone().try_inverse().unwrap();
        let b = LinearMap::from_matrix(&psi * a.matrix() * inv).unwrap();
        let ia = jordan_invariants(&a, 1e-7).unwrap();
        let ib = jordan_invariants(&b, 1e-7).unwrap();
        prop_assert!(jordan_equivalent(&ia, &ib, 1e-7), "{ia:?}\n{ib:?}");
    }

    #[test]
    fn defective_blocks_survive_similarity(lambda in -3.0f64..3.0, mu in -3.0f64..3.0, seed in any::<u64>()) {
        prop_assume!((lambda - mu).abs() > 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // J_2(λ) ⊕ J_1(λ) ⊕ J_1(μ)
        let mut d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![lambda, lambda, lambda, mu]));
        d[(0, 1)] = 1.0;
        let psi = DMatrix::identity(4, 4) + random_map(4, &mut rng).into_matrix() * 0.1;
        let sv = singular_values(&psi);
        prop_assume!(sv.iter().copied().fold(0.0, f64::max) / sv.iter().copied().fold(f64::INFINITY, f64::min) < 100.0);
        let b = LinearMap::from_matrix(&psi * &d * psi.clone().try_inverse().unwrap()).unwrap();
        let ia = jordan_invariants(&LinearMap::from_matrix(d).unwrap(), 1e-6).unwrap();
        let ib = jordan_invariants(&b, 1e-6).unwrap();
        prop_assert!(jordan_equivalent(&ia, &ib, 1e-6), "{ia:?}\n{ib:?}");
        let cluster = ib.clusters.iter().find(|c| (c.eigenvalue.re - lambda).abs() < 1e-3).unwrap();
        prop_assert_eq!(cluster.block_sizes(4), vec![2, 1]);
    }

    #[test]
    fn plane_class_is_basis_invariant(
        (p, q) in any_signature(),
        seed in any::<u64>(),
        coeffs in prop::array::uniform4(-3.0f64..3.0),
    ) {
        let [a, b, c, d] = coeffs;
        prop_assume!((a * d - b * c).abs() > 0.1);
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = gaussian(&mut rng, s.dim());
        let y = gaussian(&mut rng, s.dim());
        let (det, _) = s.plane_determinant(&x, &y).unwrap();
        prop_assume!(det.abs() > 1e-4 * x.norm_squared() * y.norm_squared());
        let x2 = &x * a + &y * b;
        let y2 = &x * c + &y * d;
        prop_assert_eq!(s.classify_plane(&x, &y).unwrap(), s.classify_plane(&x2, &y2).unwrap());
    }

    #[test]
    fn pullback_is_functorial((p, q) in prop::sample::select(&[(0, 4), (1, 3), (2, 2)][..]), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_tensor(&s, &mut rng);
        let t = random_map(4, &mut rng);
        let u = random_map(4, &mut rng);
        let lhs = r.pullback(&t).unwrap().pullback(&u).unwrap();
        let rhs = r.pullback(&t.compose(&u).unwrap()).unwrap();
        let bound = 1e-12 * lhs.max_abs().max(1.0);
        let diff = lhs.coeffs().iter().zip(rhs.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(diff <= bound, "{diff} > {bound}");
    }

    #[test]
    fn projected_generators_give_almost_complex_tensors(
        (p, q) in even_signature(),
        eps in sign(),
        rho in sign(),
        seed in any::<u64>(),
    ) {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = project_commutation(&random_adjoint_class(&s, eps, &mut rng).unwrap(), &j, rho);
        let r = tensor_from(&s, &phi, eps);
        let check = r.check_j_invariance(&j, 1e-10).unwrap();
        prop_assert!(check.holds, "{check:?}");
    }

    #[test]
    fn j_invariance_matches_line_commutation((p, q) in even_signature(), seed in any::<u64>(), project in any::<bool>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_adjoint_class(&s, 1.0, &mut rng).unwrap();
        let phi = if project { project_commutation(&phi, &j, 1.0) } else { phi };
        let r = tensor_from(&s, &phi, 1.0);
        let invariant = r.check_j_invariance(&j, 1e-10).unwrap().holds;
        let lines: Vec<OrientedPlane> = [CausalType::Spacelike, CausalType::Timelike]
            .into_iter()
            .filter(|c| c.realizable_complex_line(&s))
            .flat_map(|c| sample_planes(&s, PlaneKind::ComplexLine(&j, c), 50, seed).unwrap())
            .take(50)
            .collect();
        let report = check_almost_complex(&r, &j, &lines, 1e-10).unwrap();
        prop_assert_eq!(invariant, report.holds);
        prop_assert_eq!(report.witness.is_some(), !report.holds);
    }

    #[test]
    fn commuting_generators_satisfy_gray((p, q) in even_signature(), eps in sign(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = project_commutation(&random_adjoint_class(&s, eps, &mut rng).unwrap(), &j, 1.0);
        let check = tensor_from(&s, &phi, eps).check_gray_identity(&j, 1e-10).unwrap();
        prop_assert!(check.holds, "{check:?}");
    }

    #[test]
    fn curvature_operator_is_skew_adjoint((p, q) in any_signature(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_tensor(&s, &mut rng);
        for plane in all_planes(&s, 5, seed) {
            let op = curvature_operator(&r, &plane).unwrap();
            prop_assert!(skew_adjoint_defect(&r, &op).unwrap() <= 1e-10 * op.max_abs().max(1.0));
        }
    }

    #[test]
    fn curvature_operator_is_basis_invariant(
        (p, q) in any_signature(),
        seed in any::<u64>(),
        coeffs in prop::array::uniform4(-3.0f64..3.0),
    ) {
        let [a, b, mut c, mut d] = coeffs;
        prop_assume!((a * d - b * c).abs() > 0.1);
        if a * d - b * c < 0.0 {
            (c, d) = (-c, -d);
        }
        let s = BilinearSpace::new(p, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_tensor(&s, &mut rng);
        for plane in all_planes(&s, 3, seed) {
            // Near the degeneracy threshold the Gram determinant alone carries
            // a relative error of eps / threshold, far above 1e-9.
            let (det, _) = s.plane_determinant(&plane.x, &plane.y).unwrap();
            if det.abs() < 1e-3 * plane.x.norm_squared() * plane.y.norm_squared() {
                continue;
            }
            let x2 = &plane.x * a + &plane.y * b;
            let y2 = &plane.x * c + &plane.y * d;
            let moved = OrientedPlane::new(&s, x2, y2).unwrap();
            let op = curvature_operator(&r, &plane).unwrap();
            let op2 = curvature_operator(&r, &moved).unwrap();
            prop_assert!(op.max_abs_diff(&op2).0 <= 1e-9 * op.max_abs().max(1.0));
        }
    }

    #[test]
    fn complex_structure_is_orthogonal_to_argument((p, q) in even_signature(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let x = gaussian(&mut rng, s.dim());
            let jx = j.map().apply(&x).unwrap();
            prop_assert!(s.inner(&x, &jx).unwrap().abs() <= 1e-12 * x.norm_squared());
        }
    }

    #[test]
    fn quaternion_orbit_is_orthonormal(blocks in 1usize..4, seed in any::<u64>()) {
        let s = BilinearSpace::new(0, 4 * blocks).unwrap();
        let h = standard_quaternion_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = gaussian(&mut rng, s.dim());
        let x = &x / x.norm();
        let orbit = [x.clone(), h.i().apply(&x).unwrap(), h.j().apply(&x).unwrap(), h.k().apply(&x).unwrap()];
        for a in 0..4 {
            for b in 0..4 {
                let expected = if a == b { 1.0 } else { 0.0 };
                prop_assert!((s.inner(&orbit[a], &orbit[b]).unwrap() - expected).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn admissibility_ignores_sign((p, q) in even_signature(), eps in sign(), rho in sign(), seed in any::<u64>()) {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = project_commutation(&random_adjoint_class(&s, eps, &mut rng).unwrap(), &j, rho);
        let a = check_admissible(&phi, &j, 1e-10).unwrap();
        let b = check_admissible(&phi.scale(-1.0), &j, 1e-10).unwrap();
        prop_assert_eq!(a.class, b.class);
        prop_assert_eq!(a.square_type, b.square_type);
    }

    #[test]
    fn admissible_pairs_give_orthogonal_images(which in 0usize..3, seed in any::<u64>()) {
        let (s, j, phi1, phi2) = match which {
            0 | 1 => {
                let s = BilinearSpace::new(0, 8).unwrap();
                let h = standard_quaternion_structure(&s).unwrap();
                let second = if which == 0 { h.j().clone() } else { h.k().clone() };
                (s, h.as_complex_structure(), LinearMap::identity(8), second)
            }
            _ => {
                let s = BilinearSpace::new(4, 4).unwrap();
                let j = standard_complex_structure(&s).unwrap();
                let phi1 = nilpotent_null_pair(&s).unwrap();
                let phi2 = anticommuting_null_partner(&s);
                (s, j, phi1, phi2)
            }
        };
        let pair = check_admissible_pair(&phi1, &phi2, &j, PlaneSampler::default(), 1e-10).unwrap();
        prop_assert!(pair.admissible, "{pair:?}");
        let lines = sample_planes(&s, PlaneKind::ComplexLine(&j, CausalType::Spacelike), 5, seed).unwrap();
        for line in lines {
            let x = &line.x / s.inner(&line.x, &line.x).unwrap().abs().sqrt();
            let jx = j.map().apply(&x).unwrap();
            let images = [
                phi1.apply(&x).unwrap(),
                phi1.apply(&jx).unwrap(),
                phi2.apply(&x).unwrap(),
                phi2.apply(&jx).unwrap(),
            ];
            for a in 0..4 {
                for b in (a + 1)..4 {
                    prop_assert!(s.inner(&images[a], &images[b]).unwrap().abs() <= 1e-10);
                }
            }
        }
    }
}

/// `Σ_pairs u₁(u₁,·) - u₂(u₂,·)` over the null vectors `u_a = (t_a + s_a)/√2`,
/// with `Ju₁ = u₂`: self-adjoint, anticommutes with `J`, squares to zero and
/// has kernel equal to range on `(s,s)`.
fn anticommuting_null_partner(s: &BilinearSpace) -> LinearMap {
    let p = s.p();
    let m = s.dim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let gram = s.gram();
    let mut phi = DMatrix::zeros(m, m);
    for a in 0..p {
        let mut u = Vector::zeros(m);
        u[a] = h;
        u[p + a] = h;
        let lowered = &gram * &u;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        phi += &u * lowered.transpose() * sign;
    }
    LinearMap::from_matrix(phi).unwrap()
}

#[test]
fn complex_lines_are_never_mixed() {
    for (p, q) in [(2, 4), (2, 2)] {
        let s = BilinearSpace::new(p, q).unwrap();
        let j = standard_complex_structure(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = 0;
        while seen < 1000 {
            let x = gaussian(&mut rng, s.dim());
            let Ok(line) = curvlab::jordan_ip::complex_line(&j, &x) else { continue };
            seen += 1;
            let class = s.classify_plane(&line.x, &line.y).unwrap();
            assert!(matches!(class, PlaneClass::Spacelike | PlaneClass::Timelike), "{class:?}");
            assert_eq!(class, line.class);
        }
    }
}
