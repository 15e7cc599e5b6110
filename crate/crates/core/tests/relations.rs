mod common;

use common::*;
use phbridge::generate::Generator;
use phbridge::relations::numeric::{pseudo_inverse, rank_factor, real_matrix, real_vector};
use phbridge::relations::{LinearRelation, Mat, TolerancePolicy, C64};
use phbridge::Error;
use proptest::prelude::*;

fn close(a: &Mat, b: &Mat, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).norm() <= tol
}

fn gen(seed: u64) -> Generator {
    if seed % 2 == 0 {
        Generator::real(seed)
    } else {
        Generator::complex(seed)
    }
}

// K×{0} and {0}×K in K¹×K¹
fn left_line() -> LinearRelation {
    LinearRelation::from_image(&real_matrix(2, 1, &[1.0, 0.0]), 1, 1).unwrap()
}

fn right_line() -> LinearRelation {
    LinearRelation::from_image(&real_matrix(2, 1, &[0.0, 1.0]), 1, 1).unwrap()
}

#[test]
fn rank_factor_identity_and_zero() {
    let tol = TolerancePolicy::default();
    let f = rank_factor(&Mat::identity(2, 2), &tol).unwrap();
    assert_eq!(f.rank, 2);
    assert_eq!(f.null.ncols(), 0);

    let f = rank_factor(&Mat::zeros(2, 3), &tol).unwrap();
    assert_eq!(f.rank, 0);
    assert_eq!(f.null.ncols(), 3);
    assert!(gap(&f.null, &M::identity(3, 3)) < 1e-14);
}

#[test]
fn rank_factor_of_ones() {
    let f = rank_factor(&real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]), &TolerancePolicy::default()).unwrap();
    assert_eq!(f.rank, 1);
    let want = real_matrix(2, 1, &[1.0, -1.0]) / c(2f64.sqrt());
    assert!(gap(&f.null, &want) < 1e-14, "null space should be spanned by (1, -1)");
    assert!((f.singular_values[0] - 2.0).abs() < 1e-14);
}

#[test]
fn rank_factor_rejects_nan() {
    let a = real_matrix(1, 2, &[1.0, f64::NAN]);
    assert!(matches!(rank_factor(&a, &TolerancePolicy::default()), Err(Error::InvalidMatrix(_))));
}

#[test]
fn rank_cut_follows_threshold() {
    let tol = TolerancePolicy::new(1e-6, 0.0).unwrap();
    // σ = 1 and 1e-7 with threshold 1e-6 · 1 · 2
    let a = real_matrix(2, 2, &[1.0, 0.0, 0.0, 1e-7]);
    assert_eq!(rank_factor(&a, &tol).unwrap().rank, 1);
    let a = real_matrix(2, 2, &[1.0, 0.0, 0.0, 1e-5]);
    assert_eq!(rank_factor(&a, &tol).unwrap().rank, 2);
    assert!(TolerancePolicy::new(0.0, 1.0).is_err());
    assert!(TolerancePolicy::new(1e-12, -1.0).is_err());
}

#[test]
fn pseudo_inverse_examples() {
    assert!(close(&pseudo_inverse(&Mat::identity(3, 3)).unwrap(), &Mat::identity(3, 3), 1e-14));
    let d = real_matrix(2, 2, &[2.0, 0.0, 0.0, 0.0]);
    assert!(close(&pseudo_inverse(&d).unwrap(), &real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.0]), 1e-14));
    // normal equations: (vᵀv)⁻¹ vᵀ
    let v = real_matrix(2, 1, &[1.0, 1.0]);
    assert!(close(&pseudo_inverse(&v).unwrap(), &real_matrix(1, 2, &[0.5, 0.5]), 1e-14));
}

#[test]
fn from_image_lines() {
    let a = left_line();
    assert_eq!(a.dim(), 1);
    assert!(a.contains(&real_vector(&[3.0, 0.0])).unwrap() < 1e-14);
    let b = right_line();
    assert_eq!(b.dim(), 1);
    assert!(b.contains(&real_vector(&[0.0, -2.0])).unwrap() < 1e-14);
}

#[test]
fn from_image_drops_to_numerical_rank() {
    // four generators of rank two in K²×K²
    let fg = real_matrix(4, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let a = LinearRelation::from_image(&fg, 2, 2).unwrap();
    assert_eq!(a.dim(), 2);
    assert_eq!(a.kernel_basis().nrows(), 2);
}

#[test]
fn from_image_shape_error() {
    assert!(matches!(
        LinearRelation::from_image(&Mat::zeros(3, 1), 1, 1),
        Err(Error::Shape(_))
    ));
}

#[test]
fn from_kernel_examples() {
    let id = LinearRelation::from_kernel(&real_matrix(1, 2, &[1.0, -1.0]), 1, 1).unwrap();
    let want = LinearRelation::graph(&Mat::identity(1, 1)).unwrap();
    assert!(id.gap(&want).unwrap() < 1e-14);

    let full = LinearRelation::from_kernel(&Mat::zeros(0, 2), 1, 1).unwrap();
    assert_eq!(full.dim(), 2);

    let mut g = Generator::complex(5);
    let kl = g.matrix(1, 2);
    let a = LinearRelation::from_kernel(&kl, 1, 1).unwrap();
    assert_eq!(a.dim(), 1);
    assert!((&kl * a.image_basis()).norm() < 1e-14);
}

#[test]
fn image_and_kernel_are_orthonormal_complements() {
    let mut g = Generator::complex(11);
    let a = g.any_relation(3, 4, 4);
    let q = a.image_basis();
    let k = a.kernel_basis();
    assert!(close(&(q.adjoint() * q), &M::identity(4, 4), 1e-13));
    assert!(close(&(k * k.adjoint()), &M::identity(3, 3), 1e-13));
    assert!((k * q).norm() < 1e-13);
}

#[test]
fn parts_of_identity_graph() {
    let p = LinearRelation::graph(&Mat::identity(2, 2)).unwrap().parts();
    assert_eq!((p.ker.ncols(), p.dom.ncols(), p.mul.ncols(), p.ran.ncols()), (0, 2, 0, 2));
}

#[test]
fn parts_of_lines() {
    let p = left_line().parts();
    assert_eq!((p.ker.ncols(), p.dom.ncols(), p.mul.ncols(), p.ran.ncols()), (1, 1, 0, 0));
    let p = right_line().parts();
    assert_eq!((p.ker.ncols(), p.dom.ncols(), p.mul.ncols(), p.ran.ncols()), (0, 0, 1, 1));
}

#[test]
fn adjoint_and_inverse_examples() {
    let id = LinearRelation::graph(&Mat::identity(3, 3)).unwrap();
    assert!(id.adjoint().gap(&id).unwrap() < 1e-14);
    assert!(left_line().inverse().gap(&right_line()).unwrap() < 1e-14);
}

#[test]
fn adjoint_dimension_law_against_bilinear_conditions() {
    for seed in 0..20 {
        let mut g = gen(seed);
        let dim = g.int(0, 6);
        let a = g.any_relation(3, 3, dim);
        let adj = a.adjoint();
        assert_eq!(a.dim() + adj.dim(), 6);
        assert!(gap(adj.image_basis(), &adjoint_image(a.image_basis(), 3)) < 1e-12);
    }
}

#[test]
fn scale_acts_on_right_component() {
    let a = LinearRelation::graph(&real_matrix(1, 1, &[2.0])).unwrap();
    let b = a.scale(C64::new(-3.0, 0.0));
    assert!(b.contains(&real_vector(&[1.0, -6.0])).unwrap() < 1e-14);
}

#[test]
fn classify_skew_graph() {
    let j = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let r = LinearRelation::graph(&j).unwrap().classify().unwrap();
    assert!(r.is_dirac && r.is_monotone && r.is_max_monotone);
    assert!(!r.is_lagrange && !r.is_resistive);
}

#[test]
fn classify_negative_semidefinite_graph() {
    // ran[I; −W] with W = diag(1, 0)
    let fg = real_matrix(4, 2, &[1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0]);
    let r = LinearRelation::from_image(&fg, 2, 2).unwrap().classify().unwrap();
    assert!(r.is_max_resistive && r.is_resistive && r.is_lagrange);
    assert!(!r.is_monotone);
}

#[test]
fn classify_left_line_is_everything_degenerate() {
    let r = left_line().classify().unwrap();
    assert!(r.is_dirac && r.is_lagrange && r.is_max_resistive);
    assert!(r.is_max_monotone);
}

#[test]
fn classify_rejects_non_square() {
    let a = LinearRelation::full(1, 2);
    assert!(matches!(a.classify(), Err(Error::Shape(_))));
}

#[test]
fn contains_examples() {
    let id = LinearRelation::graph(&Mat::identity(2, 2)).unwrap();
    assert!(id.contains(&real_vector(&[1.0, -2.0, 1.0, -2.0])).unwrap() < 1e-14);
    assert!((right_line().contains(&real_vector(&[1.0, 0.0])).unwrap() - 1.0).abs() < 1e-14);
    assert!(matches!(id.contains(&real_vector(&[1.0])), Err(Error::Shape(_))));
}

#[test]
fn gap_examples() {
    let a = left_line();
    assert!(a.gap(&a).unwrap() < 1e-15);
    assert!((a.gap(&right_line()).unwrap() - 1.0).abs() < 1e-14);
    let id = LinearRelation::graph(&Mat::identity(2, 2)).unwrap();
    for eps in [1e-2, 1e-4, 1e-6] {
        let p = LinearRelation::graph(&real_matrix(2, 2, &[1.0 + eps, 0.0, 0.0, 1.0])).unwrap();
        let g = id.gap(&p).unwrap();
        assert!(g > 0.1 * eps && g < eps, "gap {g} should be of order {eps}");
    }
}

fn seeds() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=6, 1usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_an_involution((seed, nl, nr) in seeds()) {
        let mut g = gen(seed);
        let dim = g.int(0, nl + nr);
        let a = g.any_relation(nl, nr, dim);
        prop_assert!(a.adjoint().adjoint().gap(&a).unwrap() < 1e-10);
        prop_assert_eq!(a.dim() + a.adjoint().dim(), nl + nr);
    }

    #[test]
    fn inverse_is_an_involution((seed, nl, nr) in seeds()) {
        let mut g = gen(seed);
        let dim = g.int(0, nl + nr);
        let a = g.any_relation(nl, nr, dim);
        prop_assert!(a.inverse().inverse().gap(&a).unwrap() < 1e-12);
        // (A⁻¹)* = (A*)⁻¹
        prop_assert!(a.inverse().adjoint().gap(&a.adjoint().inverse()).unwrap() < 1e-10);
    }

    #[test]
    fn duality_of_parts((seed, nl, nr) in seeds()) {
        let mut g = gen(seed);
        let dim = g.int(0, nl + nr);
        let a = g.any_relation(nl, nr, dim);
        let pa = a.parts();
        let pb = a.adjoint().parts();
        prop_assert!(gap(&pb.ker, &complement(&pa.ran, nr)) < 1e-10);
        prop_assert!(gap(&pb.mul, &complement(&pa.dom, nl)) < 1e-10);
    }

    #[test]
    fn projected_points_are_members((seed, nl, nr) in seeds()) {
        let mut g = gen(seed);
        let dim = g.int(1, nl + nr);
        let a = g.any_relation(nl, nr, dim);
        let x = a.projector() * g.vector(nl + nr);
        prop_assert!(a.contains(&x).unwrap() <= 1e-12 * x.norm().max(1.0));
    }

    #[test]
    fn gap_is_a_metric_on_samples((seed, nl, nr) in seeds()) {
        let mut g = gen(seed);
        let (d1, d2, d3) = (g.int(0, nl + nr), g.int(0, nl + nr), g.int(0, nl + nr));
        let a = g.any_relation(nl, nr, d1);
        let b = g.any_relation(nl, nr, d2);
        let c3 = g.any_relation(nl, nr, d3);
        let ab = a.gap(&b).unwrap();
        prop_assert!((ab - b.gap(&a).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(ab <= a.gap(&c3).unwrap() + c3.gap(&b).unwrap() + 1e-12);
    }

    #[test]
    fn classification_implications(seed in any::<u64>(), n in 1usize..=6, class in 0usize..4) {
        let mut g = gen(seed);
        let a = match class {
            0 => g.dirac(n),
            1 => g.lagrange(n),
            2 => g.max_resistive(n),
            _ => g.max_monotone(n),
        };
        let r = a.classify().unwrap();
        let own = [r.is_dirac, r.is_lagrange, r.is_max_resistive, r.is_max_monotone][class];
        prop_assert!(own, "generated structure of class {} not recognized", class);
        if r.is_max_resistive {
            prop_assert!(r.is_resistive && r.is_lagrange);
        }
        if r.is_max_monotone {
            prop_assert!(r.is_monotone);
        }
        if r.is_dirac {
            prop_assert!(r.is_monotone && a.dim() == n);
        }
    }

    #[test]
    fn dirac_and_lagrange_are_self_dual_up_to_sign(seed in any::<u64>(), n in 1usize..=6) {
        let mut g = gen(seed);
        let d = g.dirac(n);
        prop_assert!(d.adjoint().gap(&d.scale(C64::new(-1.0, 0.0))).unwrap() < 1e-10);
        let l = g.lagrange(n);
        prop_assert!(l.adjoint().gap(&l).unwrap() < 1e-10);
    }
}
