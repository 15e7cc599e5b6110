mod common;

use phbridge::generate::Generator;
use phbridge::phcore::{compute_w, energy, hamiltonian, validate_descriptor, validate_geometric, DescriptorPH, GeometricPH};
use phbridge::relations::numeric::{real_matrix, real_vector};
use phbridge::relations::{LinearRelation, Mat, C64};
use phbridge::sim::{
    consistent_init, correspondence_experiment, integrate_implicit_euler, verify_descriptor, InputSpec, SimConfig,
    VerifyTolerance,
};
use phbridge::phcore::Channel;
use phbridge::transforms::{
    descriptor_to_geometric, geometric_to_descriptor, pencil_regular, roundtrip, transfer_positive_real,
};
use phbridge::Error;
use proptest::prelude::*;

fn scalar(v: f64) -> Mat {
    real_matrix(1, 1, &[v])
}

/// `E ż = (J − R) Q z + B u` with scalar blocks and `P = S = N = 0`.
fn scalar_system(e: f64, j: f64, r: f64, q: f64, b: f64) -> DescriptorPH {
    DescriptorPH::new(
        scalar(e),
        scalar(j),
        scalar(r),
        scalar(q),
        scalar(b),
        scalar(0.0),
        scalar(0.0),
        scalar(0.0),
    )
    .unwrap()
}

fn system_with(e: Mat, j: Mat, r: Mat, q: Mat, s: f64) -> DescriptorPH {
    let n = e.nrows();
    DescriptorPH::new(e, j, r, q, Mat::zeros(n, 1), Mat::zeros(n, 1), scalar(s), scalar(0.0)).unwrap()
}

#[test]
fn validate_descriptor_reports_skewness() {
    let i = Mat::identity(2, 2);
    let sys = system_with(i.clone(), i.clone(), Mat::zeros(2, 2), i, 0.0);
    let rep = validate_descriptor(&sys);
    assert!((rep.j_skewness - 2f64.sqrt()).abs() < 1e-15);
    assert!(!rep.passed);
}

#[test]
fn validate_descriptor_reports_indefinite_dissipation() {
    let i = Mat::identity(2, 2);
    let sys = system_with(i.clone(), Mat::zeros(2, 2), Mat::zeros(2, 2), i, -1.0);
    let rep = validate_descriptor(&sys);
    assert!((rep.w_min_eig + 1.0).abs() < 1e-14);
    assert!(!rep.passed);
}

#[test]
fn validate_descriptor_accepts_generated_systems() {
    for seed in 0..20 {
        let mut g = if seed % 2 == 0 { Generator::real(seed) } else { Generator::complex(seed) };
        assert!(validate_descriptor(&g.descriptor(4, 2)).passed, "seed {seed}");
    }
}

#[test]
fn compute_w_scales_by_q() {
    let w = compute_w(&scalar_system(1.0, 0.0, 1.0, 2.0, 1.0));
    assert!((w - real_matrix(2, 2, &[4.0, 0.0, 0.0, 0.0])).norm() < 1e-15);
}

#[test]
fn hamiltonian_examples() {
    let i = Mat::identity(2, 2);
    let sys = system_with(i.clone(), Mat::zeros(2, 2), Mat::zeros(2, 2), i, 0.0);
    assert_eq!(hamiltonian(&sys, &real_vector(&[1.0, 2.0])).unwrap(), 2.5);
    let sys = scalar_system(2.0, 0.0, 0.0, 3.0, 0.0);
    assert_eq!(hamiltonian(&sys, &real_vector(&[1.0])).unwrap(), 3.0);
    assert!(matches!(hamiltonian(&sys, &real_vector(&[1.0, 2.0])), Err(Error::Shape(_))));
}

#[test]
fn energy_is_real_for_complex_states() {
    let mut g = Generator::complex(41);
    let sys = g.descriptor(5, 1);
    for _ in 0..10 {
        let z = g.vector(5);
        let h = energy(&sys, &z).unwrap();
        assert!(h.im.abs() <= 1e-12 * (1.0 + z.norm_squared()));
    }
}

fn scalar_geometric(r0: f64) -> GeometricPH {
    let j = real_matrix(3, 3, &[0.0, 1.0, 1.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
    GeometricPH::new(
        LinearRelation::inverse_graph(&j).unwrap(),
        LinearRelation::graph(&scalar(1.0)).unwrap(),
        LinearRelation::inverse_graph(&scalar(-r0)).unwrap(),
    )
    .unwrap()
}

#[test]
fn validate_geometric_examples() {
    let rep = validate_geometric(&scalar_geometric(0.5));
    assert!(rep.passed);
    assert_eq!((rep.n, rep.r, rep.m), (1, 1, 1));

    // a monotone resistive part is rejected
    let bad = GeometricPH::new(
        scalar_geometric(0.5).d().clone(),
        LinearRelation::graph(&scalar(1.0)).unwrap(),
        LinearRelation::graph(&scalar(1.0)).unwrap(),
    )
    .unwrap();
    let rep = validate_geometric(&bad);
    assert!(!rep.r_is_max_resistive);
    assert!(!rep.passed);
}

#[test]
fn scalar_geometric_lift() {
    let r0 = 0.25;
    let (sys, lift) = geometric_to_descriptor(&scalar_geometric(r0)).unwrap();
    assert_eq!(sys.state_dim(), 2);
    assert_eq!(lift.state_dim(), 2);
    assert!((sys.e() - real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-12);
    assert!((sys.j() - real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0])).norm() < 1e-12);
    assert!((sys.r() - real_matrix(2, 2, &[0.0, 0.0, 0.0, r0])).norm() < 1e-12);
    assert!(validate_descriptor(&sys).passed);
}

#[test]
fn scalar_descriptor_projection() {
    let (geo, maps) = descriptor_to_geometric(&scalar_system(1.0, 0.0, 1.0, 1.0, 1.0)).unwrap();
    let dims = maps.dims();
    assert_eq!((dims.n, dims.r, dims.m), (1, 2, 1));
    assert!(validate_geometric(&geo).passed);
}

#[test]
fn shared_kernel_is_rejected() {
    let sys = scalar_system(0.0, 0.0, 0.0, 0.0, 1.0);
    assert!(matches!(descriptor_to_geometric(&sys), Err(Error::KernelOverlap(_))));
}

#[test]
fn pencil_examples() {
    let rep = pencil_regular(&Mat::identity(2, 2), &Mat::zeros(2, 2)).unwrap();
    assert!(rep.regular);
    assert!(rep.e_psd);

    let e = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    assert!(pencil_regular(&e, &-Mat::identity(2, 2)).unwrap().regular);
    assert!(!pencil_regular(&e, &Mat::zeros(2, 2)).unwrap().regular);

    let rep = pencil_regular(&e, &real_matrix(2, 2, &[0.0, 0.0, 0.0, -1.0])).unwrap();
    assert!(rep.regular);
    assert_eq!(rep.kernel_intersection_trivial, Some(true));
}

#[test]
fn transfer_examples() {
    let sys = scalar_system(1.0, 0.0, 1.0, 1.0, 1.0);
    let rep = transfer_positive_real(&sys, &[C64::new(1.0, 0.0)]).unwrap();
    // G(1) = 1/2
    assert!((rep.min_eig - 1.0).abs() < 1e-14);
    assert!(rep.passed);

    let sys = scalar_system(1.0, 0.0, 1.0, 1.0, 0.0);
    let rep = transfer_positive_real(&sys, &[C64::new(0.5, 2.0)]).unwrap();
    assert!(rep.min_eig.abs() < 1e-15);

    assert!(transfer_positive_real(&sys, &[C64::new(-1.0, 0.0)]).is_err());
}

#[test]
fn roundtrip_dimensions() {
    let mut g = Generator::real(5);
    let sys = g.descriptor(3, 2);
    let rt = roundtrip(&sys).unwrap();
    assert_eq!(rt.maps.r, 3 + 2);
    assert_eq!(rt.descriptor.state_dim(), 3 + 5 + rt.lift.p());
    assert_eq!(rt.descriptor.q(), &Mat::identity(rt.descriptor.state_dim(), rt.descriptor.state_dim()));
    assert!(validate_descriptor(&rt.descriptor).passed);
}

#[test]
fn contradictory_constraint_is_reported() {
    let sys = DescriptorPH::new(
        real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        Mat::zeros(2, 2),
        Mat::zeros(2, 2),
        Mat::identity(2, 2),
        real_matrix(2, 1, &[0.0, 1.0]),
        Mat::zeros(2, 1),
        scalar(0.0),
        scalar(0.0),
    )
    .unwrap();
    let err = consistent_init(&sys, &[real_vector(&[1.0])], &real_vector(&[0.0, 0.0]));
    assert!(matches!(err, Err(Error::InconsistentConstraints(_))));
}

#[test]
fn implicit_euler_decay() {
    let sys = scalar_system(1.0, 0.0, 1.0, 1.0, 0.0);
    let h = 0.1;
    let cfg = SimConfig::new(1.0, h, InputSpec::Zero, 0).unwrap();
    let traj = integrate_implicit_euler(&sys, &cfg, &real_vector(&[1.0])).unwrap();
    let z = traj.require(Channel::Z).unwrap();
    assert_eq!(z.len(), 11);
    for (k, zk) in z.iter().enumerate() {
        assert!((zk[0].re - (1.0 + h).powi(-(k as i32))).abs() < 1e-14);
    }
    let traj = integrate_implicit_euler(&sys, &cfg, &real_vector(&[0.0])).unwrap();
    assert!(traj.require(Channel::Z).unwrap().iter().all(|z| z.norm() == 0.0));
}

#[test]
fn singular_iteration_matrix_is_irregular() {
    let sys = scalar_system(0.0, 0.0, 0.0, 1.0, 0.0);
    let cfg = SimConfig::new(1.0, 0.1, InputSpec::Zero, 0).unwrap();
    assert!(matches!(
        integrate_implicit_euler(&sys, &cfg, &real_vector(&[0.0])),
        Err(Error::IrregularPencil(_))
    ));
}

#[test]
fn verify_flags_a_corrupted_sample() {
    let sys = scalar_system(1.0, 0.0, 1.0, 1.0, 1.0);
    let cfg = SimConfig::new(1.0, 0.01, InputSpec::sin(1.0), 0).unwrap();
    let mut traj = integrate_implicit_euler(&sys, &cfg, &real_vector(&[1.0])).unwrap();
    let tol = VerifyTolerance::default();
    assert!(verify_descriptor(&sys, &traj, &tol).unwrap().passed);

    let mut y = traj.remove(Channel::Y).unwrap();
    y[37][0] += C64::new(0.5, 0.0);
    traj.set(Channel::Y, y).unwrap();
    let rep = verify_descriptor(&sys, &traj, &tol).unwrap();
    assert!(!rep.passed);
    assert_eq!(rep.flagged, vec![37]);
}

#[test]
fn correspondence_on_a_small_system() {
    let mut g = Generator::real(8);
    let gph = g.geometric_nonnegative(2, 1, 1);
    let run = |h: f64| {
        let cfg = SimConfig::new(0.5, h, InputSpec::sin(1.0), 8).unwrap();
        let rep = correspondence_experiment(&gph, &cfg).unwrap();
        assert!(rep.passed);
        assert!(rep.descriptor.max_membership <= 1e-8);
        assert!(rep.geometric.max_membership <= 1e-8);
        assert!(rep.max_dissipation <= 1e-10);
        rep.lift_error
    };
    // the multiplier is recovered by first-order quadrature
    let (coarse, fine) = (run(1e-3), run(5e-4));
    assert!(coarse <= 1e-3);
    assert!(fine <= 0.6 * coarse, "lift error {coarse:e} -> {fine:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_geometric_systems_lift_to_valid_descriptors(
        seed in any::<u64>(), n in 1usize..=3, r in 0usize..=2, m in 0usize..=2,
    ) {
        let mut g = if seed % 2 == 0 { Generator::real(seed) } else { Generator::complex(seed) };
        let gph = g.geometric(n, r, m);
        prop_assert!(validate_geometric(&gph).passed);
        let (sys, lift) = geometric_to_descriptor(&gph).unwrap();
        prop_assert_eq!(sys.state_dim(), lift.state_dim());
        prop_assert!(validate_descriptor(&sys).passed);
    }

    #[test]
    fn generated_descriptors_project_to_valid_geometric(seed in any::<u64>(), n in 1usize..=4, m in 0usize..=2) {
        let mut g = if seed % 2 == 0 { Generator::real(seed) } else { Generator::complex(seed) };
        let sys = g.descriptor(n, m);
        match descriptor_to_geometric(&sys) {
            Ok((geo, maps)) => {
                prop_assert_eq!(maps.r, n + m);
                prop_assert!(validate_geometric(&geo).passed);
            }
            Err(Error::KernelOverlap(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
