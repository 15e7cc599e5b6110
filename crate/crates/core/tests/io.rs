use phbridge::generate::Generator;
use phbridge::io::SystemFile;
use phbridge::phcore::{Channel, Trajectory};
use phbridge::relations::{Mat, Vector, C64};
use phbridge::Error;
use proptest::prelude::*;

fn same_bits(a: &Mat, b: &Mat) -> bool {
    a.shape() == b.shape()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits())
}

#[test]
fn descriptor_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, complex) in [(1, false), (2, true)] {
        let mut g = if complex { Generator::complex(seed) } else { Generator::real(seed) };
        let sys = g.descriptor(4, 2);
        let path = dir.path().join(format!("sys{seed}.json"));
        SystemFile::from_descriptor(&sys).write(&path).unwrap();
        let back = SystemFile::read(&path).unwrap().to_descriptor().unwrap();
        for (a, b) in [(sys.e(), back.e()), (sys.j(), back.j()), (sys.r(), back.r()), (sys.q(), back.q())] {
            assert!(same_bits(a, b));
        }
        for (a, b) in [(sys.b(), back.b()), (sys.p(), back.p()), (sys.s(), back.s()), (sys.n(), back.n())] {
            assert!(same_bits(a, b));
        }
        assert_eq!(back.field(), sys.field());
    }
}

#[test]
fn relation_and_geometric_files_round_trip() {
    let mut g = Generator::complex(9);
    let a = g.dirac(3);
    let back = SystemFile::parse(&SystemFile::from_relation(&a).to_json())
        .unwrap()
        .to_relation()
        .unwrap();
    assert!(back.gap(&a).unwrap() < 1e-14);

    let gph = g.geometric(2, 1, 1);
    let doc = SystemFile::from_geometric(&gph);
    assert_eq!(doc.kind(), "geometric");
    let back = SystemFile::parse(&doc.to_json()).unwrap().to_geometric().unwrap();
    assert!(back.d().gap(gph.d()).unwrap() < 1e-14);
    assert!(back.l().gap(gph.l()).unwrap() < 1e-14);
    assert!(back.r().gap(gph.r()).unwrap() < 1e-14);
}

#[test]
fn trajectory_round_trip() {
    let z: Vec<Vector> = (0..4).map(|k| Vector::from_element(2, C64::new(k as f64 / 3.0, 0.0))).collect();
    let traj = Trajectory::uniform(0.0, 0.1, 3).unwrap().with(Channel::Z, z.clone()).unwrap();
    let back = SystemFile::parse(&SystemFile::from_trajectory(&traj).to_json())
        .unwrap()
        .to_trajectory()
        .unwrap();
    assert_eq!(back.grid(), traj.grid());
    assert_eq!(back.require(Channel::Z).unwrap(), &z[..]);
}

const REAL_HEADER: &str = r#""format_version": 1, "field": "real", "kind": "relation", "dims": {"n_left": 1, "n_right": 1}"#;

fn relation_doc(field: &str, data: &str) -> String {
    format!(
        r#"{{"format_version": 1, "field": "{field}", "kind": "relation", "dims": {{"n_left": 1, "n_right": 1}},
            "relation": {{"representation": "image", "matrix": {{"rows": 2, "cols": 1, "data": {data}}}}}}}"#
    )
}

#[test]
fn field_tag_decides_entry_form() {
    assert!(SystemFile::parse(&relation_doc("real", "[1.0, 0.0]")).is_ok());
    assert!(SystemFile::parse(&relation_doc("complex", "[[1.0, 0.5], [0.0, 0.0]]")).is_ok());
    for (field, data) in [("real", "[[1.0, 0.0], 0.0]"), ("complex", "[1.0, 0.0]")] {
        assert!(matches!(SystemFile::parse(&relation_doc(field, data)), Err(Error::Format(_))));
    }
}

#[test]
fn malformed_documents_are_rejected() {
    let bad = [
        "not json".to_string(),
        format!("{{{REAL_HEADER}}}"),
        relation_doc("real", "[1.0]"),
        relation_doc("quaternion", "[1.0, 0.0]"),
        relation_doc("real", "[1.0, 0.0]").replace("\"format_version\": 1", "\"format_version\": 2"),
        relation_doc("real", "[1e999, 0.0]"),
    ];
    for text in &bad {
        assert!(matches!(SystemFile::parse(text), Err(Error::Format(_))), "{text}");
    }
}

#[test]
fn missing_file_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(SystemFile::read(&dir.path().join("absent.json")), Err(Error::Format(_))));
}

proptest! {
    #[test]
    fn printed_floats_parse_to_the_same_bits(seed in any::<u64>(), n in 1usize..=4) {
        let mut g = Generator::complex(seed);
        let sys = g.descriptor(n, 1);
        let back = SystemFile::parse(&SystemFile::from_descriptor(&sys).to_json()).unwrap().to_descriptor().unwrap();
        prop_assert!(same_bits(sys.e(), back.e()));
        prop_assert!(same_bits(sys.j(), back.j()));
        prop_assert!(same_bits(sys.b(), back.b()));
    }
}
