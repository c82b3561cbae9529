//! The worked Fano examples, read from the JSON documents shipped with the CLI.

use spherical_core::document::AugmentedDocument;
use spherical_core::fano::FanoPolytope;
use spherical_core::p_invariant::PValue;
use spherical_core::rational_geometry::{format_rational, format_vector, rat, rat_vec};

fn load(name: &str) -> FanoPolytope {
    let path = format!("{}/../cli/examples/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    let (aug, points) = AugmentedDocument::from_json(&text).unwrap().to_data().unwrap();
    FanoPolytope::new(aug, points).unwrap()
}

#[test]
fn sl2_times_torus_embedding() {
    let fp = load("ex32_fano.json");
    assert!(fp.validate_reflexive().is_empty());
    assert_eq!(fp.supported_vertices(), vec![rat_vec(&[-1, 1]), rat_vec(&[2, 1])]);
    let c = fp.curve_degrees().unwrap();
    let mut dv: Vec<(String, String, String)> = c
        .dv_curves
        .iter()
        .map(|d| (d.divisor.clone(), format_vector(&d.vertex), format_rational(&d.degree)))
        .collect();
    dv.sort();
    let expected = [("D1", "(2, 1)", "3"), ("D2", "(-1, 1)", "2"), ("D2", "(2, 1)", "2")];
    let expected: Vec<(String, String, String)> =
        expected.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect();
    assert_eq!(dv, expected);
    assert_eq!(c.edge_curves.len(), 1);
    assert_eq!(c.edge_curves[0].degree, rat(3));
    assert!(c.degrees_are_positive_integers());
    assert_eq!(c.iota, Some(rat(2)));
    let m = fp.mukai_check().unwrap();
    assert_eq!((m.picard, m.dim), (2, 3));
    assert!(m.holds);
    assert_eq!(m.p_polytope, PValue::Finite(rat(1)));
}

#[test]
fn torsion_example_is_reflexive() {
    let fp = load("ex61_fano.json");
    assert!(fp.validate_reflexive().is_empty(), "{:?}", fp.validate_reflexive());
    assert_eq!(fp.supported_vertices(), vec![rat_vec(&[0, 1]), rat_vec(&[1, 0])]);
    assert!(fp.color_vertex_check());
}

#[test]
fn projective_line() {
    let fp = load("p1_fano.json");
    assert!(fp.validate_reflexive().is_empty());
    let m = fp.mukai_check().unwrap();
    assert_eq!((m.picard, m.dim), (1, 1));
    assert_eq!(m.iota, rat(2));
    assert_eq!(m.mukai_lhs, rat(1));
    assert!(m.holds);
    assert!(fp.color_vertex_check());
}

#[test]
fn projective_plane() {
    let fp = load("p2_fano.json");
    assert!(fp.validate_reflexive().is_empty());
    let c = fp.curve_degrees().unwrap();
    assert_eq!(c.supported.len(), 3);
    assert!(c.dv_curves.is_empty());
    assert_eq!(c.edge_curves.len(), 3);
    assert!(c.edge_curves.iter().all(|e| e.degree == rat(3)));
    assert_eq!(c.iota, Some(rat(3)));
    let m = fp.mukai_check().unwrap();
    assert_eq!((m.picard, m.dim, m.mukai_lhs.clone()), (1, 2, rat(2)));
    assert!(m.holds);
}
