use coordspace_py::*;

fn disc() -> PyDiscretizer {
    PyDiscretizer::new(2.85, 1).unwrap()
}

#[test]
fn geometry_accessors() {
    assert_eq!(geometry_codes().len(), 22);
    let g = PyGeometry::new("ICO").unwrap();
    assert_eq!(g.k(), 12);
    assert_eq!(g.vertices().len(), 12);
    assert!((g.sphericity().unwrap() - 0.939).abs() < 1e-3);
    assert!(PyGeometry::new("XYZ").is_err());
}

#[test]
fn coefficients_match_counts() {
    let d = disc();
    assert_eq!(d.inherent_angles().len(), 13);
    assert!(d.axioms_hold());
    let fcc = PyDescriptor::from_geometry("FCC", &d).unwrap();
    let e = e_one(&fcc);
    assert!((e - e_from_counts(fcc.k(), fcc.m() as usize).unwrap()).abs() < 1e-12);
    assert_eq!(d_e(&fcc, &fcc), 0.0);
    let ico = PyDescriptor::from_geometry("ICO", &d).unwrap();
    let pair = e_many(vec![fcc.clone(), ico.clone()], true).unwrap();
    assert!(pair <= e.min(e_one(&ico)) + 1e-12);
}

#[test]
fn bonds_of_ideal_octahedron() {
    let d = disc();
    let g = PyGeometry::new("SA").unwrap();
    let p = PyDescriptor::from_bonds(g.vertices(), &d).unwrap();
    assert_eq!(p.k(), g.k());
    assert!(PyDescriptor::from_bonds(vec![[1.0, 0.0, 0.0]], &d).is_err());
}

#[test]
fn matrix_and_tree() {
    let dm = PyDistanceMatrix::new(None).unwrap();
    assert_eq!(dm.codes().len(), 22);
    assert_eq!(dm.get("ICO", "ICO").unwrap(), 0.0);
    assert!(dm.get("ICO", "nope").is_err());
    let (ok, _, triples) = dm.verify_metric(1e-9);
    assert!(ok);
    assert!(triples > 0);
    assert!(dm.newick().trim_end().ends_with(';'));
    assert!(dm.to_csv().starts_with("code,"));
}

#[test]
fn embedding_typicality() {
    let dm = PyDistanceMatrix::new(None).unwrap();
    let e = dm.embed(4, 0, 3).unwrap();
    assert_eq!(e.dims(), 4);
    assert_eq!(e.coords().len(), 22);
    let tau = e.typicality();
    assert_eq!(tau.len(), 22);
    assert!(tau.values().all(|&t| t <= 0.0));
    assert!(!dm.delaunay_edges(0, 2).unwrap().is_empty());
}

#[test]
fn lattice_classification() {
    let f = PyFrame::lattice("fcc", 3, 1.0, 0.0, 0).unwrap();
    assert_eq!(f.__len__(), 108);
    let rows = f.classify(Some(1.2), None).unwrap();
    assert!(rows.iter().all(|r| r.0 == 12 && r.2 == Some("FCC")));
    assert!(f.to_extxyz().contains("Lattice="));
    assert!(PyFrame::lattice("diamond", 3, 1.0, 0.0, 0).is_err());
    assert!(PyFrame::new(vec![], None).is_err());
}
