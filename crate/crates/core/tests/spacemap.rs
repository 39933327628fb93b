mod common;

use coordspace::extracop::e_one;
use coordspace::shape::moment_per_neighbour;
use coordspace::spacemap::delaunay::in_circle;
use coordspace::spacemap::{class_averages, order_typicality_scatter};
use coordspace::*;
use common::setup;

fn catalog_matrix() -> DistanceMatrix {
    let (cat, d) = setup();
    distance_matrix(&cat, &d)
}

#[test]
fn matrix_shape_and_fcc_hcp_distance() {
    let dm = catalog_matrix();
    for i in 0..22 {
        assert_eq!(dm.get(i, i), 0.0);
        for j in 0..22 {
            assert_eq!(dm.get(i, j), dm.get(j, i));
        }
    }
    assert!((dm.between("FCC", "HCP").unwrap() - 0.585).abs() < 5e-4);
    let csv = dm.to_csv();
    assert_eq!(csv.lines().count(), 23);
}

#[test]
fn tree_pairings() {
    let t = hierarchical_cluster(&catalog_matrix());
    let pentagonal = t.smallest_cluster_containing(&["CPA", "ICO"]).unwrap();
    assert_eq!(pentagonal.len(), 2);
    let caps = t.smallest_cluster_containing(&["CSP", "BSP"]).unwrap();
    assert_eq!(caps.len(), 2);
    assert_eq!(t.to_newick_topology().matches('(').count(), 21);
}

#[test]
fn two_dimensional_graph_is_delaunay() {
    let dm = catalog_matrix();
    let params = MdsParams { dims: 2, restarts: 6, ..Default::default() };
    let e = mds(&dm, &params).unwrap();
    let pts: Vec<[f64; 2]> = e.coords.iter().map(|x| [x[0], x[1]]).collect();
    let tri = delaunay_2d(&pts).unwrap();
    for t in &tri.triangles {
        for (i, &p) in pts.iter().enumerate() {
            if !t.contains(&i) {
                assert!(in_circle(pts[t[0]], pts[t[1]], pts[t[2]], p) <= 1e-9);
            }
        }
    }
    let projected = mds(&dm, &MdsParams { restarts: 4, ..Default::default() })
        .unwrap()
        .principal(2, &dm)
        .unwrap();
    assert_eq!(projected.dims, 2);
    assert!(projected.stress >= e.stress - 1e-9);
}

#[test]
fn scatter_and_class_tables() {
    let (cat, d) = setup();
    let dm = distance_matrix(&cat, &d);
    let e = mds(&dm, &MdsParams { restarts: 4, ..Default::default() }).unwrap();
    let tau = typicality(&e);
    let codes: Vec<GeometryCode> = cat.geometries().iter().map(|g| g.code).collect();
    let es: Vec<f64> = cat
        .geometries()
        .iter()
        .map(|g| e_one(&ParticleDescriptor::from_geometry(g, &d)))
        .collect();
    let csv = order_typicality_scatter(&codes, &es, &tau).unwrap();
    assert_eq!(csv.lines().count(), 23);
    assert!(csv.lines().any(|l| l.starts_with("ICO,4.459")));
    assert!(csv.lines().any(|l| l.starts_with("TET,2.584")));

    let psi: Vec<f64> = cat.geometries().iter().map(|g| sphericity(g).unwrap()).collect();
    let ik: Vec<f64> = cat.geometries().iter().map(moment_per_neighbour).collect();
    let avg = class_averages(&codes, &psi, &ik, &tau.tau).unwrap();
    let tet = avg.iter().find(|a| a.class == TaxonomyClass::Tetrahedral).unwrap();
    let i = GeometryCode::TET.index();
    assert_eq!((tet.sphericity, tet.moment_per_neighbour, tet.tau), (psi[i], ik[i], tau.tau[i]));
}
