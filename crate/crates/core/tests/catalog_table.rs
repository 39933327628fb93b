mod common;

use coordspace::angles::{bond_angles, profile};
use coordspace::extracop::{e_from_counts, e_one};
use coordspace::*;
use common::{setup, TABLE};

#[test]
fn k_m_and_e_match_the_published_table() {
    let (cat, d) = setup();
    for r in TABLE {
        let g = cat.get(r.0.parse().unwrap());
        let p = ParticleDescriptor::from_geometry(g, &d);
        assert_eq!(p.k(), r.1, "{}", r.0);
        assert_eq!(p.m(), r.2, "{}", r.0);
        assert!((e_one(&p) - r.3).abs() <= 5e-4, "{}", r.0);
    }
}

#[test]
fn e_agrees_with_a_direct_evaluation() {
    // log2 of bond pairs over distinct angles, computed straight from counts
    for (k, m) in [(4usize, 1usize), (6, 2), (12, 4), (12, 6), (14, 6), (12, 3)] {
        let direct = ((k * (k - 1)) as f64 / 2.0 / m as f64).ln() / std::f64::consts::LN_2;
        assert!((e_from_counts(k, m).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn table_is_sorted_by_e() {
    let (cat, d) = setup();
    let e: Vec<f64> = TABLE
        .iter()
        .map(|r| e_one(&ParticleDescriptor::from_geometry(cat.get(r.0.parse().unwrap()), &d)))
        .collect();
    assert!(e.windows(2).all(|w| w[0] <= w[1] + 1e-12));
}

#[test]
fn profiles_cover_every_bond_pair() {
    let (cat, d) = setup();
    for g in cat.geometries() {
        let p = profile(g, &d);
        let k = g.k() as u32;
        assert_eq!(p.pair_total(), k * (k - 1) / 2, "{}", g.code);
        let angles = bond_angles(&g.vertices).unwrap();
        assert!(angles.iter().all(|&a| a > 0.0 && a <= 180.0));
    }
}

#[test]
fn affected_set_has_merged_classes() {
    // classes holding more than one distinct ideal angle
    let (cat, d) = setup();
    let merged: Vec<GeometryCode> = cat
        .geometries()
        .iter()
        .filter(|g| profile(g, &d).entries.iter().any(|e| e.f > 1))
        .map(|g| g.code)
        .collect();
    use GeometryCode::*;
    assert_eq!(merged, vec![SDS, CTP, BTP, CSA, TTP, BSA, CPP, BPP]);
}

#[test]
fn inherent_angles_at_default_parameters() {
    let (_, d) = setup();
    let expected = [
        0.0, 54.7356, 63.2651, 74.9867, 81.7868, 90.1806, 95.2967, 109.6294, 119.0700, 125.2644,
        135.4719, 144.0768, 180.0,
    ];
    assert_eq!(d.inherent_angles.len(), expected.len());
    for (a, b) in d.inherent_angles.iter().zip(expected) {
        assert!((a - b).abs() < 5e-5, "{a} vs {b}");
    }
}
