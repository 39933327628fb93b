//! Published reference values shared by the integration tests.

#![allow(dead_code)]

/// (code, k, m, E, tau, sphericity, I/k)
pub const TABLE: [(&str, usize, u32, f64, f64, f64, f64); 22] = [
    ("TBP", 5, 3, 1.737, -1.0880, 0.7563, 1.14),
    ("SDS", 8, 6, 2.222, -1.0392, 0.8543, 1.31),
    ("PBP", 7, 4, 2.392, -0.7239, 0.8696, 1.00),
    ("CTP", 7, 4, 2.392, -0.9770, 0.8025, 1.33),
    ("BTP", 8, 5, 2.485, -0.8325, 0.8630, 1.19),
    ("TET", 4, 1, 2.585, -1.3589, 0.6711, 1.00),
    ("HBP", 8, 4, 2.807, -0.3556, 0.8630, 1.00),
    ("CSA", 9, 5, 2.848, -0.5778, 0.8778, 1.24),
    ("CSP", 9, 5, 2.848, -0.6698, 0.8272, 1.28),
    ("TTP", 9, 5, 2.848, -0.6901, 0.9062, 1.00),
    ("SC", 6, 2, 2.907, -0.7558, 0.8456, 1.00),
    ("BSA", 10, 6, 2.907, -0.4588, 0.8853, 1.18),
    ("BSP", 10, 5, 3.170, -0.6972, 0.8579, 1.07),
    ("CPP", 11, 6, 3.196, -0.5918, 0.8695, 1.20),
    ("SA", 8, 3, 3.222, -0.6928, 0.8595, 1.00),
    ("HDR", 8, 3, 3.222, -0.6609, 0.8060, 1.00),
    ("BPP", 12, 7, 3.237, -0.5326, 0.9095, 1.00),
    ("HCP", 12, 6, 3.459, -0.5377, 0.9050, 1.00),
    ("BCC", 14, 6, 3.923, -0.9754, 0.9047, 1.14),
    ("FCC", 12, 4, 4.044, -0.8574, 0.9050, 1.00),
    ("CPA", 11, 3, 4.196, -1.0148, 0.8967, 1.20),
    ("ICO", 12, 3, 4.459, -1.1625, 0.9393, 1.00),
];

/// (class, sphericity, I/k, tau) class averages.
pub const CLASS_TABLE: [(&str, f64, f64, f64); 5] = [
    ("spheroidal", 0.90, 1.09, -0.74),
    ("ellipsoidal", 0.84, 1.28, -0.95),
    ("bipyramidal", 0.83, 1.04, -0.75),
    ("cuboidal", 0.85, 1.12, -0.73),
    ("tetrahedral", 0.67, 1.00, -1.36),
];

use coordspace::{Catalog, Discretizer, DiscretizerParams, Frame, Vec3};

pub fn setup() -> (Catalog, Discretizer) {
    let cat = Catalog::new();
    let d = Discretizer::from_catalog(&cat, &DiscretizerParams::default()).unwrap();
    (cat, d)
}

pub fn row(code: &str) -> (&'static str, usize, u32, f64, f64, f64, f64) {
    *TABLE.iter().find(|r| r.0 == code).unwrap()
}

/// O(N^2) neighbour search over all 27 nearest images.
pub fn brute_force_neighbours(frame: &Frame, r: f64) -> Vec<Vec<usize>> {
    let shifts: Vec<Vec3> = match &frame.cell {
        None => vec![Vec3::ZERO],
        Some(c) => {
            let mut v = Vec::new();
            for a in -1..=1 {
                for b in -1..=1 {
                    for k in -1..=1 {
                        v.push(c[0] * a as f64 + c[1] * b as f64 + c[2] * k as f64);
                    }
                }
            }
            v
        }
    };
    let n = frame.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    j != i
                        && shifts
                            .iter()
                            .any(|&s| (frame.positions[j] + s - frame.positions[i]).norm() <= r)
                })
                .collect()
        })
        .collect()
}
