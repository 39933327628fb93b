use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::angles::Discretizer;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::extracop::{d_e, ParticleDescriptor};

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    codes: Vec<String>,
    d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn from_rows(codes: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = codes.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no labels".into()));
        }
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("expected {n}x{n} entries")));
        }
        if d.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(DistanceMatrix { codes, d })
    }

    pub fn from_catalog(catalog: &Catalog, disc: &Discretizer) -> Self {
        let ds: Vec<ParticleDescriptor> = catalog
            .geometries()
            .iter()
            .map(|g| ParticleDescriptor::from_geometry(g, disc))
            .collect();
        let d = (0..ds.len())
            .into_par_iter()
            .map(|i| {
                (0..ds.len())
                    .map(|j| if i == j { 0.0 } else { d_e(&ds[i], &ds[j]) })
                    .collect()
            })
            .collect();
        DistanceMatrix {
            codes: catalog.geometries().iter().map(|g| g.code.to_string()).collect(),
            d,
        }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.codes.iter().position(|c| c.eq_ignore_ascii_case(code))
    }

    pub fn between(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.d[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("code");
        for c in &self.codes {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for (c, row) in self.codes.iter().zip(&self.d) {
            out.push_str(c);
            for v in row {
                write!(out, ",{v:.6}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Identity of indiscernibles, symmetry and the triangle inequality over
    /// all ordered triples of distinct points.
    pub fn verify_metric(&self, tol: f64) -> MetricReport {
        let n = self.len();
        let mut failures = Vec::new();
        let mut identity = true;
        let mut symmetry = true;
        for i in 0..n {
            if self.d[i][i].abs() > tol {
                identity = false;
                failures.push(format!("d({0},{0}) = {1}", self.codes[i], self.d[i][i]));
            }
            for j in 0..n {
                if i != j && self.d[i][j] <= tol {
                    identity = false;
                    failures.push(format!(
                        "d({},{}) = {} for distinct points",
                        self.codes[i], self.codes[j], self.d[i][j]
                    ));
                }
                if j > i && (self.d[i][j] - self.d[j][i]).abs() > tol {
                    symmetry = false;
                    failures.push(format!(
                        "d({0},{1}) != d({1},{0})",
                        self.codes[i], self.codes[j]
                    ));
                }
            }
        }

        let per_row: Vec<(f64, Option<(usize, usize, usize)>, usize, Vec<String>)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst = f64::INFINITY;
                let mut at = None;
                let mut count = 0;
                let mut bad = Vec::new();
                for j in (0..n).filter(|&j| j != i) {
                    for k in (0..n).filter(|&k| k != i && k != j) {
                        count += 1;
                        let slack = self.d[i][j] + self.d[j][k] - self.d[i][k];
                        if slack < worst {
                            worst = slack;
                            at = Some((i, j, k));
                        }
                        if slack < -tol {
                            bad.push(format!(
                                "d({a},{c}) > d({a},{b}) + d({b},{c}) by {:.3e}",
                                -slack,
                                a = self.codes[i],
                                b = self.codes[j],
                                c = self.codes[k]
                            ));
                        }
                    }
                }
                (worst, at, count, bad)
            })
            .collect();

        let mut worst_slack = f64::INFINITY;
        let mut worst_triple = None;
        let mut triples_checked = 0;
        let mut triangle = true;
        for (w, at, count, bad) in per_row {
            triples_checked += count;
            if w < worst_slack {
                worst_slack = w;
                worst_triple = at.map(|(i, j, k)| {
                    [self.codes[i].clone(), self.codes[j].clone(), self.codes[k].clone()]
                });
            }
            if !bad.is_empty() {
                triangle = false;
                failures.extend(bad);
            }
        }
        MetricReport {
            identity,
            symmetry,
            triangle,
            triples_checked,
            worst_slack,
            worst_triple,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub identity: bool,
    pub symmetry: bool,
    pub triangle: bool,
    pub triples_checked: usize,
    /// Smallest `d(a,b) + d(b,c) - d(a,c)` seen.
    pub worst_slack: f64,
    pub worst_triple: Option<[String; 3]>,
    pub failures: Vec<String>,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.identity && self.symmetry && self.triangle
    }
}

pub fn distance_matrix(catalog: &Catalog, disc: &Discretizer) -> DistanceMatrix {
    DistanceMatrix::from_catalog(catalog, disc)
}
