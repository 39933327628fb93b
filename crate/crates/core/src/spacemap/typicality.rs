use std::fmt::Write;

use serde::Serialize;

use crate::catalog::{GeometryCode, TaxonomyClass};
use crate::error::{Error, Result};
use crate::spacemap::mds::Embedding;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub codes: Vec<String>,
    pub tau: Vec<f64>,
    pub centroid: Vec<f64>,
}

/// Negative Euclidean distance of each point from the componentwise mean.
pub fn typicality(emb: &Embedding) -> TypicalityReport {
    let n = emb.coords.len() as f64;
    let centroid: Vec<f64> = (0..emb.dims)
        .map(|c| emb.coords.iter().map(|x| x[c]).sum::<f64>() / n)
        .collect();
    let tau = emb
        .coords
        .iter()
        .map(|x| {
            -x.iter()
                .zip(&centroid)
                .map(|(a, m)| (a - m) * (a - m))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    TypicalityReport {
        codes: emb.codes.clone(),
        tau,
        centroid,
    }
}

impl TypicalityReport {
    pub fn get(&self, code: &str) -> Option<f64> {
        self.codes
            .iter()
            .position(|c| c.eq_ignore_ascii_case(code))
            .map(|i| self.tau[i])
    }

    pub fn least_typical(&self) -> &str {
        let i = (0..self.tau.len())
            .min_by(|&a, &b| self.tau[a].total_cmp(&self.tau[b]))
            .unwrap();
        &self.codes[i]
    }

    pub fn most_typical(&self) -> &str {
        let i = (0..self.tau.len())
            .max_by(|&a, &b| self.tau[a].total_cmp(&self.tau[b]).then(b.cmp(&a)))
            .unwrap();
        &self.codes[i]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("code,tau\n");
        for (c, t) in self.codes.iter().zip(&self.tau) {
            writeln!(s, "{c},{t:.6}").unwrap();
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassAverage {
    pub class: TaxonomyClass,
    pub members: Vec<GeometryCode>,
    pub sphericity: f64,
    pub moment_per_neighbour: f64,
    pub tau: f64,
}

/// Per taxonomy class, the mean of the supplied per-geometry values
/// (indexed in catalog order).
pub fn class_averages(
    codes: &[GeometryCode],
    sphericity: &[f64],
    moment: &[f64],
    tau: &[f64],
) -> Result<Vec<ClassAverage>> {
    let n = codes.len();
    if sphericity.len() != n || moment.len() != n || tau.len() != n {
        return Err(Error::InvalidParameter("per-geometry columns differ in length".into()));
    }
    let mut out = Vec::new();
    for class in TaxonomyClass::ALL {
        let idx: Vec<usize> = (0..n).filter(|&i| codes[i].taxonomy() == class).collect();
        if idx.is_empty() {
            continue;
        }
        let mean = |v: &[f64]| idx.iter().map(|&i| v[i]).sum::<f64>() / idx.len() as f64;
        out.push(ClassAverage {
            class,
            members: idx.iter().map(|&i| codes[i]).collect(),
            sphericity: mean(sphericity),
            moment_per_neighbour: mean(moment),
            tau: mean(tau),
        });
    }
    Ok(out)
}

/// CSV of (code, E, tau, point group, group order).
pub fn order_typicality_scatter(codes: &[GeometryCode], e: &[f64], tau: &TypicalityReport) -> Result<String> {
    if e.len() != codes.len() {
        return Err(Error::InvalidParameter("one E value per geometry required".into()));
    }
    let mut s = String::from("code,E,tau,point_group,order\n");
    for (c, ev) in codes.iter().zip(e) {
        let t = tau
            .get(c.as_str())
            .ok_or_else(|| Error::UnknownGeometry(c.to_string()))?;
        let (pg, order) = c.point_group();
        writeln!(s, "{c},{ev:.6},{t:.6},{pg},{order}").unwrap();
    }
    Ok(s)
}
