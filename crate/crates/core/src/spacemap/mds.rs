use std::fmt::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spacemap::distance::DistanceMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MdsParams {
    pub dims: usize,
    /// Total starts: one classical-scaling start plus `restarts - 1` random ones.
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative raw-stress change below which a run stops.
    pub tol: f64,
}

impl Default for MdsParams {
    fn default() -> Self {
        MdsParams {
            dims: 8,
            restarts: 20,
            seed: 0,
            max_iter: 10_000,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTrace {
    pub start: usize,
    /// Stress-1 after initialisation and after each Guttman transform.
    pub stress: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Embedding {
    pub codes: Vec<String>,
    pub dims: usize,
    pub coords: Vec<Vec<f64>>,
    /// Metric stress-1 of `coords`.
    pub stress: f64,
    pub converged: bool,
    /// Index of the start that produced the best solution (0 = classical).
    pub best_start: usize,
    pub traces: Vec<RunTrace>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Projection {
    /// A separate SMACOF run in the requested dimensionality.
    #[default]
    Fresh,
    /// Principal axes of a higher-dimensional embedding.
    Principal,
}

fn pairwise(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = x[i]
                .iter()
                .zip(&x[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

fn raw_stress(delta: &[Vec<f64>], x: &[Vec<f64>]) -> f64 {
    raw_stress_of(delta, &pairwise(x))
}

fn raw_stress_of(delta: &[Vec<f64>], d: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s += (delta[i][j] - d[i][j]).powi(2);
        }
    }
    s
}

fn normaliser(delta: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..delta.len() {
        for j in i + 1..delta.len() {
            s += delta[i][j] * delta[i][j];
        }
    }
    s
}

/// Metric stress-1 of a configuration against target distances.
pub fn stress1(dm: &DistanceMatrix, coords: &[Vec<f64>]) -> f64 {
    (raw_stress(dm.rows(), coords) / normaliser(dm.rows())).sqrt()
}

fn guttman(delta: &[Vec<f64>], x: &[Vec<f64>], d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = x.len();
    let dims = x[0].len();
    let mut out = vec![vec![0.0; dims]; n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i == j || d[i][j] <= 0.0 {
                continue;
            }
            let b = delta[i][j] / d[i][j];
            diag += b;
            for c in 0..dims {
                out[i][c] -= b * x[j][c];
            }
        }
        for c in 0..dims {
            out[i][c] = (out[i][c] + diag * x[i][c]) / n as f64;
        }
    }
    out
}

/// Top eigenpairs of a symmetric matrix, largest first, ties by index.
fn leading_eigen(m: DMatrix<f64>, dims: usize) -> Vec<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(dims)
        .map(|i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            // fix the sign so the largest-magnitude component is positive
            let pivot = v
                .iter()
                .copied()
                .fold(0.0f64, |acc, x| if x.abs() > acc.abs() + 1e-12 { x } else { acc });
            if pivot < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            (eig.eigenvalues[i], v)
        })
        .collect()
}

/// Torgerson scaling of the double-centred squared distances.
pub fn classical_mds(dm: &DistanceMatrix, dims: usize) -> Vec<Vec<f64>> {
    let n = dm.len();
    let mut b = DMatrix::from_fn(n, n, |i, j| -0.5 * dm.get(i, j).powi(2));
    let row_means: Vec<f64> = (0..n).map(|i| b.row(i).mean()).collect();
    let total = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] += total - row_means[i] - row_means[j];
        }
    }
    let pairs = leading_eigen(b, dims.min(n));
    let mut x = vec![vec![0.0; dims]; n];
    for (c, (lambda, v)) in pairs.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        for i in 0..n {
            x[i][c] = s * v[i];
        }
    }
    x
}

fn random_start(n: usize, dims: usize, scale: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dims).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

fn smacof(
    dm: &DistanceMatrix,
    mut x: Vec<Vec<f64>>,
    params: &MdsParams,
    start: usize,
) -> (Vec<Vec<f64>>, RunTrace) {
    let delta = dm.rows();
    let norm = normaliser(delta);
    let mut d = pairwise(&x);
    let mut sigma = raw_stress_of(delta, &d);
    let mut history = vec![(sigma / norm).sqrt()];
    let mut converged = false;
    for _ in 0..params.max_iter {
        x = guttman(delta, &x, &d);
        d = pairwise(&x);
        let s = raw_stress_of(delta, &d);
        history.push((s / norm).sqrt());
        let change = sigma - s;
        sigma = s;
        if sigma == 0.0 || change <= params.tol * sigma {
            converged = true;
            break;
        }
    }
    (
        x,
        RunTrace {
            start,
            stress: history,
            converged,
        },
    )
}

/// Metric-stress multidimensional scaling by SMACOF.
pub fn mds(dm: &DistanceMatrix, params: &MdsParams) -> Result<Embedding> {
    if params.dims == 0 {
        return Err(Error::InvalidParameter("dims must be at least 1".into()));
    }
    if params.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let n = dm.len();
    if n < 2 {
        return Err(Error::InvalidMatrix("need at least two points".into()));
    }
    let mean_delta = normaliser(dm.rows()).sqrt() / ((n * (n - 1) / 2) as f64).sqrt();
    let runs: Vec<(Vec<Vec<f64>>, RunTrace)> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = if r == 0 {
                classical_mds(dm, params.dims)
            } else {
                random_start(n, params.dims, mean_delta, params.seed.wrapping_add(r as u64))
            };
            smacof(dm, x0, params, r)
        })
        .collect();

    let mut best = 0;
    for (i, (_, t)) in runs.iter().enumerate() {
        if t.stress.last() < runs[best].1.stress.last() {
            best = i;
        }
    }
    let coords = runs[best].0.clone();
    let stress = stress1(dm, &coords);
    let converged = runs[best].1.converged;
    Ok(Embedding {
        codes: dm.codes().to_vec(),
        dims: params.dims,
        coords,
        stress,
        converged,
        best_start: best,
        traces: runs.into_iter().map(|(_, t)| t).collect(),
    })
}

impl Embedding {
    /// Coordinates on the leading principal axes of this embedding.
    pub fn principal(&self, dims: usize, dm: &DistanceMatrix) -> Result<Embedding> {
        if dims == 0 || dims > self.dims {
            return Err(Error::InvalidParameter(format!(
                "cannot project {}-D coordinates to {dims}-D",
                self.dims
            )));
        }
        let n = self.coords.len();
        let mean: Vec<f64> = (0..self.dims)
            .map(|c| self.coords.iter().map(|x| x[c]).sum::<f64>() / n as f64)
            .collect();
        let centred: Vec<Vec<f64>> = self
            .coords
            .iter()
            .map(|x| x.iter().zip(&mean).map(|(a, m)| a - m).collect())
            .collect();
        let cov = DMatrix::from_fn(self.dims, self.dims, |a, b| {
            centred.iter().map(|x| x[a] * x[b]).sum::<f64>()
        });
        let axes = leading_eigen(cov, dims);
        let coords: Vec<Vec<f64>> = centred
            .iter()
            .map(|x| {
                axes.iter()
                    .map(|(_, v)| x.iter().zip(v).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        let stress = stress1(dm, &coords);
        Ok(Embedding {
            codes: self.codes.clone(),
            dims,
            coords,
            stress,
            converged: self.converged,
            best_start: self.best_start,
            traces: Vec::new(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("code");
        for c in 1..=self.dims {
            write!(s, ",x{c}").unwrap();
        }
        s.push_str(",stress\n");
        for (code, x) in self.codes.iter().zip(&self.coords) {
            s.push_str(code);
            for v in x {
                write!(s, ",{v:.6}").unwrap();
            }
            writeln!(s, ",{:.6}", self.stress).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclidean_matrix(points: &[[f64; 3]]) -> DistanceMatrix {
        let x: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        DistanceMatrix::from_rows(labels, pairwise(&x)).unwrap()
    }

    fn params(dims: usize, restarts: usize) -> MdsParams {
        MdsParams {
            dims,
            restarts,
            ..Default::default()
        }
    }

    #[test]
    fn realisable_metric_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<[f64; 3]> = (0..12)
            .map(|_| [rng.random(), rng.random(), rng.random()])
            .collect();
        let dm = euclidean_matrix(&pts);
        let e = mds(&dm, &params(3, 4)).unwrap();
        assert!(e.stress < 1e-6, "{}", e.stress);
        assert_eq!(e.best_start, 0);
    }

    #[test]
    fn stress_never_increases() {
        let dm = euclidean_matrix(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 2.0, 0.0],
            [0.0, 0.0, 3.0],
            [1.0, 1.0, 1.0],
        ]);
        let e = mds(&dm, &params(2, 5)).unwrap();
        for t in &e.traces {
            assert!(t.stress.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn same_seed_same_embedding() {
        let dm = euclidean_matrix(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let a = mds(&dm, &params(2, 6)).unwrap();
        let b = mds(&dm, &params(2, 6)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn principal_projection_keeps_planar_data() {
        let dm = euclidean_matrix(&[[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [2.0, 1.0, 0.0]]);
        let e = mds(&dm, &params(3, 1)).unwrap();
        let p = e.principal(2, &dm).unwrap();
        assert!(p.stress < 1e-6);
        assert!(e.principal(4, &dm).is_err());
    }

    #[test]
    fn invalid_parameters() {
        let dm = euclidean_matrix(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        assert!(mds(&dm, &params(0, 1)).is_err());
        assert!(mds(&dm, &params(1, 0)).is_err());
    }
}
