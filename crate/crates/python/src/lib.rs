//! Python bindings: catalog geometries, the angle discretizer, coefficients,
//! the distance matrix and its analyses, and snapshot classification.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use coordspace::angles::ClassCounting;
use coordspace::extracop::{self, UnionMode};
use coordspace::shape;
use coordspace::snapshot::{self, io::write_frames, Format};
use coordspace::spacemap;
use coordspace::{Catalog, GeometryCode, Vec3};

fn err(e: coordspace::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn code(s: &str) -> PyResult<GeometryCode> {
    s.parse().map_err(err)
}

#[pyclass(name = "Geometry", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGeometry {
    inner: coordspace::GeometrySpec,
}

#[pymethods]
impl PyGeometry {
    #[new]
    pub fn new(code_str: &str) -> PyResult<Self> {
        Ok(PyGeometry {
            inner: coordspace::build_geometry(code(code_str)?),
        })
    }

    #[getter]
    pub fn code(&self) -> &'static str {
        self.inner.code.as_str()
    }

    #[getter]
    pub fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    pub fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    pub fn taxonomy(&self) -> &'static str {
        self.inner.taxonomy().as_str()
    }

    #[getter]
    pub fn vertices(&self) -> Vec<[f64; 3]> {
        self.inner.vertices.iter().map(|v| v.to_array()).collect()
    }

    pub fn sphericity(&self) -> PyResult<f64> {
        shape::sphericity(&self.inner).map_err(err)
    }

    pub fn moment_per_neighbour(&self) -> f64 {
        shape::moment_per_neighbour(&self.inner)
    }

    pub fn __repr__(&self) -> String {
        format!("Geometry('{}', k={})", self.inner.code, self.inner.k())
    }
}

/// Codes of the 22 catalog geometries in table order.
#[pyfunction]
pub fn geometry_codes() -> Vec<&'static str> {
    GeometryCode::ALL.iter().map(|c| c.as_str()).collect()
}

#[pyfunction]
pub fn catalog_json() -> PyResult<String> {
    Catalog::new().to_json().map_err(err)
}

#[pyclass(name = "Discretizer", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDiscretizer {
    inner: coordspace::Discretizer,
}

#[pymethods]
impl PyDiscretizer {
    #[new]
    #[pyo3(signature = (epsilon = coordspace::angles::DEFAULT_EPSILON, min_pts = coordspace::angles::DEFAULT_MIN_PTS))]
    pub fn new(epsilon: f64, min_pts: usize) -> PyResult<Self> {
        let params = coordspace::DiscretizerParams {
            epsilon,
            min_pts,
            ..Default::default()
        };
        let inner = coordspace::Discretizer::from_catalog(&Catalog::new(), &params).map_err(err)?;
        Ok(PyDiscretizer { inner })
    }

    #[getter]
    pub fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    #[getter]
    pub fn inherent_angles(&self) -> Vec<f64> {
        self.inner.inherent_angles.clone()
    }

    #[getter]
    pub fn bin_edges(&self) -> Vec<f64> {
        self.inner.bin_edges.clone()
    }

    pub fn class_of(&self, angle: f64) -> PyResult<usize> {
        self.inner.class_of(angle).map_err(err)
    }

    pub fn discretize(&self, angle: f64) -> PyResult<f64> {
        self.inner.discretize(angle).map_err(err)
    }

    /// Whether the four ordering axioms hold for this discretizer.
    pub fn axioms_hold(&self) -> bool {
        coordspace::axioms_satisfied(&self.inner, &Catalog::new()).all_hold()
    }
}

#[pyclass(name = "Descriptor", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDescriptor {
    inner: coordspace::ParticleDescriptor,
}

#[pymethods]
impl PyDescriptor {
    /// Descriptor of an ideal catalog geometry.
    #[staticmethod]
    pub fn from_geometry(code_str: &str, discretizer: &PyDiscretizer) -> PyResult<Self> {
        let g = coordspace::build_geometry(code(code_str)?);
        Ok(PyDescriptor {
            inner: coordspace::ParticleDescriptor::from_geometry(&g, &discretizer.inner),
        })
    }

    /// Descriptor of a measured neighbourhood given its bond vectors.
    #[staticmethod]
    pub fn from_bonds(bonds: Vec<[f64; 3]>, discretizer: &PyDiscretizer) -> PyResult<Self> {
        let bonds: Vec<Vec3> = bonds.into_iter().map(Vec3::from).collect();
        let angles = coordspace::angles::bond_angles(&bonds).map_err(err)?;
        let profile = coordspace::AngleProfile::from_angles("", &angles, &discretizer.inner, ClassCounting::Classes)
            .map_err(err)?;
        let inner = coordspace::ParticleDescriptor::new(bonds.len(), profile).map_err(err)?;
        Ok(PyDescriptor { inner })
    }

    #[getter]
    pub fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    pub fn m(&self) -> u32 {
        self.inner.m()
    }

    /// Inherent angle of each class hit, with its multiplicity.
    #[getter]
    pub fn angles(&self) -> Vec<(f64, u32)> {
        self.inner.profile().entries.iter().map(|e| (e.angle, e.f)).collect()
    }
}

#[pyfunction]
pub fn e_one(p: &PyDescriptor) -> f64 {
    extracop::e_one(&p.inner)
}

#[pyfunction]
#[pyo3(signature = (parts, corrected = true))]
pub fn e_many(parts: Vec<PyDescriptor>, corrected: bool) -> PyResult<f64> {
    let refs: Vec<&coordspace::ParticleDescriptor> = parts.iter().map(|p| &p.inner).collect();
    let mode = if corrected { UnionMode::Corrected } else { UnionMode::Raw };
    extracop::e_many(&refs, mode).map_err(err)
}

#[pyfunction]
pub fn d_e(a: &PyDescriptor, b: &PyDescriptor) -> f64 {
    extracop::d_e(&a.inner, &b.inner)
}

#[pyfunction]
pub fn e_from_counts(k: usize, m: usize) -> PyResult<f64> {
    extracop::e_from_counts(k, m).map_err(err)
}

#[pyclass(name = "DistanceMatrix", frozen)]
pub struct PyDistanceMatrix {
    inner: coordspace::DistanceMatrix,
}

#[pymethods]
impl PyDistanceMatrix {
    #[new]
    #[pyo3(signature = (discretizer = None))]
    pub fn new(discretizer: Option<&PyDiscretizer>) -> PyResult<Self> {
        let d = match discretizer {
            Some(d) => d.clone(),
            None => PyDiscretizer::new(coordspace::angles::DEFAULT_EPSILON, coordspace::angles::DEFAULT_MIN_PTS)?,
        };
        Ok(PyDistanceMatrix {
            inner: coordspace::distance_matrix(&Catalog::new(), &d.inner),
        })
    }

    #[getter]
    pub fn codes(&self) -> Vec<String> {
        self.inner.codes().to_vec()
    }

    #[getter]
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.inner.rows().to_vec()
    }

    pub fn get(&self, a: &str, b: &str) -> PyResult<f64> {
        self.inner
            .between(a, b)
            .ok_or_else(|| PyValueError::new_err(format!("unknown code in ({a}, {b})")))
    }

    /// `(is_metric, worst triangle slack, triples checked)`.
    #[pyo3(signature = (tol = 1e-9))]
    pub fn verify_metric(&self, tol: f64) -> (bool, f64, usize) {
        let r = self.inner.verify_metric(tol);
        (r.is_metric(), r.worst_slack, r.triples_checked)
    }

    pub fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    pub fn newick(&self) -> String {
        coordspace::hierarchical_cluster(&self.inner).to_newick()
    }

    #[pyo3(signature = (dims = 8, seed = 0, restarts = 20))]
    pub fn embed(&self, dims: usize, seed: u64, restarts: usize) -> PyResult<PyEmbedding> {
        let params = coordspace::MdsParams {
            dims,
            seed,
            restarts,
            ..Default::default()
        };
        Ok(PyEmbedding {
            inner: coordspace::mds(&self.inner, &params).map_err(err)?,
        })
    }

    /// Delaunay edges of a fresh two-dimensional embedding, as code pairs.
    #[pyo3(signature = (seed = 0, restarts = 20))]
    pub fn delaunay_edges(&self, seed: u64, restarts: usize) -> PyResult<Vec<(String, String)>> {
        let e = self.embed(2, seed, restarts)?;
        let pts: Vec<[f64; 2]> = e.inner.coords.iter().map(|x| [x[0], x[1]]).collect();
        let tri = spacemap::delaunay_2d(&pts).map_err(err)?;
        let codes = self.inner.codes();
        Ok(tri.edges.iter().map(|&(a, b)| (codes[a].clone(), codes[b].clone())).collect())
    }
}

#[pyclass(name = "Embedding", frozen)]
pub struct PyEmbedding {
    inner: coordspace::Embedding,
}

#[pymethods]
impl PyEmbedding {
    #[getter]
    pub fn codes(&self) -> Vec<String> {
        self.inner.codes.clone()
    }

    #[getter]
    pub fn coords(&self) -> Vec<Vec<f64>> {
        self.inner.coords.clone()
    }

    #[getter]
    pub fn stress(&self) -> f64 {
        self.inner.stress
    }

    #[getter]
    pub fn dims(&self) -> usize {
        self.inner.dims
    }

    /// Negative distance from the centroid, per code.
    pub fn typicality(&self) -> BTreeMap<String, f64> {
        let r = coordspace::typicality(&self.inner);
        r.codes.into_iter().zip(r.tau).collect()
    }
}

#[pyclass(name = "Frame", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyFrame {
    inner: coordspace::Frame,
}

#[pymethods]
impl PyFrame {
    #[new]
    #[pyo3(signature = (positions, cell = None))]
    pub fn new(positions: Vec<[f64; 3]>, cell: Option<[[f64; 3]; 3]>) -> PyResult<Self> {
        let positions = positions.into_iter().map(Vec3::from).collect();
        let inner = coordspace::Frame::new(positions, cell.map(|c| c.map(Vec3::from)), vec![]).map_err(err)?;
        Ok(PyFrame { inner })
    }

    /// All frames of an XYZ or extended-XYZ file.
    #[staticmethod]
    pub fn read(path: &str) -> PyResult<Vec<PyFrame>> {
        Ok(coordspace::read_frames(path)
            .map_err(err)?
            .into_iter()
            .map(|inner| PyFrame { inner })
            .collect())
    }

    /// Periodic fcc, bcc, hcp or sc block with optional Gaussian noise.
    #[staticmethod]
    #[pyo3(signature = (kind, cells = 4, nn = 1.0, noise = 0.0, seed = 0))]
    pub fn lattice(kind: &str, cells: usize, nn: f64, noise: f64, seed: u64) -> PyResult<Self> {
        let kind: coordspace::LatticeKind = kind.parse().map_err(err)?;
        let mut inner = coordspace::generate_lattice(kind, cells, nn).map_err(err)?;
        if noise > 0.0 {
            inner = snapshot::with_noise(&inner, noise * nn, seed).map_err(err)?;
        }
        Ok(PyFrame { inner })
    }

    #[getter]
    pub fn positions(&self) -> Vec<[f64; 3]> {
        self.inner.positions.iter().map(|p| p.to_array()).collect()
    }

    pub fn __len__(&self) -> usize {
        self.inner.len()
    }

    pub fn to_extxyz(&self) -> String {
        write_frames(std::slice::from_ref(&self.inner), Format::ExtendedXyz)
    }

    /// Per particle `(k, E, label, distance)`; E, label and distance are None for k < 2.
    #[pyo3(signature = (rcut = None, discretizer = None))]
    pub fn classify(
        &self,
        rcut: Option<f64>,
        discretizer: Option<&PyDiscretizer>,
    ) -> PyResult<Vec<(usize, Option<f64>, Option<&'static str>, Option<f64>)>> {
        let d = match discretizer {
            Some(d) => d.clone(),
            None => PyDiscretizer::new(coordspace::angles::DEFAULT_EPSILON, coordspace::angles::DEFAULT_MIN_PTS)?,
        };
        let a = coordspace::analyze(&self.inner, rcut, &Catalog::new(), &d.inner, ClassCounting::Classes)
            .map_err(err)?;
        Ok(a.particles
            .into_iter()
            .map(|p| (p.k, p.e, p.label.map(|l| l.as_str()), p.distance))
            .collect())
    }
}

#[pymodule]
fn coordspace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyDiscretizer>()?;
    m.add_class::<PyDescriptor>()?;
    m.add_class::<PyDistanceMatrix>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_class::<PyFrame>()?;
    m.add_function(wrap_pyfunction!(geometry_codes, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(e_one, m)?)?;
    m.add_function(wrap_pyfunction!(e_many, m)?)?;
    m.add_function(wrap_pyfunction!(d_e, m)?)?;
    m.add_function(wrap_pyfunction!(e_from_counts, m)?)?;
    Ok(())
}
