//! Reading graphs, subspaces, matrices and spectrum windows from files or stdin.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::Complex;
use qg_spectra::bc::{CMatrix, CVector};
use qg_spectra::spectra::{Condition, EigenClass, EigenvalueEntry, SpectrumWindow};
use qg_spectra::{Graph, Subspace};
use serde::Deserialize;

/// Reads a path, or stdin for `-`.
pub fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Graph JSON (`{"n": .., "edges": [[t, h], ..]}`) or the plain edge-list
/// text format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text).context("parsing graph JSON")?)
    } else {
        Ok(Graph::parse_edge_list(text)?)
    }
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_source(path)?)
}

type RawComplexVec = Vec<[f64; 2]>;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSubspace {
    Vectors(Vec<RawComplexVec>),
    WithDim {
        ambient_dim: usize,
        vectors: Vec<RawComplexVec>,
    },
}

fn to_cvector(v: &[[f64; 2]]) -> CVector<f64> {
    CVector::from_iterator(v.len(), v.iter().map(|&[re, im]| Complex::new(re, im)))
}

/// Subspace given as a JSON list of spanning vectors, each a list of
/// `[re, im]` pairs, or `{"ambient_dim": k, "vectors": [...]}` (needed for
/// the zero subspace).
pub fn parse_subspace(text: &str) -> Result<Subspace<f64>> {
    let raw: RawSubspace = serde_json::from_str(text).context("parsing subspace JSON")?;
    let (dim, vectors) = match raw {
        RawSubspace::Vectors(v) => {
            let Some(first) = v.first() else {
                bail!("subspace has no spanning vectors; use {{\"ambient_dim\": k, \"vectors\": []}}");
            };
            (first.len(), v)
        }
        RawSubspace::WithDim { ambient_dim, vectors } => (ambient_dim, vectors),
    };
    let vecs: Vec<CVector<f64>> = vectors.iter().map(|v| to_cvector(v)).collect();
    Ok(Subspace::from_spanning_vectors(dim, &vecs)?)
}

/// Square complex matrix as a JSON list of rows of `[re, im]` pairs.
pub fn parse_complex_matrix(text: &str) -> Result<CMatrix<f64>> {
    let rows: Vec<RawComplexVec> = serde_json::from_str(text).context("parsing matrix JSON")?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("matrix must be square with {n} entries per row");
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        Complex::new(re, im)
    }))
}

#[derive(Deserialize)]
struct RawEntry {
    lambda: f64,
    multiplicity: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWindow {
    Window {
        condition: Option<Condition>,
        lambda_max: f64,
        entries: Vec<RawEntry>,
    },
    Plain(Vec<f64>),
}

/// A spectrum window: the JSON written by `spectrum` (classes are
/// re-derived, so hand-written `{"lambda_max", "entries": [{"lambda",
/// "multiplicity"}]}` works too), or a plain list of eigenvalues repeated by
/// multiplicity, which needs `lambda_max`.
pub fn parse_window(text: &str, condition: Condition, lambda_max: Option<f64>, tol: f64) -> Result<SpectrumWindow<f64>> {
    let raw: RawWindow = serde_json::from_str(text).context("parsing spectrum JSON")?;
    match raw {
        RawWindow::Window {
            condition: file_condition,
            lambda_max: file_max,
            entries,
        } => {
            if let Some(fc) = file_condition {
                if fc != condition {
                    bail!("file holds a {fc} spectrum but --condition is {condition}");
                }
            }
            let window = SpectrumWindow {
                condition,
                lambda_max: lambda_max.unwrap_or(file_max),
                entries: entries
                    .into_iter()
                    .map(|e| EigenvalueEntry {
                        lambda: e.lambda,
                        multiplicity: e.multiplicity,
                        class: EigenClass::Immanent,
                        source_mu: None,
                    })
                    .collect(),
                graph_info: None,
            };
            Ok(window.reclassified(tol))
        }
        RawWindow::Plain(values) => {
            let Some(lambda_max) = lambda_max else {
                bail!("a plain eigenvalue list needs --lambda-max");
            };
            Ok(SpectrumWindow::from_eigenvalue_list(condition, &values, lambda_max, tol))
        }
    }
}
