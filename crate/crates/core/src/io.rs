//! File formats: edge-list CSV, ensemble manifests and labeled square
//! matrices.
//!
//! Edge lists are UTF-8 CSV with the header `source,target,weight`; lines
//! starting with `#` are comments. Labeled matrices are CSV whose header is
//! `id,<label_1>,...,<label_n>` followed by one `label,values...` row per
//! label. Floats are written in Rust's shortest round-trip form, so writing
//! and re-reading is lossless.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DiGraph;

pub fn read_edge_list<R: Read>(reader: R) -> Result<DiGraph> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = csv.headers()?.clone();
    let expected = ["source", "target", "weight"];
    if header.len() != 3 || header.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::BadRow {
            row: 0,
            reason: format!("expected header `source,target,weight`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut rows = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::BadRow {
                row,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let weight: f64 = record[2].parse().map_err(|_| Error::BadRow {
            row,
            reason: format!("cannot parse weight `{}`", &record[2]),
        })?;
        if record[0].is_empty() || record[1].is_empty() {
            return Err(Error::BadRow {
                row,
                reason: "empty node label".into(),
            });
        }
        rows.push((record[0].to_string(), record[1].to_string(), weight));
    }
    DiGraph::from_edge_list(&rows)
}

/// Writes positive-weight edges in row-major order.
///
/// When that order would not reproduce the graph's node order on reading
/// (isolated nodes, or nodes first seen out of order), every node is first
/// declared with a zero-weight self row.
pub fn write_edge_list<W: Write>(graph: &DiGraph, writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["source", "target", "weight"])?;
    let labels = graph.labels();
    let mut first_seen = Vec::with_capacity(graph.n());
    let mut seen = vec![false; graph.n()];
    for (i, j, _) in graph.edges() {
        for v in [i, j] {
            if !std::mem::replace(&mut seen[v], true) {
                first_seen.push(v);
            }
        }
    }
    if first_seen.len() != graph.n() || first_seen.iter().enumerate().any(|(a, b)| a != *b) {
        for label in labels {
            csv.write_record([label.as_str(), label.as_str(), "0"])?;
        }
    }
    for (i, j, w) in graph.edges() {
        csv.write_record([labels[i].as_str(), labels[j].as_str(), &w.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn load_edge_list(path: &Path) -> Result<DiGraph> {
    let file = fs::File::open(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    read_edge_list(file).map_err(|e| Error::Graph {
        id: path.display().to_string(),
        source: Box::new(e),
    })
}

pub fn save_edge_list(graph: &DiGraph, path: &Path) -> Result<()> {
    let file = create(path)?;
    write_edge_list(graph, file)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub graphs: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    /// Loads every listed graph. Relative paths resolve against `base`.
    pub fn load_graphs(&self, base: &Path) -> Result<Vec<DiGraph>> {
        self.graphs
            .iter()
            .map(|entry| {
                let path = resolve(base, &entry.path);
                load_edge_list(&path).map_err(|e| match e {
                    Error::Graph { source, .. } => Error::Graph {
                        id: entry.id.clone(),
                        source,
                    },
                    other => Error::Graph {
                        id: entry.id.clone(),
                        source: Box::new(other),
                    },
                })
            })
            .collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.graphs.iter().map(|g| g.id.clone()).collect()
    }

    /// Class labels, if every entry carries one.
    pub fn labels(&self) -> Option<Vec<String>> {
        self.graphs.iter().map(|g| g.label.clone()).collect()
    }
}

fn resolve(base: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn write_labeled_matrix<W: Write>(labels: &[String], values: &DMatrix<f64>, writer: W) -> Result<()> {
    if values.nrows() != labels.len() || values.ncols() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} labels for a {}x{} matrix",
            labels.len(),
            values.nrows(),
            values.ncols()
        )));
    }
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["id".to_string()];
    header.extend(labels.iter().cloned());
    csv.write_record(&header)?;
    for (i, label) in labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(values.row(i).iter().map(|v| v.to_string()));
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_labeled_matrix<R: Read>(reader: R) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv.headers()?.clone();
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = labels.len();
    let mut values = DMatrix::zeros(n, n);
    let mut rows = 0;
    for (i, record) in csv.records().enumerate() {
        let record = record?;
        if i >= n {
            return Err(Error::Dimension(format!("more than {n} rows")));
        }
        if &record[0] != labels[i].as_str() {
            return Err(Error::BadRow {
                row: i,
                reason: format!("row label `{}` does not match column `{}`", &record[0], labels[i]),
            });
        }
        for j in 0..n {
            values[(i, j)] = record[j + 1].parse().map_err(|_| Error::BadRow {
                row: i,
                reason: format!("cannot parse `{}`", &record[j + 1]),
            })?;
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Dimension(format!("{rows} rows for {n} columns")));
    }
    Ok((labels, values))
}

pub fn save_labeled_matrix(labels: &[String], values: &DMatrix<f64>, path: &Path) -> Result<()> {
    write_labeled_matrix(labels, values, create(path)?)
}

pub fn load_labeled_matrix(path: &Path) -> Result<(Vec<String>, DMatrix<f64>)> {
    let file = fs::File::open(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    read_labeled_matrix(file)
}

/// Rectangular matrix with positional headers, for transport plans.
pub fn write_matrix<W: Write>(
    row_labels: &[String],
    col_labels: &[String],
    values: &DMatrix<f64>,
    writer: W,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![String::new()];
    header.extend(col_labels.iter().cloned());
    csv.write_record(&header)?;
    for (i, label) in row_labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(values.row(i).iter().map(|v| v.to_string()));
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut file = create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::File {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::File::create(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}
