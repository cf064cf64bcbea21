//! Clustering from distance matrices, the adjusted Rand index and the
//! undirected baselines.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::EdgeWeightMatrix;
use crate::error::{Error, Result};
use crate::graph::DiGraph;

/// Cluster ids in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub labels: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    /// Maps arbitrary class names to ids in order of first appearance.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let labels = names
            .iter()
            .map(|s| {
                let next = ids.len();
                *ids.entry(s.as_ref()).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterAlgorithm {
    /// k-medoids (PAM) directly on the distance matrix.
    #[default]
    Pam,
    /// Classical MDS embedding followed by Lloyd's k-means.
    MdsKmeans,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub partition: Partition,
    /// Medoid index per cluster (PAM only; empty for k-means).
    pub medoids: Vec<usize>,
    pub cost: f64,
    /// Index of the restart that produced this result.
    pub restart: usize,
    pub symmetrized: bool,
}

fn prepare(d: &DMatrix<f64>, k: usize) -> Result<(DMatrix<f64>, bool)> {
    let p = d.nrows();
    if d.ncols() != p {
        return Err(Error::Dimension(format!("distance matrix is {:?}", d.shape())));
    }
    if k == 0 || k > p {
        return Err(Error::invalid("k", format!("{k} clusters for {p} points")));
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("distances", "entries must be finite"));
    }
    let asym = (d - d.transpose()).amax();
    if asym > 1e-12 {
        log::warn!("distance matrix is asymmetric (max gap {asym:e}); using (D + D^T) / 2");
        Ok(((d + d.transpose()) * 0.5, true))
    } else {
        Ok((d.clone(), false))
    }
}

/// Clusters `p` items given their pairwise distances.
///
/// Restart 0 uses the greedy PAM BUILD initialization, the others draw
/// random medoids from a generator seeded with `seed`. The lowest cost wins,
/// ties going to the earliest restart.
pub fn cluster(d: &DMatrix<f64>, k: usize, seed: u64, restarts: usize) -> Result<Clustering> {
    cluster_with(d, k, seed, restarts, ClusterAlgorithm::Pam)
}

pub fn cluster_with(
    d: &DMatrix<f64>,
    k: usize,
    seed: u64,
    restarts: usize,
    algorithm: ClusterAlgorithm,
) -> Result<Clustering> {
    let (d, symmetrized) = prepare(d, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Clustering> = None;
    for restart in 0..restarts.max(1) {
        let mut result = match algorithm {
            ClusterAlgorithm::Pam => {
                let init = if restart == 0 {
                    pam_build(&d, k)
                } else {
                    sample(&mut rng, d.nrows(), k).into_vec()
                };
                pam_swap(&d, init)
            }
            ClusterAlgorithm::MdsKmeans => mds_kmeans(&d, k, &mut rng)?,
        };
        result.restart = restart;
        result.symmetrized = symmetrized;
        if best.as_ref().is_none_or(|b| result.cost < b.cost) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn pam_build(d: &DMatrix<f64>, k: usize) -> Vec<usize> {
    let p = d.nrows();
    let first = (0..p)
        .min_by(|&a, &b| d.row(a).sum().total_cmp(&d.row(b).sum()))
        .expect("nonempty");
    let mut medoids = vec![first];
    let mut nearest: Vec<f64> = (0..p).map(|i| d[(i, first)]).collect();
    while medoids.len() < k {
        let mut best = (f64::NEG_INFINITY, 0);
        for c in (0..p).filter(|c| !medoids.contains(c)) {
            let gain: f64 = (0..p).map(|i| (nearest[i] - d[(i, c)]).max(0.0)).sum();
            if gain > best.0 {
                best = (gain, c);
            }
        }
        medoids.push(best.1);
        for (i, n) in nearest.iter_mut().enumerate() {
            *n = n.min(d[(i, best.1)]);
        }
    }
    medoids
}

fn assignment_cost(d: &DMatrix<f64>, medoids: &[usize]) -> f64 {
    (0..d.nrows())
        .map(|i| medoids.iter().map(|&m| d[(i, m)]).fold(f64::INFINITY, f64::min))
        .sum()
}

fn pam_swap(d: &DMatrix<f64>, mut medoids: Vec<usize>) -> Clustering {
    let p = d.nrows();
    let mut cost = assignment_cost(d, &medoids);
    loop {
        let mut best = (cost, None);
        for slot in 0..medoids.len() {
            for candidate in 0..p {
                if medoids.contains(&candidate) {
                    continue;
                }
                let old = std::mem::replace(&mut medoids[slot], candidate);
                let c = assignment_cost(d, &medoids);
                medoids[slot] = old;
                if c < best.0 - 1e-12 * best.0.abs().max(1.0) {
                    best = (c, Some((slot, candidate)));
                }
            }
        }
        match best.1 {
            Some((slot, candidate)) => {
                medoids[slot] = candidate;
                cost = best.0;
            }
            None => break,
        }
    }
    let labels = (0..p)
        .map(|i| {
            if let Some(own) = medoids.iter().position(|&m| m == i) {
                return own;
            }
            (0..medoids.len())
                .min_by(|&a, &b| d[(i, medoids[a])].total_cmp(&d[(i, medoids[b])]))
                .expect("k >= 1")
        })
        .collect();
    Clustering {
        partition: Partition::new(labels),
        medoids,
        cost,
        restart: 0,
        symmetrized: false,
    }
}

/// Classical multidimensional scaling: coordinates from the positive part of
/// the spectrum of `-1/2 J D^2 J`.
pub fn classical_mds(d: &DMatrix<f64>) -> DMatrix<f64> {
    let p = d.nrows();
    let j = DMatrix::identity(p, p) - DMatrix::from_element(p, p, 1.0 / p as f64);
    let b = &j * d.map(|v| v * v) * &j * -0.5;
    let eig = b.symmetric_eigen();
    let keep: Vec<usize> = (0..p).filter(|&i| eig.eigenvalues[i] > 1e-10).collect();
    DMatrix::from_fn(p, keep.len(), |i, c| {
        eig.eigenvectors[(i, keep[c])] * eig.eigenvalues[keep[c]].sqrt()
    })
}

fn mds_kmeans(d: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Result<Clustering> {
    let x = classical_mds(d);
    let p = x.nrows();
    let dist2 = |i: usize, c: &DMatrix<f64>, r: usize| -> f64 {
        (0..x.ncols()).map(|t| (x[(i, t)] - c[(r, t)]).powi(2)).sum()
    };
    // k-means++ seeding
    let mut centers = DMatrix::zeros(k, x.ncols());
    let first = rng.random_range(0..p);
    centers.row_mut(0).copy_from(&x.row(first));
    for c in 1..k {
        let w: Vec<f64> = (0..p)
            .map(|i| (0..c).map(|r| dist2(i, &centers, r)).fold(f64::INFINITY, f64::min))
            .collect();
        let total: f64 = w.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            w.iter()
                .position(|wi| {
                    target -= wi;
                    target <= 0.0
                })
                .unwrap_or(p - 1)
        } else {
            rng.random_range(0..p)
        };
        centers.row_mut(c).copy_from(&x.row(pick));
    }
    let mut labels = vec![0usize; p];
    for _ in 0..300 {
        let next: Vec<usize> = (0..p)
            .map(|i| {
                (0..k)
                    .min_by(|&a, &b| dist2(i, &centers, a).total_cmp(&dist2(i, &centers, b)))
                    .expect("k >= 1")
            })
            .collect();
        let changed = next != labels;
        labels = next;
        for c in 0..k {
            let members: Vec<usize> = (0..p).filter(|&i| labels[i] == c).collect();
            if members.is_empty() {
                continue;
            }
            for t in 0..x.ncols() {
                centers[(c, t)] = members.iter().map(|&i| x[(i, t)]).sum::<f64>() / members.len() as f64;
            }
        }
        if !changed {
            break;
        }
    }
    let cost = (0..p).map(|i| dist2(i, &centers, labels[i])).sum();
    // renumber to consecutive ids in order of first appearance
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let labels = labels
        .into_iter()
        .map(|l| {
            let next = remap.len();
            *remap.entry(l).or_insert(next)
        })
        .collect();
    Ok(Clustering {
        partition: Partition::new(labels),
        medoids: Vec::new(),
        cost,
        restart: 0,
        symmetrized: false,
    })
}

fn choose2(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Hubert-Arabie adjusted Rand index.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("partitions of length {} and {}", a.len(), b.len())));
    }
    let n = a.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_a * sum_b / total;
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        // both partitions trivial (all singletons or one block)
        return Ok(if a.labels.len() <= 1 || index == max { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

/// Euclidean distances between graphs after projecting the row-centered
/// edge-weight matrix onto its top `p - 1` principal components.
pub fn pca_baseline(weights: &EdgeWeightMatrix) -> Result<DMatrix<f64>> {
    let v = weights.values();
    let (e, p) = v.shape();
    if p < 2 {
        return Err(Error::invalid("ensemble", "PCA baseline needs at least 2 graphs"));
    }
    let mut centered = v.clone();
    for r in 0..e {
        let mean = centered.row(r).mean();
        centered.row_mut(r).add_scalar_mut(-mean);
    }
    // principal axes from the p x p Gram matrix (nalgebra's SVD of wide
    // matrices can lose accuracy), then project the data onto them
    let eig = (centered.transpose() * &centered).symmetric_eigen();
    let mut order: Vec<usize> = (0..p).filter(|&c| eig.eigenvalues[c] > 0.0).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order.truncate((p - 1).min(e));
    if order.is_empty() {
        return Ok(DMatrix::zeros(p, p));
    }
    let mut axes = DMatrix::zeros(e, order.len());
    for (slot, &c) in order.iter().enumerate() {
        let axis = &centered * eig.eigenvectors.column(c) / eig.eigenvalues[c].sqrt();
        axes.set_column(slot, &axis);
    }
    let scores = centered.transpose() * axes.qr().q();
    Ok(DMatrix::from_fn(p, p, |a, b| {
        if a == b {
            0.0
        } else {
            (scores.row(a) - scores.row(b)).norm()
        }
    }))
}

/// `1 - pearson(u, v)`; `None` when either vector has zero variance.
pub fn correlation_distance(u: &[f64], v: &[f64]) -> Option<f64> {
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let (mut num, mut su, mut sv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        let (x, y) = (a - mu, b - mv);
        num += x * y;
        su += x * x;
        sv += y * y;
    }
    if su == 0.0 || sv == 0.0 {
        return None;
    }
    Some((1.0 - num / (su.sqrt() * sv.sqrt())).clamp(0.0, 2.0))
}

/// Correlation distance between every pair of edge rows of the weight
/// matrix, as an `E x E` ground cost. A row with zero variance is at distance
/// 1 from every other row and 0 from itself.
pub fn correlation_cost(weights: &EdgeWeightMatrix) -> DMatrix<f64> {
    let v = weights.values();
    let rows: Vec<Vec<f64>> = v.row_iter().map(|r| r.iter().copied().collect()).collect();
    let e = rows.len();
    let mut c = DMatrix::zeros(e, e);
    let mut flat = 0;
    for a in 0..e {
        for b in a + 1..e {
            let d = correlation_distance(&rows[a], &rows[b]).unwrap_or(1.0);
            c[(a, b)] = d;
            c[(b, a)] = d;
        }
        if correlation_distance(&rows[a], &rows[a]).is_none() {
            flat += 1;
        }
    }
    if flat > 0 {
        log::warn!("{flat} edge rows have zero variance; their correlation cost is set to 1");
    }
    c
}

/// Correlation distance between the graph columns, clustered directly.
pub fn correlation_distance_columns(weights: &EdgeWeightMatrix) -> DMatrix<f64> {
    let v = weights.values();
    let cols: Vec<Vec<f64>> = v.column_iter().map(|c| c.iter().copied().collect()).collect();
    let p = cols.len();
    DMatrix::from_fn(p, p, |a, b| {
        if a == b {
            0.0
        } else {
            correlation_distance(&cols[a], &cols[b]).unwrap_or(1.0)
        }
    })
}

/// `||A_1 - A_2||_F` over the union of node labels. Entries are summed in
/// label order, so swapping the arguments gives the same bits.
pub fn frobenius_distance(g1: &DiGraph, g2: &DiGraph) -> f64 {
    let mut diff: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for (i, j, w) in g1.edges() {
        *diff.entry((&g1.labels()[i], &g1.labels()[j])).or_default() += w;
    }
    for (i, j, w) in g2.edges() {
        *diff.entry((&g2.labels()[i], &g2.labels()[j])).or_default() -= w;
    }
    diff.values().map(|d| d * d).sum::<f64>().sqrt()
}

/// Result record written by the clustering command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub method: String,
    pub metric: Option<String>,
    pub k: usize,
    pub seed: u64,
    pub ari: Option<f64>,
    pub labels: Vec<usize>,
    pub medoids: Vec<usize>,
}
