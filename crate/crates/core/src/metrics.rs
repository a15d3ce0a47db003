//! Structural diagnostics: hop distances, average path length, betweenness
//! centrality, circuit rank and the dimension estimate from path-length
//! growth.
//!
//! Per-source BFS work is spread over rayon in fixed-size chunks and the
//! chunk results are summed in source order, so floating-point results do
//! not depend on the number of worker threads.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

const SOURCE_CHUNK: usize = 32;

/// Dense symmetric matrix of hop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.data[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.data[a * self.n..(a + 1) * self.n]
    }
}

fn bfs_distances(g: &Graph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = du;
                queue.push_back(v);
            }
        }
    }
}

/// Hop distances between all node pairs, one BFS per node.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix> {
    g.check_connected()?;
    let n = g.num_nodes();
    let mut data = vec![0u32; n * n];
    data.par_chunks_mut(n)
        .enumerate()
        .for_each_init(VecDeque::new, |queue, (source, row)| {
            bfs_distances(g, source, row, queue)
        });
    Ok(DistanceMatrix { n, data })
}

/// Mean hop distance over unordered pairs `u < v` (distance-zero pairs
/// excluded).
pub fn average_path_length(g: &Graph) -> Result<f64> {
    g.check_connected()?;
    let n = g.num_nodes();
    if n < 2 {
        return Err(Error::SizeTooSmall(
            "average path length needs at least two nodes".into(),
        ));
    }
    let sources: Vec<usize> = (0..n).collect();
    let total: u64 = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut dist = vec![0u32; n];
            let mut queue = VecDeque::new();
            chunk
                .iter()
                .map(|&s| {
                    bfs_distances(g, s, &mut dist, &mut queue);
                    dist[s + 1..].iter().map(|&d| d as u64).sum::<u64>()
                })
                .sum::<u64>()
        })
        .sum();
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(total as f64 / pairs)
}

/// Brandes dependency accumulation from one source into `acc`.
fn brandes_source(g: &Graph, source: usize, scratch: &mut BrandesScratch, acc: &mut [f64]) {
    let BrandesScratch {
        dist,
        sigma,
        delta,
        order,
        queue,
    } = scratch;
    dist.fill(u32::MAX);
    sigma.fill(0.0);
    delta.fill(0.0);
    order.clear();
    queue.clear();

    dist[source] = 0;
    sigma[source] = 1.0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if dist[v] == dist[u] + 1 {
                sigma[v] += sigma[u];
            }
        }
    }
    for &w in order.iter().rev() {
        for &v in g.neighbors(w) {
            if dist[v] + 1 == dist[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != source {
            acc[w] += delta[w];
        }
    }
}

struct BrandesScratch {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            dist: vec![0; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }
}

/// Unnormalized betweenness: for every node `v`, the sum over unordered
/// pairs `{s, t}` with `v` not an endpoint of the fraction of shortest
/// `s`-`t` paths through `v`.
pub fn betweenness_raw(g: &Graph) -> Result<Vec<f64>> {
    g.check_connected()?;
    let n = g.num_nodes();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scratch = BrandesScratch::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                brandes_source(g, s, &mut scratch, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // Every unordered pair was visited from both endpoints.
    for t in &mut total {
        *t *= 0.5;
    }
    Ok(total)
}

/// Betweenness normalized by the `(M-1)(M-2)/2` pairs that exclude the node,
/// so that `g` lies in `[0, 1]` (a star hub has `g = 1`).
pub fn betweenness_centrality(g: &Graph) -> Result<Vec<f64>> {
    let mut raw = betweenness_raw(g)?;
    let n = g.num_nodes();
    if n < 3 {
        raw.fill(0.0);
        return Ok(raw);
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    for value in &mut raw {
        *value /= norm;
    }
    Ok(raw)
}

/// `E - M + 1`: edges to delete before the graph becomes a spanning tree.
pub fn circuit_rank(g: &Graph) -> Result<usize> {
    g.check_connected()?;
    Ok(g.num_edges() + 1 - g.num_nodes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub avg_path_length: f64,
    pub betweenness: Vec<f64>,
    pub circuit_rank: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl MetricsReport {
    pub fn compute(g: &Graph) -> Result<Self> {
        Ok(MetricsReport {
            num_nodes: g.num_nodes(),
            num_edges: g.num_edges(),
            avg_path_length: average_path_length(g)?,
            betweenness: betweenness_centrality(g)?,
            circuit_rank: circuit_rank(g)?,
            degree_histogram: g.degree_histogram(),
        })
    }
}

/// Power-law fit of average path length against node count.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionFit {
    /// Inverse of the fitted growth exponent.
    pub alpha: f64,
    pub r_squared: f64,
    pub points: Vec<(usize, f64)>,
}

/// Unweighted least squares of `ln L = (1/alpha) ln M + c`.
pub fn fit_dimension(points: &[(usize, f64)]) -> Result<DimensionFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let mut sizes: Vec<usize> = points.iter().map(|p| p.0).collect();
    sizes.sort_unstable();
    if sizes.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidFit("node counts must be distinct".into()));
    }
    if points
        .iter()
        .any(|&(m, l)| m < 2 || !(l > 0.0) || !l.is_finite())
    {
        return Err(Error::InvalidFit(
            "need M >= 2 and finite positive path lengths".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|&(m, _)| (m as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, l)| l.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(Error::InvalidFit(format!(
            "path length does not grow with size (slope {slope})"
        )));
    }
    let r_squared = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DimensionFit {
        alpha: 1.0 / slope,
        r_squared,
        points: points.to_vec(),
    })
}
