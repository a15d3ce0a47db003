//! Effective pair Hamiltonian on a graph, in units of the pair tunneling
//! `J_eff`, with the constant `-N (U0 + J_eff)` offset dropped.
//!
//! For `N` pairs in the hard-core basis of [`PairBasis`]:
//!
//! * diagonal: number of occupied nearest-neighbour site pairs (zero when
//!   the nearest-neighbour repulsion is switched off);
//! * off-diagonal: `-1/2` between configurations related by one pair
//!   hopping along an edge onto an empty site.
//!
//! Entries are built from integers and halves only, so assembly is exact.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::basis::{PairBasis, Sites};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const HOP_AMPLITUDE: f64 = -0.5;

const PAR_MIN_ROWS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    pub include_nn_repulsion: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            include_nn_repulsion: true,
        }
    }
}

impl ModelOptions {
    pub fn hard_core_only() -> Self {
        ModelOptions {
            include_nn_repulsion: false,
        }
    }
}

/// Real symmetric sparse matrix: dense diagonal plus CSR storage of both
/// off-diagonal triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    dim: usize,
    diag: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseSymMatrix {
    /// Assembles from per-row off-diagonal entries. Entries sharing a
    /// `(row, col)` are summed. Symmetry is the caller's responsibility and
    /// is checked in debug builds.
    pub fn from_rows(diag: Vec<f64>, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let dim = diag.len();
        assert_eq!(rows.len(), dim);
        assert!(dim <= u32::MAX as usize);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|e| e.0);
            for (c, v) in row {
                debug_assert!(c < dim);
                if cols.len() > *row_ptr.last().unwrap() && *cols.last().unwrap() == c as u32 {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c as u32);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        let m = SparseSymMatrix {
            dim,
            diag,
            row_ptr,
            cols,
            vals,
        };
        debug_assert!(m.is_symmetric());
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries `(col, value)` of one row.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .iter()
            .zip(&self.vals[range])
            .map(|(&c, &v)| (c as usize, v))
    }

    /// Number of stored off-diagonal entries (both triangles).
    pub fn off_diagonal_nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            return self.diag[row];
        }
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&(col as u32)) {
            Ok(pos) => self.vals[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(c, v)| self.get(c, r) == v))
    }

    /// `y = H x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        for len in [x.len(), y.len()] {
            if len != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: len,
                });
            }
        }
        let row_value = |r: usize| {
            let mut acc = self.diag[r] * x[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            acc
        };
        if self.dim >= PAR_MIN_ROWS {
            y.par_iter_mut()
                .with_min_len(PAR_MIN_ROWS / 4)
                .enumerate()
                .for_each(|(r, out)| *out = row_value(r));
        } else {
            for (r, out) in y.iter_mut().enumerate() {
                *out = row_value(r);
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut dense = vec![0.0; n * n];
        for r in 0..n {
            dense[r * n + r] = self.diag[r];
            for (c, v) in self.row(r) {
                dense[r * n + c] = v;
            }
        }
        dense
    }

    /// Number of basis states reachable from state 0 through nonzero
    /// off-diagonal entries.
    pub fn connected_component_size(&self) -> usize {
        if self.dim == 0 {
            return 0;
        }
        let mut seen = vec![false; self.dim];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(r) = queue.pop_front() {
            for (c, v) in self.row(r) {
                if v != 0.0 && !seen[c] {
                    seen[c] = true;
                    count += 1;
                    queue.push_back(c);
                }
            }
        }
        count
    }

    /// Coordinate dump: the dimension on the first line, then `row col value`
    /// for every nonzero entry in row-major order, values written as exact
    /// halves (`-0.5`, `1`, `1.5`).
    pub fn to_coordinate_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.dim);
        for r in 0..self.dim {
            let mut entries: Vec<(usize, f64)> = self.row(r).collect();
            if self.diag[r] != 0.0 {
                entries.push((r, self.diag[r]));
            }
            entries.sort_unstable_by_key(|e| e.0);
            for (c, v) in entries {
                let _ = writeln!(out, "{r} {c} {}", format_half(v));
            }
        }
        out
    }

    /// Parses [`SparseSymMatrix::to_coordinate_text`] output.
    pub fn from_coordinate_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let perr = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing dimension"))?;
        let dim: usize = header
            .trim()
            .parse()
            .map_err(|_| perr(hline, "bad dimension"))?;
        let mut diag = vec![0.0; dim];
        let mut rows = vec![Vec::new(); dim];
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(perr(idx, "expected 'row col value'"));
            }
            let r: usize = fields[0].parse().map_err(|_| perr(idx, "bad row"))?;
            let c: usize = fields[1].parse().map_err(|_| perr(idx, "bad col"))?;
            let v: f64 = fields[2].parse().map_err(|_| perr(idx, "bad value"))?;
            if r >= dim || c >= dim {
                return Err(perr(idx, "index out of range"));
            }
            if r == c {
                diag[r] = v;
            } else {
                rows[r].push((c, v));
            }
        }
        let m = SparseSymMatrix::from_rows(diag, rows);
        if !m.is_symmetric() {
            return Err(perr(hline, "matrix is not symmetric"));
        }
        Ok(m)
    }
}

fn format_half(v: f64) -> String {
    let twice = (v * 2.0).round();
    if twice == v * 2.0 && twice.abs() < 1e15 {
        let k = twice as i64;
        if k % 2 == 0 {
            format!("{}", k / 2)
        } else {
            let sign = if k < 0 { "-" } else { "" };
            format!("{sign}{}.5", k.abs() / 2)
        }
    } else {
        format!("{v:?}")
    }
}

/// Hamiltonian of `pairs` hard-core pairs on `graph`.
pub fn build_hamiltonian(
    graph: &Graph,
    pairs: usize,
    opts: ModelOptions,
) -> Result<(PairBasis, SparseSymMatrix)> {
    graph.check_connected()?;
    let basis = PairBasis::new(pairs, graph.num_nodes())?;
    let n = basis.pairs();
    let mut diag = Vec::with_capacity(basis.dim());
    let mut rows = Vec::with_capacity(basis.dim());
    for state in basis.iter() {
        let occupied = &state[..n];
        let mut bonds = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if graph.has_edge(occupied[a], occupied[b]) {
                    bonds += 1;
                }
            }
        }
        diag.push(if opts.include_nn_repulsion {
            bonds as f64
        } else {
            0.0
        });

        let mut row = Vec::new();
        for p in 0..n {
            for &target in graph.neighbors(occupied[p]) {
                if occupied.contains(&target) {
                    continue;
                }
                let moved = hop(&state, n, p, target);
                row.push((basis.rank(&moved[..n]), HOP_AMPLITUDE));
            }
        }
        rows.push(row);
    }
    let h = SparseSymMatrix::from_rows(diag, rows);
    let reached = h.connected_component_size();
    if reached != h.dim() {
        return Err(Error::ReducibleBasis {
            reached,
            total: h.dim(),
        });
    }
    Ok((basis, h))
}

/// Moves the pair at position `p` to `target` and restores increasing order.
fn hop(state: &Sites, n: usize, p: usize, target: usize) -> Sites {
    let mut out = *state;
    out[p] = target;
    out[..n].sort_unstable();
    out
}

/// Single pair: `H_kl = -A_kl / 2`.
pub fn build_h1(graph: &Graph) -> Result<SparseSymMatrix> {
    build_hamiltonian(graph, 1, ModelOptions::default()).map(|(_, h)| h)
}

pub fn build_h2(graph: &Graph, opts: ModelOptions) -> Result<SparseSymMatrix> {
    build_hamiltonian(graph, 2, opts).map(|(_, h)| h)
}

pub fn build_h3(graph: &Graph, opts: ModelOptions) -> Result<SparseSymMatrix> {
    build_hamiltonian(graph, 3, opts).map(|(_, h)| h)
}
