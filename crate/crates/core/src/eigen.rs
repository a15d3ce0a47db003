//! Lowest eigenpair of a [`SparseSymMatrix`].
//!
//! [`ground_state`] runs thick-restart Lanczos: a Krylov basis of at most
//! `basis_size` vectors is kept fully reorthogonalized (each new vector is
//! swept against the whole basis after the three-term step), and on restart the `keep` lowest Ritz vectors
//! plus the current residual direction seed the next cycle.
//! [`dense_ground_state`] is a full diagonalization used as a validation
//! oracle for small matrices.
//!
//! Both fix the sign so the largest-magnitude amplitude is positive and then
//! require the vector to be elementwise non-negative. The Hamiltonians built
//! here have non-positive off-diagonals on a connected configuration graph,
//! so the ground state is a Perron vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::SparseSymMatrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200_000;
pub const DENSE_LIMIT: usize = 5000;
/// Most negative amplitude tolerated after gauge fixing.
pub const SIGN_TOLERANCE: f64 = 1e-10;
const START_NOISE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    /// Lowest eigenvalue in units of `J_eff`.
    pub energy: f64,
    /// Unit-norm, non-negative eigenvector.
    pub amplitudes: Vec<f64>,
    /// `||H v - E v||`.
    pub residual_norm: f64,
    /// Matrix-vector products performed (0 for the dense solver).
    pub iterations: usize,
    /// `E_1 - E_0`, only known to the dense solver.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub basis_size: usize,
    pub keep: usize,
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            basis_size: 40,
            keep: 10,
            verbose: false,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Uniform positive vector with seeded multiplicative noise of relative
/// amplitude `1e-3`, normalized.
pub fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim)
        .map(|_| 1.0 + START_NOISE * rng.random_range(-1.0..1.0))
        .collect();
    normalize(&mut v);
    v
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
    n
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `<v, H v> / <v, v>`.
pub fn rayleigh_quotient(h: &SparseSymMatrix, v: &[f64]) -> Result<f64> {
    let hv = h.apply(v)?;
    Ok(dot(v, &hv) / dot(v, v))
}

fn residual_norm(h: &SparseSymMatrix, energy: f64, v: &[f64]) -> Result<f64> {
    let mut hv = h.apply(v)?;
    axpy(-energy, v, &mut hv);
    Ok(norm(&hv))
}

/// Flips the global sign so the largest-magnitude entry is positive and
/// checks that no entry is below `-SIGN_TOLERANCE`.
pub fn fix_gauge(v: &mut [f64]) -> Result<()> {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -SIGN_TOLERANCE {
        return Err(Error::SignIndefinite(min));
    }
    Ok(())
}

/// Lowest eigenpair of the leading `k x k` block of `t`.
fn lowest_ritz(t: &DMatrix<f64>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    let block = t.view((0, 0), (k, k)).into_owned();
    let eig = SymmetricEigen::new(block);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// One classical Gram-Schmidt pass, `w -= V (V^T w)`, accumulating the
/// projections into `coeffs`. Blocked so each chunk of `w` stays in cache.
fn reorthogonalize(basis: &[Vec<f64>], w: &mut [f64], coeffs: &mut [f64]) {
    const CHUNK: usize = 2048;
    let mut proj = vec![0.0; basis.len()];
    for start in (0..w.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(w.len());
        let wc = &w[start..end];
        for (p, v) in proj.iter_mut().zip(basis) {
            *p += dot(&v[start..end], wc);
        }
    }
    for start in (0..w.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(w.len());
        let wc = &mut w[start..end];
        for (p, v) in proj.iter().zip(basis) {
            axpy(-p, &v[start..end], wc);
        }
    }
    for (c, p) in coeffs.iter_mut().zip(&proj) {
        *c += p;
    }
}

fn combine(basis: &[Vec<f64>], coeffs: impl Iterator<Item = f64>, dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (v, c) in basis.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

/// Iterative lowest eigenpair. Converged when `||H v - E v|| <= tol`.
pub fn ground_state(h: &SparseSymMatrix, opts: &SolverOptions) -> Result<GroundState> {
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::DimensionZero);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParam(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if dim == 1 {
        return Ok(GroundState {
            energy: h.diagonal()[0],
            amplitudes: vec![1.0],
            residual_norm: 0.0,
            iterations: 0,
            gap: None,
        });
    }
    let m = opts.basis_size.max(4).min(dim);
    let keep = opts.keep.clamp(1, m.saturating_sub(2).max(1));

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    basis.push(start_vector(dim, opts.seed));
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut w = vec![0.0; dim];
    let mut coeffs = vec![0.0; m];
    let mut iterations = 0usize;
    let mut kept = 0usize;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;

    loop {
        for j in kept..m {
            h.apply_into(&basis[j], &mut w)?;
            iterations += 1;

            // Local Lanczos step against the vectors H couples v_j to (the
            // whole kept block right after a restart), then one blocked
            // classical Gram-Schmidt sweep over the full basis.
            coeffs[..=j].fill(0.0);
            let local = if j == kept { 0 } else { j - 1 };
            for i in local..=j {
                let c = dot(&basis[i], &w);
                coeffs[i] += c;
                axpy(-c, &basis[i], &mut w);
            }
            reorthogonalize(&basis[..=j], &mut w, &mut coeffs[..=j]);
            for i in 0..=j {
                t[(i, j)] = coeffs[i];
                t[(j, i)] = coeffs[i];
            }
            let beta = norm(&w);

            let (theta, y) = lowest_ritz(&t, j + 1);
            let estimate = beta * y[(j, 0)].abs();
            let invariant = beta <= 1e-13 * theta[0].abs().max(1.0);
            if opts.verbose {
                eprintln!(
                    "lanczos iter {iterations:>6} ritz {:.15} residual~ {estimate:.3e}",
                    theta[0]
                );
            }
            if estimate <= opts.tol || invariant || iterations >= opts.max_iter {
                let mut x = combine(&basis[..=j], y.column(0).iter().copied(), dim);
                normalize(&mut x);
                let energy = rayleigh_quotient(h, &x)?;
                let res = residual_norm(h, energy, &x)?;
                if opts.verbose {
                    eprintln!("lanczos check: energy {energy:.15} true residual {res:.3e}");
                }
                if res <= opts.tol || invariant {
                    fix_gauge(&mut x)?;
                    return Ok(GroundState {
                        energy,
                        amplitudes: x,
                        residual_norm: res,
                        iterations,
                        gap: None,
                    });
                }
                if best.as_ref().is_none_or(|b| res < b.2) {
                    best = Some((energy, x, res));
                }
                if iterations >= opts.max_iter {
                    let (energy, amplitudes, residual) = best.unwrap();
                    return Err(Error::NoConvergence {
                        energy,
                        residual,
                        iterations,
                        amplitudes,
                    });
                }
            }
            for x in w.iter_mut() {
                *x /= beta;
            }
            if j + 1 < m {
                basis.push(w.clone());
            }
        }

        // Restart from the `keep` lowest Ritz vectors plus the residual
        // direction, which is orthogonal to all of them.
        let (theta, y) = lowest_ritz(&t, m);
        let mut next: Vec<Vec<f64>> = (0..keep)
            .map(|c| combine(&basis, y.column(c).iter().copied(), dim))
            .collect();
        next.push(w.clone());
        basis = next;
        t.fill(0.0);
        for (i, &value) in theta.iter().enumerate().take(keep) {
            t[(i, i)] = value;
        }
        kept = keep;
    }
}

/// Full diagonalization for `dim <= DENSE_LIMIT`. Fails on a degenerate
/// lowest eigenvalue.
pub fn dense_ground_state(h: &SparseSymMatrix) -> Result<GroundState> {
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::DimensionZero);
    }
    if dim > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim,
            limit: DENSE_LIMIT,
        });
    }
    let dense = DMatrix::from_row_slice(dim, dim, &h.to_dense());
    let (values, vectors) = lowest_ritz(&dense, dim);
    let gap = if dim > 1 {
        Some(values[1] - values[0])
    } else {
        None
    };
    if let Some(g) = gap {
        if g <= 1e-12 * values[0].abs().max(1.0) {
            return Err(Error::Degenerate(g));
        }
    }
    let mut x: Vec<f64> = vectors.column(0).iter().copied().collect();
    normalize(&mut x);
    fix_gauge(&mut x)?;
    let energy = values[0];
    let residual = residual_norm(h, energy, &x)?;
    Ok(GroundState {
        energy,
        amplitudes: x,
        residual_norm: residual,
        iterations: 0,
        gap,
    })
}
