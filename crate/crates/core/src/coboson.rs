//! Coboson ansatz built from the single-pair ground state.
//!
//! With the single-pair state `sum_j c_j |j>`, the Schmidt coefficients are
//! `lambda_j = c_j^2`, the purity is `P = sum_j lambda_j^2` and the
//! effective size `S = 1/P`. The normalization factors are
//! `chi_N = N! e_N(lambda)` with `e_N` the elementary symmetric polynomial,
//! evaluated through Newton's identities on the power sums
//! `p_k = sum_j lambda_j^k`. The `N`-pair ansatz has amplitude
//! `sqrt(N!/chi_N) c_j c_k ...` on the hard-core state `|j, k, ...>`.

use crate::basis::PairBasis;
use crate::eigen::{ground_state, rayleigh_quotient, GroundState, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMeta};
use crate::hamiltonian::{build_hamiltonian, ModelOptions, SparseSymMatrix};

/// Allowed deviation of `||c||` from one.
pub const NORM_TOLERANCE: f64 = 1e-8;
/// Most negative amplitude accepted by [`fidelity`].
pub const FIDELITY_SIGN_TOLERANCE: f64 = 1e-8;
const CHI_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct CobosonProfile {
    /// Single-pair amplitudes, renormalized to unit norm.
    pub c: Vec<f64>,
    /// Schmidt coefficients `c_j^2`.
    pub lambda: Vec<f64>,
    pub purity: f64,
    pub effective_size: f64,
    pub chi2: f64,
    pub chi3: f64,
}

impl CobosonProfile {
    /// `chi_N` for `N` in `1..=3`.
    pub fn chi(&self, n: usize) -> Result<f64> {
        match n {
            1 => Ok(1.0),
            2 => Ok(self.chi2),
            3 => Ok(self.chi3),
            _ => Err(Error::UnsupportedPairs(n)),
        }
    }

    /// `chi_N / chi_{N-1}` for `N` in `2..=3`; bosonic behaviour needs this
    /// ratio close to one.
    pub fn chi_ratio(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::UnsupportedPairs(n));
        }
        Ok(self.chi(n)? / self.chi(n - 1)?)
    }
}

/// Profile of a unit-norm single-pair state; the overall sign of `c` is
/// irrelevant.
pub fn profile_from_ground_state(c: &[f64]) -> Result<CobosonProfile> {
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if c.is_empty() || !((norm - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::NotNormalized(norm));
    }
    // Global sign gauge: the largest-magnitude amplitude is made positive,
    // so `c` and `-c` give the same profile and ansatz.
    let peak = c
        .iter()
        .copied()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    let scale = if peak < 0.0 { -norm } else { norm };
    let c: Vec<f64> = c.iter().map(|x| x / scale).collect();
    let lambda: Vec<f64> = c.iter().map(|x| x * x).collect();
    let p1: f64 = lambda.iter().sum();
    let p2: f64 = lambda.iter().map(|l| l * l).sum();
    let p3: f64 = lambda.iter().map(|l| l * l * l).sum();
    // Newton's identities with e_0 = 1.
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    Ok(CobosonProfile {
        c,
        lambda,
        purity: p2,
        effective_size: 1.0 / p2,
        chi2: 2.0 * e2,
        chi3: 6.0 * e3,
    })
}

/// Normalized `N`-pair ansatz over `basis`.
pub fn ansatz_amplitudes(profile: &CobosonProfile, basis: &PairBasis) -> Result<Vec<f64>> {
    let n = basis.pairs();
    if basis.sites() != profile.c.len() {
        return Err(Error::DimensionMismatch {
            expected: profile.c.len(),
            got: basis.sites(),
        });
    }
    let (chi, factorial) = match n {
        2 => (profile.chi2, 2.0),
        3 => (profile.chi3, 6.0),
        _ => return Err(Error::UnsupportedPairs(n)),
    };
    if !(chi > CHI_FLOOR) {
        return Err(Error::VanishingChi { n, value: chi });
    }
    let scale = (factorial / chi).sqrt();
    let c = &profile.c;
    Ok(basis
        .iter()
        .map(|t| scale * t[..n].iter().map(|&s| c[s]).product::<f64>())
        .collect())
}

/// `|<a|b>|^2` for two real unit vectors in the Perron gauge.
pub fn fidelity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    for v in [a, b] {
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -FIDELITY_SIGN_TOLERANCE {
            return Err(Error::NegativeAmplitude(min));
        }
    }
    let overlap: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok(overlap * overlap)
}

/// Second-order density expansion
/// `<O>_N ~ N <O>_1 + N(N-1)/2 (<O>_2 - 2 <O>_1)`.
pub fn dilute_expansion(o1: f64, o2: f64, n: usize) -> f64 {
    let n = n as f64;
    n * o1 + n * (n - 1.0) / 2.0 * (o2 - 2.0 * o1)
}

/// `<v|H|v>` (Rayleigh quotient).
pub fn expectation_energy(state: &[f64], h: &SparseSymMatrix) -> Result<f64> {
    rayleigh_quotient(h, state)
}

/// Outcome of one fidelity computation.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRecord {
    pub meta: GraphMeta,
    pub num_sites: usize,
    pub pairs: usize,
    pub nn_repulsion: bool,
    pub effective_size: f64,
    pub chi_n: f64,
    pub ground_energy: f64,
    pub ansatz_energy: f64,
    pub fidelity: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Everything computed along the way by [`run_fidelity`].
#[derive(Debug, Clone)]
pub struct FidelityRun {
    pub record: FidelityRecord,
    pub profile: CobosonProfile,
    pub single: GroundState,
    pub ground: GroundState,
    pub ansatz: Vec<f64>,
}

/// Solves the single-pair and `pairs`-pair problems on `graph` and compares
/// the `pairs`-pair ground state with the coboson ansatz.
pub fn run_fidelity(
    graph: &Graph,
    pairs: usize,
    model: ModelOptions,
    solver: &SolverOptions,
) -> Result<FidelityRun> {
    if !(2..=3).contains(&pairs) {
        return Err(Error::UnsupportedPairs(pairs));
    }
    let (_, h1) = build_hamiltonian(graph, 1, model)?;
    let single = ground_state(&h1, solver)?;
    let profile = profile_from_ground_state(&single.amplitudes)?;
    let (basis, h) = build_hamiltonian(graph, pairs, model)?;
    let ground = ground_state(&h, solver)?;
    let ansatz = ansatz_amplitudes(&profile, &basis)?;
    let f = fidelity(&ansatz, &ground.amplitudes)?;
    let ansatz_energy = expectation_energy(&ansatz, &h)?;
    let record = FidelityRecord {
        meta: graph.meta().clone(),
        num_sites: graph.num_nodes(),
        pairs,
        nn_repulsion: model.include_nn_repulsion,
        effective_size: profile.effective_size,
        chi_n: profile.chi(pairs)?,
        ground_energy: ground.energy,
        ansatz_energy,
        fidelity: f,
        iterations: ground.iterations,
        residual: ground.residual_norm,
    };
    Ok(FidelityRun {
        record,
        profile,
        single,
        ground,
        ansatz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_chain, make_complete, Boundary};

    fn from_lambda(lambda: &[f64]) -> CobosonProfile {
        let c: Vec<f64> = lambda.iter().map(|l| l.sqrt()).collect();
        profile_from_ground_state(&c).unwrap()
    }

    #[test]
    fn uniform_profile() {
        let m = 17;
        let c = vec![1.0 / (m as f64).sqrt(); m];
        let p = profile_from_ground_state(&c).unwrap();
        assert!((p.purity - 1.0 / m as f64).abs() < 1e-15);
        assert!((p.effective_size - m as f64).abs() < 1e-12);
        assert!((p.chi2 - (1.0 - 1.0 / m as f64)).abs() < 1e-15);
    }

    #[test]
    fn two_and_three_modes() {
        let p = from_lambda(&[0.5, 0.5]);
        assert!((p.purity - 0.5).abs() < 1e-15);
        assert!((p.chi2 - 0.5).abs() < 1e-15);
        assert!(p.chi3.abs() < 1e-15);

        let third = 1.0 / 3.0;
        let p = from_lambda(&[third, third, third]);
        assert!((p.chi3 - 2.0 / 9.0).abs() < 1e-15);
        assert!((p.chi_ratio(3).unwrap() - (2.0 / 9.0) / (2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_unnormalized_input() {
        assert!(matches!(
            profile_from_ground_state(&[1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(profile_from_ground_state(&[]).is_err());
    }

    #[test]
    fn ansatz_on_triangle_is_uniform() {
        let c = vec![1.0 / 3f64.sqrt(); 3];
        let p = profile_from_ground_state(&c).unwrap();
        let basis = PairBasis::new(2, 3).unwrap();
        let a = ansatz_amplitudes(&p, &basis).unwrap();
        for x in a {
            assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_mode_has_vanishing_chi() {
        let mut c = vec![0.0; 5];
        c[0] = 1.0;
        let p = profile_from_ground_state(&c).unwrap();
        let basis = PairBasis::new(2, 5).unwrap();
        assert!(matches!(
            ansatz_amplitudes(&p, &basis),
            Err(Error::VanishingChi { n: 2, .. })
        ));
    }

    #[test]
    fn dilute_expansion_arithmetic() {
        assert_eq!(dilute_expansion(-1.3, 0.7, 1), -1.3);
        assert!((dilute_expansion(-1.3, 0.7, 2) - 0.7).abs() < 1e-15);
        assert!((dilute_expansion(-1.0, -1.8, 3) + 2.4).abs() < 1e-15);
    }

    #[test]
    fn fidelity_checks() {
        let v = vec![0.6, 0.8];
        assert!((fidelity(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fidelity(&v, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            fidelity(&v, &[-0.6, 0.8]),
            Err(Error::NegativeAmplitude(_))
        ));
    }

    #[test]
    fn complete_graph_is_exact() {
        let g = make_complete(6).unwrap();
        for pairs in [2, 3] {
            let run = run_fidelity(
                &g,
                pairs,
                ModelOptions::default(),
                &SolverOptions::default(),
            )
            .unwrap();
            assert!((run.record.fidelity - 1.0).abs() < 1e-10);
            assert!((run.record.ansatz_energy - run.record.ground_energy).abs() < 1e-10);
        }
    }

    #[test]
    fn ansatz_energy_is_variational() {
        let g = make_chain(12, Boundary::Open).unwrap();
        let run = run_fidelity(&g, 2, ModelOptions::default(), &SolverOptions::default()).unwrap();
        assert!(run.record.ansatz_energy >= run.record.ground_energy - 1e-12);
        assert!(run.record.fidelity < 1.0);
        assert!(matches!(
            run_fidelity(&g, 1, ModelOptions::default(), &SolverOptions::default()),
            Err(Error::UnsupportedPairs(1))
        ));
    }
}
