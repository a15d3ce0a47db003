//! Parameter sweeps over graph families and the CSV datasets they produce.
//!
//! A [`SweepConfig`] lists graph families with their sizes, the measurement
//! to run on every instance and solver settings. [`run_sweep`] evaluates the
//! instances (in parallel, each one deterministic), writes one CSV file per
//! sweep and can resume an interrupted run from the rows already on disk.

mod config;
pub mod csv;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::basis::binomial;
use crate::eigen::{SolverOptions, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::graph::{
    make_chain, make_complete, make_hanoi, make_hexagonal_lattice, make_sierpinski,
    make_square_lattice, make_star, make_triangular_lattice, make_vicsek, Boundary, Family, Graph,
};
use crate::hamiltonian::ModelOptions;

pub use config::{preset, preset_ids, presets_from_str, PRESETS_TOML, PRESET_VERSION};
pub use sweep::{
    fidelity_row, node_metrics_csv, run_instance, run_sweep, summary_csv, SweepReport,
};

/// Largest two-pair basis a sweep accepts (`C(1500, 2)`).
pub const MAX_DIM_TWO_PAIRS: usize = 1_124_250;
/// Largest three-pair basis a sweep accepts.
pub const MAX_DIM_THREE_PAIRS: usize = 5_000_000;

/// Parameters identifying one member of a graph family.
///
/// `m` is the node count of chains, stars and complete graphs and the
/// column count of lattices; `n` is the lattice side; `level` is the
/// recursion level of fractals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    pub family: Family,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub level: Option<usize>,
    pub nu: Option<usize>,
    pub boundary: Boundary,
}

impl GraphSpec {
    pub fn new(family: Family) -> Self {
        GraphSpec {
            family,
            m: None,
            n: None,
            level: None,
            nu: None,
            boundary: Boundary::Open,
        }
    }

    /// Spec from the single size parameter used by sweeps: node count for
    /// chains, stars and complete graphs, side for (square) lattices, level
    /// for fractals.
    pub fn from_size(family: Family, size: usize, boundary: Boundary, nu: Option<usize>) -> Self {
        let mut spec = GraphSpec {
            nu,
            boundary,
            ..GraphSpec::new(family)
        };
        match family {
            Family::Chain | Family::Star | Family::Complete | Family::Custom => spec.m = Some(size),
            Family::SquareLattice | Family::TriangularLattice | Family::HexagonalLattice => {
                spec.n = Some(size)
            }
            Family::SierpinskiGasket | Family::HanoiDual | Family::Vicsek => {
                spec.level = Some(size)
            }
        }
        spec
    }

    pub fn build(&self) -> Result<Graph> {
        let fam = self.family;
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::InvalidParam(format!("{fam} needs --{flag}")))
        };
        let closable = matches!(
            fam,
            Family::Chain | Family::SquareLattice | Family::SierpinskiGasket
        );
        if self.boundary == Boundary::Closed && !closable {
            return Err(Error::InvalidParam(format!(
                "{fam} has no closed boundary variant"
            )));
        }
        if self.nu.is_some() && fam != Family::Vicsek {
            return Err(Error::InvalidParam(format!(
                "--nu only applies to vicsek, not {fam}"
            )));
        }
        match fam {
            Family::Chain => make_chain(need(self.m, "m")?, self.boundary),
            Family::SquareLattice => {
                let n = need(self.n, "n")?;
                make_square_lattice(n, self.m.unwrap_or(n), self.boundary)
            }
            Family::TriangularLattice => {
                let n = need(self.n, "n")?;
                make_triangular_lattice(n, self.m.unwrap_or(n))
            }
            Family::HexagonalLattice => {
                let n = need(self.n, "n")?;
                make_hexagonal_lattice(n, self.m.unwrap_or(n))
            }
            Family::SierpinskiGasket => make_sierpinski(need(self.level, "level")?, self.boundary),
            Family::HanoiDual => make_hanoi(need(self.level, "level")?),
            Family::Vicsek => make_vicsek(need(self.nu, "nu")?, need(self.level, "level")?),
            Family::Star => make_star(need(self.m, "m")?),
            Family::Complete => make_complete(need(self.m, "m")?),
            Family::Custom => Err(Error::InvalidParam(
                "custom graphs are read from an edge-list file".into(),
            )),
        }
    }

    /// Short file-name friendly label, e.g. `vicsek-nu3-L5`.
    pub fn label(&self) -> String {
        let mut parts = vec![self.family.to_string()];
        if let Some(nu) = self.nu {
            parts.push(format!("nu{nu}"));
        }
        match (self.level, self.n, self.m) {
            (Some(l), _, _) => parts.push(format!("L{l}")),
            (None, Some(n), m) => parts.push(format!("{n}x{}", m.unwrap_or(n))),
            (None, None, Some(m)) => parts.push(format!("M{m}")),
            _ => {}
        }
        if self.boundary == Boundary::Closed {
            parts.push("closed".into());
        }
        parts.join("-")
    }
}

/// What a sweep computes for every instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Measure {
    /// Ground state vs coboson ansatz for each requested pair number.
    #[default]
    Fidelity,
    /// Effective size `S` of the single-pair ground state.
    EffectiveSize,
    /// Average path length and circuit rank, plus dimension fits.
    PathLength,
    /// Per-node degree, betweenness and single-pair occupation.
    NodeProfile,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Fidelity,
        Measure::EffectiveSize,
        Measure::PathLength,
        Measure::NodeProfile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Fidelity => "fidelity",
            Measure::EffectiveSize => "effective_size",
            Measure::PathLength => "path_length",
            Measure::NodeProfile => "node_profile",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Measure::Fidelity => csv::FIDELITY_COLUMNS,
            Measure::EffectiveSize => csv::EFFECTIVE_SIZE_COLUMNS,
            Measure::PathLength => csv::PATH_LENGTH_COLUMNS,
            Measure::NodeProfile => csv::NODE_PROFILE_COLUMNS,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParam(format!(
                    "unknown measure '{s}', expected fidelity, effective_size, path_length or node_profile"
                ))
            })
    }
}

/// One family entry of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySweep {
    pub family: Family,
    pub boundaries: Vec<Boundary>,
    pub nu: Option<usize>,
    /// See [`GraphSpec::from_size`].
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Output file stem: the dataset goes to `<out_dir>/<name>.csv`.
    pub name: String,
    pub measure: Measure,
    pub families: Vec<FamilySweep>,
    /// Pair numbers for [`Measure::Fidelity`], each 2 or 3.
    pub pairs: Vec<usize>,
    pub tol: f64,
    /// Matrix-vector product budget per eigensolve.
    pub max_iter: usize,
    pub seed: u64,
    pub nn_repulsion: bool,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Drop the smallest size of each family from dimension fits.
    pub fit_exclude_smallest: bool,
    /// Free text copied into the CSV comment header.
    pub notes: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            name: "sweep".into(),
            measure: Measure::Fidelity,
            families: Vec::new(),
            pairs: vec![2],
            tol: DEFAULT_TOL,
            max_iter: SolverOptions::default().max_iter,
            seed: 0,
            nn_repulsion: true,
            out_dir: PathBuf::from("results"),
            workers: 0,
            fit_exclude_smallest: false,
            notes: Vec::new(),
        }
    }
}

/// A single unit of sweep work.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: GraphSpec,
    pub graph: Graph,
    /// Pair number; 0 for measurements that do not depend on it.
    pub pairs: usize,
}

impl Instance {
    /// `family,boundary,nu,M,N` — the key under which resumed rows are found.
    pub fn key(&self) -> String {
        let meta = self.graph.meta();
        sweep::make_key(
            meta.family.as_str(),
            meta.boundary.as_str(),
            &meta.nu.map(|v| v.to_string()).unwrap_or_default(),
            &self.graph.num_nodes().to_string(),
            self.pairs,
        )
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (M={})", self.spec.label(), self.graph.num_nodes())?;
        if self.pairs > 0 {
            write!(f, " N={}", self.pairs)?;
        }
        Ok(())
    }
}

impl SweepConfig {
    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            max_iter: self.max_iter,
            ..SolverOptions::default()
                .with_tol(self.tol)
                .with_seed(self.seed)
        }
    }

    pub fn model(&self) -> ModelOptions {
        ModelOptions {
            include_nn_repulsion: self.nn_repulsion,
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}.csv", self.name))
    }

    /// Checks the configuration and expands it into instances, in the
    /// canonical output order (families as listed, then boundary, size and
    /// pair number).
    pub fn instances(&self) -> Result<Vec<Instance>> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::Config(format!("invalid sweep name '{}'", self.name)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be positive".into()));
        }
        if self.families.is_empty() {
            return Err(Error::Config("no families to sweep".into()));
        }
        let pairs: Vec<usize> = if self.measure == Measure::Fidelity {
            if self.pairs.is_empty() {
                return Err(Error::Config("pairs must list 2 and/or 3".into()));
            }
            if let Some(&p) = self.pairs.iter().find(|p| !(2..=3).contains(*p)) {
                return Err(Error::UnsupportedPairs(p));
            }
            self.pairs.clone()
        } else {
            vec![0]
        };
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for fam in &self.families {
            if fam.sizes.is_empty() {
                return Err(Error::Config(format!("{} lists no sizes", fam.family)));
            }
            let boundaries = if fam.boundaries.is_empty() {
                vec![Boundary::Open]
            } else {
                fam.boundaries.clone()
            };
            for &boundary in &boundaries {
                for &size in &fam.sizes {
                    let spec = GraphSpec::from_size(fam.family, size, boundary, fam.nu);
                    let graph = spec.build()?;
                    for &n in &pairs {
                        let m = graph.num_nodes();
                        let (dim, cap) = match n {
                            2 => (binomial(m, 2), MAX_DIM_TWO_PAIRS),
                            3 => (binomial(m, 3), MAX_DIM_THREE_PAIRS),
                            _ => (0, 0),
                        };
                        if dim > cap {
                            return Err(Error::DimensionTooLarge { dim, limit: cap });
                        }
                        if n > 0 && m <= n {
                            return Err(Error::TooFewSites { sites: m, pairs: n });
                        }
                        let inst = Instance {
                            spec: spec.clone(),
                            graph: graph.clone(),
                            pairs: n,
                        };
                        if !seen.insert(inst.key()) {
                            return Err(Error::Config(format!("instance {inst} listed twice")));
                        }
                        out.push(inst);
                    }
                }
            }
        }
        Ok(out)
    }
}
