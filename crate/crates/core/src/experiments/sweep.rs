use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::csv::{self, column, format_float, SCHEMA_VERSION};
use super::{Instance, Measure, SweepConfig};
use crate::coboson::{profile_from_ground_state, run_fidelity, FidelityRecord};
use crate::eigen::ground_state;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMeta};
use crate::hamiltonian::build_h1;
use crate::metrics::{
    average_path_length, betweenness_centrality, circuit_rank, fit_dimension, MetricsReport,
};

/// Outcome of [`run_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub path: PathBuf,
    /// Dimension fits, written for [`Measure::PathLength`] sweeps.
    pub fit_path: Option<PathBuf>,
    pub total: usize,
    /// Instances whose rows were taken over from an earlier run.
    pub reused: usize,
    pub computed: usize,
    /// One message per failed instance.
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn make_key(family: &str, boundary: &str, nu: &str, m: &str, pairs: usize) -> String {
    format!("{family},{boundary},{nu},{m},{pairs}")
}

/// Key of a stored row, or `None` if the row was produced under a
/// different model and must be recomputed.
fn row_key(cfg: &SweepConfig, row: &str) -> Option<String> {
    let cols = cfg.measure.columns();
    let fields: Vec<&str> = row.split(',').collect();
    let get = |name: &str| column(cols, name).map(|i| fields[i]);
    if fields[0] != SCHEMA_VERSION.to_string() {
        return None;
    }
    if let Some(nn) = get("nn_repulsion") {
        if nn != cfg.nn_repulsion.to_string() {
            return None;
        }
    }
    let pairs = match get("N") {
        Some(n) => n.parse().ok()?,
        None => 0,
    };
    Some(make_key(
        get("family")?,
        get("boundary")?,
        get("nu")?,
        get("M")?,
        pairs,
    ))
}

fn expected_rows(measure: Measure, inst: &Instance) -> usize {
    match measure {
        Measure::NodeProfile => inst.graph.num_nodes(),
        _ => 1,
    }
}

fn key_prefix(meta: &GraphMeta, num_nodes: usize) -> String {
    [
        SCHEMA_VERSION.to_string(),
        meta.family.to_string(),
        meta.boundary.to_string(),
        meta.nu.map(|v| v.to_string()).unwrap_or_default(),
        meta.level_or_extent.to_string(),
        num_nodes.to_string(),
    ]
    .join(",")
}

/// One line of the fidelity CSV schema.
pub fn fidelity_row(r: &FidelityRecord) -> String {
    let fields = [
        key_prefix(&r.meta, r.num_sites),
        r.pairs.to_string(),
        r.nn_repulsion.to_string(),
        format_float(r.effective_size),
        format_float(r.chi_n),
        format_float(r.ground_energy),
        format_float(r.ansatz_energy),
        format_float(r.fidelity),
        r.iterations.to_string(),
        format_float(r.residual),
    ];
    fields.join(",")
}

/// Computes the CSV rows (without line terminators) of one instance.
pub fn run_instance(inst: &Instance, cfg: &SweepConfig) -> Result<Vec<String>> {
    let g = &inst.graph;
    let prefix = key_prefix(g.meta(), g.num_nodes());
    let solver = cfg.solver();
    let row = |fields: Vec<String>| format!("{prefix},{}", fields.join(","));
    match cfg.measure {
        Measure::Fidelity => {
            let r = run_fidelity(g, inst.pairs, cfg.model(), &solver)?.record;
            Ok(vec![fidelity_row(&r)])
        }
        Measure::EffectiveSize => {
            let gs = ground_state(&build_h1(g)?, &solver)?;
            let p = profile_from_ground_state(&gs.amplitudes)?;
            Ok(vec![row(vec![
                g.num_edges().to_string(),
                format_float(p.effective_size),
                format_float(p.purity),
                format_float(gs.energy),
                gs.iterations.to_string(),
                format_float(gs.residual_norm),
            ])])
        }
        Measure::PathLength => Ok(vec![row(vec![
            g.num_edges().to_string(),
            format_float(average_path_length(g)?),
            circuit_rank(g)?.to_string(),
        ])]),
        Measure::NodeProfile => {
            let between = betweenness_centrality(g)?;
            let gs = ground_state(&build_h1(g)?, &solver)?;
            let p = profile_from_ground_state(&gs.amplitudes)?;
            Ok((0..g.num_nodes())
                .map(|v| {
                    row(vec![
                        v.to_string(),
                        g.degree(v).to_string(),
                        format_float(between[v]),
                        format_float(p.lambda[v]),
                    ])
                })
                .collect())
        }
    }
}

fn comment_header(cfg: &SweepConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# coboson {} sweep={} measure={} schema_version={SCHEMA_VERSION}",
        env!("CARGO_PKG_VERSION"),
        cfg.name,
        cfg.measure
    );
    let _ = writeln!(out, "# created_unix={}", csv::unix_timestamp());
    let pairs: Vec<String> = cfg.pairs.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(
        out,
        "# pairs={} tol={} max_iter={} seed={} nn_repulsion={}",
        pairs.join(";"),
        format_float(cfg.tol),
        cfg.max_iter,
        cfg.seed,
        cfg.nn_repulsion
    );
    for note in &cfg.notes {
        for line in note.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    out
}

/// Writes header and all finished rows in canonical order, atomically.
fn write_dataset(
    path: &Path,
    text_header: &str,
    columns: &[&str],
    rows: &[Option<Vec<String>>],
) -> Result<()> {
    let mut text = String::from(text_header);
    text.push_str(&csv::header_line(columns));
    text.push('\n');
    for r in rows.iter().flatten().flatten() {
        text.push_str(r);
        text.push('\n');
    }
    let tmp = path.with_extension("csv.tmp");
    fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

struct Progress {
    file: File,
    rows: Vec<Option<Vec<String>>>,
    failures: Vec<(usize, String)>,
    finished: usize,
}

/// Runs every instance of `cfg` and writes `<out_dir>/<name>.csv`.
///
/// With `resume`, complete instances already present in the output file
/// (matched on family, boundary, nu, M and N) are kept instead of
/// recomputed. Rows are appended as instances finish and the file is
/// rewritten in canonical order at the end, so the data lines never depend
/// on scheduling or on where a previous run stopped. Failing instances are
/// logged and reported, not fatal.
pub fn run_sweep(cfg: &SweepConfig, resume: bool) -> Result<SweepReport> {
    let instances = cfg.instances()?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let path = cfg.output_path();
    let columns = cfg.measure.columns();
    let header = comment_header(cfg);

    let mut rows: Vec<Option<Vec<String>>> = vec![None; instances.len()];
    if resume && path.exists() {
        let mut groups: HashMap<String, Vec<String>> = HashMap::new();
        for row in csv::read_rows(&path, columns)? {
            if let Some(key) = row_key(cfg, &row) {
                groups.entry(key).or_default().push(row);
            }
        }
        for (slot, inst) in rows.iter_mut().zip(&instances) {
            if let Some(found) = groups.remove(&inst.key()) {
                if found.len() == expected_rows(cfg.measure, inst) {
                    *slot = Some(found);
                }
            }
        }
    }
    let reused = rows.iter().filter(|r| r.is_some()).count();
    write_dataset(&path, &header, columns, &rows)?;

    let pending: Vec<usize> = (0..instances.len())
        .filter(|&i| rows[i].is_none())
        .collect();
    let total_pending = pending.len();
    let file = OpenOptions::new()
        .append(true)
        .open(&path)
        .map_err(|e| Error::io(&path, e))?;
    let state = Mutex::new(Progress {
        file,
        rows,
        failures: Vec::new(),
        finished: 0,
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParam(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let write_error: Mutex<Option<Error>> = Mutex::new(None);
    pool.install(|| {
        pending.par_iter().for_each(|&i| {
            let inst = &instances[i];
            let start = Instant::now();
            let result = run_instance(inst, cfg);
            let mut st = state.lock().expect("sweep state poisoned");
            st.finished += 1;
            let tag = format!("[{}/{total_pending}] {inst}", st.finished);
            match result {
                Ok(lines) => {
                    eprintln!("{tag}: done in {:.1} s", start.elapsed().as_secs_f64());
                    let mut block = lines.join("\n");
                    block.push('\n');
                    let res = st
                        .file
                        .write_all(block.as_bytes())
                        .and_then(|_| st.file.flush());
                    if let Err(e) = res {
                        write_error
                            .lock()
                            .expect("sweep state poisoned")
                            .get_or_insert(Error::io(&path, e));
                    }
                    st.rows[i] = Some(lines);
                }
                Err(e) => {
                    eprintln!("{tag}: FAILED: {e}");
                    st.failures.push((i, format!("{inst}: {e}")));
                }
            }
        })
    });
    if let Some(e) = write_error.into_inner().expect("sweep state poisoned") {
        return Err(e);
    }
    let mut st = state.into_inner().expect("sweep state poisoned");
    drop(st.file);
    write_dataset(&path, &header, columns, &st.rows)?;

    let fit_path = if cfg.measure == Measure::PathLength {
        let fit_path = cfg.out_dir.join(format!("{}_fit.csv", cfg.name));
        write_fits(cfg, &st.rows, &fit_path)?;
        Some(fit_path)
    } else {
        None
    };
    st.failures.sort();
    Ok(SweepReport {
        path,
        fit_path,
        total: instances.len(),
        reused,
        computed: total_pending - st.failures.len(),
        failures: st.failures.into_iter().map(|(_, msg)| msg).collect(),
    })
}

/// One dimension fit per (family, boundary, nu), in first-appearance order.
fn write_fits(cfg: &SweepConfig, rows: &[Option<Vec<String>>], path: &Path) -> Result<()> {
    let cols = csv::PATH_LENGTH_COLUMNS;
    let idx = |name| column(cols, name).expect("path-length column");
    let mut groups: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
    for row in rows.iter().flatten().flatten() {
        let f: Vec<&str> = row.split(',').collect();
        let key = format!(
            "{},{},{}",
            f[idx("family")],
            f[idx("boundary")],
            f[idx("nu")]
        );
        let m: usize = f[idx("M")]
            .parse()
            .map_err(|_| Error::Config(format!("bad M in '{row}'")))?;
        let l: f64 = f[idx("avg_path_length")]
            .parse()
            .map_err(|_| Error::Config(format!("bad path length in '{row}'")))?;
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((m, l)),
            None => groups.push((key, vec![(m, l)])),
        }
    }
    let mut text = comment_header(cfg);
    text.push_str(&csv::header_line(csv::FIT_COLUMNS));
    text.push('\n');
    for (key, mut pts) in groups {
        pts.sort_by_key(|p| p.0);
        if cfg.fit_exclude_smallest && !pts.is_empty() {
            pts.remove(0);
        }
        match fit_dimension(&pts) {
            Ok(fit) => {
                let _ = writeln!(
                    text,
                    "{SCHEMA_VERSION},{key},{},{},{},{},{}",
                    format_float(fit.alpha),
                    format_float(fit.r_squared),
                    pts.len(),
                    pts[0].0,
                    pts[pts.len() - 1].0
                );
            }
            Err(e) => eprintln!("no dimension fit for {key}: {e}"),
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Per-node metrics CSV (`node_id,degree,betweenness`).
pub fn node_metrics_csv(g: &Graph, report: &MetricsReport) -> String {
    let mut out = format!(
        "# coboson node metrics\n# created_unix={}\n",
        csv::unix_timestamp()
    );
    out.push_str(&csv::header_line(csv::NODE_METRICS_COLUMNS));
    out.push('\n');
    for v in 0..g.num_nodes() {
        let _ = writeln!(
            out,
            "{SCHEMA_VERSION},{v},{},{}",
            g.degree(v),
            format_float(report.betweenness[v])
        );
    }
    out
}

/// Graph summary CSV (`M,E,avg_path_length,circuit_rank` plus provenance).
pub fn summary_csv(g: &Graph, report: &MetricsReport) -> String {
    let mut out = format!(
        "# coboson graph summary\n# created_unix={}\n",
        csv::unix_timestamp()
    );
    out.push_str(&csv::header_line(csv::GRAPH_SUMMARY_COLUMNS));
    out.push('\n');
    let _ = writeln!(
        out,
        "{},{},{},{}",
        key_prefix(g.meta(), g.num_nodes()),
        report.num_edges,
        format_float(report.avg_path_length),
        report.circuit_rank
    );
    out
}
