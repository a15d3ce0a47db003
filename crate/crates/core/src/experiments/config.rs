//! Sweep configuration files.
//!
//! A configuration is a TOML document whose keys mirror [`SweepConfig`]:
//!
//! ```toml
//! name = "chains"                 # output stem -> <out>/chains.csv
//! measure = "fidelity"            # fidelity | effective_size | path_length | node_profile
//! pairs = [2, 3]                  # fidelity only
//! tol = 1e-10
//! max_iter = 200000               # matrix-vector products per eigensolve
//! seed = 0
//! nn_repulsion = true
//! out = "results"
//! workers = 0                     # 0 = all cores
//! fit_exclude_smallest = false    # path_length only
//! note = "free text copied into the CSV header"
//!
//! [[family]]
//! name = "chain"
//! boundary = ["open", "closed"]   # a string or a list; default "open"
//! sizes = [16, 32, 64]            # M for chain/star/complete, side for lattices, level for fractals
//!
//! [[family]]
//! name = "vicsek"
//! nu = 3
//! sizes = [1, 2, 3]
//! ```
//!
//! Every key except the `[[family]]` entries is optional. Unknown keys are
//! rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{FamilySweep, Measure, SweepConfig};
use crate::error::{Error, Result};

/// Reproduction presets shipped with the crate.
pub const PRESETS_TOML: &str = include_str!("presets.toml");
/// Version of [`PRESETS_TOML`]; bumped whenever a pinned grid changes.
pub const PRESET_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    measure: Option<String>,
    pairs: Option<Vec<usize>>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    seed: Option<u64>,
    nn_repulsion: Option<bool>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    fit_exclude_smallest: Option<bool>,
    note: Option<String>,
    #[serde(default)]
    family: Vec<RawFamily>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: String,
    boundary: Option<OneOrMany>,
    nu: Option<usize>,
    sizes: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Deserialize)]
struct PresetFile {
    version: u32,
    #[serde(flatten)]
    presets: BTreeMap<String, RawConfig>,
}

impl RawConfig {
    fn into_config(self, default_name: &str) -> Result<SweepConfig> {
        let d = SweepConfig::default();
        let families = self
            .family
            .into_iter()
            .map(|f| {
                let boundaries = match f.boundary {
                    None => Vec::new(),
                    Some(OneOrMany::One(b)) => vec![b.parse()?],
                    Some(OneOrMany::Many(bs)) => {
                        bs.iter().map(|b| b.parse()).collect::<Result<_>>()?
                    }
                };
                Ok(FamilySweep {
                    family: f.name.parse()?,
                    boundaries,
                    nu: f.nu,
                    sizes: f.sizes,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepConfig {
            name: self.name.unwrap_or_else(|| default_name.to_string()),
            measure: match self.measure {
                Some(m) => m.parse::<Measure>()?,
                None => d.measure,
            },
            families,
            pairs: self.pairs.unwrap_or(d.pairs),
            tol: self.tol.unwrap_or(d.tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            seed: self.seed.unwrap_or(d.seed),
            nn_repulsion: self.nn_repulsion.unwrap_or(d.nn_repulsion),
            out_dir: self.out.unwrap_or(d.out_dir),
            workers: self.workers.unwrap_or(d.workers),
            fit_exclude_smallest: self.fit_exclude_smallest.unwrap_or(d.fit_exclude_smallest),
            notes: self.note.into_iter().collect(),
        })
    }
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<SweepConfig> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.into_config(&SweepConfig::default().name)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SweepConfig> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SweepConfig::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Parses a preset file: a `version` key plus one table per preset.
pub fn presets_from_str(text: &str) -> Result<(u32, BTreeMap<String, SweepConfig>)> {
    let file: PresetFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut out = BTreeMap::new();
    for (id, raw) in file.presets {
        let mut cfg = raw.into_config(&id)?;
        cfg.notes
            .insert(0, format!("preset={id} preset_version={}", file.version));
        out.insert(id, cfg);
    }
    Ok((file.version, out))
}

pub fn preset_ids() -> Vec<String> {
    presets_from_str(PRESETS_TOML)
        .map(|(_, p)| p.into_keys().collect())
        .unwrap_or_default()
}

/// Built-in preset `id` (`fig2` ... `fig6`).
pub fn preset(id: &str) -> Result<SweepConfig> {
    let (_, mut presets) = presets_from_str(PRESETS_TOML)?;
    presets.remove(id).ok_or_else(|| {
        Error::InvalidParam(format!(
            "unknown preset '{id}', expected one of {}",
            preset_ids().join(", ")
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, Family};

    #[test]
    fn parses_documented_example() {
        let cfg = SweepConfig::from_toml_str(
            r#"
            name = "chains"
            measure = "fidelity"
            pairs = [2, 3]
            tol = 1e-9
            seed = 7
            nn_repulsion = false
            out = "tmp/out"
            workers = 2
            note = "hello"

            [[family]]
            name = "chain"
            boundary = ["open", "closed"]
            sizes = [16, 32]

            [[family]]
            name = "vicsek"
            nu = 3
            sizes = [1, 2]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.name, "chains");
        assert_eq!(cfg.pairs, vec![2, 3]);
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.seed, 7);
        assert!(!cfg.nn_repulsion);
        assert_eq!(cfg.out_dir, PathBuf::from("tmp/out"));
        assert_eq!(cfg.workers, 2);
        assert_eq!(cfg.notes, vec!["hello".to_string()]);
        assert_eq!(cfg.families.len(), 2);
        assert_eq!(
            cfg.families[0].boundaries,
            vec![Boundary::Open, Boundary::Closed]
        );
        assert_eq!(cfg.families[1].family, Family::Vicsek);
        assert_eq!(cfg.families[1].nu, Some(3));
        assert_eq!(cfg.instances().unwrap().len(), 2 * 2 * 2 + 2 * 2);
    }

    #[test]
    fn defaults_and_errors() {
        let cfg = SweepConfig::from_toml_str("[[family]]\nname = \"star\"\nsizes = [5]\n").unwrap();
        assert_eq!(
            cfg,
            SweepConfig {
                families: cfg.families.clone(),
                ..SweepConfig::default()
            }
        );
        for bad in [
            "bogus = 1",
            "[[family]]\nname = \"blob\"\nsizes = [5]",
            "[[family]]\nname = \"chain\"\nboundary = \"periodic\"\nsizes = [5]",
            "measure = \"speed\"",
            "tol = \"small\"",
        ] {
            assert!(SweepConfig::from_toml_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn presets_are_valid() {
        let (version, presets) = presets_from_str(PRESETS_TOML).unwrap();
        assert_eq!(version, PRESET_VERSION);
        assert_eq!(
            presets.keys().collect::<Vec<_>>(),
            ["fig2", "fig3", "fig4", "fig5", "fig6"]
        );
        for (id, cfg) in &presets {
            assert_eq!(&cfg.name, id);
            assert!(!cfg.instances().unwrap().is_empty());
        }
        assert_eq!(preset("fig5").unwrap().measure, Measure::Fidelity);
        assert_eq!(preset("fig6").unwrap().pairs, vec![3]);
        assert!(preset("fig7").is_err());
    }

    #[test]
    fn fig3_vicsek_nu4_stops_at_625() {
        let cfg = preset("fig3").unwrap();
        let sizes: Vec<usize> = cfg
            .instances()
            .unwrap()
            .iter()
            .map(|i| i.graph.num_nodes())
            .collect();
        assert_eq!(sizes, vec![900, 1095, 1024, 625]);
    }
}
