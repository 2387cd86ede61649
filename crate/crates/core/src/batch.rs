//! Batch experiments: the cross product of maps, curves, points and places,
//! classified in parallel and reported in input order.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AffinePoint, PolyMap};
use crate::curves::Curve;
use crate::dml::{dml_classify, DmlParams, DmlReport, DEFAULT_HORIZON, DEFAULT_MAX_BITS, DEFAULT_MAX_PERIOD};
use crate::error::{Error, Result};
use crate::heights::Place;
use crate::metrics::{local_dml_probe, BasinParams, LocalDmlReport, DEFAULT_MIN_VISITS};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn default_places() -> Vec<String> {
    vec!["inf".into()]
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

fn default_max_period() -> u32 {
    DEFAULT_MAX_PERIOD
}

fn default_max_bits() -> u64 {
    DEFAULT_MAX_BITS
}

fn default_min_visits() -> usize {
    DEFAULT_MIN_VISITS
}

/// Experiment description as read from JSON. Map paths are relative to the
/// config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub maps: Vec<String>,
    pub curves: Vec<String>,
    pub points: Vec<String>,
    #[serde(default = "default_places")]
    pub places: Vec<String>,
    /// Fixed point for the local probe; without it only the classifier runs.
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_max_period")]
    pub max_period: u32,
    #[serde(default = "default_max_bits")]
    pub max_bits: u64,
    #[serde(default = "default_min_visits")]
    pub min_visits: usize,
    #[serde(default)]
    pub output: Option<String>,
}

/// A validated config with every input parsed.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub raw: ExperimentConfig,
    pub map_paths: Vec<PathBuf>,
    pub maps: Vec<PolyMap>,
    pub curves: Vec<Curve>,
    pub points: Vec<AffinePoint>,
    pub places: Vec<Place>,
    pub target: Option<AffinePoint>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<ResolvedConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        ExperimentConfig::from_json(&text)?.resolve(base)
    }

    /// Reads the map files and parses every expression.
    pub fn resolve(self, base: &Path) -> Result<ResolvedConfig> {
        if self.horizon == 0 || self.max_period == 0 || self.max_bits == 0 {
            return Err(Error::Invalid("horizons and guards must be positive".into()));
        }
        let mut map_paths = Vec::new();
        let mut maps = Vec::new();
        for m in &self.maps {
            let p = base.join(m);
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Error::Invalid(format!("cannot read map {}: {e}", p.display())))?;
            maps.push(PolyMap::from_json(&text)?);
            map_paths.push(p);
        }
        let curves = self.curves.iter().map(|c| Curve::parse(c)).collect::<Result<_>>()?;
        let points = self.points.iter().map(|p| AffinePoint::parse(p)).collect::<Result<_>>()?;
        let places = self
            .places
            .iter()
            .map(|p| p.parse::<Place>())
            .collect::<Result<_>>()?;
        let target = self.target.as_deref().map(AffinePoint::parse).transpose()?;
        Ok(ResolvedConfig {
            raw: self,
            map_paths,
            maps,
            curves,
            points,
            places,
            target,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemReport {
    pub dml: DmlReport,
    pub local: Option<LocalDmlReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchItem {
    pub map: usize,
    pub curve: usize,
    pub point: usize,
    pub place: usize,
    #[serde(flatten)]
    pub outcome: ItemOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemOutcome {
    Report(ItemReport),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchOutput<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: &'a ExperimentConfig,
    pub items: Vec<BatchItem>,
}

fn run_item(cfg: &ResolvedConfig, idx: [usize; 4]) -> BatchItem {
    let [mi, ci, pi, vi] = idx;
    let f = &cfg.maps[mi];
    let c = &cfg.curves[ci];
    let p = &cfg.points[pi];
    let params = DmlParams {
        horizon: cfg.raw.horizon,
        max_period: cfg.raw.max_period,
        max_bits: cfg.raw.max_bits,
    };
    let dml = dml_classify(f, c, p, &params);
    let local = cfg.target.as_ref().map(|q| {
        let bp = BasinParams {
            horizon: cfg.raw.horizon,
            max_bits: cfg.raw.max_bits,
            ..BasinParams::default()
        };
        local_dml_probe(f, c, p, q, cfg.places[vi], &bp, cfg.raw.min_visits)
    });
    let outcome = match local.transpose() {
        Ok(local) => ItemOutcome::Report(ItemReport { dml, local }),
        Err(e) => ItemOutcome::Error(e.to_string()),
    };
    BatchItem {
        map: mi,
        curve: ci,
        point: pi,
        place: vi,
        outcome,
    }
}

/// Index tuples of the cross product, maps outermost.
pub fn batch_indices(cfg: &ResolvedConfig) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for m in 0..cfg.maps.len() {
        for c in 0..cfg.curves.len() {
            for p in 0..cfg.points.len() {
                for v in 0..cfg.places.len() {
                    out.push([m, c, p, v]);
                }
            }
        }
    }
    out
}

/// Runs every item on a pool of `jobs` threads; the output order follows
/// `batch_indices` whatever the scheduling.
pub fn run_batch(cfg: &ResolvedConfig, jobs: usize) -> Result<BatchOutput<'_>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let idx = batch_indices(cfg);
    let items = pool.install(|| idx.par_iter().map(|&i| run_item(cfg, i)).collect());
    Ok(BatchOutput {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        config: &cfg.raw,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path, points: &[&str]) -> ResolvedConfig {
        std::fs::write(dir.join("m.json"), r#"{"f1": "x + 1", "f2": "-y"}"#).unwrap();
        let cfg = ExperimentConfig {
            maps: vec!["m.json".into()],
            curves: vec!["y - 1".into(), "x".into()],
            points: points.iter().map(|s| s.to_string()).collect(),
            places: default_places(),
            target: None,
            horizon: 40,
            max_period: 4,
            max_bits: 4096,
            min_visits: 5,
            output: None,
        };
        cfg.resolve(dir).unwrap()
    }

    #[test]
    fn item_count_and_order() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path(), &["0,1"]);
        let out = run_batch(&cfg, 3).unwrap();
        assert_eq!(out.items.len(), 2);
        assert_eq!((out.items[0].curve, out.items[1].curve), (0, 1));
        let empty = config(dir.path(), &[]);
        assert!(run_batch(&empty, 2).unwrap().items.is_empty());
    }

    #[test]
    fn deterministic_across_job_counts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path(), &["0,1", "2,-1", "1/2,3"]);
        let a = serde_json::to_string(&run_batch(&cfg, 1).unwrap()).unwrap();
        let b = serde_json::to_string(&run_batch(&cfg, 4).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_map_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::from_json(r#"{"maps": ["nope.json"], "curves": [], "points": []}"#).unwrap();
        assert!(cfg.resolve(dir.path()).is_err());
    }
}
