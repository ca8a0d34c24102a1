//! Command implementations behind the `sldist` binary. Each command returns
//! its report as a string plus the cache events it caused, so the binary
//! and the tests share one code path.

pub mod cache;
pub mod render;

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use sldist_core::distinction::{verify_all, DistinctionData, Proposition, Setting, TableSource, VerificationReport};
use sldist_core::ff::FieldTower;
use sldist_core::groups::{check_size_guard, GroupKind, GroupView, MatrixGroup, DEFAULT_MAX_GROUP_ORDER};

use cache::{CacheEvent, TableCache};
use render::{DistinctionReport, VerifyReport};

/// Seed for generating-set selection unless overridden.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub q: u64,
    pub max_group_order: u64,
    pub seed: u64,
    /// `None` disables the table cache.
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(n: usize, q: u64) -> RunConfig {
        RunConfig {
            n,
            q,
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            seed: DEFAULT_SEED,
            cache_dir: Some(cache::default_cache_dir()),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("n must be at least 1");
        }
        sldist_core::numtheory::prime_power(self.q).with_context(|| format!("q = {} is not a prime power", self.q))?;
        check_size_guard(self.n, self.q, self.max_group_order)?;
        Ok(())
    }

    fn cache(&self) -> TableCache {
        match &self.cache_dir {
            Some(dir) => TableCache::new(dir.clone()),
            None => TableCache::disabled(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
    Text,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Format> {
        Ok(match s {
            "json" => Format::Json,
            "csv" => Format::Csv,
            "md" => Format::Md,
            "text" => Format::Text,
            _ => bail!("unknown format {s:?}"),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub report: String,
    pub cache_events: Vec<CacheEvent>,
}

#[derive(Clone, Debug)]
pub struct TableSummary {
    pub group: String,
    pub order: u64,
    pub classes: usize,
    pub rows: usize,
    pub degree_square_sum: u64,
    pub path: Option<PathBuf>,
    pub cache_events: Vec<CacheEvent>,
}

/// Builds (or loads and re-verifies) the table of one group.
pub fn build_table(cfg: &RunConfig, kind: GroupKind) -> Result<TableSummary> {
    cfg.validate()?;
    let tower = Arc::new(FieldTower::for_order(cfg.q)?);
    let ambient = Arc::new(MatrixGroup::enumerate(tower, cfg.n, cfg.max_group_order)?);
    let view = GroupView::new(ambient, kind)?;
    let mut cache = cfg.cache();
    let (_, table, check) = cache.table(&view, cfg.seed)?;
    Ok(TableSummary {
        group: table.name().to_string(),
        order: table.order(),
        classes: check.classes,
        rows: check.rows,
        degree_square_sum: check.degree_square_sum,
        path: cache.path_for(&view, cfg.seed),
        cache_events: cache.events,
    })
}

fn setting(cfg: &RunConfig) -> Result<(Setting, Vec<CacheEvent>)> {
    cfg.validate()?;
    let mut cache = cfg.cache();
    let s = Setting::build(cfg.n, cfg.q, cfg.max_group_order, cfg.seed, &mut cache)?;
    Ok((s, cache.events))
}

pub fn distinction_data(cfg: &RunConfig) -> Result<(DistinctionData, Vec<CacheEvent>)> {
    let (s, events) = setting(cfg)?;
    Ok((DistinctionData::compute(&s)?, events))
}

pub fn distinction(cfg: &RunConfig, format: Format) -> Result<Output> {
    let (d, cache_events) = distinction_data(cfg)?;
    let report = match format {
        Format::Json => render::to_json(&DistinctionReport::new(d)),
        Format::Csv => render::distinction_csv(&d),
        Format::Md | Format::Text => render::distinction_md(&d),
    };
    Ok(Output { report, cache_events })
}

pub fn verification(cfg: &RunConfig, selector: Proposition) -> Result<(VerificationReport, Vec<CacheEvent>)> {
    let (s, events) = setting(cfg)?;
    let d = DistinctionData::compute(&s)?;
    Ok((verify_all(&d, &s.table_checks, selector), events))
}

/// Returns the rendered report and whether every asserted check passed.
pub fn verify(cfg: &RunConfig, selector: Proposition, format: Format) -> Result<(Output, bool)> {
    let (r, cache_events) = verification(cfg, selector)?;
    let passed = r.passed();
    let report = match format {
        Format::Json => render::to_json(&VerifyReport {
            format: "sldist-verification".into(),
            schema: render::REPORT_SCHEMA,
            passed,
            report: r,
        }),
        Format::Md => render::verify_md(&r),
        Format::Text => render::verify_text(&r),
        Format::Csv => bail!("verify reports are emitted as text, json or md"),
    };
    Ok((Output { report, cache_events }, passed))
}
