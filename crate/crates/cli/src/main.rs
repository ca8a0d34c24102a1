use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sldist::cache::{CacheEvent, CACHE_DIR_ENV};
use sldist::{Format, RunConfig, DEFAULT_SEED};
use sldist_core::distinction::Proposition;
use sldist_core::groups::{GroupKind, DEFAULT_MAX_GROUP_ORDER};

/// Exact character tables of GL_n and SL_n over F_{q²} and the
/// SL_n(F_q)-distinction multiplicities they determine.
#[derive(Parser)]
#[command(name = "sldist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Matrix size.
    #[arg(long)]
    n: usize,
    /// Order of the base field F; the groups live over F_{q²}.
    #[arg(long)]
    q: u64,
    /// Refuse to enumerate GL_n(F_{q²}) beyond this order.
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: u64,
    /// Seed for the choice of generating sets.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Table cache directory.
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Compute every table afresh and write nothing.
    #[arg(long)]
    no_cache: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> RunConfig {
        let mut cfg = RunConfig::new(self.n, self.q);
        cfg.max_group_order = self.max_group_order;
        cfg.seed = self.seed;
        cfg.cache_dir = if self.no_cache {
            None
        } else {
            Some(self.cache_dir.clone().unwrap_or_else(sldist::cache::default_cache_dir))
        };
        cfg
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    GlE,
    SlE,
    GlF,
    SlF,
    GlPlus,
    #[value(name = "n-e")]
    NE,
    Center,
}

impl From<GroupArg> for GroupKind {
    fn from(g: GroupArg) -> GroupKind {
        match g {
            GroupArg::GlE => GroupKind::GlE,
            GroupArg::SlE => GroupKind::SlE,
            GroupArg::GlF => GroupKind::GlF,
            GroupArg::SlF => GroupKind::SlF,
            GroupArg::GlPlus => GroupKind::GlPlus,
            GroupArg::NE => GroupKind::UnipotentE,
            GroupArg::Center => GroupKind::Center,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropArg {
    Gow,
    Sumrule,
    Qpi,
    Qpii,
    Corollary,
    Qpj,
    Thmqpi,
    Whittaker,
    All,
}

impl From<PropArg> for Proposition {
    fn from(p: PropArg) -> Proposition {
        match p {
            PropArg::Gow => Proposition::Gow,
            PropArg::Sumrule => Proposition::Sumrule,
            PropArg::Qpi => Proposition::Qpi,
            PropArg::Qpii => Proposition::Qpii,
            PropArg::Corollary => Proposition::Corollary,
            PropArg::Qpj => Proposition::Qpj,
            PropArg::Thmqpi => Proposition::Thmqpi,
            PropArg::Whittaker => Proposition::Whittaker,
            PropArg::All => Proposition::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build, verify and cache the character table of one group.
    BuildTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        group: GroupArg,
    },
    /// Per-representation distinction data.
    Distinction {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Check the multiplicity statements on every irreducible.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        prop: PropArg,
        #[arg(long, value_enum, default_value = "text")]
        format: VerifyFormat,
    },
}

/// Exit code for asserted-check failures; errors use 2.
const EXIT_FAILED: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn report_cache(events: &[CacheEvent]) {
    for e in events {
        eprintln!("{e}");
    }
}

fn emit(common: &Common, report: &str) -> anyhow::Result<()> {
    match &common.output {
        Some(path) => sldist::cache::write_atomic(path, report.as_bytes())?,
        None => print!("{report}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::BuildTable { common, group } => {
            let s = sldist::build_table(&common.config(), group.into())?;
            let mut out = format!(
                "{}: order {}, {} classes, {} irreducible characters, sum of squared degrees {}\n",
                s.group, s.order, s.classes, s.rows, s.degree_square_sum
            );
            for e in &s.cache_events {
                out.push_str(&format!("{e}\n"));
            }
            if let Some(p) = &s.path {
                out.push_str(&format!("cache file: {}\n", p.display()));
            }
            emit(&common, &out)?;
            Ok(0)
        }
        Command::Distinction { common, format } => {
            let format = match format {
                ReportFormat::Json => Format::Json,
                ReportFormat::Csv => Format::Csv,
                ReportFormat::Md => Format::Md,
            };
            let out = sldist::distinction(&common.config(), format)?;
            report_cache(&out.cache_events);
            emit(&common, &out.report)?;
            Ok(0)
        }
        Command::Verify { common, prop, format } => {
            let format = match format {
                VerifyFormat::Text => Format::Text,
                VerifyFormat::Json => Format::Json,
                VerifyFormat::Md => Format::Md,
            };
            let (out, passed) = sldist::verify(&common.config(), prop.into(), format)?;
            report_cache(&out.cache_events);
            emit(&common, &out.report)?;
            Ok(if passed { 0 } else { EXIT_FAILED })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
