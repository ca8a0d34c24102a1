//! Report emission. Every renderer is a pure function of its input, so
//! identical runs produce identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sldist_core::distinction::{Check, DistinctionData, Status, VerificationReport};
use sldist_core::groups::GroupKind;

/// Version of the JSON report layouts documented in `docs/formats.md`.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctionReport {
    pub format: String,
    pub schema: u32,
    pub distinction: DistinctionData,
}

impl DistinctionReport {
    pub fn new(distinction: DistinctionData) -> DistinctionReport {
        DistinctionReport {
            format: "sldist-distinction".into(),
            schema: REPORT_SCHEMA,
            distinction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub format: String,
    pub schema: u32,
    pub passed: bool,
    pub report: VerificationReport,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn set(v: &[u64]) -> String {
    let inner: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn rows(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// One CSV record per pair (GL_n(E) row, SL_n(E) constituent).
pub fn distinction_csv(d: &DistinctionData) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "gl_row",
        "gl_degree",
        "conjugate_self_dual",
        "gl_multiplicity",
        "x_size",
        "z_size",
        "y_size",
        "nm_kernel_size",
        "q_value",
        "gl_generic",
        "sl_row",
        "sl_degree",
        "sl_multiplicity",
        "sl_generic",
        "whittaker_relative",
    ])
    .expect("in-memory write");
    for pt in &d.pi_tilde {
        for &j in &pt.constituents {
            let pi = &d.pi[j];
            w.write_record([
                pt.row.to_string(),
                pt.degree.to_string(),
                pt.conjugate_self_dual.to_string(),
                pt.gl_multiplicity.to_string(),
                pt.distinguishing_chars.len().to_string(),
                pt.self_twists.len().to_string(),
                pt.self_twists_trivial_on_base.len().to_string(),
                pt.norm_kernel.len().to_string(),
                pt.strong_classes.map_or_else(String::new, |c| c.to_string()),
                pt.generic.to_string(),
                j.to_string(),
                pi.degree.to_string(),
                pi.sl_multiplicity.to_string(),
                pi.generic.to_string(),
                pi.whittaker_relative.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

pub fn distinction_md(d: &DistinctionData) -> String {
    let mut s = String::new();
    let base = GroupKind::SlF.display_name(d.n, d.q);
    let _ = writeln!(s, "# Distinction of {} by {}\n", d.sl_group, base);
    let _ = writeln!(
        s,
        "|{}| = {}, |{}| = {}, [GL : GL+] = {}\n",
        d.gl_group, d.gl_order, d.sl_group, d.sl_order, d.glplus_index
    );
    let _ = writeln!(s, "## {} constituents\n", d.sl_group);
    let _ = writeln!(
        s,
        "| row | degree | multiplicity | generic | relative Whittaker | contained in |"
    );
    let _ = writeln!(s, "|---:|---:|---:|:---:|:---:|---|");
    for pi in &d.pi {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            pi.row,
            pi.degree,
            pi.sl_multiplicity,
            yes_no(pi.generic),
            yes_no(pi.whittaker_relative),
            rows(&pi.containing)
        );
    }
    let _ = writeln!(s, "\n## {} rows\n", d.gl_group);
    let _ = writeln!(
        s,
        "| row | degree | σ-dual | GL mult | X | Z | Y | nm kernel | q(π̃) | generic | constituents | GL+ summands |"
    );
    let _ = writeln!(s, "|---:|---:|:---:|---:|---|---|---|---|---:|:---:|---|---|");
    for pt in &d.pi_tilde {
        let summands: Vec<String> = pt.glplus_summands.iter().map(|sm| format!("[{}]", rows(sm))).collect();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            pt.row,
            pt.degree,
            yes_no(pt.conjugate_self_dual),
            pt.gl_multiplicity,
            set(&pt.distinguishing_chars),
            set(&pt.self_twists),
            set(&pt.self_twists_trivial_on_base),
            set(&pt.norm_kernel),
            pt.strong_classes.map_or_else(|| "-".to_string(), |c| c.to_string()),
            yes_no(pt.generic),
            rows(&pt.constituents),
            summands.join(" ")
        );
    }
    let _ = writeln!(s, "\n## Multiplicity profiles\n");
    let _ = writeln!(
        s,
        "| GL mult | \\|X\\| | \\|Z\\| | \\|Y\\| | constituent multiplicities | rows |"
    );
    let _ = writeln!(s, "|---:|---:|---:|---:|---|---|");
    for p in &d.profiles {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            p.gl_multiplicity,
            p.distinguishing,
            p.self_twists,
            p.self_twists_trivial_on_base,
            set(&p.constituent_multiplicities),
            rows(&p.rows)
        );
    }
    s
}

fn verify_line(c: &Check) -> String {
    let tag = if c.asserted { "" } else { " (experimental)" };
    format!(
        "[{}] {}{}: {} [{} instances]",
        c.status, c.id, tag, c.headline, c.instances
    )
}

pub fn verify_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verify {} / {} (selector: {})", r.gl_group, r.sl_group, r.selector);
    for c in &r.checks {
        let _ = writeln!(s, "{}", verify_line(c));
        for ce in &c.counterexamples {
            let _ = writeln!(s, "    counterexample: {ce}");
        }
        if c.failures > c.counterexamples.len() as u64 {
            let _ = writeln!(s, "    ... {} failures in total", c.failures);
        }
        for line in &c.reported {
            let _ = writeln!(s, "    reported: {line}");
        }
    }
    for c in r.checks.iter().filter(|c| !c.asserted) {
        let marker = if c.status == Status::Warn { "WARN " } else { "" };
        let _ = writeln!(s, "{marker}{}: {}", c.id, c.headline);
    }
    let failed = r
        .checks
        .iter()
        .filter(|c| c.asserted && c.status == Status::Fail)
        .count();
    let _ = writeln!(
        s,
        "result: {} ({} checks, {} asserted failures, {} warnings)",
        if r.passed() { "PASS" } else { "FAIL" },
        r.checks.len(),
        failed,
        r.warnings()
    );
    s
}

pub fn verify_md(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification for {} / {}\n", r.gl_group, r.sl_group);
    let _ = writeln!(s, "| check | kind | status | instances | failures | verdict |");
    let _ = writeln!(s, "|---|---|:---:|---:|---:|---|");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            c.id,
            if c.asserted { "asserted" } else { "experimental" },
            c.status,
            c.instances,
            c.failures,
            c.headline
        );
    }
    for c in r.checks.iter().filter(|c| !c.counterexamples.is_empty()) {
        let _ = writeln!(s, "\n## Counterexamples: {}\n", c.id);
        for ce in &c.counterexamples {
            let _ = writeln!(s, "- {ce}");
        }
    }
    let _ = writeln!(s, "\nresult: {}", if r.passed() { "PASS" } else { "FAIL" });
    s
}
