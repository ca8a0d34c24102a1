//! Acceptance criteria. Each test checks one criterion against the engine's
//! verification report and against an oracle that does not share its code
//! path, then prints a single `criterion N: PASS|FAIL` line.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use sldist::{Format, RunConfig};
use sldist_core::chartab::CharTable;
use sldist_core::distinction::{
    verify_all, Compute, DistinctionData, Proposition, Setting, Status, VerificationReport,
};
use sldist_core::groups::DEFAULT_MAX_GROUP_ORDER;

struct Case {
    setting: Setting,
    data: DistinctionData,
    report: VerificationReport,
}

type Slot = Arc<OnceLock<Arc<Case>>>;

/// Each `(n, q)` is computed once per test binary, whichever test asks first.
fn case(n: usize, q: u64) -> Arc<Case> {
    static CASES: OnceLock<Mutex<HashMap<(usize, u64), Slot>>> = OnceLock::new();
    let slot = CASES
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((n, q))
        .or_default()
        .clone();
    slot.get_or_init(|| {
        let setting = Setting::build(n, q, DEFAULT_MAX_GROUP_ORDER, 1, &mut Compute).unwrap();
        let data = DistinctionData::compute(&setting).unwrap();
        let report = verify_all(&data, &setting.table_checks, Proposition::All);
        Arc::new(Case { setting, data, report })
    })
    .clone()
}

fn announce(criterion: u32, what: &str, ok: bool) {
    println!("criterion {criterion}: {} ({what})", if ok { "PASS" } else { "FAIL" });
}

fn status(report: &VerificationReport, id: &str) -> Status {
    report.check(id).unwrap_or_else(|| panic!("check {id} missing")).status
}

/// `|GL_n(F_r)|` from the product formula.
fn gl_order(n: u32, r: u128) -> u128 {
    (0..n).map(|i| r.pow(n) - r.pow(i)).product()
}

fn sl_order(n: u32, r: u128) -> u128 {
    gl_order(n, r) / (r - 1)
}

#[test]
fn criterion_1_gow_multiplicity_one() {
    let start = Instant::now();
    let mut cases = vec![(2, 2), (2, 3)];
    cases.extend((2..=5).map(|q| (1, q)));
    cases.push((3, 2));
    let mut ok = true;
    for (n, q) in cases {
        let c = case(n, q);
        let d = &c.data;
        ok &= status(&c.report, "gow") == Status::Pass;
        ok &= d.pi_tilde.iter().all(|p| p.gl_multiplicity <= 1);
        // distinguished rows are the conjugate self-dual ones
        ok &= d
            .pi_tilde
            .iter()
            .all(|p| (p.gl_multiplicity == 1) == p.conjugate_self_dual);
        // multiplicity free: the distinguished degrees add up to [GL_n(E) : GL_n(F)]
        let qq = q as u128;
        let index = gl_order(n as u32, qq * qq) / gl_order(n as u32, qq);
        let dim: u128 = d.pi_tilde.iter().map(|p| (p.gl_multiplicity * p.degree) as u128).sum();
        ok &= dim == index;
        if n == 1 {
            // characters of E^x trivial on F^x
            ok &= d.pi_tilde.iter().filter(|p| p.gl_multiplicity == 1).count() as u64 == q + 1;
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    announce(1, &format!("Gow multiplicity one, {:.1}s", elapsed.as_secs_f64()), ok);
    assert!(ok);
}

#[test]
fn criterion_2_multiplicity_bounds() {
    let mut ok = true;
    for (n, q, bound) in [(3, 2, 1), (2, 2, 1), (2, 3, 2), (2, 5, 2)] {
        let c = case(n, q);
        let d = &c.data;
        let qpi = c.report.check("qpi").unwrap();
        ok &= qpi.status == Status::Pass;
        ok &= qpi.headline == format!("all multiplicities ≤ {bound}: PASS");
        ok &= d.pi.iter().all(|p| p.sl_multiplicity <= bound);
        // the permutation character on SL_n(E)/SL_n(F) has degree equal to the index
        let qq = q as u128;
        let index = sl_order(n as u32, qq * qq) / sl_order(n as u32, qq);
        let dim: u128 = d.pi.iter().map(|p| (p.sl_multiplicity * p.degree) as u128).sum();
        ok &= dim == index;
    }
    // the bound 2 is attained for odd q
    ok &= case(2, 3).data.pi.iter().any(|p| p.sl_multiplicity == 2);
    announce(2, "multiplicity bounds", ok);
    assert!(ok);
}

#[test]
fn criterion_3_sum_rule_and_norm_analysis() {
    let mut ok = true;
    for (n, q) in [(2, 2), (2, 3), (3, 2), (2, 5)] {
        let c = case(n, q);
        let d = &c.data;
        for id in ["sumrule", "qpii", "corollary"] {
            ok &= status(&c.report, id) == Status::Pass;
        }
        for pt in d.pi_tilde.iter().filter(|pt| !pt.distinguishing_chars.is_empty()) {
            // dim Hom_{SL_n(F)}[π̃, 1] computed through SL_n(E) and through the twists
            let through_sl: u64 = pt
                .constituents
                .iter()
                .zip(&pt.restriction_multiplicities)
                .map(|(&j, &r)| r * d.pi[j].sl_multiplicity)
                .sum();
            let through_twists: u64 = pt.twisted_multiplicities.iter().sum();
            ok &= through_sl == through_twists;
            ok &= through_sl == pt.distinguishing_chars.len() as u64;
            if n == 2 && pt.gl_multiplicity == 1 {
                // for n = 2 every self-twist is trivial on F^x, so m = |X|
                ok &= pt.self_twists == pt.self_twists_trivial_on_base;
                for &j in &pt.constituents {
                    let m = d.pi[j].sl_multiplicity;
                    ok &= m == 0 || m == pt.distinguishing_chars.len() as u64;
                }
            }
        }
    }
    announce(3, "sum rule and norm-map analysis", ok);
    assert!(ok);
}

#[test]
fn criterion_4_generic_multiplicity_formula() {
    let mut ok = true;
    let mut reported = 0;
    for (n, q) in [(2, 2), (2, 3), (3, 2), (2, 5)] {
        let c = case(n, q);
        let d = &c.data;
        ok &= status(&c.report, "qpj") == Status::Pass;
        ok &= status(&c.report, "thmqpi") == Status::Pass;
        for pi in d.pi.iter().filter(|pi| pi.sl_multiplicity > 0) {
            for pt in pi
                .containing
                .iter()
                .map(|&r| &d.pi_tilde[r])
                .filter(|pt| pt.gl_multiplicity > 0)
            {
                if !pi.generic {
                    reported += 1;
                    continue;
                }
                let (x, y, z) = (
                    pt.distinguishing_chars.len() as u64,
                    pt.self_twists_trivial_on_base.len() as u64,
                    pt.self_twists.len() as u64,
                );
                ok &= pi.sl_multiplicity * z == x * y;
                if pt.generic {
                    ok &= pt.strong_classes == Some(pi.sl_multiplicity);
                }
            }
        }
    }
    announce(
        4,
        &format!("|X||Y|/|Z| = q(π̃) on generic pairs, {reported} non-generic pairs reported"),
        ok,
    );
    assert!(ok);
}

/// `F_4 = F_2[w]/(w² + w + 1)`, elements as bit pairs.
fn f4_mul(a: u8, b: u8) -> u8 {
    let mut r = 0u8;
    for i in 0..2 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    if r & 4 != 0 {
        r ^= 0b111;
    }
    r
}

type M2 = [u8; 4];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let m = f4_mul;
    [
        m(a[0], b[0]) ^ m(a[1], b[2]),
        m(a[0], b[1]) ^ m(a[1], b[3]),
        m(a[2], b[0]) ^ m(a[3], b[2]),
        m(a[2], b[1]) ^ m(a[3], b[3]),
    ]
}

fn m2_inv(a: &M2) -> M2 {
    // determinant one in characteristic 2: the inverse is the adjugate
    [a[3], a[1], a[2], a[0]]
}

#[test]
fn criterion_5_sl2_f4_against_a5_oracle() {
    const ID: M2 = [1, 0, 0, 1];
    let all: Vec<M2> = (0..256u32)
        .map(|x| [x as u8 & 3, (x >> 2) as u8 & 3, (x >> 4) as u8 & 3, (x >> 6) as u8 & 3])
        .filter(|a| (f4_mul(a[0], a[3]) ^ f4_mul(a[1], a[2])) == 1)
        .collect();
    assert_eq!(all.len(), 60);
    let sub: Vec<M2> = all.iter().copied().filter(|a| a.iter().all(|&x| x <= 1)).collect();
    assert_eq!(sub.len(), 6);

    let order = |g: &M2| {
        let mut x = *g;
        let mut k = 1;
        while x != ID {
            x = m2_mul(&x, g);
            k += 1;
        }
        k
    };
    let conj_class = |g: &M2| {
        let mut c: Vec<M2> = all.iter().map(|x| m2_mul(&m2_mul(x, g), &m2_inv(x))).collect();
        c.sort();
        c.dedup();
        c
    };
    // A_5 classes 1, 2, 3, 5A, 5B; 5A is fixed as the class of one element of order 5
    let five_a = conj_class(all.iter().find(|g| order(g) == 5).unwrap());
    let class_of = |g: &M2| match order(g) {
        1 => 0,
        2 => 1,
        3 => 2,
        5 if five_a.contains(g) => 3,
        5 => 4,
        k => panic!("element of order {k}"),
    };
    // permutation character on the cosets of SL_2(F_2)
    let perm = |g: &M2| {
        let hits = all
            .iter()
            .filter(|x| sub.contains(&m2_mul(&m2_mul(&m2_inv(x), g), x)))
            .count();
        hits / sub.len()
    };
    let mut by_class = [None::<usize>; 5];
    let mut sizes = [0usize; 5];
    for g in &all {
        let c = class_of(g);
        sizes[c] += 1;
        let v = perm(g);
        assert!(by_class[c].is_none_or(|w| w == v));
        by_class[c] = Some(v);
    }
    let perm_values: Vec<f64> = by_class.iter().map(|v| v.unwrap() as f64).collect();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a5 = [
        (1, [1.0, 1.0, 1.0, 1.0, 1.0]),
        (3, [3.0, -1.0, 0.0, phi, 1.0 - phi]),
        (3, [3.0, -1.0, 0.0, 1.0 - phi, phi]),
        (4, [4.0, 0.0, 1.0, -1.0, -1.0]),
        (5, [5.0, 1.0, -1.0, 0.0, 0.0]),
    ];
    let oracle: Vec<(u64, u64)> = a5
        .iter()
        .map(|(deg, chi)| {
            let s: f64 = (0..5).map(|c| sizes[c] as f64 * perm_values[c] * chi[c]).sum();
            (*deg, (s / 60.0).round() as u64)
        })
        .collect();

    let mut ok = sizes == [1, 15, 20, 12, 12] && perm_values == [10.0, 2.0, 1.0, 0.0, 0.0];
    ok &= oracle == [(1, 1), (3, 0), (3, 0), (4, 1), (5, 1)];
    let mut engine: Vec<(u64, u64)> = case(2, 2)
        .data
        .pi
        .iter()
        .map(|p| (p.degree, p.sl_multiplicity))
        .collect();
    engine.sort();
    ok &= engine == oracle;
    announce(5, "SL_2(F_4)/SL_2(F_2) = 1 + 4 + 5", ok);
    assert!(ok);
}

/// Row orthogonality in floating point, evaluated independently of the
/// exact modular check.
fn orthogonal(t: &CharTable) -> bool {
    let e = t.exponent() as f64;
    let values: Vec<Vec<(f64, f64)>> = t
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.terms().iter().fold((0.0, 0.0), |(re, im), &(k, c)| {
                        let a = std::f64::consts::TAU * k as f64 / e;
                        (re + c as f64 * a.cos(), im + c as f64 * a.sin())
                    })
                })
                .collect()
        })
        .collect();
    let order = t.order() as f64;
    let sizes = t.class_sizes();
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (c, (x, y)) in a.iter().zip(b).enumerate() {
                let s = sizes[c] as f64;
                re += s * (x.0 * y.0 + x.1 * y.1);
                im += s * (x.1 * y.0 - x.0 * y.1);
            }
            let expect = if i == j { order } else { 0.0 };
            if (re - expect).abs() > 1e-6 * order || im.abs() > 1e-6 * order {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_6_table_integrity() {
    let mut ok = true;
    for (n, q) in [(2u32, 2u64), (2, 3), (3, 2)] {
        let c = case(n as usize, q);
        ok &= status(&c.report, "table") == Status::Pass;
        let big = (q * q) as u128;
        let classes = if n == 2 { big * big - 1 } else { big.pow(3) - big };
        let gl = &c.setting.gl_table;
        ok &= gl.len() as u128 == classes && gl.class_count() as u128 == classes;
        let squares: u128 = gl.degrees().iter().map(|&d| (d as u128).pow(2)).sum();
        ok &= squares == gl_order(n, big);
        ok &= orthogonal(gl) && orthogonal(&c.setting.sl_table);
        let sl = &c.setting.sl_table;
        let sl_squares: u128 = sl.degrees().iter().map(|&d| (d as u128).pow(2)).sum();
        ok &= sl_squares == sl_order(n, big);
        ok &= c
            .setting
            .table_checks
            .iter()
            .all(|(_, t)| t.rows == t.classes && !t.primes.is_empty());
    }
    let rows = |n, q| case(n, q).setting.gl_table.len();
    let squares = |n, q| case(n, q).setting.gl_table.degrees().iter().map(|d| d * d).sum::<u64>();
    ok &= (rows(2, 3), rows(2, 2), rows(3, 2)) == (80, 15, 60);
    ok &= (squares(2, 3), squares(2, 2)) == (5760, 180);
    announce(6, "orthogonality, degrees and class counts", ok);
    assert!(ok);
}

#[test]
fn criterion_7_whittaker_is_experimental() {
    let mut ok = true;
    for (n, q) in [(2, 2), (2, 3), (3, 2), (2, 5)] {
        let c = case(n, q);
        let d = &c.data;
        let w = c.report.check("whittaker").unwrap();
        ok &= !w.asserted && w.status != Status::Fail;
        let ap3 = c.report.check("ap3").unwrap();
        ok &= ap3.asserted && ap3.status == Status::Pass;
        if n == 2 {
            ok &= ap3.instances > 0;
        }
        ok &= status(&c.report, "gelfand-graev") == Status::Pass;
        // a warning on the experimental check leaves the verdict alone
        let mut warned = c.report.clone();
        let idx = warned.checks.iter().position(|c| c.id == "whittaker").unwrap();
        warned.checks[idx].status = Status::Warn;
        ok &= warned.passed() == c.report.passed();
        // generic characters of GL_n(F_Q) are counted by semisimple classes: Q^n - Q^(n-1)
        let big = q * q;
        let generic = d.pi_tilde.iter().filter(|p| p.generic).count() as u64;
        ok &= generic == big.pow(n as u32) - big.pow(n as u32 - 1);
        let steinberg = big.pow((n * (n - 1) / 2) as u32);
        ok &= d.pi_tilde.iter().filter(|p| p.degree == steinberg).any(|p| p.generic);
        ok &= d.pi_tilde.iter().filter(|p| p.degree == 1).all(|p| !p.generic);
    }
    announce(7, "Whittaker experimental, two-dimensional case asserted", ok);
    assert!(ok);
}

fn reports(cfg: &RunConfig) -> Vec<String> {
    let mut out = Vec::new();
    for format in [Format::Json, Format::Csv, Format::Md] {
        out.push(sldist::distinction(cfg, format).unwrap().report);
    }
    for format in [Format::Text, Format::Json, Format::Md] {
        out.push(sldist::verify(cfg, Proposition::All, format).unwrap().0.report);
    }
    out
}

fn cache_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_8_reproducible_bytes() {
    let mut ok = true;
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let cfg = |dir: &Path| {
            let mut c = RunConfig::new(n, q);
            c.cache_dir = Some(dir.to_path_buf());
            c
        };
        let first = reports(&cfg(a.path()));
        let second = reports(&cfg(b.path()));
        let uncached = reports(&RunConfig {
            cache_dir: None,
            ..cfg(a.path())
        });
        // reruns read the verified cache and must not change a byte
        let again = reports(&cfg(a.path()));
        ok &= first == second && first == uncached && first == again;
        let files = cache_files(a.path());
        ok &= !files.is_empty() && files == cache_files(b.path());
        let hit = sldist::distinction(&cfg(a.path()), Format::Json).unwrap();
        ok &= hit
            .cache_events
            .iter()
            .all(|e| e.to_string().ends_with("cache hit (verified)"));
    }
    announce(8, "byte-identical reports and caches", ok);
    assert!(ok);
}
