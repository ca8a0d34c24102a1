//! On-disk character-table cache.
//!
//! A cache file is one line of JSON (the header) followed by `\n` and a raw
//! payload of little-endian integers laid out in the sections the header
//! lists. The header carries the SHA-256 of the payload; a digest or key
//! mismatch is a miss, and every hit is re-verified (class stability and both
//! orthogonality relations) before use.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sldist_core::chartab::{CharTable, RootSum, TableCheck, TableParts};
use sldist_core::distinction::TableSource;
use sldist_core::groups::{ConjugacyData, GroupKind, GroupView};

pub const FORMAT: &str = "sldist-character-table";
pub const SCHEMA: u32 = 1;
/// Bumped whenever table construction changes what is stored.
pub const CODE_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "SLDIST_CACHE_DIR";

/// Identifies the computation a cache file holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: GroupKind,
    pub n: usize,
    pub p: u64,
    pub k: u32,
    pub code_version: u32,
    /// Coefficients of the polynomial defining `F` over `F_p`, constant first.
    pub base_modulus: Vec<u64>,
    /// `[c0, c1]` of the quadratic `x² + c1·x + c0` defining `E` over `F`.
    pub ext_modulus: [u16; 2],
    pub seed: u64,
}

impl CacheKey {
    pub fn for_view(view: &GroupView, seed: u64) -> CacheKey {
        let t = view.ambient().tower();
        let [c0, c1] = t.ext_modulus();
        CacheKey {
            kind: view.kind(),
            n: view.ambient().n(),
            p: t.p(),
            k: t.k(),
            code_version: CODE_VERSION,
            base_modulus: t.base_modulus().to_vec(),
            ext_modulus: [c0.code(), c1.code()],
            seed,
        }
    }

    pub fn file_name(&self) -> String {
        let q = self.p.pow(self.k);
        format!("{}-n{}-q{}.sltab", self.kind.slug(), self.n, q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    /// `u32le`, `u64le` or `i64le`.
    pub int_type: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub schema: u32,
    pub key: CacheKey,
    pub group: String,
    pub order: u64,
    pub exponent: u32,
    pub classes: usize,
    pub identity_class: usize,
    pub det_modulus: Option<u64>,
    /// SHA-256 of the class partition in canonical byte form.
    pub class_data_sha256: String,
    pub payload_bytes: u64,
    pub payload_sha256: String,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheEventKind {
    Hit,
    Miss,
    /// Unreadable, mismatched or failing verification; recomputed.
    Invalid(String),
    Disabled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEvent {
    pub group: String,
    pub path: Option<PathBuf>,
    pub kind: CacheEventKind,
}

impl fmt::Display for CacheEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CacheEventKind::Hit => write!(f, "{}: cache hit (verified)", self.group),
            CacheEventKind::Miss => write!(f, "{}: cache miss, computed and stored", self.group),
            CacheEventKind::Invalid(why) => write!(f, "{}: cache entry rejected ({why}), recomputed", self.group),
            CacheEventKind::Disabled => write!(f, "{}: computed (cache disabled)", self.group),
        }
    }
}

/// `SLDIST_CACHE_DIR`, else the XDG cache directory, else `./.sldist-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(dir).join("sldist");
    }
    if let Some(home) = std::env::var_os("HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(home).join(".cache").join("sldist");
    }
    PathBuf::from(".sldist-cache")
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Default)]
struct PayloadWriter {
    bytes: Vec<u8>,
    sections: Vec<Section>,
}

impl PayloadWriter {
    fn section<T: Copy>(&mut self, name: &str, int_type: &str, values: &[T], enc: impl Fn(T) -> [u8; 8], width: usize) {
        for &v in values {
            self.bytes.extend_from_slice(&enc(v)[..width]);
        }
        self.sections.push(Section {
            name: name.into(),
            int_type: int_type.into(),
            count: values.len() as u64,
        });
    }

    fn u32s(&mut self, name: &str, values: &[u32]) {
        self.section(name, "u32le", values, |v| u64::from(v).to_le_bytes(), 4);
    }

    fn u64s(&mut self, name: &str, values: &[u64]) {
        self.section(name, "u64le", values, u64::to_le_bytes, 8);
    }

    fn i64s(&mut self, name: &str, values: &[i64]) {
        self.section(name, "i64le", values, i64::to_le_bytes, 8);
    }
}

struct PayloadReader<'a> {
    bytes: &'a [u8],
    sections: std::slice::Iter<'a, Section>,
}

impl PayloadReader<'_> {
    fn take(&mut self, name: &str, int_type: &str, width: usize) -> Result<&[u8], String> {
        let s = self.sections.next().ok_or_else(|| format!("missing section {name}"))?;
        if s.name != name || s.int_type != int_type {
            return Err(format!(
                "expected section {name}:{int_type}, found {}:{}",
                s.name, s.int_type
            ));
        }
        let len = usize::try_from(s.count)
            .ok()
            .and_then(|c| c.checked_mul(width))
            .filter(|&l| l <= self.bytes.len())
            .ok_or_else(|| format!("section {name} overruns the payload"))?;
        let (head, rest) = self.bytes.split_at(len);
        self.bytes = rest;
        Ok(head)
    }

    fn u32s(&mut self, name: &str) -> Result<Vec<u32>, String> {
        Ok(self
            .take(name, "u32le", 4)?
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect())
    }

    fn u64s(&mut self, name: &str) -> Result<Vec<u64>, String> {
        Ok(self
            .take(name, "u64le", 8)?
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }

    fn i64s(&mut self, name: &str) -> Result<Vec<i64>, String> {
        Ok(self
            .take(name, "i64le", 8)?
            .chunks_exact(8)
            .map(|c| i64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

/// Serialises class data and a table into the cache file format.
pub fn encode(key: &CacheKey, cls: &ConjugacyData, table: &CharTable) -> Vec<u8> {
    let parts = table.parts();
    let mut w = PayloadWriter::default();
    w.u32s("class_map", cls.class_map());
    w.u64s("class_sizes", &parts.class_sizes);
    w.u32s("inverse_perm", &parts.inverse_perm);
    w.u32s("galois_perm", parts.galois_perm.as_deref().unwrap_or(&[]));
    w.u64s("det_logs", parts.det_logs.as_ref().map_or(&[][..], |(l, _)| l));
    w.u64s("degrees", &parts.degrees);
    let entries = parts.rows.iter().flatten();
    let counts: Vec<u32> = entries.clone().map(|x| x.terms().len() as u32).collect();
    let exps: Vec<u32> = entries.clone().flat_map(|x| x.terms().iter().map(|t| t.0)).collect();
    let coeffs: Vec<i64> = entries.flat_map(|x| x.terms().iter().map(|t| t.1)).collect();
    w.u32s("term_counts", &counts);
    w.u32s("term_exponents", &exps);
    w.i64s("term_coefficients", &coeffs);
    let header = Header {
        format: FORMAT.into(),
        schema: SCHEMA,
        key: key.clone(),
        group: parts.name.clone(),
        order: parts.order,
        exponent: parts.exponent,
        classes: parts.class_sizes.len(),
        identity_class: parts.identity_class,
        det_modulus: parts.det_logs.as_ref().map(|(_, m)| *m),
        class_data_sha256: sha256_hex(&cls.canonical_bytes()),
        payload_bytes: w.bytes.len() as u64,
        payload_sha256: sha256_hex(&w.bytes),
        sections: w.sections,
    };
    let mut out = serde_json::to_vec(&header).expect("header serialises");
    out.push(b'\n');
    out.extend_from_slice(&w.bytes);
    out
}

/// Splits a cache file into its header and payload, checking the digest.
pub fn decode_header(bytes: &[u8]) -> Result<(Header, &[u8]), String> {
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or("no header line")?;
    let header: Header = serde_json::from_slice(&bytes[..nl]).map_err(|e| format!("bad header: {e}"))?;
    if header.format != FORMAT || header.schema != SCHEMA {
        return Err(format!(
            "format {} schema {} not understood",
            header.format, header.schema
        ));
    }
    let payload = &bytes[nl + 1..];
    if payload.len() as u64 != header.payload_bytes || sha256_hex(payload) != header.payload_sha256 {
        return Err("digest mismatch".into());
    }
    Ok((header, payload))
}

/// Decodes and re-verifies a cache file for `view`.
pub fn decode(bytes: &[u8], view: &GroupView, seed: u64) -> Result<(ConjugacyData, CharTable, TableCheck), String> {
    let (header, payload) = decode_header(bytes)?;
    let key = CacheKey::for_view(view, seed);
    if header.key != key {
        return Err("key mismatch".into());
    }
    let mut r = PayloadReader {
        bytes: payload,
        sections: header.sections.iter(),
    };
    let class_map = r.u32s("class_map")?;
    let class_sizes = r.u64s("class_sizes")?;
    let inverse_perm = r.u32s("inverse_perm")?;
    let galois_perm = r.u32s("galois_perm")?;
    let det_logs = r.u64s("det_logs")?;
    let degrees = r.u64s("degrees")?;
    let counts = r.u32s("term_counts")?;
    let exps = r.u32s("term_exponents")?;
    let coeffs = r.i64s("term_coefficients")?;
    let k = header.classes;
    if counts.len() != k * degrees.len() || exps.len() != coeffs.len() {
        return Err("inconsistent section lengths".into());
    }
    if counts.iter().map(|&c| c as usize).sum::<usize>() != exps.len() {
        return Err("term counts do not match the term sections".into());
    }
    let cls = ConjugacyData::from_class_map(view, &class_map, seed).map_err(|e| e.to_string())?;
    if sha256_hex(&cls.canonical_bytes()) != header.class_data_sha256 {
        return Err("class data digest mismatch".into());
    }
    let e = header.exponent;
    let mut terms = exps.iter().zip(&coeffs);
    let entries: Vec<RootSum> = counts
        .iter()
        .map(|&c| RootSum::from_terms(e, terms.by_ref().take(c as usize).map(|(&s, &v)| (u64::from(s), v))))
        .collect();
    let rows = entries.chunks(k.max(1)).map(<[RootSum]>::to_vec).collect();
    let parts = TableParts {
        name: header.group.clone(),
        order: header.order,
        exponent: e,
        identity_class: header.identity_class,
        class_sizes,
        inverse_perm,
        galois_perm: (!galois_perm.is_empty()).then_some(galois_perm),
        det_logs: header.det_modulus.map(|m| (det_logs, m)),
        degrees,
        rows,
    };
    if parts.class_sizes != (0..cls.class_count()).map(|c| cls.class_size(c)).collect::<Vec<_>>() {
        return Err("class sizes disagree with the class map".into());
    }
    let (table, check) = CharTable::from_parts(parts).map_err(|e| e.to_string())?;
    Ok((cls, table, check))
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// A [`TableSource`] backed by a cache directory, recording what happened
/// for each table.
pub struct TableCache {
    dir: Option<PathBuf>,
    pub events: Vec<CacheEvent>,
}

impl TableCache {
    pub fn new(dir: PathBuf) -> TableCache {
        TableCache {
            dir: Some(dir),
            events: Vec::new(),
        }
    }

    pub fn disabled() -> TableCache {
        TableCache {
            dir: None,
            events: Vec::new(),
        }
    }

    pub fn path_for(&self, view: &GroupView, seed: u64) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(CacheKey::for_view(view, seed).file_name()))
    }
}

impl TableSource for TableCache {
    fn table(&mut self, view: &GroupView, seed: u64) -> sldist_core::Result<(ConjugacyData, CharTable, TableCheck)> {
        let group = view.name();
        let Some(path) = self.path_for(view, seed) else {
            let out = sldist_core::distinction::Compute.table(view, seed)?;
            self.events.push(CacheEvent {
                group,
                path: None,
                kind: CacheEventKind::Disabled,
            });
            return Ok(out);
        };
        let mut kind = CacheEventKind::Miss;
        match fs::read(&path) {
            Ok(bytes) => match decode(&bytes, view, seed) {
                Ok(out) => {
                    debug!("{}: loaded {}", group, path.display());
                    self.events.push(CacheEvent {
                        group,
                        path: Some(path),
                        kind: CacheEventKind::Hit,
                    });
                    return Ok(out);
                }
                Err(why) => {
                    warn!("{}: rejecting {}: {why}", group, path.display());
                    kind = CacheEventKind::Invalid(why);
                }
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => kind = CacheEventKind::Invalid(e.to_string()),
        }
        let (cls, table, check) = sldist_core::distinction::Compute.table(view, seed)?;
        let bytes = encode(&CacheKey::for_view(view, seed), &cls, &table);
        if let Err(e) = write_atomic(&path, &bytes) {
            warn!("{}: could not write {}: {e}", group, path.display());
        }
        self.events.push(CacheEvent {
            group,
            path: Some(path),
            kind,
        });
        Ok((cls, table, check))
    }
}
