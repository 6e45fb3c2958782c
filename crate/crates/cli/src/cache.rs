//! One TOML file per `(order, id)` holding every invariant computed so far.
//!
//! A record is only reused when its schema version, group identity and the
//! SHA-256 of the group's presentation (in catalogue syntax) all match, so
//! editing the catalogue silently invalidates stale results.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vkg_core::catalogue::{format_presentation, CatalogueEntry};
use vkg_core::invariants::{Invariant, InvariantRecord, Tier, TierSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("malformed cache record: {0}")]
    Malformed(String),
    #[error("schema version {found}, expected {SCHEMA_VERSION}")]
    Version { found: u32 },
    #[error("record is for group {found}, expected {expected}")]
    Identity { found: String, expected: String },
    #[error("presentation hash differs from the catalogue")]
    StaleHash,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct RecordFile {
    schema: u32,
    order: usize,
    id: usize,
    presentation_sha256: String,
    tiers: Vec<u8>,
    values: BTreeMap<String, u64>,
    runtimes_ms: BTreeMap<String, u64>,
}

/// Hex SHA-256 of the entry's presentation in catalogue syntax.
pub fn presentation_hash(entry: &CatalogueEntry) -> String {
    let digest = Sha256::digest(format_presentation(&entry.presentation).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn encode_record(record: &InvariantRecord, hash: &str) -> String {
    let file = RecordFile {
        schema: SCHEMA_VERSION,
        order: record.order,
        id: record.id,
        presentation_sha256: hash.to_string(),
        tiers: record.tiers.iter().map(|t| t as u8).collect(),
        values: record.values.iter().map(|(k, &v)| (k.name().to_string(), v)).collect(),
        runtimes_ms: record.runtimes_ms.iter().map(|(k, &v)| (k.name().to_string(), v)).collect(),
    };
    toml::to_string(&file).expect("record serializes")
}

/// Parses a record and returns it with its stored presentation hash.
/// Rejects unknown schema versions, unknown tiers or invariant names, and
/// records whose values do not cover their claimed tiers.
pub fn decode_record(text: &str) -> Result<(InvariantRecord, String), CacheError> {
    let file: RecordFile = toml::from_str(text).map_err(|e| CacheError::Malformed(e.message().to_string()))?;
    if file.schema != SCHEMA_VERSION {
        return Err(CacheError::Version { found: file.schema });
    }
    if !(1..=32).contains(&file.order) || !file.order.is_power_of_two() {
        return Err(CacheError::Malformed(format!("order {} out of range", file.order)));
    }
    let mut tiers = TierSet::default();
    for &t in &file.tiers {
        tiers.insert(Tier::from_number(t).ok_or_else(|| CacheError::Malformed(format!("unknown tier {t}")))?);
    }
    let names = |m: BTreeMap<String, u64>| -> Result<BTreeMap<Invariant, u64>, CacheError> {
        m.into_iter()
            .map(|(k, v)| {
                k.parse::<Invariant>().map(|i| (i, v)).map_err(|_| CacheError::Malformed(format!("unknown invariant `{k}`")))
            })
            .collect()
    };
    let values = names(file.values)?;
    let runtimes_ms = names(file.runtimes_ms)?;
    for tier in tiers.iter() {
        if let Some(missing) = tier.invariants().find(|i| !values.contains_key(i)) {
            return Err(CacheError::Malformed(format!("tier {} lacks {missing}", tier as u8)));
        }
    }
    let mut record = InvariantRecord::new(file.order, file.id);
    record.tiers = tiers;
    record.values = values;
    record.runtimes_ms = runtimes_ms;
    Ok((record, file.presentation_sha256))
}

/// Outcome of a cache lookup.
#[derive(Debug)]
pub enum Lookup {
    Hit(InvariantRecord),
    Miss,
    /// A file exists but cannot be used; it will be overwritten.
    Invalid(CacheError),
}

/// Directory of cached records. Writes are serialized and atomic (write to
/// a temporary file, then rename).
#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir, write_lock: Mutex::new(()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, order: usize, id: usize) -> PathBuf {
        self.dir.join(format!("g{order}_{id}.toml"))
    }

    pub fn load(&self, entry: &CatalogueEntry) -> Lookup {
        let text = match fs::read_to_string(self.path(entry.order, entry.id)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Invalid(CacheError::Malformed(e.to_string())),
        };
        match decode_record(&text) {
            Err(e) => Lookup::Invalid(e),
            Ok((record, _)) if (record.order, record.id) != (entry.order, entry.id) => Lookup::Invalid(CacheError::Identity {
                found: format!("{}#{}", record.order, record.id),
                expected: format!("{}#{}", entry.order, entry.id),
            }),
            Ok((_, hash)) if hash != presentation_hash(entry) => Lookup::Invalid(CacheError::StaleHash),
            Ok((record, _)) => Lookup::Hit(record),
        }
    }

    pub fn store(&self, entry: &CatalogueEntry, record: &InvariantRecord) -> std::io::Result<()> {
        let text = encode_record(record, &presentation_hash(entry));
        let _guard = self.write_lock.lock().unwrap_or_else(|e| e.into_inner());
        let target = self.path(entry.order, entry.id);
        let tmp = target.with_extension("toml.tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(tmp, target)
    }
}
