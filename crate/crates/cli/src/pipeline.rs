//! Runs the invariant ladder over the eligible groups of one order and
//! splits them into families.
//!
//! Tiers run in ascending order. After each tier every family is split by
//! the values of that tier's invariants; with early stop, a group that is
//! already alone in its family is not sent to later tiers.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use vkg_core::catalogue::{Catalogue, CatalogueEntry};
use vkg_core::invariants::{compute_record, Invariant, InvariantRecord, RecordOptions, Tier, TierSet};
use vkg_core::involutions::CountOptions;

use crate::cache::{Cache, Lookup};

pub const TOOLKIT_VERSION: &str = concat!("vkg ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Core(#[from] vkg_core::Error),
    #[error("cannot build a pool of {threads} worker threads: {message}")]
    Pool { threads: usize, message: String },
}

/// Messages for the caller to show (the CLI prints them to stderr).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    CacheHit { order: usize, id: usize },
    CacheInvalid { order: usize, id: usize, reason: String },
    CacheWriteFailed { order: usize, id: usize, reason: String },
    Computed { order: usize, id: usize, tier: Tier, millis: u64 },
    Failed { order: usize, id: usize, reason: String },
}

pub struct PipelineOptions<'a> {
    pub tiers: TierSet,
    /// Skip later tiers for groups already alone in their family.
    pub early_stop: bool,
    /// Ignore cached records (results are still written).
    pub force: bool,
    pub threads: Option<usize>,
    pub count: CountOptions,
    pub cache: Option<&'a Cache>,
    pub on_event: Option<&'a (dyn Fn(Event) + Sync)>,
}

impl Default for PipelineOptions<'_> {
    fn default() -> Self {
        PipelineOptions {
            tiers: TierSet::ALL,
            early_stop: true,
            force: false,
            threads: None,
            count: CountOptions::default(),
            cache: None,
            on_event: None,
        }
    }
}

impl PipelineOptions<'_> {
    fn emit(&self, e: Event) {
        if let Some(f) = self.on_event {
            f(e);
        }
    }

    /// Runs `f` inside a pool of the requested size (or the ambient pool).
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, PipelineError> {
        match self.threads {
            None => Ok(f()),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| PipelineError::Pool { threads: n, message: e.to_string() }),
        }
    }
}

/// A cached record, if usable, honoring `force`.
fn cached(entry: &CatalogueEntry, opts: &PipelineOptions) -> InvariantRecord {
    let empty = InvariantRecord::new(entry.order, entry.id);
    let Some(cache) = opts.cache.filter(|_| !opts.force) else { return empty };
    match cache.load(entry) {
        Lookup::Hit(r) => {
            opts.emit(Event::CacheHit { order: entry.order, id: entry.id });
            r
        }
        Lookup::Miss => empty,
        Lookup::Invalid(e) => {
            opts.emit(Event::CacheInvalid { order: entry.order, id: entry.id, reason: e.to_string() });
            empty
        }
    }
}

/// Brings `record` up to date with `tier`, computing it unless already
/// present, and writes the cache when something new was computed.
fn ensure_tier(entry: &CatalogueEntry, record: &mut InvariantRecord, tier: Tier, opts: &PipelineOptions) -> Result<(), String> {
    if record.tiers.contains(tier) {
        return Ok(());
    }
    let start = Instant::now();
    let ropts = RecordOptions { count: CountOptions { workers: None, ..opts.count }, progress: None };
    let fresh = compute_record(entry, TierSet::of(&[tier]), &ropts).map_err(|e| e.to_string())?;
    record.merge(&fresh);
    opts.emit(Event::Computed { order: entry.order, id: entry.id, tier, millis: start.elapsed().as_millis() as u64 });
    if let Some(cache) = opts.cache {
        if let Err(e) = cache.store(entry, record) {
            opts.emit(Event::CacheWriteFailed { order: entry.order, id: entry.id, reason: e.to_string() });
        }
    }
    Ok(())
}

/// Records for the given entries with all requested tiers, computed in
/// parallel. Failures are returned per group.
pub fn compute_records(entries: &[&CatalogueEntry], opts: &PipelineOptions) -> Result<Vec<Result<InvariantRecord, String>>, PipelineError> {
    opts.install(|| {
        entries
            .par_iter()
            .map(|&entry| {
                let mut record = cached(entry, opts);
                for tier in opts.tiers.iter() {
                    if let Err(e) = ensure_tier(entry, &mut record, tier, opts) {
                        opts.emit(Event::Failed { order: entry.order, id: entry.id, reason: e.clone() });
                        return Err(e);
                    }
                }
                Ok(record)
            })
            .collect()
    })
}

/// How a pair inside one initial family was told apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairResolution {
    pub pair: (usize, usize),
    /// First invariant in ladder order on which the two differ.
    pub separated_by: Option<Invariant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub order: usize,
    pub tiers: TierSet,
    pub early_stop: bool,
    pub eligible: Vec<usize>,
    pub records: BTreeMap<usize, InvariantRecord>,
    /// Partition after the first requested tier (for tier 1 these are the
    /// center/Frattini families), ordered by invariant values.
    pub initial_families: Vec<Vec<usize>>,
    /// Final partition after all requested tiers.
    pub families: Vec<Vec<usize>>,
    pub resolution: Vec<PairResolution>,
    pub unresolved_pairs: Vec<(usize, usize)>,
    pub failed: Vec<(usize, String)>,
    pub version: &'static str,
}

impl SplitReport {
    /// Index (from 1) of the initial family containing `id`.
    pub fn initial_family_of(&self, id: usize) -> Option<usize> {
        self.initial_families.iter().position(|f| f.contains(&id)).map(|k| k + 1)
    }
}

/// Splits every family by the values of `tier`'s invariants; singletons stay.
fn refine(families: Vec<Vec<usize>>, records: &BTreeMap<usize, InvariantRecord>, tier: Tier) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for family in families {
        if family.len() < 2 {
            out.push(family);
            continue;
        }
        let mut parts: BTreeMap<Vec<Option<u64>>, Vec<usize>> = BTreeMap::new();
        for id in family {
            let key = tier.invariants().map(|i| records[&id].get(i)).collect();
            parts.entry(key).or_default().push(id);
        }
        out.extend(parts.into_values());
    }
    out
}

/// Runs the ladder over the eligible groups of `order`.
pub fn split_groups(catalogue: &Catalogue, order: usize, opts: &PipelineOptions) -> Result<SplitReport, PipelineError> {
    let entries = catalogue.eligible_groups(order)?;
    let by_id: BTreeMap<usize, &CatalogueEntry> = entries.iter().map(|e| (e.id, *e)).collect();
    let mut records: BTreeMap<usize, InvariantRecord> = entries.iter().map(|e| (e.id, cached(e, opts))).collect();
    let mut failed: Vec<(usize, String)> = Vec::new();
    let mut families = vec![entries.iter().map(|e| e.id).collect::<Vec<_>>()];
    let mut initial_families = None;

    for tier in opts.tiers.iter() {
        let todo: Vec<usize> = families
            .iter()
            .filter(|f| !opts.early_stop || f.len() > 1)
            .flatten()
            .copied()
            .collect();
        let results: Vec<(usize, InvariantRecord, Result<(), String>)> = opts.install(|| {
            todo.par_iter()
                .map(|id| {
                    let mut record = records[id].clone();
                    let r = ensure_tier(by_id[id], &mut record, tier, opts);
                    (*id, record, r)
                })
                .collect()
        })?;
        for (id, record, r) in results {
            records.insert(id, record);
            if let Err(e) = r {
                opts.emit(Event::Failed { order, id, reason: e.clone() });
                failed.push((id, e));
            }
        }
        for f in &mut families {
            f.retain(|id| !failed.iter().any(|(bad, _)| bad == id));
        }
        families.retain(|f| !f.is_empty());
        families = refine(families, &records, tier);
        if initial_families.is_none() {
            initial_families = Some(families.clone());
        }
    }
    let initial_families = initial_families.unwrap_or_else(|| families.clone());

    let mut resolution = Vec::new();
    for family in &initial_families {
        for (k, &a) in family.iter().enumerate() {
            for &b in &family[k + 1..] {
                let separated_by = Invariant::ALL.into_iter().find(|&i| match (records[&a].get(i), records[&b].get(i)) {
                    (Some(x), Some(y)) => x != y,
                    _ => false,
                });
                resolution.push(PairResolution { pair: (a, b), separated_by });
            }
        }
    }
    let unresolved_pairs = resolution.iter().filter(|r| r.separated_by.is_none()).map(|r| r.pair).collect();
    failed.sort();
    failed.dedup_by_key(|f| f.0);
    for (id, _) in &failed {
        records.remove(id);
    }
    Ok(SplitReport {
        order,
        tiers: opts.tiers,
        early_stop: opts.early_stop,
        eligible: entries.iter().map(|e| e.id).collect(),
        records,
        initial_families,
        families,
        resolution,
        unresolved_pairs,
        failed,
        version: TOOLKIT_VERSION,
    })
}
