use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use vkg_core::catalogue::{default_catalogue, load_catalogue, Catalogue};
use vkg_core::invariants::{Invariant, InvariantRecord, Tier, TierSet};
use vkg_core::involutions::{build_quadratic_map, count_involutions, CountOptions, Progress};
use vkg_core::oracle::cross_check;
use vkg_core::algebra::MulTables;

use vkg_cli::cache::{Cache, Lookup};
use vkg_cli::pipeline::{compute_records, split_groups, Event, PipelineOptions};
use vkg_cli::report::{render_csv, render_markdown, report_csv};

#[derive(Parser)]
#[command(name = "vkg", version, about = "Invariants of normalized unit groups V(KG) for 2-groups of order up to 32 over GF(2)")]
struct Cli {
    /// Catalogue file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalogue: Option<PathBuf>,

    /// Directory for cached invariant records; caching is off when unset.
    #[arg(long, global = true, env = "VKG_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CountArgs {
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Top coordinates fixed per counting task (2^s tasks).
    #[arg(long, default_value_t = 8)]
    split_bits: usize,

    /// Coordinates handled by the tabulated inner block (0 = plain Gray walk).
    #[arg(long, default_value_t = 10)]
    inner_bits: usize,
}

impl CountArgs {
    fn options(&self) -> CountOptions {
        CountOptions { split_bits: self.split_bits, inner_bits: self.inner_bits, workers: None }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Catalogue operations.
    Catalogue {
        #[command(subcommand)]
        action: CatalogueAction,
    },
    /// Compute invariant records and print them as CSV.
    Invariants {
        #[arg(long)]
        order: usize,
        /// A single group (any catalogue group); default: all eligible groups.
        #[arg(long)]
        id: Option<usize>,
        #[arg(long, default_value = "1,2,3")]
        tiers: TierSet,
        /// Recompute even when a cached record exists.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        count: CountArgs,
    },
    /// Split the eligible groups of an order into families and write a report.
    Split {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "1,2,3")]
        tiers: TierSet,
        /// Markdown report path.
        #[arg(long)]
        report: PathBuf,
        /// CSV output path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Run every requested tier on every group, even ones already separated.
        #[arg(long)]
        no_early_stop: bool,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        count: CountArgs,
    },
    /// Count the involutions of V(KG) for one group.
    CountInvolutions {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        id: usize,
        #[command(flatten)]
        count: CountArgs,
    },
    /// Compare every fast invariant with brute force (order at most 16).
    Oracle {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        id: usize,
    },
}

#[derive(Subcommand)]
enum CatalogueAction {
    /// Parse, check consistency and fingerprints, and check id coverage.
    Verify,
}

fn report_event(e: Event) {
    match e {
        Event::CacheHit { order, id } => eprintln!("{order}#{id}: cached"),
        Event::CacheInvalid { order, id, reason } => eprintln!("warning: {order}#{id}: ignoring cache record ({reason})"),
        Event::CacheWriteFailed { order, id, reason } => eprintln!("warning: {order}#{id}: cannot write cache ({reason})"),
        Event::Computed { order, id, tier, millis } => eprintln!("{order}#{id}: tier {} in {millis} ms", tier as u8),
        Event::Failed { order, id, reason } => eprintln!("error: {order}#{id}: {reason}"),
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    let owned;
    let catalogue: &Catalogue = match &cli.catalogue {
        Some(path) => {
            owned = load_catalogue(path)?;
            &owned
        }
        None => default_catalogue(),
    };
    let cache = cli.cache_dir.as_ref().map(Cache::open).transpose()?;
    let events: &(dyn Fn(Event) + Sync) = &report_event;

    match cli.command {
        Command::Catalogue { action: CatalogueAction::Verify } => {
            catalogue.check_complete()?;
            let mut orders: Vec<usize> = catalogue.entries().iter().map(|e| e.order).collect();
            orders.dedup();
            for order in orders {
                let n = catalogue.of_order(order).count();
                match catalogue.eligible_groups(order) {
                    Ok(el) => println!("order {order}: {n} groups, {} eligible", el.len()),
                    Err(_) => println!("order {order}: {n} groups"),
                }
            }
            println!("catalogue ok: {} groups, presentations consistent, fingerprints match", catalogue.len());
            Ok(true)
        }
        Command::Invariants { order, id, tiers, force, count } => {
            let entries = match id {
                Some(id) => vec![catalogue.get(order, id)?],
                None => catalogue.eligible_groups(order)?,
            };
            let opts = PipelineOptions {
                tiers,
                force,
                threads: count.threads,
                count: count.options(),
                cache: cache.as_ref(),
                on_event: Some(events),
                ..Default::default()
            };
            let results = compute_records(&entries, &opts)?;
            let ok: Vec<_> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
            print!("{}", render_csv(ok.iter().copied(), tiers));
            Ok(ok.len() == results.len())
        }
        Command::Split { order, tiers, report, csv, no_early_stop, force, count } => {
            let opts = PipelineOptions {
                tiers,
                early_stop: !no_early_stop,
                force,
                threads: count.threads,
                count: count.options(),
                cache: cache.as_ref(),
                on_event: Some(events),
            };
            let start = Instant::now();
            let split = split_groups(catalogue, order, &opts)?;
            std::fs::write(&report, render_markdown(&split))?;
            if let Some(path) = csv {
                std::fs::write(path, report_csv(&split))?;
            }
            eprintln!(
                "{} families, {} unresolved pairs, {} failed, {:.1} s",
                split.families.len(),
                split.unresolved_pairs.len(),
                split.failed.len(),
                start.elapsed().as_secs_f64()
            );
            Ok(split.failed.is_empty())
        }
        Command::CountInvolutions { order, id, count } => {
            let entry = catalogue.get(order, id)?;
            let mut record = InvariantRecord::new(order, id);
            if let Some(c) = &cache {
                if let Lookup::Hit(r) = c.load(entry) {
                    if let Some(n) = r.involutions() {
                        eprintln!("cached in {}", c.dir().display());
                        println!("{n}");
                        return Ok(true);
                    }
                    record = r;
                }
            }
            let q = build_quadratic_map(&MulTables::new(&entry.table));
            let opts = CountOptions { workers: count.threads, ..count.options() };
            let start = Instant::now();
            let progress = |p: Progress| {
                if p.tasks_done % (p.tasks_total / 16).max(1) == 0 || p.tasks_done == p.tasks_total {
                    eprintln!("{}/{} tasks, {} points", p.tasks_done, p.tasks_total, p.points_done);
                }
            };
            let n = count_involutions(&q, &opts, Some(&progress))?;
            let millis = start.elapsed().as_millis() as u64;
            eprintln!("{:.2} s", millis as f64 / 1000.0);
            if let Some(c) = &cache {
                record.values.insert(Invariant::Involutions, n);
                record.runtimes_ms.insert(Invariant::Involutions, millis);
                record.tiers.insert(Tier::Census);
                if let Err(e) = c.store(entry, &record) {
                    eprintln!("warning: cannot write cache ({e})");
                }
            }
            println!("{n}");
            Ok(true)
        }
        Command::Oracle { order, id } => {
            let entry = catalogue.get(order, id)?;
            let mut all_ok = true;
            for c in cross_check(entry)? {
                let status = if c.passed() { "ok" } else { "MISMATCH" };
                println!("{:<44} fast={:<12} reference={:<12} {status}", c.name, c.fast, c.reference);
                all_ok &= c.passed();
            }
            Ok(all_ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
