//! Markdown and CSV rendering of a [`SplitReport`].
//!
//! The Markdown report holds no timings or timestamps, so identical inputs
//! give byte-identical output. Runtimes go to the CSV only.

use std::fmt::Write as _;

use vkg_core::invariants::{Invariant, InvariantRecord};

use crate::pipeline::SplitReport;

/// Shown wherever a value was not computed.
pub const PLACEHOLDER: &str = "n/c";

/// `2^a·p1^e1·p2...` for a positive integer.
pub fn factorize(mut n: u64) -> String {
    assert!(n > 0);
    let mut parts = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        match e {
            0 => {}
            1 => parts.push(p.to_string()),
            _ => parts.push(format!("{p}^{e}")),
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 || parts.is_empty() {
        parts.push(n.to_string());
    }
    parts.join("·")
}

fn cell(record: Option<&InvariantRecord>, inv: Invariant) -> String {
    let Some(v) = record.and_then(|r| r.get(inv)) else { return PLACEHOLDER.to_string() };
    match inv {
        Invariant::CenterOrderLog2 | Invariant::FrattiniOrderLog2 => format!("2^{v}"),
        _ => v.to_string(),
    }
}

fn ids(list: &[usize]) -> String {
    list.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

pub fn render_markdown(report: &SplitReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Invariants of V(KG) for groups of order {}\n", report.order);
    let _ = writeln!(s, "- Toolkit: {}", report.version);
    let _ = writeln!(s, "- Tiers: {}{}", report.tiers, if report.early_stop { " (early stop)" } else { "" });
    let _ = writeln!(s, "- Eligible groups: {}", report.eligible.len());
    let _ = writeln!(s, "- Placeholder `{PLACEHOLDER}`: not computed (tier not requested, or the group was already separated)\n");

    let _ = writeln!(s, "## Families after the first tier\n");
    let _ = writeln!(s, "| Family | Catalogue numbers | Order of the center of V(KG) | Order of the Frattini subgroup of V(KG) |");
    let _ = writeln!(s, "|---:|---|---:|---:|");
    for (k, family) in report.initial_families.iter().enumerate() {
        let first = family.first().and_then(|id| report.records.get(id));
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            k + 1,
            ids(family),
            cell(first, Invariant::CenterOrderLog2),
            cell(first, Invariant::FrattiniOrderLog2)
        );
    }

    let _ = writeln!(s, "\n## Invariants per group\n");
    let _ = writeln!(
        s,
        "| Catalogue number | Family | Center | Frattini subgroup | Center exponent | Central involutions | p-class | Involutions | Solutions of u^2 = 1 |"
    );
    let _ = writeln!(s, "|---:|---:|---:|---:|---:|---:|---:|---:|---:|");
    for (id, r) in &report.records {
        let family = report.initial_family_of(*id).map_or(PLACEHOLDER.to_string(), |f| f.to_string());
        let roots = r.involutions().map_or(PLACEHOLDER.to_string(), |n| factorize(n + 1));
        let _ = write!(s, "| {id} | {family} |");
        for inv in Invariant::ALL {
            let _ = write!(s, " {} |", cell(Some(r), inv));
        }
        let _ = writeln!(s, " {roots} |");
    }

    let _ = writeln!(s, "\n## Pairs within a family\n");
    if report.resolution.is_empty() {
        let _ = writeln!(s, "None.");
    } else {
        let _ = writeln!(s, "| Family | Pair | Separated by |");
        let _ = writeln!(s, "|---:|---|---|");
        for r in &report.resolution {
            let family = report.initial_family_of(r.pair.0).unwrap_or(0);
            let by = r.separated_by.map_or("unresolved", Invariant::name);
            let _ = writeln!(s, "| {family} | {}, {} | {by} |", r.pair.0, r.pair.1);
        }
    }

    let _ = writeln!(s, "\n## Unresolved pairs\n");
    if report.unresolved_pairs.is_empty() {
        let _ = writeln!(s, "None.");
    }
    for (a, b) in &report.unresolved_pairs {
        let _ = writeln!(s, "- {a}, {b}");
    }

    let _ = writeln!(s, "\n## Failed groups\n");
    if report.failed.is_empty() {
        let _ = writeln!(s, "None.");
    }
    for (id, e) in &report.failed {
        let _ = writeln!(s, "- {id}: {e}");
    }
    s
}

/// Rows `order,id,invariant,value,runtime_ms` for every invariant of every
/// requested tier; missing values use the placeholder and an empty runtime.
pub fn render_csv<'a>(records: impl IntoIterator<Item = &'a InvariantRecord>, tiers: vkg_core::invariants::TierSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["order", "id", "invariant", "value", "runtime_ms"]).expect("write to memory");
    for r in records {
        for inv in Invariant::ALL.into_iter().filter(|i| tiers.contains(i.tier())) {
            let value = r.get(inv).map_or(PLACEHOLDER.to_string(), |v| v.to_string());
            let ms = r.runtimes_ms.get(&inv).map_or(String::new(), |v| v.to_string());
            w.write_record([r.order.to_string(), r.id.to_string(), inv.name().to_string(), value, ms])
                .expect("write to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output")
}

pub fn report_csv(report: &SplitReport) -> String {
    render_csv(report.records.values(), report.tiers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use vkg_core::invariants::TierSet;

    #[test]
    fn factorization() {
        assert_eq!(factorize(4980736), "2^18·19");
        assert_eq!(factorize(4095), "3^2·5·7·13");
        assert_eq!(factorize(1), "1");
        assert_eq!(factorize(2), "2");
    }

    #[test]
    fn empty_report_has_headers_only() {
        let report = SplitReport {
            order: 16,
            tiers: TierSet::ALL,
            early_stop: true,
            eligible: vec![],
            records: BTreeMap::new(),
            initial_families: vec![],
            families: vec![],
            resolution: vec![],
            unresolved_pairs: vec![],
            failed: vec![],
            version: "vkg test",
        };
        let md = render_markdown(&report);
        assert!(md.contains("| Family | Catalogue numbers |"));
        assert_eq!(md.matches("None.").count(), 3);
        assert_eq!(report_csv(&report), "order,id,invariant,value,runtime_ms\n");
    }
}
