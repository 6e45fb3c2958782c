//! The group catalogue: PC presentations of all groups of order at most 32,
//! numbered as in the SmallGroups library.
//!
//! File format, one block per group:
//!
//! ```text
//! group <order> <id>
//! ngens <n>
//! p <i> : <j1> <j2> ...     g_i^2 = g_j1 g_j2 ...      (omitted if trivial)
//! c <j> <i> : <k1> ...      [g_j, g_i] = g_k1 ...       (j > i; omitted if trivial)
//! fp classes=<k> center=<z> derived=<d> exponent=<e> abelian=<0|1> maxclass=<0|1> [abinv=<a1,a2,...>]
//! end
//! ```
//!
//! Generator indices are 1-based and tails list strictly increasing indices.
//! `#` starts a comment that runs to the end of the line; blank lines are
//! ignored. Tokens are separated by ASCII whitespace; `:` must stand alone.
//!
//! The `fp` line is a fingerprint. It is recomputed from the presentation on
//! every load and a mismatch is a hard error, so data corruption or a
//! numbering slip cannot go unnoticed.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{
    abelian_invariants, build_group_table, center_of_group, conjugacy_classes, derived_subgroup,
    nilpotency_class, GroupPresentation, GroupTable, MAX_TABLE_GENS,
};
use crate::pc::Exponents;

const EMBEDDED: &str = include_str!("../data/catalogue.txt");

/// Number of groups of each order `2^k`, `k = 0..=5`.
const GROUP_COUNTS: [(usize, usize); 6] = [(1, 1), (2, 1), (4, 2), (8, 5), (16, 14), (32, 51)];

/// Orders for which the unit-group comparison is run.
pub const TARGET_ORDERS: [usize; 2] = [16, 32];

pub fn number_of_groups(order: usize) -> Option<usize> {
    GROUP_COUNTS.iter().find(|&&(o, _)| o == order).map(|&(_, n)| n)
}

/// Structural data used to check that a presentation is the group it claims
/// to be.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub classes: usize,
    pub center: usize,
    pub derived: usize,
    pub exponent: usize,
    pub abelian: bool,
    pub max_class: bool,
    /// Invariants of G/G'; optional in files.
    pub abelian_invariants: Option<Vec<usize>>,
}

impl Fingerprint {
    pub fn compute(table: &GroupTable) -> Self {
        let n = table.order().trailing_zeros() as usize;
        Fingerprint {
            classes: conjugacy_classes(table).len(),
            center: center_of_group(table).len(),
            derived: derived_subgroup(table).len(),
            exponent: table.exponent(),
            abelian: table.is_abelian(),
            max_class: n >= 3 && nilpotency_class(table) == n - 1,
            abelian_invariants: Some(abelian_invariants(table)),
        }
    }

    /// Name of the first field where `stored` disagrees with `self`.
    fn mismatch(&self, stored: &Fingerprint) -> Option<String> {
        let fields = [
            ("classes", self.classes, stored.classes),
            ("center", self.center, stored.center),
            ("derived", self.derived, stored.derived),
            ("exponent", self.exponent, stored.exponent),
            ("abelian", self.abelian as usize, stored.abelian as usize),
            ("maxclass", self.max_class as usize, stored.max_class as usize),
        ];
        for (name, computed, expected) in fields {
            if computed != expected {
                return Some(format!("{name}: stored {expected}, computed {computed}"));
            }
        }
        if let (Some(a), Some(b)) = (&self.abelian_invariants, &stored.abelian_invariants) {
            if a != b {
                return Some(format!("abinv: stored {b:?}, computed {a:?}"));
            }
        }
        None
    }
}

/// A block as written in the file, before any group-theoretic checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntry {
    pub order: usize,
    pub id: usize,
    pub ngens: usize,
    /// 0-based power tails.
    pub power: Vec<Exponents>,
    /// `((j, i), tail)` with 0-based `j > i`.
    pub comms: Vec<((usize, usize), Exponents)>,
    pub fingerprint: Fingerprint,
    /// Line of the `group` header.
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub order: usize,
    pub id: usize,
    pub presentation: GroupPresentation,
    pub fingerprint: Fingerprint,
    pub table: GroupTable,
}

impl CatalogueEntry {
    /// Builds and validates an entry: presentation well formed, consistent
    /// (checked by building the full table), of the stated order, and
    /// matching its stored fingerprint.
    pub fn from_raw(raw: &RawEntry) -> Result<Self> {
        let fail = |message: String| Error::Fingerprint { order: raw.order, id: raw.id, message };
        let presentation = GroupPresentation::new(raw.ngens, raw.power.clone(), raw.comms.iter().copied())
            .map_err(|e| fail(e.to_string()))?;
        let table = build_group_table(&presentation).map_err(|e| fail(e.to_string()))?;
        if table.order() != raw.order {
            return Err(fail(format!("presentation defines a group of order {}", table.order())));
        }
        let fingerprint = Fingerprint::compute(&table);
        if let Some(m) = fingerprint.mismatch(&raw.fingerprint) {
            return Err(fail(m));
        }
        Ok(CatalogueEntry { order: raw.order, id: raw.id, presentation, fingerprint, table })
    }
}

/// All loaded entries, sorted by `(order, id)`.
#[derive(Clone, Debug)]
pub struct Catalogue {
    entries: Vec<CatalogueEntry>,
}

impl Catalogue {
    pub fn entries(&self) -> &[CatalogueEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, order: usize, id: usize) -> Result<&CatalogueEntry> {
        self.entries
            .binary_search_by_key(&(order, id), |e| (e.order, e.id))
            .map(|k| &self.entries[k])
            .map_err(|_| Error::UnknownGroup { order, id })
    }

    pub fn of_order(&self, order: usize) -> impl Iterator<Item = &CatalogueEntry> {
        self.entries.iter().filter(move |e| e.order == order)
    }

    /// Groups of order 16 or 32 that are neither abelian nor of maximal
    /// class.
    pub fn eligible_groups(&self, order: usize) -> Result<Vec<&CatalogueEntry>> {
        if !TARGET_ORDERS.contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(self.of_order(order).filter(|e| !e.fingerprint.abelian && !e.fingerprint.max_class).collect())
    }

    /// Checks that every order present has all of its ids.
    pub fn check_complete(&self) -> Result<()> {
        let mut per_order: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.entries {
            *per_order.entry(e.order).or_default() += 1;
        }
        for (order, n) in per_order {
            let expected = number_of_groups(order).ok_or(Error::UnsupportedOrder(order))?;
            if n != expected {
                return Err(Error::Fingerprint {
                    order,
                    id: 0,
                    message: format!("{n} groups listed, expected {expected}"),
                });
            }
        }
        Ok(())
    }
}

/// Parses and validates catalogue text. Nothing is returned unless every
/// entry passes.
pub fn parse_catalogue(text: &str, path: &str) -> Result<Catalogue> {
    let raw = parse_raw(text, path)?;
    let mut entries = Vec::with_capacity(raw.len());
    for r in &raw {
        entries.push(CatalogueEntry::from_raw(r)?);
    }
    entries.sort_by_key(|e| (e.order, e.id));
    Ok(Catalogue { entries })
}

pub fn load_catalogue(path: impl AsRef<Path>) -> Result<Catalogue> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_catalogue(&text, &path.display().to_string())
}

/// The catalogue shipped with the crate.
pub fn default_catalogue() -> &'static Catalogue {
    static CATALOGUE: OnceLock<Catalogue> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let c = parse_catalogue(EMBEDDED, "<embedded catalogue>").expect("embedded catalogue is valid");
        c.check_complete().expect("embedded catalogue is complete");
        c
    })
}

pub fn embedded_catalogue_text() -> &'static str {
    EMBEDDED
}

/// Presentation in catalogue syntax (`ngens`, `p` and `c` lines), the form
/// used for content hashing.
pub fn format_presentation(p: &GroupPresentation) -> String {
    let word = |w: Exponents| -> String {
        crate::gf2::bits_of(w).map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = format!("ngens {}\n", p.ngens());
    for i in 0..p.ngens() {
        let w = p.power_tail(i);
        if w != 0 {
            out += &format!("p {} : {}\n", i + 1, word(w));
        }
    }
    for ((j, i), w) in p.commutator_tails() {
        out += &format!("c {} {} : {}\n", j + 1, i + 1, word(w));
    }
    out
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (k, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
        if ch.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &content[s..k], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    tokens
}

struct Parser<'a> {
    path: &'a str,
    line: usize,
    line_len: usize,
}

impl Parser<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_string(), line: self.line, column, message: message.into() }
    }

    fn number(&self, tok: &Token) -> Result<usize> {
        if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(tok.column, format!("expected a number, found `{}`", tok.text)));
        }
        tok.text.parse().map_err(|_| self.err(tok.column, format!("number `{}` is too large", tok.text)))
    }

    fn expect_len(&self, tokens: &[Token], n: usize, what: &str) -> Result<()> {
        match tokens.len().cmp(&n) {
            std::cmp::Ordering::Less => Err(self.err(self.line_len + 1, format!("incomplete `{what}` line"))),
            std::cmp::Ordering::Greater => Err(self.err(tokens[n].column, "unexpected token")),
            std::cmp::Ordering::Equal => Ok(()),
        }
    }

    /// 1-based generator index in `1..=ngens`, returned 0-based.
    fn generator(&self, tok: &Token, ngens: usize) -> Result<usize> {
        let g = self.number(tok)?;
        if g == 0 || g > ngens {
            return Err(self.err(tok.column, format!("generator {g} out of range 1..={ngens}")));
        }
        Ok(g - 1)
    }

    /// `: k1 k2 ...` with strictly increasing indices above `floor`.
    fn tail(&self, tokens: &[Token], ngens: usize, floor: usize) -> Result<Exponents> {
        let Some(colon) = tokens.first() else {
            return Err(self.err(self.line_len + 1, "expected `:`"));
        };
        if colon.text != ":" {
            return Err(self.err(colon.column, format!("expected `:`, found `{}`", colon.text)));
        }
        if tokens.len() == 1 {
            return Err(self.err(self.line_len + 1, "empty tail; omit the line instead"));
        }
        let mut mask: Exponents = 0;
        let mut last = floor;
        for tok in &tokens[1..] {
            let g = self.generator(tok, ngens)?;
            if g <= last {
                return Err(self.err(tok.column, "tail indices must increase and exceed the defining generators"));
            }
            mask |= 1 << g;
            last = g;
        }
        Ok(mask)
    }

    fn fingerprint(&self, tokens: &[Token]) -> Result<Fingerprint> {
        let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for tok in tokens {
            let Some((key, value)) = tok.text.split_once('=') else {
                return Err(self.err(tok.column, format!("expected key=value, found `{}`", tok.text)));
            };
            if !["classes", "center", "derived", "exponent", "abelian", "maxclass", "abinv"].contains(&key) {
                return Err(self.err(tok.column, format!("unknown fingerprint field `{key}`")));
            }
            if values.insert(key, (tok.column, value)).is_some() {
                return Err(self.err(tok.column, format!("duplicate fingerprint field `{key}`")));
            }
        }
        let num = |key: &str| -> Result<usize> {
            let &(column, value) =
                values.get(key).ok_or_else(|| self.err(self.line_len + 1, format!("missing fingerprint field `{key}`")))?;
            self.number(&Token { text: value, column: column + key.len() + 1 })
        };
        let flag = |key: &str| -> Result<bool> {
            match num(key)? {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(self.err(values[key].0, format!("`{key}` must be 0 or 1"))),
            }
        };
        let abelian_invariants = match values.get("abinv") {
            None => None,
            Some(&(column, value)) => {
                let mut inv = Vec::new();
                let mut col = column + "abinv=".len();
                for part in value.split(',') {
                    inv.push(self.number(&Token { text: part, column: col })?);
                    col += part.len() + 1;
                }
                Some(inv)
            }
        };
        Ok(Fingerprint {
            classes: num("classes")?,
            center: num("center")?,
            derived: num("derived")?,
            exponent: num("exponent")?,
            abelian: flag("abelian")?,
            max_class: flag("maxclass")?,
            abelian_invariants,
        })
    }
}

struct Block {
    order: usize,
    id: usize,
    line: usize,
    ngens: Option<usize>,
    power: BTreeMap<usize, Exponents>,
    comms: BTreeMap<(usize, usize), Exponents>,
    fingerprint: Option<Fingerprint>,
}

/// Grammar-level parse with no group-theoretic validation. Every returned
/// entry has a consistent header, in-range indices and a complete
/// fingerprint line; ids are unique per order.
pub fn parse_raw(text: &str, path: &str) -> Result<Vec<RawEntry>> {
    let mut p = Parser { path, line: 0, line_len: 0 };
    let mut out: Vec<RawEntry> = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut block: Option<Block> = None;
    for (k, line) in text.lines().enumerate() {
        p.line = k + 1;
        p.line_len = line.split('#').next().unwrap_or("").trim_end().len();
        let tokens = tokenize(line);
        let Some(head) = tokens.first() else { continue };
        match (head.text, block.as_mut()) {
            ("group", None) => {
                p.expect_len(&tokens, 3, "group")?;
                let order = p.number(&tokens[1])?;
                let id = p.number(&tokens[2])?;
                let Some(count) = number_of_groups(order) else {
                    return Err(p.err(tokens[1].column, format!("order {order} is not a power of two up to 32")));
                };
                if id == 0 || id > count {
                    return Err(p.err(tokens[2].column, format!("id {id} out of range 1..={count} for order {order}")));
                }
                if let Some(prev) = seen.insert((order, id), p.line) {
                    return Err(p.err(head.column, format!("group {order} {id} already defined on line {prev}")));
                }
                block = Some(Block {
                    order,
                    id,
                    line: p.line,
                    ngens: None,
                    power: BTreeMap::new(),
                    comms: BTreeMap::new(),
                    fingerprint: None,
                });
            }
            (_, None) => return Err(p.err(head.column, format!("expected `group`, found `{}`", head.text))),
            ("group", Some(b)) => {
                return Err(p.err(head.column, format!("block for group {} {} is not closed", b.order, b.id)))
            }
            ("ngens", Some(b)) => {
                if b.ngens.is_some() {
                    return Err(p.err(head.column, "duplicate `ngens`"));
                }
                p.expect_len(&tokens, 2, "ngens")?;
                let n = p.number(&tokens[1])?;
                if n > MAX_TABLE_GENS || 1usize << n != b.order {
                    return Err(p.err(tokens[1].column, format!("group of order {} needs {} generators", b.order, b.order.trailing_zeros())));
                }
                b.ngens = Some(n);
            }
            (_, Some(b)) if b.ngens.is_none() => return Err(p.err(head.column, "expected `ngens`")),
            (_, Some(b)) if b.fingerprint.is_some() && head.text != "end" => {
                return Err(p.err(head.column, "expected `end` after the fingerprint"))
            }
            ("p", Some(b)) => {
                let n = b.ngens.unwrap();
                if tokens.len() < 2 {
                    return Err(p.err(p.line_len + 1, "incomplete `p` line"));
                }
                let i = p.generator(&tokens[1], n)?;
                let tail = p.tail(&tokens[2..], n, i)?;
                if b.power.insert(i, tail).is_some() {
                    return Err(p.err(tokens[1].column, format!("power of g{} given twice", i + 1)));
                }
            }
            ("c", Some(b)) => {
                let n = b.ngens.unwrap();
                if tokens.len() < 3 {
                    return Err(p.err(p.line_len + 1, "incomplete `c` line"));
                }
                let j = p.generator(&tokens[1], n)?;
                let i = p.generator(&tokens[2], n)?;
                if j <= i {
                    return Err(p.err(tokens[2].column, "commutator [g_j, g_i] needs j > i"));
                }
                let tail = p.tail(&tokens[3..], n, i)?;
                if b.comms.insert((j, i), tail).is_some() {
                    return Err(p.err(tokens[1].column, format!("commutator [g{}, g{}] given twice", j + 1, i + 1)));
                }
            }
            ("fp", Some(b)) => b.fingerprint = Some(p.fingerprint(&tokens[1..])?),
            ("end", Some(b)) => {
                p.expect_len(&tokens, 1, "end")?;
                let Some(fingerprint) = b.fingerprint.take() else {
                    return Err(p.err(head.column, "missing `fp` line"));
                };
                let n = b.ngens.unwrap();
                let mut power = vec![0; n];
                for (&i, &t) in &b.power {
                    power[i] = t;
                }
                out.push(RawEntry {
                    order: b.order,
                    id: b.id,
                    ngens: n,
                    power,
                    comms: b.comms.iter().map(|(&k, &v)| (k, v)).collect(),
                    fingerprint,
                    line: b.line,
                });
                block = None;
            }
            (other, Some(_)) => return Err(p.err(head.column, format!("unknown directive `{other}`"))),
        }
    }
    if let Some(b) = block {
        p.line += 1;
        return Err(p.err(1, format!("unexpected end of file inside the block for group {} {}", b.order, b.id)));
    }
    Ok(out)
}
