//! Isomorphism invariants of V(KG), grouped into tiers by cost.
//!
//! The center is handled inside the algebra. A unit commuting with V also
//! commutes with every group element, hence with all of KG, so
//! `Z(V) = V ∩ Z(KG) = 1 + (Z(KG) ∩ I)`, of order `2^(k-1)` for `k`
//! conjugacy classes. On that abelian group `(1 + z)^2 = 1 + z^2`, and
//! squaring is additive on central elements, so exponent and involution
//! count come from one nilpotent linear map.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::algebra::{center_basis, ideal_power_filtration, weighted_basis, CenterBasis, MulTables};
use crate::catalogue::CatalogueEntry;
use crate::error::{Error, Result};
use crate::gf2::{Echelon, Matrix};
use crate::group::conjugacy_classes;
use crate::involutions::{build_quadratic_map, count_involutions, CountOptions, Progress};
use crate::subgroup::{frattini_subgroup, p_class};
use crate::unit_pc::{build_unit_pc_presentation, UnitPcPresentation};

/// `log2 |Z(V(KG))|`.
pub fn center_order(cb: &CenterBasis) -> usize {
    cb.k() - 1
}

/// The squaring map on `Z(KG) ∩ I`, in the basis of [`CenterBasis::ideal_part`].
pub fn center_squaring_map(cb: &CenterBasis, t: &MulTables) -> Result<Matrix> {
    let basis = cb.ideal_part();
    for (a, &x) in basis.iter().enumerate() {
        for &y in &basis[..a] {
            if t.multiply(x, y) != t.multiply(y, x) {
                return Err(Error::NonAdditive(format!("basis elements {:#x} and {:#x} do not commute", x.0, y.0)));
            }
        }
    }
    let span = Echelon::from_vectors(basis.iter().map(|z| z.0));
    let cols = basis
        .iter()
        .map(|&z| {
            let sq = t.square(z);
            span.solve(sq.0)
                .map(|c| c as u32)
                .ok_or_else(|| Error::NonAdditive(format!("square of {:#x} leaves the center", z.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(cols))
}

/// Exponent of `Z(V)`: `2^t` for the least `t` with `S^t = 0`.
pub fn center_exponent(s: &Matrix) -> u64 {
    1 << s.nilpotency_index().expect("squaring on the augmentation ideal is nilpotent")
}

/// Involutions of `Z(V)`: nonzero vectors in the kernel of `S`.
pub fn center_involutions(s: &Matrix) -> u64 {
    (1 << s.nullity()) - 1
}

/// The invariants computed per group, in ladder order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    CenterOrderLog2,
    FrattiniOrderLog2,
    CenterExponent,
    CenterInvolutions,
    PClass,
    Involutions,
}

impl Invariant {
    pub const ALL: [Invariant; 6] = [
        Invariant::CenterOrderLog2,
        Invariant::FrattiniOrderLog2,
        Invariant::CenterExponent,
        Invariant::CenterInvolutions,
        Invariant::PClass,
        Invariant::Involutions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::CenterOrderLog2 => "center_order_log2",
            Invariant::FrattiniOrderLog2 => "frattini_order_log2",
            Invariant::CenterExponent => "center_exponent",
            Invariant::CenterInvolutions => "center_involutions",
            Invariant::PClass => "p_class",
            Invariant::Involutions => "involutions",
        }
    }

    pub fn tier(self) -> Tier {
        match self {
            Invariant::CenterOrderLog2 | Invariant::FrattiniOrderLog2 => Tier::Cheap,
            Invariant::CenterExponent | Invariant::CenterInvolutions | Invariant::PClass => Tier::Secondary,
            Invariant::Involutions => Tier::Census,
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Invariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Invariant::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Presentation(format!("unknown invariant `{s}`")))
    }
}

/// 1: center and Frattini orders; 2: center exponent, central involutions,
/// p-class; 3: involution count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    Cheap = 1,
    Secondary = 2,
    Census = 3,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Cheap, Tier::Secondary, Tier::Census];

    pub fn from_number(n: u8) -> Option<Tier> {
        Tier::ALL.into_iter().find(|&t| t as u8 == n)
    }

    pub fn invariants(self) -> impl Iterator<Item = Invariant> {
        Invariant::ALL.into_iter().filter(move |i| i.tier() == self)
    }
}

/// A set of tiers as a bit mask (bit `t` for tier `t`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TierSet(pub u8);

impl TierSet {
    pub const ALL: TierSet = TierSet(0b1110);

    pub fn of(tiers: &[Tier]) -> Self {
        TierSet(tiers.iter().fold(0, |m, &t| m | 1 << t as u8))
    }

    pub fn contains(self, t: Tier) -> bool {
        self.0 >> t as u8 & 1 == 1
    }

    pub fn insert(&mut self, t: Tier) {
        self.0 |= 1 << t as u8;
    }

    pub fn union(self, other: TierSet) -> TierSet {
        TierSet(self.0 | other.0)
    }

    pub fn is_superset(self, other: TierSet) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tier> {
        Tier::ALL.into_iter().filter(move |&t| self.contains(t))
    }
}

impl FromStr for TierSet {
    type Err = Error;

    /// Comma-separated tier numbers, e.g. `1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = TierSet::default();
        for part in s.split(',') {
            let t = part
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(Tier::from_number)
                .ok_or_else(|| Error::CountParameters(format!("`{part}` is not a tier (1, 2 or 3)")))?;
            set.insert(t);
        }
        Ok(set)
    }
}

impl fmt::Display for TierSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|t| (t as u8).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// All invariants computed for one group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantRecord {
    pub order: usize,
    pub id: usize,
    pub v_order_log2: usize,
    pub tiers: TierSet,
    pub values: BTreeMap<Invariant, u64>,
    pub runtimes_ms: BTreeMap<Invariant, u64>,
}

impl InvariantRecord {
    pub fn new(order: usize, id: usize) -> Self {
        InvariantRecord { order, id, v_order_log2: order - 1, ..Default::default() }
    }

    pub fn get(&self, inv: Invariant) -> Option<u64> {
        self.values.get(&inv).copied()
    }

    pub fn center_order_log2(&self) -> Option<u64> {
        self.get(Invariant::CenterOrderLog2)
    }

    pub fn frattini_order_log2(&self) -> Option<u64> {
        self.get(Invariant::FrattiniOrderLog2)
    }

    pub fn center_exponent(&self) -> Option<u64> {
        self.get(Invariant::CenterExponent)
    }

    pub fn center_involutions(&self) -> Option<u64> {
        self.get(Invariant::CenterInvolutions)
    }

    pub fn p_class(&self) -> Option<u64> {
        self.get(Invariant::PClass)
    }

    pub fn involutions(&self) -> Option<u64> {
        self.get(Invariant::Involutions)
    }

    /// Copies in everything `other` has that `self` lacks.
    pub fn merge(&mut self, other: &InvariantRecord) {
        for (&k, &v) in &other.values {
            self.values.entry(k).or_insert(v);
        }
        for (&k, &v) in &other.runtimes_ms {
            self.runtimes_ms.entry(k).or_insert(v);
        }
        self.tiers = self.tiers.union(other.tiers);
    }
}

/// Knobs for [`compute_record`].
#[derive(Clone, Copy, Default)]
pub struct RecordOptions<'a> {
    pub count: CountOptions,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

/// Lazily built algebra data for one group.
struct Workspace<'e> {
    entry: &'e CatalogueEntry,
    tables: Option<Arc<MulTables>>,
    center: Option<(CenterBasis, Matrix)>,
    units: Option<UnitPcPresentation>,
}

impl<'e> Workspace<'e> {
    fn tables(&mut self) -> Arc<MulTables> {
        self.tables.get_or_insert_with(|| Arc::new(MulTables::new(&self.entry.table))).clone()
    }

    fn center(&mut self) -> Result<&(CenterBasis, Matrix)> {
        if self.center.is_none() {
            let t = self.tables();
            let cb = center_basis(&conjugacy_classes(&self.entry.table));
            let s = center_squaring_map(&cb, &t)?;
            self.center = Some((cb, s));
        }
        Ok(self.center.as_ref().unwrap())
    }

    fn units(&mut self) -> Result<&UnitPcPresentation> {
        if self.units.is_none() {
            let t = self.tables();
            let basis = Arc::new(weighted_basis(&ideal_power_filtration(&t)));
            self.units = Some(build_unit_pc_presentation(basis, t)?);
        }
        Ok(self.units.as_ref().unwrap())
    }

    fn compute(&mut self, inv: Invariant, opts: &RecordOptions) -> Result<u64> {
        Ok(match inv {
            Invariant::CenterOrderLog2 => center_order(&self.center()?.0) as u64,
            Invariant::CenterExponent => center_exponent(&self.center()?.1),
            Invariant::CenterInvolutions => center_involutions(&self.center()?.1),
            Invariant::FrattiniOrderLog2 => frattini_subgroup(self.units()?.pc()).order_log2() as u64,
            Invariant::PClass => p_class(self.units()?.pc()) as u64,
            Invariant::Involutions => {
                let q = build_quadratic_map(&self.tables());
                count_involutions(&q, &opts.count, opts.progress)?
            }
        })
    }
}

/// Computes every invariant of the requested tiers. Each runtime includes
/// whatever shared setup (tables, center basis, unit presentation) the
/// invariant was first to need.
pub fn compute_record(entry: &CatalogueEntry, tiers: TierSet, opts: &RecordOptions) -> Result<InvariantRecord> {
    let mut ws = Workspace { entry, tables: None, center: None, units: None };
    let mut record = InvariantRecord::new(entry.order, entry.id);
    for tier in tiers.iter() {
        for inv in tier.invariants() {
            let start = Instant::now();
            let value = ws.compute(inv, opts)?;
            record.values.insert(inv, value);
            record.runtimes_ms.insert(inv, start.elapsed().as_millis() as u64);
        }
        record.tiers.insert(tier);
    }
    Ok(record)
}
