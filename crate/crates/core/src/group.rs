//! Finite 2-groups of order at most 32: presentations, multiplication tables
//! and brute-force subgroup machinery.

use crate::error::{Error, Result};
use crate::gf2::bits_of;
use crate::pc::{Exponents, Letter, PcPresentation};

/// A 2-group given by a consistent power-commutator presentation.
pub type GroupPresentation = PcPresentation;

/// Exponent vector of a normal form in a [`GroupPresentation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Exponents);

/// Largest group handled by [`GroupTable`].
pub const MAX_TABLE_GENS: usize = 5;

/// Collects `word` into its normal form.
pub fn collect_normal_form(pres: &GroupPresentation, word: &[Letter]) -> Result<GroupElement> {
    pres.collect_word(word).map(GroupElement)
}

/// A set of elements of a group of order at most 32, as a bit mask over
/// element indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(pub u32);

impl ElementSet {
    pub fn singleton(x: usize) -> Self {
        ElementSet(1 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits_of(self.0)
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::default();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

/// Fully enumerated multiplication table. Element `x` is the normal word with
/// exponent mask `x`, so the identity has index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id_index(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn all(&self) -> ElementSet {
        ElementSet(if self.order == 32 { !0 } else { (1u32 << self.order) - 1 })
    }

    pub fn trivial(&self) -> ElementSet {
        ElementSet::singleton(0)
    }

    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).max().unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

/// Enumerates all normal forms and tabulates the multiplication, checking
/// that the result really is a group of order `2^ngens`.
pub fn build_group_table(pres: &GroupPresentation) -> Result<GroupTable> {
    let n = pres.ngens();
    if n > MAX_TABLE_GENS {
        return Err(Error::Presentation(format!("{n} generators: tables stop at order 32")));
    }
    let order = 1usize << n;
    let mut mul = vec![0u8; order * order];
    for x in 0..order {
        for y in 0..order {
            mul[x * order + y] = pres.multiply(x as u32, y as u32) as u8;
        }
    }
    // Latin square
    for x in 0..order {
        let row: u64 = (0..order).fold(0, |acc, y| acc | 1 << mul[x * order + y]);
        let col: u64 = (0..order).fold(0, |acc, y| acc | 1 << mul[y * order + x]);
        let full = if order == 64 { !0 } else { (1u64 << order) - 1 };
        if row != full || col != full {
            return Err(Error::Inconsistent(format!("row/column {x} is not a permutation")));
        }
    }
    for x in 0..order {
        for y in 0..order {
            let xy = mul[x * order + y] as usize;
            for z in 0..order {
                let yz = mul[y * order + z] as usize;
                if mul[xy * order + z] != mul[x * order + yz] {
                    return Err(Error::Inconsistent(format!("associativity fails at ({x}, {y}, {z})")));
                }
            }
        }
    }
    if (0..order).any(|x| mul[x] as usize != x || mul[x * order] as usize != x) {
        return Err(Error::Inconsistent("0 is not a two-sided identity".into()));
    }
    let inv = (0..order)
        .map(|x| (0..order).find(|&y| mul[x * order + y] == 0).unwrap() as u8)
        .collect();
    Ok(GroupTable { order, mul, inv })
}

/// Orbits of the conjugation action, each sorted, ordered by least element.
pub fn conjugacy_classes(table: &GroupTable) -> Vec<Vec<usize>> {
    let mut seen = ElementSet::default();
    let mut classes = Vec::new();
    for x in table.elements() {
        if seen.contains(x) {
            continue;
        }
        let class: ElementSet = table.elements().map(|g| table.conjugate(x, g)).collect();
        seen.0 |= class.0;
        classes.push(class.iter().collect());
    }
    classes
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(table: &GroupTable, gens: ElementSet) -> ElementSet {
    let mut h = table.trivial();
    let mut frontier: Vec<usize> = vec![0];
    while let Some(x) = frontier.pop() {
        for g in gens.iter() {
            let y = table.mul(x, g);
            if !h.contains(y) {
                h.insert(y);
                frontier.push(y);
            }
        }
    }
    h
}

pub fn center_of_group(table: &GroupTable) -> ElementSet {
    table
        .elements()
        .filter(|&x| table.elements().all(|y| table.mul(x, y) == table.mul(y, x)))
        .collect()
}

/// `[A, B]`, the subgroup generated by commutators `[a, b]`.
pub fn commutator_subgroup(table: &GroupTable, a: ElementSet, b: ElementSet) -> ElementSet {
    let gens = a.iter().flat_map(|x| b.iter().map(move |y| table.commutator(x, y))).collect();
    subgroup_closure(table, gens)
}

pub fn derived_subgroup(table: &GroupTable) -> ElementSet {
    commutator_subgroup(table, table.all(), table.all())
}

/// Subgroup generated by the squares of the elements of `h`.
pub fn agemo(table: &GroupTable, h: ElementSet) -> ElementSet {
    subgroup_closure(table, h.iter().map(|x| table.mul(x, x)).collect())
}

/// Terms `G = gamma_1 > gamma_2 > ... > 1` of the lower central series.
pub fn lower_central_series(table: &GroupTable) -> Vec<ElementSet> {
    let mut series = vec![table.all()];
    loop {
        let last = *series.last().unwrap();
        if last == table.trivial() {
            return series;
        }
        let next = commutator_subgroup(table, last, table.all());
        if next == last {
            // only happens for non-nilpotent groups, which never arise here
            return series;
        }
        series.push(next);
    }
}

pub fn nilpotency_class(table: &GroupTable) -> usize {
    lower_central_series(table).len() - 1
}

/// Dimension subgroups `D_1 = G`, `D_i = [D_{i-1}, G] (D_{ceil(i/2)})^2`,
/// listed until the first trivial term (excluded). Consecutive terms may
/// coincide.
pub fn jennings_series(table: &GroupTable) -> Vec<ElementSet> {
    if table.order() == 1 {
        return Vec::new();
    }
    let mut d = vec![table.all()];
    loop {
        let i = d.len() + 1;
        let comm = commutator_subgroup(table, d[i - 2], table.all());
        let pow = agemo(table, d[i.div_ceil(2) - 1]);
        let next = subgroup_closure(table, ElementSet(comm.0 | pow.0));
        if next == table.trivial() {
            return d;
        }
        d.push(next);
    }
}

/// Ranks `log2 |D_i / D_{i+1}|` of the Jennings quotients.
pub fn jennings_ranks(table: &GroupTable) -> Vec<usize> {
    let series = jennings_series(table);
    (0..series.len())
        .map(|i| {
            let next = series.get(i + 1).map_or(1, |s| s.len());
            (series[i].len() / next).trailing_zeros() as usize
        })
        .collect()
}

/// Invariants `[a1, a2, ...]` (each a power of two, ascending) of `G / G'`.
pub fn abelian_invariants(table: &GroupTable) -> Vec<usize> {
    let derived = derived_subgroup(table);
    // count elements of G/G' of each order via cosets: xG' has order 2^k
    // iff x^(2^k) is in G' and x^(2^(k-1)) is not
    let quotient_order = table.order() / derived.len();
    if quotient_order == 1 {
        return Vec::new();
    }
    let coset_order = |x: usize| {
        let mut y = x;
        let mut k = 1;
        while !derived.contains(y) {
            y = table.mul(y, y);
            k *= 2;
        }
        k
    };
    // number of elements of order dividing 2^k in the quotient determines the invariants
    let mut count_dividing = Vec::new();
    let mut k = 2;
    loop {
        let c = table.elements().filter(|&x| coset_order(x) <= k).count() / derived.len();
        count_dividing.push(c);
        if c == quotient_order {
            break;
        }
        k *= 2;
    }
    // c_k = |Omega_k| = 2^(sum_i min(e_i, k)); number of invariants with e_i >= k is
    // log2(c_k / c_{k-1})
    let logs: Vec<usize> = count_dividing.iter().map(|c| c.trailing_zeros() as usize).collect();
    let mut at_least: Vec<usize> = Vec::new();
    let mut prev = 0;
    for &l in &logs {
        at_least.push(l - prev);
        prev = l;
    }
    let mut inv = Vec::new();
    for (k, &n) in at_least.iter().enumerate() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..(n - next) {
            inv.push(1usize << (k + 1));
        }
    }
    inv.sort_unstable();
    inv
}
