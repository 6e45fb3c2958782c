//! Brute-force reference computations over all of V(KG), for checking the
//! fast paths on small groups. Every function enumerates the `2^(|G|-1)`
//! normalized units and refuses `|G| > 16`.

use crate::algebra::{AlgebraElement, MulTables};
use crate::catalogue::CatalogueEntry;
use crate::error::{Error, Result};
use crate::gf2::Bits;
use crate::invariants::{compute_record, Invariant, RecordOptions, TierSet};
use crate::involutions::oracle_count_involutions;
use crate::unit_pc::{unit_group_of, UnitPcPresentation, UnitWord};

const MAX_ORACLE_ORDER: usize = 16;

fn guard(t: &MulTables) -> Result<()> {
    if t.order() > MAX_ORACLE_ORDER {
        return Err(Error::OracleTooLarge(format!("|G| = {} > {MAX_ORACLE_ORDER}", t.order())));
    }
    Ok(())
}

/// Unit `1 + y` for natural coordinates `c` of `y`.
fn unit(c: Bits) -> AlgebraElement {
    AlgebraElement::ONE + AlgebraElement::from_ideal_coords(c)
}

fn index(u: AlgebraElement) -> usize {
    (u + AlgebraElement::ONE).ideal_coords() as usize
}

/// All normalized units, in order of their natural coordinates.
pub fn units(t: &MulTables) -> Result<Vec<AlgebraElement>> {
    guard(t)?;
    Ok((0..1u32 << t.ideal_dim()).map(unit).collect())
}

fn element_order(t: &MulTables, u: AlgebraElement) -> u64 {
    let mut x = u;
    let mut n = 1;
    while x != AlgebraElement::ONE {
        x = t.multiply(x, u);
        n += 1;
    }
    n
}

/// A subgroup of V as a membership bitmap over natural coordinates.
struct UnitSet {
    bits: Vec<u64>,
    len: usize,
}

impl UnitSet {
    fn new(m: usize) -> Self {
        UnitSet { bits: vec![0; (1usize << m).div_ceil(64)], len: 0 }
    }

    fn contains(&self, u: AlgebraElement) -> bool {
        let k = index(u);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    fn insert(&mut self, u: AlgebraElement) -> bool {
        let k = index(u);
        let fresh = self.bits[k / 64] >> (k % 64) & 1 == 0;
        if fresh {
            self.bits[k / 64] |= 1 << (k % 64);
            self.len += 1;
        }
        fresh
    }
}

/// Order of `<gens>` inside V, by orbit closure under right multiplication.
pub fn closure_order(t: &MulTables, gens: &[AlgebraElement]) -> Result<usize> {
    guard(t)?;
    let mut set = UnitSet::new(t.ideal_dim());
    let mut chosen: Vec<AlgebraElement> = Vec::new();
    let mut members = vec![AlgebraElement::ONE];
    set.insert(AlgebraElement::ONE);
    for &g in gens {
        if set.contains(g) {
            continue;
        }
        chosen.push(g);
        // re-close: every member times every chosen generator
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &h in &chosen {
                let y = t.multiply(x, h);
                if set.insert(y) {
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    Ok(set.len)
}

/// `log2 |Phi(V)|`. In a finite 2-group the Frattini subgroup is generated by
/// the squares, since the quotient by the squares has exponent 2.
pub fn frattini_order_log2(t: &MulTables) -> Result<usize> {
    let mut squares: Vec<AlgebraElement> = units(t)?.into_iter().map(|u| t.square(u)).collect();
    squares.sort();
    squares.dedup();
    Ok(closure_order(t, &squares)?.trailing_zeros() as usize)
}

/// Center of V: units commuting with the given generators of V.
pub fn center(t: &MulTables, generators: &[AlgebraElement]) -> Result<Vec<AlgebraElement>> {
    Ok(units(t)?
        .into_iter()
        .filter(|&u| generators.iter().all(|&g| t.multiply(u, g) == t.multiply(g, u)))
        .collect())
}

/// Order (as log2), exponent and number of involutions of `Z(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenterData {
    pub order_log2: usize,
    pub exponent: u64,
    pub involutions: u64,
}

pub fn center_data(t: &MulTables, generators: &[AlgebraElement]) -> Result<CenterData> {
    let z = center(t, generators)?;
    Ok(CenterData {
        order_log2: z.len().trailing_zeros() as usize,
        exponent: z.iter().map(|&u| element_order(t, u)).max().unwrap_or(1),
        involutions: z.iter().filter(|&&u| u != AlgebraElement::ONE && t.square(u) == AlgebraElement::ONE).count() as u64,
    })
}

/// `log2 |V|` by counting augmentation-1 elements of KG.
pub fn unit_group_order_log2(t: &MulTables) -> Result<usize> {
    guard(t)?;
    let n = (0..1u64 << t.order()).filter(|&x| AlgebraElement(x as Bits).augmentation() == 1).count();
    Ok(n.trailing_zeros() as usize)
}

/// Checks that normal forms round-trip for every unit and that the PC
/// multiplication agrees with the algebra on `unit * u_i` for every unit
/// and generator, and on `u * v` for `samples` pairs spread over V. Returns
/// a description of the first failure.
pub fn check_unit_presentation(v: &UnitPcPresentation, samples: usize) -> Result<Option<String>> {
    let t = v.context().tables.clone();
    let all = units(&t)?;
    let mut words = Vec::with_capacity(all.len());
    for &u in &all {
        let w = v.unit_normal_form(u)?;
        if v.word_to_algebra(w) != u {
            return Ok(Some(format!("round trip fails for unit {:#x}", u.0)));
        }
        words.push(w);
    }
    let pc = v.pc();
    let check = |a: usize, b: AlgebraElement, wb: UnitWord| -> Option<String> {
        let product = t.multiply(all[a], b);
        let expect = words[index(product)];
        let got = UnitWord(pc.multiply(words[a].0, wb.0));
        (got != expect).then(|| format!("collection disagrees with the algebra for {:#x} * {:#x}", all[a].0, b.0))
    };
    for a in 0..all.len() {
        for i in 0..v.m() {
            if let Some(e) = check(a, v.context().generator(i), UnitWord(1 << i)) {
                return Ok(Some(e));
            }
        }
    }
    // pairs spread over the whole range by two coprime strides
    let n = all.len();
    for k in 0..samples {
        let (a, b) = (k * 7919 % n, (k * 104_729 + 1) % n);
        if let Some(e) = check(a, all[b], words[b]) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// One fast-versus-reference comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub fast: String,
    pub reference: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.fast == self.reference
    }
}

/// Runs every invariant through its fast path and its brute-force
/// counterpart for a group of order at most 16.
pub fn cross_check(entry: &CatalogueEntry) -> Result<Vec<Check>> {
    let v = unit_group_of(&entry.table)?;
    let t = v.context().tables.clone();
    guard(&t)?;
    let record = compute_record(entry, TierSet::ALL, &RecordOptions::default())?;
    let fast = |inv| record.get(inv).expect("all tiers computed").to_string();
    let generators: Vec<_> = (0..v.m()).map(|i| v.context().generator(i)).collect();
    let z = center_data(&t, &generators)?;
    let mut checks = vec![
        Check { name: "unit group order log2", fast: v.m().to_string(), reference: unit_group_order_log2(&t)?.to_string() },
        Check {
            name: "involutions",
            fast: fast(Invariant::Involutions),
            reference: oracle_count_involutions(&t, false)?.to_string(),
        },
        Check { name: "frattini order log2", fast: fast(Invariant::FrattiniOrderLog2), reference: frattini_order_log2(&t)?.to_string() },
        Check { name: "center order log2", fast: fast(Invariant::CenterOrderLog2), reference: z.order_log2.to_string() },
        Check { name: "center exponent", fast: fast(Invariant::CenterExponent), reference: z.exponent.to_string() },
        Check { name: "center involutions", fast: fast(Invariant::CenterInvolutions), reference: z.involutions.to_string() },
    ];
    let pres = check_unit_presentation(&v, 20_000)?;
    checks.push(Check {
        name: "unit presentation round trip and products",
        fast: pres.unwrap_or_else(|| "ok".into()),
        reference: "ok".into(),
    });
    Ok(checks)
}
