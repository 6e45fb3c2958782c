//! A power-commutator presentation of the normalized unit group V(KG).
//!
//! Generators are `u_i = 1 + b_i` for a weight-adapted basis `b_1..b_m` of
//! the augmentation ideal. Any unit `u` has a unique normal form
//! `u = u_1^e_1 ... u_m^e_m`, found by peeling: scan the weighted coordinates
//! of `u - 1` in order and divide off `u_i` on the left whenever coordinate
//! `i` is set. Since `u_i^-1 u` only differs from `u - b_i` by terms of weight
//! greater than `w_i`, each step clears its coordinate and never disturbs an
//! earlier one.

use std::sync::Arc;

use crate::algebra::{AlgebraElement, MulTables, WeightedBasis};
use crate::error::{Error, Result};
use crate::gf2::{bits_of, Bits};
use crate::pc::{Exponents, PcPresentation};

/// Exponent vector of a unit in the generators `u_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitWord(pub Exponents);

/// Everything needed to move between algebra units and PC words.
#[derive(Clone, Debug)]
pub struct UnitContext {
    pub tables: Arc<MulTables>,
    pub basis: Arc<WeightedBasis>,
    generators: Vec<AlgebraElement>,
    inverses: Vec<AlgebraElement>,
}

impl UnitContext {
    pub fn new(tables: Arc<MulTables>, basis: Arc<WeightedBasis>) -> Self {
        let generators: Vec<AlgebraElement> =
            basis.vectors().iter().map(|&b| b + AlgebraElement::ONE).collect();
        let inverses = generators
            .iter()
            .map(|&u| tables.inverse_of_normalized_unit(u).expect("1 + b has augmentation 1"))
            .collect();
        UnitContext { tables, basis, generators, inverses }
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> AlgebraElement {
        self.generators[i]
    }

    /// Normal form of a unit.
    pub fn unit_normal_form(&self, u: AlgebraElement) -> Result<UnitWord> {
        if u.augmentation() != 1 {
            return Err(Error::NotAUnit);
        }
        let mut rest = u;
        let mut word = 0;
        for i in 0..self.m() {
            let c = self.basis.coords(rest + AlgebraElement::ONE);
            if c & low_mask(i) != 0 {
                return Err(Error::Peeling { index: c.trailing_zeros() as usize });
            }
            if c >> i & 1 == 1 {
                word |= 1 << i;
                rest = self.tables.multiply(self.inverses[i], rest);
            }
        }
        if rest != AlgebraElement::ONE {
            let c = self.basis.coords(rest + AlgebraElement::ONE);
            return Err(Error::Peeling { index: c.trailing_zeros() as usize });
        }
        Ok(UnitWord(word))
    }

    /// The ordered product of the generators named by `w`.
    pub fn word_to_algebra(&self, w: UnitWord) -> AlgebraElement {
        bits_of(w.0).fold(AlgebraElement::ONE, |acc, i| self.tables.multiply(acc, self.generators[i]))
    }
}

#[inline]
fn low_mask(k: usize) -> Bits {
    if k >= 32 {
        !0
    } else {
        (1u32 << k) - 1
    }
}

/// V(KG) as a PC group, together with the algebra data it was built from.
#[derive(Clone, Debug)]
pub struct UnitPcPresentation {
    pres: PcPresentation,
    weights: Vec<usize>,
    ctx: UnitContext,
}

impl UnitPcPresentation {
    pub fn m(&self) -> usize {
        self.pres.ngens()
    }

    pub fn pc(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn weight_of(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn context(&self) -> &UnitContext {
        &self.ctx
    }

    pub fn unit_normal_form(&self, u: AlgebraElement) -> Result<UnitWord> {
        self.ctx.unit_normal_form(u)
    }

    pub fn word_to_algebra(&self, w: UnitWord) -> AlgebraElement {
        self.ctx.word_to_algebra(w)
    }

    /// Checks that every tail only involves generators of the weight the
    /// filtration forces: `>= 2 w_i` for `u_i^2`, `>= w_i + w_j` for
    /// `[u_j, u_i]`.
    pub fn tail_weight_violation(&self) -> Option<String> {
        let min_weight = |w: Exponents| bits_of(w).map(|k| self.weights[k]).min();
        for i in 0..self.m() {
            if let Some(w) = min_weight(self.pres.power_tail(i)) {
                if w < 2 * self.weights[i] {
                    return Some(format!("power tail of u{}", i + 1));
                }
            }
        }
        for ((j, i), tail) in self.pres.commutator_tails() {
            if let Some(w) = min_weight(tail) {
                if w < self.weights[i] + self.weights[j] {
                    return Some(format!("tail of [u{}, u{}]", j + 1, i + 1));
                }
            }
        }
        None
    }
}

/// Computes `u_i^2` and `[u_j, u_i]` in the algebra and peels each result to
/// obtain the power and commutator tails.
pub fn build_unit_pc_presentation(
    basis: Arc<WeightedBasis>,
    tables: Arc<MulTables>,
) -> Result<UnitPcPresentation> {
    let ctx = UnitContext::new(tables, basis);
    let m = ctx.m();
    let t = &ctx.tables;
    let mut power = Vec::with_capacity(m);
    for i in 0..m {
        let sq = t.square(ctx.generator(i));
        power.push(ctx.unit_normal_form(sq)?.0);
    }
    let mut comms = Vec::new();
    for j in 0..m {
        for i in 0..j {
            let uj = ctx.generator(j);
            let ui = ctx.generator(i);
            let c = t.multiply(
                t.multiply(ctx.inverses[j], ctx.inverses[i]),
                t.multiply(uj, ui),
            );
            let w = ctx.unit_normal_form(c)?.0;
            if w != 0 {
                comms.push(((j, i), w));
            }
        }
    }
    let pres = PcPresentation::new(m, power, comms)?;
    let weights = ctx.basis.weights().to_vec();
    Ok(UnitPcPresentation { pres, weights, ctx })
}

/// Convenience: table, filtration, basis and presentation for one group.
pub fn unit_group_of(table: &crate::group::GroupTable) -> Result<UnitPcPresentation> {
    let tables = Arc::new(MulTables::new(table));
    let filtration = crate::algebra::ideal_power_filtration(&tables);
    let basis = Arc::new(crate::algebra::weighted_basis(&filtration));
    build_unit_pc_presentation(basis, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group_table;

    fn unit_group(ngens: usize, power: Vec<u32>, comms: Vec<((usize, usize), u32)>) -> UnitPcPresentation {
        let p = PcPresentation::new(ngens, power, comms).unwrap();
        unit_group_of(&build_group_table(&p).unwrap()).unwrap()
    }

    #[test]
    fn kc2() {
        let v = unit_group(1, vec![0], vec![]);
        assert_eq!(v.m(), 1);
        assert_eq!(v.pc().power_tail(0), 0);
    }

    fn kc4_power_basis() -> UnitPcPresentation {
        let p = PcPresentation::new(2, vec![0b10, 0], []).unwrap();
        let t = Arc::new(MulTables::new(&build_group_table(&p).unwrap()));
        let x = AlgebraElement(0b11);
        let x2 = t.square(x);
        let x3 = t.multiply(x2, x);
        let f = crate::algebra::ideal_power_filtration(&t);
        let basis = WeightedBasis::from_vectors(vec![x, x2, x3], &f).unwrap();
        build_unit_pc_presentation(Arc::new(basis), t).unwrap()
    }

    #[test]
    fn kc4_words() {
        let v = kc4_power_basis();
        assert_eq!(v.weights(), &[1, 2, 3]);
        assert_eq!(v.unit_normal_form(AlgebraElement::ONE).unwrap(), UnitWord(0));
        assert_eq!(v.unit_normal_form(AlgebraElement(0b10)).unwrap(), UnitWord(0b001));
        assert_eq!(v.unit_normal_form(AlgebraElement(0b100)).unwrap(), UnitWord(0b010));
        // u1^2 = a^2 = u2; all commutators trivial
        assert_eq!(v.pc().power_tail(0), 0b010);
        assert_eq!(v.pc().commutator_tails().count(), 0);
        assert!(v.unit_normal_form(AlgebraElement(0b11)).is_err());
    }

    #[test]
    fn kc4_roundtrip_everything() {
        let v = kc4_power_basis();
        for w in 0..8 {
            let u = v.word_to_algebra(UnitWord(w));
            assert_eq!(u.augmentation(), 1);
            assert_eq!(v.unit_normal_form(u).unwrap(), UnitWord(w));
        }
        let u = v.word_to_algebra(UnitWord(0b011));
        let t = &v.context().tables;
        let expect = t.multiply(AlgebraElement(0b10), AlgebraElement(1) + t.square(AlgebraElement(0b11)));
        assert_eq!(u, expect);
    }

    #[test]
    fn d8_presentation_is_consistent_and_graded() {
        let v = unit_group(3, vec![0, 0b100, 0], vec![((1, 0), 0b100)]);
        assert_eq!(v.m(), 7);
        assert!(v.pc().consistency_violation().is_none());
        assert!(v.tail_weight_violation().is_none());
        for w in 0..128 {
            let u = v.word_to_algebra(UnitWord(w));
            assert_eq!(v.unit_normal_form(u).unwrap(), UnitWord(w));
        }
    }
}
