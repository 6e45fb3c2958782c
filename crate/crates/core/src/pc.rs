//! Power-commutator presentations with all relative orders equal to 2, and
//! collection from the left.
//!
//! Generators are numbered from 0 internally. A normal word is a bit mask: bit
//! `i` set means `g_i` occurs, and the word is read in increasing index order.
//! Commutators follow `[x, y] = x^-1 y^-1 x y`, so for `j > i` the defining
//! relation is `g_j g_i = g_i g_j [g_j, g_i]`.

use crate::error::{Error, Result};
use crate::gf2::{bits_of, Bits};

/// Largest supported generator count (normal words live in a `u32`).
pub const MAX_GENS: usize = 32;

/// Exponent vector of a normal word.
pub type Exponents = Bits;

/// One letter of an arbitrary group word: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcPresentation {
    ngens: usize,
    power: Vec<Exponents>,
    // comm[j * ngens + i] = [g_j, g_i] for j > i
    comm: Vec<Exponents>,
    // g_j^{g_i} = g_j [g_j, g_i] as a plain letter list (not collected)
    conj: Vec<Vec<u8>>,
    inverses: Vec<Exponents>,
}

impl PcPresentation {
    /// Builds a presentation from its tails. `power[i]` is the normal word of
    /// `g_i^2`; `comms` lists `((j, i), tail)` with `j > i` for every
    /// nontrivial commutator.
    pub fn new(
        ngens: usize,
        power: Vec<Exponents>,
        comms: impl IntoIterator<Item = ((usize, usize), Exponents)>,
    ) -> Result<Self> {
        if ngens > MAX_GENS {
            return Err(Error::Presentation(format!("{ngens} generators exceed the limit of {MAX_GENS}")));
        }
        if power.len() != ngens {
            return Err(Error::Presentation(format!(
                "expected {ngens} power tails, got {}",
                power.len()
            )));
        }
        for (i, &w) in power.iter().enumerate() {
            if w & low_mask(i + 1) != 0 {
                return Err(Error::Presentation(format!(
                    "power tail of g{} uses a generator of index <= {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let mut comm = vec![0; ngens * ngens];
        for ((j, i), w) in comms {
            if !(i < j && j < ngens) {
                return Err(Error::Presentation(format!(
                    "commutator [g{}, g{}] needs {} > {} and both in range",
                    j + 1,
                    i + 1,
                    j + 1,
                    i + 1
                )));
            }
            if w & low_mask(i + 1) != 0 {
                return Err(Error::Presentation(format!(
                    "tail of [g{}, g{}] uses a generator of index <= {}",
                    j + 1,
                    i + 1,
                    i + 1
                )));
            }
            comm[j * ngens + i] = w;
        }
        let mut conj = vec![Vec::new(); ngens * ngens];
        for j in 0..ngens {
            for i in 0..j {
                let mut word = vec![j as u8];
                word.extend(bits_of(comm[j * ngens + i]).map(|k| k as u8));
                conj[j * ngens + i] = word;
            }
        }
        if ngens > 0 && power.iter().any(|&w| w >> (ngens - 1) >> 1 != 0) {
            return Err(Error::Presentation("power tail references a generator out of range".into()));
        }
        if comm.iter().any(|&w| ngens < 32 && w >> ngens != 0) {
            return Err(Error::Presentation("commutator tail references a generator out of range".into()));
        }
        let mut pres = PcPresentation { ngens, power, comm, conj, inverses: Vec::new() };
        pres.inverses = (0..ngens).map(|i| pres.inverse(1 << i)).collect();
        Ok(pres)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn power_tail(&self, i: usize) -> Exponents {
        self.power[i]
    }

    /// Tail of `[g_j, g_i]`, `j > i`.
    pub fn commutator_tail(&self, j: usize, i: usize) -> Exponents {
        self.comm[j * self.ngens + i]
    }

    /// All nontrivial commutator tails as `((j, i), tail)`, `j > i`.
    pub fn commutator_tails(&self) -> impl Iterator<Item = ((usize, usize), Exponents)> + '_ {
        (0..self.ngens).flat_map(move |j| {
            (0..j).filter_map(move |i| {
                let w = self.commutator_tail(j, i);
                (w != 0).then_some(((j, i), w))
            })
        })
    }

    /// Number of elements, `2^ngens`, as a base-2 logarithm.
    pub fn order_log2(&self) -> usize {
        self.ngens
    }

    /// Multiplies the normal word in `collected` by the letters on `stack`
    /// (popped from the end), leaving the normal form in `collected`.
    fn collect(&self, collected: &mut Exponents, stack: &mut Vec<u8>) {
        let n = self.ngens;
        while let Some(g) = stack.pop() {
            let i = g as usize;
            let above = *collected & !low_mask(i + 1);
            if above == 0 {
                if *collected >> i & 1 == 0 {
                    *collected |= 1 << i;
                } else {
                    *collected &= !(1 << i);
                    push_word(stack, self.power[i]);
                }
                continue;
            }
            // collected = prefix * [g_i] * above; move `above` across g_i
            *collected &= low_mask(i + 1);
            let mut suffix = Vec::with_capacity(2 * above.count_ones() as usize);
            for j in bits_of(above) {
                suffix.extend_from_slice(&self.conj[j * n + i]);
            }
            stack.extend(suffix.iter().rev());
            if *collected >> i & 1 == 0 {
                *collected |= 1 << i;
            } else {
                *collected &= !(1 << i);
                push_word(stack, self.power[i]);
            }
        }
    }

    /// Product of two normal words.
    pub fn multiply(&self, a: Exponents, b: Exponents) -> Exponents {
        let mut collected = a;
        let mut stack = Vec::with_capacity(64);
        push_word(&mut stack, b);
        self.collect(&mut collected, &mut stack);
        collected
    }

    /// Inverse of a normal word: right-multiplying by `g_d` clears the lowest
    /// set exponent `d`, so the inverse is the normal word on those `d`s.
    pub fn inverse(&self, a: Exponents) -> Exponents {
        let mut h = a;
        let mut inv = 0;
        let mut stack = Vec::with_capacity(64);
        while h != 0 {
            let d = h.trailing_zeros();
            stack.push(d as u8);
            self.collect(&mut h, &mut stack);
            inv |= 1 << d;
        }
        inv
    }

    /// Cached inverse of a single generator.
    pub fn generator_inverse(&self, i: usize) -> Exponents {
        self.inverses[i]
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Exponents, b: Exponents) -> Exponents {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(self.inverse(ba), ab)
    }

    /// `b^-1 a b`.
    pub fn conjugate(&self, a: Exponents, b: Exponents) -> Exponents {
        self.multiply(self.inverse(b), self.multiply(a, b))
    }

    pub fn square(&self, a: Exponents) -> Exponents {
        self.multiply(a, a)
    }

    /// Collects an arbitrary word into normal form.
    pub fn collect_word(&self, word: &[Letter]) -> Result<Exponents> {
        let mut acc = 0;
        for l in word {
            if l.gen >= self.ngens {
                return Err(Error::GeneratorOutOfRange { gen: l.gen + 1, ngens: self.ngens });
            }
            let w = if l.inverse { self.inverses[l.gen] } else { 1 << l.gen };
            acc = self.multiply(acc, w);
        }
        Ok(acc)
    }

    /// Order of an element (a power of two).
    pub fn element_order(&self, a: Exponents) -> u64 {
        let mut x = a;
        let mut order = 1;
        while x != 0 {
            x = self.square(x);
            order *= 2;
        }
        order
    }

    /// Standard consistency test words for a presentation with all relative
    /// orders 2. Returns the first failing test as a description.
    pub fn consistency_violation(&self) -> Option<String> {
        let n = self.ngens;
        let g = |i: usize| 1u32 << i;
        // (g_k g_j) g_i = g_k (g_j g_i)
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let l = self.multiply(self.multiply(g(k), g(j)), g(i));
                    let r = self.multiply(g(k), self.multiply(g(j), g(i)));
                    if l != r {
                        return Some(format!("g{} g{} g{}", k + 1, j + 1, i + 1));
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                // g_j^2 g_i = g_j (g_j g_i)
                let l = self.multiply(self.power[j], g(i));
                let r = self.multiply(g(j), self.multiply(g(j), g(i)));
                if l != r {
                    return Some(format!("g{}^2 g{}", j + 1, i + 1));
                }
                // g_j g_i^2 = (g_j g_i) g_i
                let l = self.multiply(g(j), self.power[i]);
                let r = self.multiply(self.multiply(g(j), g(i)), g(i));
                if l != r {
                    return Some(format!("g{} g{}^2", j + 1, i + 1));
                }
            }
        }
        for i in 0..n {
            // g_i^2 g_i = g_i g_i^2
            if self.multiply(self.power[i], g(i)) != self.multiply(g(i), self.power[i]) {
                return Some(format!("g{}^3", i + 1));
            }
        }
        None
    }
}

#[inline]
fn low_mask(k: usize) -> Exponents {
    if k >= 32 {
        !0
    } else {
        (1u32 << k) - 1
    }
}

#[inline]
fn push_word(stack: &mut Vec<u8>, w: Exponents) {
    let mut w = w;
    while w != 0 {
        let top = 31 - w.leading_zeros();
        stack.push(top as u8);
        w &= !(1 << top);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> PcPresentation {
        PcPresentation::new(2, vec![0b10, 0], []).unwrap()
    }

    // g1^2 = 1, g2^2 = g3, g3^2 = 1, [g2, g1] = g3
    fn d8() -> PcPresentation {
        PcPresentation::new(3, vec![0, 0b100, 0], [((1, 0), 0b100)]).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(c4().collect_word(&[]).unwrap(), 0);
    }

    #[test]
    fn c4_square() {
        let p = c4();
        assert_eq!(p.collect_word(&[Letter::gen(0), Letter::gen(0)]).unwrap(), 0b10);
        assert_eq!(p.element_order(0b01), 4);
        assert_eq!(p.inverse(0b01), 0b11);
    }

    #[test]
    fn d8_swap_produces_commutator() {
        // g2 g1 = g1 g2 [g2, g1] = g1 g2 g3
        let p = d8();
        assert_eq!(p.collect_word(&[Letter::gen(1), Letter::gen(0)]).unwrap(), 0b111);
        assert_eq!(p.commutator(0b010, 0b001), 0b100);
        assert!(p.consistency_violation().is_none());
    }

    #[test]
    fn inverse_letters() {
        let p = d8();
        for a in 0..8 {
            assert_eq!(p.multiply(a, p.inverse(a)), 0);
            assert_eq!(p.multiply(p.inverse(a), a), 0);
        }
        let w = [Letter::gen(1), Letter::inv(1)];
        assert_eq!(p.collect_word(&w).unwrap(), 0);
    }

    #[test]
    fn out_of_range_letter() {
        let err = c4().collect_word(&[Letter::gen(2)]).unwrap_err();
        assert!(matches!(err, Error::GeneratorOutOfRange { gen: 3, ngens: 2 }));
    }

    #[test]
    fn rejects_bad_tails() {
        assert!(PcPresentation::new(2, vec![0b01, 0], []).is_err());
        assert!(PcPresentation::new(2, vec![0, 0], [((0, 1), 0)]).is_err());
        assert!(PcPresentation::new(2, vec![0b100, 0], []).is_err());
    }

    #[test]
    fn inconsistent_presentation_detected() {
        // g1^2 = g2 together with [g2, g1] = g3 and g2^2 = 1 is not consistent:
        // g2 commutes with g1^2 = g2 but the commutator relation says otherwise.
        let p = PcPresentation::new(3, vec![0b010, 0, 0], [((1, 0), 0b100)]).unwrap();
        assert!(p.consistency_violation().is_some());
    }
}
