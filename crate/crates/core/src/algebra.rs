//! The group algebra KG over GF(2) for |G| <= 32.
//!
//! An element is a coefficient bit mask indexed by the group-element indices
//! of a [`GroupTable`], so the identity of G (index 0) is bit 0 and the
//! algebra's unit is `1`. Addition is XOR.
//!
//! The augmentation ideal I has the natural basis `{1 + g : g != 1}`; an
//! element of I is determined by its coefficients away from the identity, so
//! its natural coordinates are simply `x >> 1`.

use crate::error::{Error, Result};
use crate::gf2::{bits_of, Bits, Echelon, Matrix};
use crate::group::GroupTable;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement(pub Bits);

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement(0);
    pub const ONE: AlgebraElement = AlgebraElement(1);

    pub fn group_element(g: usize) -> Self {
        AlgebraElement(1 << g)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Parity of the number of terms.
    pub fn augmentation(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    /// Natural coordinates of an element of I.
    pub fn ideal_coords(self) -> Bits {
        debug_assert_eq!(self.augmentation(), 0);
        self.0 >> 1
    }

    /// Inverse of [`AlgebraElement::ideal_coords`].
    pub fn from_ideal_coords(c: Bits) -> Self {
        let hi = c << 1;
        AlgebraElement(hi | (c.count_ones() & 1))
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for AlgebraElement {
    fn add_assign(&mut self, rhs: AlgebraElement) {
        self.0 ^= rhs.0;
    }
}

/// Left translations `h -> g h` of the basis, with byte lookup tables for
/// fast application to whole coefficient vectors.
#[derive(Clone, Debug)]
pub struct MulTables {
    order: usize,
    left: Vec<Vec<u8>>,
    // lut[(g * nbytes + b) * 256 + byte]
    lut: Vec<Bits>,
    nbytes: usize,
}

impl MulTables {
    pub fn new(table: &GroupTable) -> Self {
        let order = table.order();
        let left: Vec<Vec<u8>> =
            (0..order).map(|g| (0..order).map(|h| table.mul(g, h) as u8).collect()).collect();
        let nbytes = order.div_ceil(8);
        let mut lut = vec![0; order * nbytes * 256];
        for g in 0..order {
            for b in 0..nbytes {
                for byte in 0..256usize {
                    let mut img = 0;
                    for bit in 0..8 {
                        let h = b * 8 + bit;
                        if byte >> bit & 1 == 1 && h < order {
                            img |= 1 << left[g][h];
                        }
                    }
                    lut[(g * nbytes + b) * 256 + byte] = img;
                }
            }
        }
        MulTables { order, left, lut, nbytes }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dimension of the augmentation ideal.
    pub fn ideal_dim(&self) -> usize {
        self.order - 1
    }

    pub fn left_translation(&self, g: usize) -> &[u8] {
        &self.left[g]
    }

    /// `g * y`.
    #[inline]
    pub fn translate(&self, g: usize, y: Bits) -> Bits {
        let base = g * self.nbytes * 256;
        let mut out = 0;
        for b in 0..self.nbytes {
            out |= self.lut[base + b * 256 + (y >> (8 * b) & 0xff) as usize];
        }
        out
    }

    #[inline]
    pub fn multiply(&self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement {
        AlgebraElement(bits_of(x.0).fold(0, |acc, g| acc ^ self.translate(g, y.0)))
    }

    pub fn square(&self, x: AlgebraElement) -> AlgebraElement {
        self.multiply(x, x)
    }

    /// Inverse of an element of augmentation 1: writing `u = 1 + y` with `y`
    /// nilpotent, `u^-1 = 1 + y + y^2 + ...`.
    pub fn inverse_of_normalized_unit(&self, u: AlgebraElement) -> Result<AlgebraElement> {
        if u.augmentation() != 1 {
            return Err(Error::NotAUnit);
        }
        let y = u + AlgebraElement::ONE;
        let mut acc = AlgebraElement::ONE;
        let mut term = y;
        while !term.is_zero() {
            acc += term;
            term = self.multiply(term, y);
        }
        Ok(acc)
    }

    /// Basis of the augmentation ideal: `1 + g` for `g != 1`.
    pub fn ideal_basis(&self) -> Vec<AlgebraElement> {
        (1..self.order).map(|g| AlgebraElement(1 | 1 << g)).collect()
    }
}

pub fn multiply(x: AlgebraElement, y: AlgebraElement, t: &MulTables) -> AlgebraElement {
    t.multiply(x, y)
}

pub fn augmentation(x: AlgebraElement) -> u8 {
    x.augmentation()
}

pub fn inverse_of_normalized_unit(u: AlgebraElement, t: &MulTables) -> Result<AlgebraElement> {
    t.inverse_of_normalized_unit(u)
}

/// The chain `I = I^1 > I^2 > ... > I^c > 0`, each power as a reduced basis.
#[derive(Clone, Debug)]
pub struct Filtration {
    powers: Vec<Echelon>,
}

impl Filtration {
    /// Number of nonzero powers (the nilpotency index of I minus one).
    pub fn depth(&self) -> usize {
        self.powers.len()
    }

    /// Basis of `I^k`, `k >= 1`; empty past the end of the chain.
    pub fn power(&self, k: usize) -> &[Bits] {
        self.powers.get(k - 1).map_or(&[], |e| e.rows())
    }

    pub fn contains(&self, k: usize, x: AlgebraElement) -> bool {
        match self.powers.get(k - 1) {
            Some(e) => e.contains(x.0),
            None => x.is_zero(),
        }
    }

    /// `dim I^k / I^(k+1)` for `k = 1..=depth`.
    pub fn graded_dims(&self) -> Vec<usize> {
        (0..self.powers.len())
            .map(|i| self.powers[i].rank() - self.powers.get(i + 1).map_or(0, Echelon::rank))
            .collect()
    }

    /// Largest `k` with `x` in `I^k` (0 if `x` is outside I, `usize::MAX`
    /// for zero).
    pub fn weight_of(&self, x: AlgebraElement) -> usize {
        if x.is_zero() {
            return usize::MAX;
        }
        (0..self.powers.len()).take_while(|&i| self.powers[i].contains(x.0)).count()
    }
}

/// Powers of the augmentation ideal by row reduction: `I^(k+1)` is spanned by
/// the products of a basis of `I^k` with a basis of I.
pub fn ideal_power_filtration(t: &MulTables) -> Filtration {
    let ideal: Vec<AlgebraElement> = t.ideal_basis();
    let mut powers = Vec::new();
    let mut current = Echelon::from_vectors(ideal.iter().map(|x| x.0));
    while current.rank() > 0 {
        let mut next = Echelon::new();
        for &a in current.rows() {
            for &b in &ideal {
                next.insert(t.multiply(AlgebraElement(a), b).0);
            }
        }
        powers.push(current);
        current = next;
    }
    Filtration { powers }
}

/// A basis of I adapted to the filtration, ordered by non-decreasing weight.
#[derive(Clone, Debug)]
pub struct WeightedBasis {
    vectors: Vec<AlgebraElement>,
    weights: Vec<usize>,
    to_weighted: Matrix,
    from_weighted: Matrix,
}

impl WeightedBasis {
    /// Adopts an explicit basis of I. Weights are read off the filtration;
    /// returns `None` unless the vectors form a basis of I ordered by
    /// non-decreasing weight.
    pub fn from_vectors(vectors: Vec<AlgebraElement>, filtration: &Filtration) -> Option<Self> {
        if vectors.iter().any(|v| v.augmentation() != 0) {
            return None;
        }
        let weights: Vec<usize> = vectors.iter().map(|&v| filtration.weight_of(v)).collect();
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        let from_weighted = Matrix::from_columns(vectors.iter().map(|v| v.ideal_coords()).collect());
        let to_weighted = from_weighted.inverse()?;
        let basis = WeightedBasis { vectors, weights, to_weighted, from_weighted };
        // vectors of weight >= k must span all of I^k
        for k in 1..=filtration.depth() {
            let n = basis.weights.iter().filter(|&&w| w >= k).count();
            if n != filtration.power(k).len() {
                return None;
            }
        }
        Some(basis)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[AlgebraElement] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> AlgebraElement {
        self.vectors[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    /// Weighted coordinates of an element of I.
    #[inline]
    pub fn coords(&self, x: AlgebraElement) -> Bits {
        self.to_weighted.apply(x.ideal_coords())
    }

    /// Element of I with the given weighted coordinates.
    pub fn element(&self, c: Bits) -> AlgebraElement {
        AlgebraElement::from_ideal_coords(self.from_weighted.apply(c))
    }

    pub fn to_weighted(&self) -> &Matrix {
        &self.to_weighted
    }

    pub fn from_weighted(&self) -> &Matrix {
        &self.from_weighted
    }
}

/// Extends a basis of `I^c` to `I^(c-1)`, then to `I^(c-2)`, and so on; each
/// new vector receives the weight of the power it was taken from.
pub fn weighted_basis(filtration: &Filtration) -> WeightedBasis {
    let c = filtration.depth();
    let mut span = Echelon::new();
    let mut blocks: Vec<Vec<AlgebraElement>> = vec![Vec::new(); c];
    for k in (1..=c).rev() {
        for &v in filtration.power(k) {
            if span.insert(v) {
                blocks[k - 1].push(AlgebraElement(v));
            }
        }
    }
    let mut vectors = Vec::new();
    let mut weights = Vec::new();
    for (k, block) in blocks.into_iter().enumerate() {
        for v in block {
            vectors.push(v);
            weights.push(k + 1);
        }
    }
    let from_weighted = Matrix::from_columns(vectors.iter().map(|v| v.ideal_coords()).collect());
    let to_weighted = from_weighted.inverse().expect("weighted basis spans I");
    WeightedBasis { vectors, weights, to_weighted, from_weighted }
}

/// Class sums of G, a basis of the center of KG.
#[derive(Clone, Debug)]
pub struct CenterBasis {
    class_sums: Vec<AlgebraElement>,
    class_sizes: Vec<usize>,
}

impl CenterBasis {
    pub fn class_sums(&self) -> &[AlgebraElement] {
        &self.class_sums
    }

    /// Number of conjugacy classes.
    pub fn k(&self) -> usize {
        self.class_sums.len()
    }

    /// Basis of `Z(KG) ∩ I`: each class sum of a nontrivial class, corrected
    /// by `1` when it has odd augmentation.
    pub fn ideal_part(&self) -> Vec<AlgebraElement> {
        self.class_sums
            .iter()
            .zip(&self.class_sizes)
            .filter(|(s, _)| s.0 != 1)
            .map(|(&s, &size)| if size % 2 == 1 { s + AlgebraElement::ONE } else { s })
            .collect()
    }
}

pub fn center_basis(classes: &[Vec<usize>]) -> CenterBasis {
    CenterBasis {
        class_sums: classes
            .iter()
            .map(|c| AlgebraElement(c.iter().fold(0, |acc, &g| acc | 1 << g)))
            .collect(),
        class_sizes: classes.iter().map(Vec::len).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group_table, conjugacy_classes};
    use crate::pc::PcPresentation;

    fn tables(ngens: usize, power: Vec<u32>, comms: Vec<((usize, usize), u32)>) -> MulTables {
        let p = PcPresentation::new(ngens, power, comms).unwrap();
        MulTables::new(&build_group_table(&p).unwrap())
    }
    fn kc2() -> MulTables {
        tables(1, vec![0], vec![])
    }
    // a = g1, a^2 = g2, a^3 = g1 g2 = index 3
    fn kc4() -> MulTables {
        tables(2, vec![0b10, 0], vec![])
    }
    fn kd8() -> MulTables {
        tables(3, vec![0, 0b100, 0], vec![((1, 0), 0b100)])
    }
    fn kq8() -> MulTables {
        tables(3, vec![0b100, 0b100, 0], vec![((1, 0), 0b100)])
    }

    const A: u32 = 1 << 1;
    const A2: u32 = 1 << 2;
    const A3: u32 = 1 << 3;

    #[test]
    fn products() {
        let t = kc2();
        let y = AlgebraElement(0b11);
        assert_eq!(t.multiply(AlgebraElement::ONE, y), y);
        assert_eq!(t.multiply(y, y), AlgebraElement::ZERO);

        let t = kc4();
        let lhs = AlgebraElement(1 | A);
        let rhs = AlgebraElement(1 | A3);
        assert_eq!(t.multiply(lhs, rhs), AlgebraElement(A | A3));
        assert_eq!(t.multiply(lhs, lhs), AlgebraElement(1 | A2));
    }

    #[test]
    fn augmentation_values() {
        assert_eq!(AlgebraElement::ZERO.augmentation(), 0);
        assert_eq!(AlgebraElement::group_element(5).augmentation(), 1);
        assert_eq!(AlgebraElement(1 | A | A2).augmentation(), 1);
    }

    #[test]
    fn unit_inverses() {
        let t = kc2();
        assert_eq!(t.inverse_of_normalized_unit(AlgebraElement::ONE).unwrap(), AlgebraElement::ONE);
        assert_eq!(t.inverse_of_normalized_unit(AlgebraElement(0b10)).unwrap(), AlgebraElement(0b10));
        let t = kc4();
        assert_eq!(t.inverse_of_normalized_unit(AlgebraElement(A)).unwrap(), AlgebraElement(A3));
        assert!(matches!(t.inverse_of_normalized_unit(AlgebraElement(0b11)), Err(Error::NotAUnit)));
        let t = kd8();
        for u in (0..256u32).filter(|u| u.count_ones() % 2 == 1) {
            let u = AlgebraElement(u);
            let v = t.inverse_of_normalized_unit(u).unwrap();
            assert_eq!(t.multiply(u, v), AlgebraElement::ONE);
            assert_eq!(t.multiply(v, u), AlgebraElement::ONE);
        }
    }

    #[test]
    fn filtration_dims() {
        assert_eq!(ideal_power_filtration(&kc2()).graded_dims(), vec![1]);
        assert_eq!(ideal_power_filtration(&kc4()).graded_dims(), vec![1, 1, 1]);
        assert_eq!(ideal_power_filtration(&kd8()).graded_dims(), vec![2, 2, 2, 1]);
    }

    #[test]
    fn weighted_basis_kc4() {
        let t = kc4();
        let b = weighted_basis(&ideal_power_filtration(&t));
        assert_eq!(b.weights(), &[1, 2, 3]);
        // spans match (1+a)^k
        let f = ideal_power_filtration(&t);
        let x = AlgebraElement(1 | A);
        let x2 = t.multiply(x, x);
        let x3 = t.multiply(x2, x);
        assert!(f.contains(3, x3) && !x3.is_zero());
        assert_eq!(f.weight_of(x), 1);
        assert_eq!(f.weight_of(x2), 2);
        assert_eq!(f.weight_of(x3), 3);
        for (i, &v) in b.vectors().iter().enumerate() {
            assert_eq!(b.coords(v), 1 << i);
            assert_eq!(b.element(1 << i), v);
        }
    }

    #[test]
    fn weighted_basis_invariants_d8() {
        let t = kd8();
        let f = ideal_power_filtration(&t);
        let b = weighted_basis(&f);
        assert_eq!(b.len(), 7);
        assert!(b.weights().windows(2).all(|w| w[0] <= w[1]));
        for k in 1..=f.depth() {
            let span = Echelon::from_vectors(
                b.vectors().iter().zip(b.weights()).filter(|(_, &w)| w >= k).map(|(v, _)| v.0),
            );
            assert_eq!(span.rank(), f.power(k).len());
            assert!(f.power(k).iter().all(|&v| span.contains(v)));
        }
        for i in 0..7 {
            for j in 0..7 {
                let p = t.multiply(b.vector(i), b.vector(j));
                assert!(f.contains(b.weight(i) + b.weight(j), p));
            }
        }
    }

    #[test]
    fn class_sums_are_central() {
        for t in [kd8(), kq8(), kc4()] {
            let table_classes = {
                // rebuild classes from the translation tables
                let order = t.order();
                let g = |x: usize, y: usize| t.left_translation(x)[y] as usize;
                let inv = |x: usize| (0..order).find(|&y| g(x, y) == 0).unwrap();
                let mut seen = 0u32;
                let mut classes = Vec::new();
                for x in 0..order {
                    if seen >> x & 1 == 1 {
                        continue;
                    }
                    let mut c: Vec<usize> = (0..order).map(|h| g(g(inv(h), x), h)).collect();
                    c.sort_unstable();
                    c.dedup();
                    for &y in &c {
                        seen |= 1 << y;
                    }
                    classes.push(c);
                }
                classes
            };
            let cb = center_basis(&table_classes);
            for &s in cb.class_sums() {
                for g in 0..t.order() {
                    let e = AlgebraElement::group_element(g);
                    assert_eq!(t.multiply(s, e), t.multiply(e, s));
                }
            }
            assert_eq!(Echelon::from_vectors(cb.class_sums().iter().map(|s| s.0)).rank(), cb.k());
            assert_eq!(cb.ideal_part().len(), cb.k() - 1);
            assert!(cb.ideal_part().iter().all(|s| s.augmentation() == 0));
        }
    }

    #[test]
    fn center_bases_from_group_classes() {
        let p = PcPresentation::new(3, vec![0, 0b100, 0], [((1, 0), 0b100)]).unwrap();
        let classes = conjugacy_classes(&build_group_table(&p).unwrap());
        assert_eq!(center_basis(&classes).k(), 5);
    }
}
