//! Subgroups of PC groups through induced (echelonized) generating sequences.
//!
//! The leading index of a nonzero exponent vector is its lowest set bit. The
//! map from `G_d = <g_d, ..., g_n>` to the exponent at `d` is a homomorphism
//! onto C2, so dividing by a row with the same leading index clears that
//! position. Division is always done through the collector: exponent vectors
//! do not add in a nonabelian group.
//!
//! Closure relies on commutator tails of `[g_j, g_i]` involving only
//! generators above `j`, which holds for every presentation built in this
//! crate (checked by [`PcPresentation::is_central_refined`]).

use std::collections::BTreeSet;

use crate::pc::{Exponents, PcPresentation};

/// Echelonized generating sequence of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InducedSequence {
    rows: Vec<Exponents>,
    inverses: Vec<Exponents>,
    leads: Exponents,
}

impl InducedSequence {
    pub fn trivial() -> Self {
        InducedSequence { rows: Vec::new(), inverses: Vec::new(), leads: 0 }
    }

    /// The whole group: one row per PC generator.
    pub fn full(pres: &PcPresentation) -> Self {
        let mut seq = Self::trivial();
        for i in 0..pres.ngens() {
            seq.insert_row(pres, 1 << i);
        }
        seq
    }

    pub fn rows(&self) -> &[Exponents] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Leading indices as a bit mask.
    pub fn depths(&self) -> Exponents {
        self.leads
    }

    /// Subgroup order as a base-2 logarithm.
    pub fn order_log2(&self) -> usize {
        self.rows.len()
    }

    fn row_with_lead(&self, d: u32) -> Option<usize> {
        if self.leads >> d & 1 == 0 {
            return None;
        }
        // rows are kept sorted by leading index
        Some((self.leads & ((1u64 << d) - 1) as u32).count_ones() as usize)
    }

    /// Cancels leading exponents against matching rows; the residue is zero
    /// exactly when `g` lies in the subgroup.
    pub fn sift(&self, pres: &PcPresentation, mut g: Exponents) -> Exponents {
        while g != 0 {
            let d = g.trailing_zeros();
            match self.row_with_lead(d) {
                Some(k) => g = pres.multiply(self.inverses[k], g),
                None => return g,
            }
        }
        0
    }

    pub fn contains(&self, pres: &PcPresentation, g: Exponents) -> bool {
        self.sift(pres, g) == 0
    }

    fn insert_row(&mut self, pres: &PcPresentation, r: Exponents) {
        debug_assert!(r != 0);
        let d = r.trailing_zeros();
        debug_assert!(self.leads >> d & 1 == 0);
        let k = (self.leads & ((1u64 << d) - 1) as u32).count_ones() as usize;
        self.rows.insert(k, r);
        self.inverses.insert(k, pres.inverse(r));
        self.leads |= 1 << d;
    }

    /// Clears every row at the leading positions of the other rows, which
    /// makes the sequence a canonical description of the subgroup.
    fn canonicalize(&mut self, pres: &PcPresentation) {
        for k in 0..self.rows.len() {
            let mut r = self.rows[k];
            let own = r.trailing_zeros();
            let mut pending = r & self.leads & !(1 << own);
            while pending != 0 {
                let e = pending.trailing_zeros();
                let other = self.row_with_lead(e).unwrap();
                // right multiplication by an element of G_e only touches positions >= e
                r = pres.multiply(r, self.inverses[other]);
                pending = r & self.leads & !(1 << own) & !((1u64 << (e + 1)) - 1) as u32;
            }
            self.rows[k] = r;
            self.inverses[k] = pres.inverse(r);
        }
    }

    /// Squares, pairwise products, pairwise commutators (and, for normal
    /// subgroups, conjugates by every ambient generator) must all sift to
    /// zero.
    pub fn closure_certificate(&self, pres: &PcPresentation, normal: bool) -> bool {
        let sifts_out = |g| self.sift(pres, g) == 0;
        for (a, &x) in self.rows.iter().enumerate() {
            if !sifts_out(pres.square(x)) {
                return false;
            }
            for &y in &self.rows[a + 1..] {
                if !sifts_out(pres.multiply(x, y)) || !sifts_out(pres.commutator(y, x)) {
                    return false;
                }
            }
            if normal && !(0..pres.ngens()).all(|k| sifts_out(pres.conjugate(x, 1 << k))) {
                return false;
            }
        }
        true
    }
}

/// Induced sequence of `<gens>`, or of its normal closure in the ambient
/// group when `normal_closure` is set.
pub fn induced_sequence(
    gens: impl IntoIterator<Item = Exponents>,
    pres: &PcPresentation,
    normal_closure: bool,
) -> InducedSequence {
    let mut seq = InducedSequence::trivial();
    // ordered by (leading index, value): smallest leading index first
    let mut work: BTreeSet<(u32, Exponents)> = BTreeSet::new();
    let push = |work: &mut BTreeSet<(u32, Exponents)>, g: Exponents| {
        if g != 0 {
            work.insert((g.trailing_zeros(), g));
        }
    };
    for g in gens {
        push(&mut work, g);
    }
    while let Some((_, g)) = work.pop_first() {
        let r = seq.sift(pres, g);
        if r == 0 {
            continue;
        }
        push(&mut work, pres.square(r));
        for &row in &seq.rows {
            push(&mut work, pres.commutator(r, row));
        }
        if normal_closure {
            for k in 0..pres.ngens() {
                push(&mut work, pres.conjugate(r, 1 << k));
            }
        }
        seq.insert_row(pres, r);
    }
    seq.canonicalize(pres);
    seq
}

/// Frattini subgroup `V^2 [V, V]`: the normal closure of the squares and
/// commutators of the PC generators.
pub fn frattini_subgroup(pres: &PcPresentation) -> InducedSequence {
    let n = pres.ngens();
    let mut gens: Vec<Exponents> = (0..n).map(|i| pres.power_tail(i)).collect();
    gens.extend(pres.commutator_tails().map(|(_, w)| w));
    induced_sequence(gens, pres, true)
}

/// `lambda_1 = V`, `lambda_(i+1) = [lambda_i, V] lambda_i^2`, down to the
/// trivial subgroup (included as the last term).
pub fn lower_p_central_series(pres: &PcPresentation) -> Vec<InducedSequence> {
    let mut series = vec![InducedSequence::full(pres)];
    loop {
        let last = series.last().unwrap();
        if last.is_empty() {
            return series;
        }
        let mut gens = Vec::new();
        for &r in last.rows() {
            gens.push(pres.square(r));
            for k in 0..pres.ngens() {
                gens.push(pres.commutator(r, 1 << k));
            }
        }
        let next = induced_sequence(gens, pres, true);
        assert!(next.len() < last.len(), "lower exponent-2 central series must descend");
        series.push(next);
    }
}

/// Number of nontrivial terms of the lower exponent-2 central series.
pub fn p_class(pres: &PcPresentation) -> usize {
    lower_p_central_series(pres).len() - 1
}

impl PcPresentation {
    /// True when every tail of `[g_j, g_i]` only involves generators above `j`.
    pub fn is_central_refined(&self) -> bool {
        self.commutator_tails().all(|((j, _), w)| w.trailing_zeros() as usize > j)
    }
}
