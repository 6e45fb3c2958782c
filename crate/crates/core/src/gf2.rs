//! Bit-packed linear algebra over GF(2).
//!
//! Every vector space in this crate has dimension at most 32, so a vector is a
//! single `u32` and a matrix is a slice of column (or row) words. Row
//! reduction keeps an explicit pivot table so membership, coordinates and
//! spanning-set extension are all a handful of XORs.

/// A vector over GF(2) of dimension at most 32.
pub type Bits = u32;

/// Iterates over the indices of the set bits of `x`, lowest first.
#[inline]
pub fn bits_of(mut x: Bits) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

/// A subspace of GF(2)^32 in echelon form.
///
/// Each stored row has a distinct pivot (its lowest set bit), and no stored row
/// has a set bit at another row's pivot. `combo[k]` records which input
/// vectors (by insertion order) were XORed together to produce row `k`.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Bits>,
    pivots: Vec<u32>,
    combo: Vec<u64>,
    inserted: u32,
}

// `solve` can only name the first 64 inserted vectors.
const MAX_TRACKED: u32 = 64;

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<I: IntoIterator<Item = Bits>>(vs: I) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    /// Reduces `v` against the stored rows. Returns the residue together with
    /// the set of row indices that were used.
    pub fn reduce_tracked(&self, mut v: Bits) -> (Bits, u64) {
        let mut used = 0u64;
        for (k, (&row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v >> p & 1 == 1 {
                v ^= row;
                used |= 1 << k;
            }
        }
        (v, used)
    }

    pub fn reduce(&self, v: Bits) -> Bits {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: Bits) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns `true` when the rank grew.
    pub fn insert(&mut self, v: Bits) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, used) = self.reduce_tracked(v);
        if r == 0 {
            return false;
        }
        let mut combo = if idx < MAX_TRACKED { 1u64 << idx } else { 0 };
        for k in bits_of_u64(used) {
            combo ^= self.combo[k];
        }
        let p = r.trailing_zeros();
        // keep the table fully reduced
        for k in 0..self.rows.len() {
            if self.rows[k] >> p & 1 == 1 {
                self.rows[k] ^= r;
                self.combo[k] ^= combo;
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        self.combo.push(combo);
        true
    }

    /// Expresses `v` as a combination of the inserted vectors (bit `i` of the
    /// result refers to the `i`-th call of `insert`), or `None` if `v` lies
    /// outside the span.
    pub fn solve(&self, v: Bits) -> Option<u64> {
        assert!(self.inserted <= MAX_TRACKED, "solve needs at most 64 insertions");
        let (r, used) = self.reduce_tracked(v);
        if r != 0 {
            return None;
        }
        Some(bits_of_u64(used).fold(0, |acc, k| acc ^ self.combo[k]))
    }
}

fn bits_of_u64(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

/// A square matrix over GF(2) of size at most 32, stored by columns:
/// `cols[j]` is the image of the `j`-th unit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    cols: Vec<Bits>,
}

impl Matrix {
    pub fn from_columns(cols: Vec<Bits>) -> Self {
        assert!(cols.len() <= 32);
        Matrix { cols }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { cols: (0..n).map(|j| 1 << j).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Matrix { cols: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Bits] {
        &self.cols
    }

    #[inline]
    pub fn apply(&self, v: Bits) -> Bits {
        bits_of(v).fold(0, |acc, j| acc ^ self.cols[j])
    }

    /// `self * other`.
    pub fn compose(&self, other: &Matrix) -> Matrix {
        Matrix { cols: other.cols.iter().map(|&c| self.apply(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|&c| c == 0)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_vectors(self.cols.iter().copied()).rank()
    }

    pub fn nullity(&self) -> usize {
        self.dim() - self.rank()
    }

    /// Inverse of a nonsingular matrix.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.dim();
        let e = Echelon::from_vectors(self.cols.iter().copied());
        if e.rank() != n {
            return None;
        }
        // column j of the inverse holds the coordinates of e_j in terms of our columns
        let cols = (0..n)
            .map(|j| e.solve(1 << j).map(|c| c as Bits))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix { cols })
    }

    /// Smallest `t >= 0` with `self^t = 0`, or `None` for a non-nilpotent map.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.dim();
        let mut power = Matrix::identity(n);
        for t in 0..=n {
            if power.is_zero() {
                return Some(t);
            }
            power = self.compose(&power);
        }
        None
    }
}
