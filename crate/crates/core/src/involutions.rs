//! Counting involutions of V(KG) by enumerating the squaring map on I.
//!
//! Over GF(2), `(1 + y)^2 = 1 + y^2`, so the involutions of V(KG) are exactly
//! the `1 + y` with `y != 0` and `y^2 = 0`. Writing `y = sum y_i b_i`,
//!
//! ```text
//! Q(y) = y^2 = sum_i y_i b_i^2 + sum_{i<j} y_i y_j (b_i b_j + b_j b_i)
//! ```
//!
//! is a quadratic map GF(2)^m -> GF(2)^m given by `m` square vectors and a
//! symmetric, zero-diagonal table of cross vectors. Flipping coordinate `k`
//! changes `Q` by `sq[k] + c_k(y)`, where `c_k(y) = sum_{j in y} cross[j][k]`
//! does not depend on `y_k` because `cross[k][k] = 0`.
//!
//! The space is split into `2^s` tasks by fixing the top `s` coordinates (a
//! coset decomposition modulo the subgroup spanned by the remaining
//! generators). Inside a task the walk runs in Gray-code order over the
//! "outer" coordinates; the lowest `t` coordinates form an inner block whose
//! contribution is kept as a table `D[low] = Q(low) + B(x, low)`, updated by
//! one XOR pass per outer step. With `t = 0` this is the plain walk that keeps
//! `R = Q(y)` and every `c_i` up to date at each point.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::algebra::{AlgebraElement, MulTables};
use crate::error::{Error, Result};
use crate::gf2::{bits_of, Bits};

/// The squaring map on the augmentation ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMap {
    m: usize,
    sq: Vec<Bits>,
    // cross[i * 32 + j]; rows padded to 32 entries
    cross: Vec<Bits>,
}

impl QuadraticMap {
    /// Builds the map with inputs in the given basis of I and outputs in
    /// natural coordinates.
    pub fn in_basis(t: &MulTables, basis: &[AlgebraElement]) -> Self {
        let m = basis.len();
        assert!(m <= 32);
        let sq = basis.iter().map(|&b| t.square(b).ideal_coords()).collect();
        let mut cross = vec![0; m * 32];
        for i in 0..m {
            for j in 0..i {
                let v = (t.multiply(basis[i], basis[j]) + t.multiply(basis[j], basis[i])).ideal_coords();
                cross[i * 32 + j] = v;
                cross[j * 32 + i] = v;
            }
        }
        QuadraticMap { m, sq, cross }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sq(&self, i: usize) -> Bits {
        self.sq[i]
    }

    pub fn cross(&self, i: usize, j: usize) -> Bits {
        self.cross[i * 32 + j]
    }

    fn cross_row(&self, k: usize) -> &[Bits; 32] {
        self.cross[k * 32..k * 32 + 32].try_into().unwrap()
    }

    /// `Q(y)` from scratch.
    pub fn eval(&self, y: Bits) -> Bits {
        let mut r = 0;
        let mut seen = 0;
        for i in bits_of(y) {
            r ^= self.sq[i];
            for j in bits_of(seen) {
                r ^= self.cross[j * 32 + i];
            }
            seen |= 1 << i;
        }
        r
    }

    /// `c_k(y)` for every `k`, padded to 32 entries.
    fn cross_sums(&self, y: Bits) -> [Bits; 32] {
        let mut c = [0; 32];
        for j in bits_of(y) {
            xor_rows(&mut c, self.cross_row(j));
        }
        c
    }
}

/// Squaring map in the natural basis `{1 + g : g != 1}`.
pub fn build_quadratic_map(t: &MulTables) -> QuadraticMap {
    QuadraticMap::in_basis(t, &t.ideal_basis())
}

#[inline(always)]
fn xor_rows(c: &mut [Bits; 32], row: &[Bits; 32]) {
    for (a, b) in c.iter_mut().zip(row) {
        *a ^= *b;
    }
}

/// How the space is cut up and walked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Number of top coordinates fixed per task (`2^split_bits` tasks).
    pub split_bits: usize,
    /// Size of the tabulated inner block; 0 gives the plain Gray walk.
    pub inner_bits: usize,
    /// Worker threads; `None` runs in the ambient rayon pool.
    pub workers: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { split_bits: 8, inner_bits: 10, workers: None }
    }
}

/// One coset of the partition: the top `split_bits` coordinates are fixed to
/// `label`, the remaining `free_bits` range over everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountTask {
    pub label: u32,
    pub free_bits: usize,
}

impl CountTask {
    pub fn fixed(&self) -> Bits {
        ((self.label as u64) << self.free_bits) as Bits
    }

    pub fn points(&self) -> u64 {
        1 << self.free_bits
    }
}

/// Partition of `GF(2)^m` into `2^s` tasks (`s` clamped to `m`).
pub fn partition(m: usize, split_bits: usize) -> Vec<CountTask> {
    let s = split_bits.min(m);
    (0..1u32 << s).map(|label| CountTask { label, free_bits: m - s }).collect()
}

/// Progress snapshot passed to the reporting callback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub tasks_done: usize,
    pub tasks_total: usize,
    pub points_done: u64,
}

/// Tables shared by every task for a given inner block size.
struct InnerBlock {
    bits: usize,
    // Q(low) over the inner coordinates
    base: Vec<Bits>,
    // delta[(k - bits) * 2^bits + low] = sum_{i in low} cross[k][i]
    delta: Vec<Bits>,
}

impl InnerBlock {
    fn new(q: &QuadraticMap, bits: usize, free_bits: usize) -> Self {
        let size = 1usize << bits;
        let base = (0..size as u32).map(|low| q.eval(low)).collect();
        let mut delta = vec![0; (free_bits - bits) * size];
        for k in bits..free_bits {
            let table = &mut delta[(k - bits) * size..(k - bits + 1) * size];
            for i in 0..bits {
                let v = q.cross(k, i);
                let half = 1usize << i;
                for low in 0..half {
                    table[low | half] = table[low] ^ v;
                }
            }
        }
        InnerBlock { bits, base, delta }
    }

    fn delta(&self, k: usize) -> &[Bits] {
        let size = 1usize << self.bits;
        &self.delta[(k - self.bits) * size..(k - self.bits + 1) * size]
    }
}

#[inline(never)]
fn xor_and_count(d: &mut [Bits], delta: &[Bits], target: Bits) -> u64 {
    let mut total = 0u64;
    for (dc, xc) in d.chunks_mut(1024).zip(delta.chunks(1024)) {
        let mut n = 0u32;
        for (a, b) in dc.iter_mut().zip(xc) {
            *a ^= *b;
            n += (*a == target) as u32;
        }
        total += n as u64;
    }
    total
}

fn count_equal(d: &[Bits], target: Bits) -> u64 {
    d.iter().filter(|&&x| x == target).count() as u64
}

/// Number of points `y` in the task's coset with `Q(y) = 0`.
fn run_task(q: &QuadraticMap, task: CountTask, inner: &InnerBlock) -> u64 {
    let n = task.free_bits;
    let t = inner.bits;
    let fixed = task.fixed();
    let mut r = q.eval(fixed);
    let mut c = q.cross_sums(fixed);
    let mut count;
    if t == 0 {
        count = (r == 0) as u64;
        for g in 1u64..1 << n {
            let k = g.trailing_zeros() as usize;
            r ^= q.sq[k] ^ c[k];
            xor_rows(&mut c, q.cross_row(k));
            count += (r == 0) as u64;
        }
    } else {
        // D[low] = Q(low) + sum_{i in low} c_i(x) for the current outer point x
        let mut d = inner.base.clone();
        let mut lin = vec![0 as Bits; 1 << t];
        for i in 0..t {
            let half = 1usize << i;
            for low in 0..half {
                lin[low | half] = lin[low] ^ c[i];
            }
        }
        for (a, b) in d.iter_mut().zip(&lin) {
            *a ^= *b;
        }
        count = count_equal(&d, r);
        for g in 1u64..1 << (n - t) {
            let k = t + g.trailing_zeros() as usize;
            r ^= q.sq[k] ^ c[k];
            xor_rows(&mut c, q.cross_row(k));
            count += xor_and_count(&mut d, inner.delta(k), r);
        }
    }
    // the walk ends at the outer point with only its top bit set
    let last = if n > t { fixed | 1 << (n - 1) } else { fixed };
    assert_eq!(r, q.eval(last), "Gray walk state drifted in task {}", task.label);
    count
}

/// Number of involutions of V(KG): nonzero `y` with `Q(y) = 0`.
pub fn count_involutions(
    q: &QuadraticMap,
    opts: &CountOptions,
    progress: Option<&(dyn Fn(Progress) + Sync)>,
) -> Result<u64> {
    Ok(count_kernel(q, opts, progress)? - 1)
}

/// Size of the kernel `{y : Q(y) = 0}`, zero included.
pub fn count_kernel(
    q: &QuadraticMap,
    opts: &CountOptions,
    progress: Option<&(dyn Fn(Progress) + Sync)>,
) -> Result<u64> {
    let tasks = partition(q.m, opts.split_bits);
    let free_bits = tasks[0].free_bits;
    let inner = InnerBlock::new(q, opts.inner_bits.min(free_bits), free_bits);
    let done = AtomicUsize::new(0);
    let points = AtomicU64::new(0);
    let total = tasks.len();
    let work = || {
        tasks
            .par_iter()
            .map(|&task| {
                let n = run_task(q, task, &inner);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                let pts = points.fetch_add(task.points(), Ordering::Relaxed) + task.points();
                if let Some(cb) = progress {
                    cb(Progress { tasks_done: finished, tasks_total: total, points_done: pts });
                }
                n
            })
            .collect::<Vec<u64>>()
    };
    let partials = match opts.workers {
        None => work(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::CountParameters(e.to_string()))?
            .install(work),
    };
    // summed in task order
    Ok(partials.iter().sum())
}

/// Involutions by squaring every unit directly. Refuses `|G| > 16` unless
/// `allow_large` is set.
pub fn oracle_count_involutions(t: &MulTables, allow_large: bool) -> Result<u64> {
    let m = t.ideal_dim();
    if m > 15 && !allow_large {
        return Err(Error::OracleTooLarge(format!("|G| = {} > 16", t.order())));
    }
    let mut count = 0;
    for c in 1..1u64 << m {
        let u = AlgebraElement::ONE + AlgebraElement::from_ideal_coords(c as Bits);
        if t.square(u) == AlgebraElement::ONE {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of elements of order exactly 4: points with `Q(Q(y)) = 0` minus
/// those with `Q(y) = 0`. The map must use natural coordinates on both
/// sides (as built by [`build_quadratic_map`]).
pub fn count_order_4(q: &QuadraticMap, opts: &CountOptions) -> Result<u64> {
    let tasks = partition(q.m, opts.split_bits);
    let run = |task: &CountTask| {
        let fixed = task.fixed();
        let mut r = q.eval(fixed);
        let mut c = q.cross_sums(fixed);
        let mut dividing4 = (q.eval(r) == 0) as u64;
        let mut dividing2 = (r == 0) as u64;
        for g in 1u64..1 << task.free_bits {
            let k = g.trailing_zeros() as usize;
            r ^= q.sq[k] ^ c[k];
            xor_rows(&mut c, q.cross_row(k));
            dividing2 += (r == 0) as u64;
            dividing4 += (r == 0 || q.eval(r) == 0) as u64;
        }
        dividing4 - dividing2
    };
    let partials: Vec<u64> = match opts.workers {
        None => tasks.par_iter().map(run).collect(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::CountParameters(e.to_string()))?
            .install(|| tasks.par_iter().map(run).collect()),
    };
    Ok(partials.iter().sum())
}
