//! Bipartition flattenings and the exact rank tests built on them.
//!
//! "All `(k+1)×(k+1)` minors vanish" is tested as "elimination rank ≤ k".

use crate::concision::compress;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::scalar::Scalar;
use crate::tensor::{for_each_index, DenseTensor};

pub use crate::matrix::ExactMatrix;

/// A split of the modes `{0, …, d−1}` into two nonempty sorted parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    j1: Vec<usize>,
    j2: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut j1: Vec<usize>, d: usize) -> Result<Self> {
        j1.sort_unstable();
        j1.dedup();
        if j1.is_empty() || j1.len() >= d || j1.iter().any(|&m| m >= d) {
            return Err(Error::Shape(format!("{j1:?} is not a proper nonempty subset of {d} modes")));
        }
        let j2 = (0..d).filter(|m| !j1.contains(m)).collect();
        Ok(Bipartition { j1, j2 })
    }

    /// The `2^(d−1) − 1` unordered bipartitions, each listed with mode 0 in `J₁`.
    pub fn all(d: usize) -> Vec<Bipartition> {
        if d < 2 {
            return Vec::new();
        }
        (0..(1usize << (d - 1)) - 1)
            .map(|mask| {
                // bit k of mask puts mode k+1 into J₁
                let j1: Vec<usize> =
                    std::iter::once(0).chain((1..d).filter(|k| mask >> (k - 1) & 1 == 1)).collect();
                Bipartition::new(j1, d).expect("proper subset")
            })
            .collect()
    }

    pub fn single(mode: usize, d: usize) -> Result<Self> {
        Self::new(vec![mode], d)
    }

    pub fn j1(&self) -> &[usize] {
        &self.j1
    }

    pub fn j2(&self) -> &[usize] {
        &self.j2
    }
}

/// Reshapes `t` into a `V_{J₁} × V_{J₂}` matrix, both sides row-major over
/// their sorted mode lists.
pub fn flattening(t: &DenseTensor, p: &Bipartition) -> Result<ExactMatrix> {
    let d = t.order();
    if p.j1.len() + p.j2.len() != d {
        return Err(Error::Shape(format!("bipartition of {} modes used on an order-{d} tensor", p.j1.len() + p.j2.len())));
    }
    let dims = t.dims();
    let group_strides = |group: &[usize]| {
        let mut s = vec![0usize; d];
        let mut acc = 1;
        for &m in group.iter().rev() {
            s[m] = acc;
            acc *= dims[m];
        }
        (s, acc)
    };
    let (rs, rows) = group_strides(&p.j1);
    let (cs, cols) = group_strides(&p.j2);
    let mut out = vec![Scalar::zero(); rows * cols];
    let mut flat = 0;
    let entries = t.entries();
    for_each_index(dims, |idx| {
        let r: usize = idx.iter().zip(&rs).map(|(i, s)| i * s).sum();
        let c: usize = idx.iter().zip(&cs).map(|(i, s)| i * s).sum();
        out[r * cols + c] = entries[flat].clone();
        flat += 1;
    });
    ExactMatrix::new(rows, cols, out)
}

/// The mode-`i` flattening (`J₁ = {i}`); also valid for order-1 tensors,
/// where it is the single row vector.
pub(crate) fn mode_flattening(t: &DenseTensor, mode: usize) -> ExactMatrix {
    let dims = t.dims();
    let n = dims[mode];
    let rest = t.entries().len() / n;
    let outer: usize = dims[..mode].iter().product();
    let inner: usize = dims[mode + 1..].iter().product();
    let mut out = Vec::with_capacity(n * rest);
    for i in 0..n {
        for o in 0..outer {
            let base = (o * n + i) * inner;
            out.extend_from_slice(&t.entries()[base..base + inner]);
        }
    }
    ExactMatrix::new(n, rest, out).expect("consistent flattening size")
}

pub fn exact_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

/// Rank of every single-mode flattening.
pub fn multilinear_ranks(t: &DenseTensor) -> Vec<usize> {
    (0..t.order()).map(|i| mode_flattening(t, i).rank()).collect()
}

/// Maximum flattening rank over all bipartitions, clamped to `cap + 1`.
///
/// `t` is first compressed onto its essential subspaces, which yields the
/// single-mode ranks and stops early once one exceeds `cap`. Injective maps
/// preserve every flattening rank, so the bipartition sweep then runs on the
/// small core. An order-1 tensor counts as a `1 × n` matrix.
pub fn max_flattening_rank(t: &DenseTensor, cap: usize) -> usize {
    let core = match compress(t, cap) {
        Ok(c) => c.core,
        Err(Error::ZeroTensor) => return 0,
        Err(_) => return cap + 1,
    };
    let top = core.dims().iter().copied().max().unwrap_or(1);
    if top <= 1 || core.order() <= 3 {
        // rank ≤ 1 in every mode forces rank ≤ 1; up to three modes every
        // bipartition is single-mode up to transposition
        return top;
    }
    top.max(core_sweep(&core, cap))
}

/// Literal sweep of every bipartition of `t` itself.
pub fn max_flattening_rank_exhaustive(t: &DenseTensor, cap: usize, exec: Execution) -> usize {
    if t.is_zero() {
        return 0;
    }
    if t.order() == 1 {
        return 1;
    }
    sweep(t, cap, exec)
}

/// Sweep of a compressed core over the bipartitions with at least two modes
/// on each side; the single-mode ranks are the core's dimensions. Cores are
/// small, so this runs sequentially.
pub(crate) fn core_sweep(core: &DenseTensor, cap: usize) -> usize {
    let parts: Vec<Bipartition> =
        Bipartition::all(core.order()).into_iter().filter(|p| p.j1.len() >= 2 && p.j2.len() >= 2).collect();
    Execution::Sequential.max_capped(&parts, cap, |p| flattening(core, p).expect("valid bipartition").rank_capped(cap))
}

fn sweep(t: &DenseTensor, cap: usize, exec: Execution) -> usize {
    let parts = Bipartition::all(t.order());
    exec.max_capped(&parts, cap, |p| flattening(t, p).expect("valid bipartition").rank_capped(cap))
}
