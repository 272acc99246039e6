//! Concision: restricting a tensor to its essential subspaces.
//!
//! A border-rank-2 tensor lives in `U₁ ⊗ ⋯ ⊗ U_d` with `dim Uᵢ ≤ 2`. Modes
//! with a one-dimensional essential subspace are factored out entirely, the
//! rest are compressed to dimension 2, leaving a `2 × ⋯ × 2` core with the
//! same rank, border rank and flattening ranks.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::Scalar;
use crate::tensor::{DenseTensor, Shape};

/// `t = core ×₀ B₀ ×₁ ⋯` with each `Bᵢ` of full column rank.
pub(crate) struct Compressed {
    pub core: DenseTensor,
    pub bases: Vec<ExactMatrix>,
}

/// Compresses every mode onto a basis of its column space. Each basis is
/// reduced so that it is the identity on a set of pivot coordinates, and the
/// core is the subtensor of `t` on those coordinates, so it keeps the entry
/// size of `t`. Fails if some mode has rank above `cap`.
///
/// Modes are compressed one after another: once mode `i` is restricted to
/// its pivots, the later flattenings keep their column spaces, so each scan
/// runs on an already shrunken tensor.
pub(crate) fn compress(t: &DenseTensor, cap: usize) -> Result<Compressed> {
    let mut cur: Option<DenseTensor> = None;
    let mut bases = Vec::with_capacity(t.order());
    for mode in 0..t.order() {
        let src = cur.as_ref().unwrap_or(t);
        let span = scan_fibres(src, mode, cap)?;
        cur = Some(restrict(src, mode, &span.pivots)?);
        bases.push(span.basis);
    }
    Ok(Compressed { core: cur.unwrap_or_else(|| t.clone()), bases })
}

/// Column space of a flattening: `basis` is the identity on the rows `pivots`.
struct Span {
    pivots: Vec<usize>,
    basis: ExactMatrix,
}

impl Span {
    fn new(fibres: &[Vec<Scalar>]) -> Result<Span> {
        let c = ExactMatrix::from_columns(fibres)?;
        let pivots = c.transpose().basis_columns(fibres.len());
        let square = ExactMatrix::from_rows(pivots.iter().map(|&r| c.row(r).to_vec()).collect())?;
        Ok(Span { basis: c.mul(&square.inverse()?)?, pivots })
    }

    /// `f` lies in the span iff it equals `basis · f[pivots]`.
    fn contains(&self, f: &[Scalar]) -> bool {
        (0..f.len()).filter(|j| !self.pivots.contains(j)).all(|j| {
            let row = self.basis.row(j);
            let mut acc = Scalar::zero();
            for (k, &p) in self.pivots.iter().enumerate() {
                if !row[k].is_zero() && !f[p].is_zero() {
                    acc = &acc + &(&row[k] * &f[p]);
                }
            }
            acc == f[j]
        })
    }
}

/// Span of the mode-`mode` fibres, built from the left-most independent ones
/// in flattening column order.
fn scan_fibres(t: &DenseTensor, mode: usize, cap: usize) -> Result<Span> {
    let dims = t.dims();
    let n = dims[mode];
    let outer: usize = dims[..mode].iter().product();
    let inner: usize = dims[mode + 1..].iter().product();
    let entries = t.entries();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut span: Option<Span> = None;
    for o in 0..outer {
        for k in 0..inner {
            let at = |j: usize| &entries[(o * n + j) * inner + k];
            if (0..n).all(|j| at(j).is_zero()) {
                continue;
            }
            let fibre: Vec<Scalar> = (0..n).map(|j| at(j).clone()).collect();
            if span.as_ref().is_some_and(|s| s.contains(&fibre)) {
                continue;
            }
            if chosen.len() == cap {
                return Err(Error::NotInSigma2);
            }
            chosen.push(fibre);
            span = Some(Span::new(&chosen)?);
        }
    }
    span.ok_or(Error::ZeroTensor)
}

/// The subtensor keeping only coordinates `keep` of `mode`.
fn restrict(t: &DenseTensor, mode: usize, keep: &[usize]) -> Result<DenseTensor> {
    let dims = t.dims();
    let n = dims[mode];
    let outer: usize = dims[..mode].iter().product();
    let inner: usize = dims[mode + 1..].iter().product();
    let entries = t.entries();
    let mut out = Vec::with_capacity(outer * keep.len() * inner);
    for o in 0..outer {
        for &p in keep {
            out.extend_from_slice(&entries[(o * n + p) * inner..(o * n + p + 1) * inner]);
        }
    }
    let mut new_dims = dims.to_vec();
    new_dims[mode] = keep.len();
    DenseTensor::new(Shape::new_unchecked(new_dims), out)
}

/// Scales `v` so its last nonzero coordinate is 1; returns the removed factor.
pub fn normalize_vector(v: &[Scalar]) -> Result<(Scalar, Vec<Scalar>)> {
    let last = v.iter().rev().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?.clone();
    let inv = last.recip()?;
    Ok((last, v.iter().map(|x| x * &inv).collect()))
}

/// A concise `2^q` core together with the data that rebuilds the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConciseCore {
    /// Shape `2 × ⋯ × 2` with `q` modes (the empty shape when `q = 0`).
    pub core: DenseTensor,
    /// For each surviving mode, a `dims[i] × 2` basis of its essential subspace.
    pub essential_bases: Vec<ExactMatrix>,
    /// `(original mode, normalised factor)` for every mode of multilinear rank 1.
    pub dropped_factors: Vec<(usize, Vec<Scalar>)>,
    /// Original index of each surviving mode, in order.
    pub mode_map: Vec<usize>,
    pub original_shape: Shape,
}

impl ConciseCore {
    pub fn q(&self) -> usize {
        self.mode_map.len()
    }

    /// Embeds `core` back into the original space.
    pub fn reconstruct(&self) -> Result<DenseTensor> {
        self.embed(&self.core)
    }

    /// Maps any tensor on the core's shape into the original space.
    pub fn embed(&self, core_like: &DenseTensor) -> Result<DenseTensor> {
        if core_like.dims() != self.core.dims() {
            return Err(Error::Shape("tensor does not live on the concise core's shape".into()));
        }
        // Re-insert dropped modes as size-1 modes, then map every mode up.
        let d = self.original_shape.order();
        let mut dims = vec![1usize; d];
        for &m in &self.mode_map {
            dims[m] = 2;
        }
        let mut t = DenseTensor::new(Shape::new_unchecked(dims), core_like.entries().to_vec())?;
        for (k, &m) in self.mode_map.iter().enumerate() {
            t = t.mode_apply(m, &self.essential_bases[k])?;
        }
        for (m, f) in &self.dropped_factors {
            let col = ExactMatrix::from_columns(std::slice::from_ref(f))?;
            t = t.mode_apply(*m, &col)?;
        }
        Ok(t)
    }
}

/// Reduces `t` to its concise `2^q` core.
///
/// Errors with [`Error::NotInSigma2`] when a mode has multilinear rank ≥ 3
/// and with [`Error::ZeroTensor`] on zero input.
pub fn concise_core(t: &DenseTensor) -> Result<ConciseCore> {
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let Compressed { mut core, bases } = compress(t, 2)?;
    let mut essential_bases = Vec::new();
    let mut dropped_factors = Vec::new();
    let mut mode_map = Vec::new();
    // Normalise the rank-1 factors, absorbing the scale into the core.
    for (i, b) in bases.into_iter().enumerate() {
        if b.cols() == 1 {
            let (scale, f) = normalize_vector(&b.column(0))?;
            core = core.scale(&scale);
            dropped_factors.push((i, f));
        } else {
            essential_bases.push(b);
            mode_map.push(i);
        }
    }
    let core_dims: Vec<usize> = core.dims().to_vec();
    let kept: Vec<usize> = core_dims.into_iter().filter(|&n| n == 2).collect();
    let core = if kept.is_empty() {
        DenseTensor::scalar(core.entries()[0].clone())
    } else {
        DenseTensor::new(Shape::new_unchecked(kept), core.into_entries())?
    };
    Ok(ConciseCore { core, essential_bases, dropped_factors, mode_map, original_shape: t.shape().clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn ghz_embedded_in_3x3x3() {
        let mut e = vec![0; 27];
        e[0] = 1;
        e[9 + 3 + 1] = 1;
        let t = DenseTensor::from_ints(&[3, 3, 3], &e).unwrap();
        let cc = concise_core(&t).unwrap();
        assert_eq!(cc.q(), 3);
        assert_eq!(cc.core, DenseTensor::from_ints(&[2, 2, 2], &[1, 0, 0, 0, 0, 0, 0, 1]).unwrap());
        assert_eq!(cc.reconstruct().unwrap(), t);
    }

    #[test]
    fn rank_one_drops_every_mode() {
        let t = DenseTensor::outer_product(&[v(&[2, 4]), v(&[0, 3, 1])]).unwrap();
        let cc = concise_core(&t).unwrap();
        assert_eq!(cc.q(), 0);
        assert_eq!(cc.dropped_factors, vec![(0, vec![Scalar::ratio(1, 2), Scalar::one()]), (1, v(&[0, 3, 1]))]);
        assert_eq!(cc.reconstruct().unwrap(), t);
    }

    #[test]
    fn tangent_on_two_of_five_modes() {
        // w = e0 everywhere, v = e1 on modes 0 and 1
        let e0 = v(&[1, 0, 0]);
        let e1 = v(&[0, 1, 0]);
        let a = DenseTensor::outer_product(&[e1.clone(), e0.clone(), e0.clone(), v(&[1, 1]), e0.clone()]).unwrap();
        let b = DenseTensor::outer_product(&[e0.clone(), e1.clone(), e0.clone(), v(&[1, 1]), e0.clone()]).unwrap();
        let t = DenseTensor::linear_combine(&[(Scalar::one(), &a), (Scalar::from_int(3), &b)]).unwrap();
        let cc = concise_core(&t).unwrap();
        assert_eq!(cc.q(), 2);
        assert_eq!(cc.mode_map, vec![0, 1]);
        assert_eq!(cc.dropped_factors.len(), 3);
        assert_eq!(cc.reconstruct().unwrap(), t);
    }

    #[test]
    fn errors() {
        let mut e = vec![0; 27];
        for i in 0..3 {
            e[i * 13] = 1;
        }
        let diag = DenseTensor::from_ints(&[3, 3, 3], &e).unwrap();
        assert!(matches!(concise_core(&diag), Err(Error::NotInSigma2)));
        let z = DenseTensor::from_ints(&[2, 2], &[0; 4]).unwrap();
        assert!(matches!(concise_core(&z), Err(Error::ZeroTensor)));
    }
}
