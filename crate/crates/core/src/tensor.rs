//! Dense tensors with exact entries and the multilinear operations on them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{common_delta, Delta, Scalar};

/// Mode dimensions `(n₁+1, …, n_d+1)`.
///
/// User-facing constructors require at least one mode; the empty shape is
/// reserved for the scalar left after every mode has been concised away.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a tensor needs at least one mode".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Shape(format!("every dimension must be ≥ 1, got {dims:?}")));
        }
        Ok(Shape(dims))
    }

    pub(crate) fn scalar() -> Self {
        Shape(Vec::new())
    }

    pub(crate) fn new_unchecked(dims: Vec<usize>) -> Self {
        Shape(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    pub fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.0.len() || idx.iter().zip(&self.0).any(|(i, d)| i >= d) {
            return Err(Error::Index(format!("{idx:?} for shape {:?}", self.0)));
        }
        Ok(idx.iter().zip(self.strides()).map(|(i, s)| i * s).sum())
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            idx[k] = flat % self.0[k];
            flat /= self.0[k];
        }
        idx
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", s.join("x"))
    }
}

/// One coordinate vector per mode; a Segre point when every vector is nonzero.
pub type VectorPerMode = Vec<Vec<Scalar>>;

/// Order-d array of scalars stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseTensor {
    shape: Shape,
    entries: Vec<Scalar>,
}

impl fmt::Debug for DenseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseTensor({:?}, {:?})", self.shape, self.entries)
    }
}

/// Visits every multi-index of `dims` in row-major order.
pub(crate) fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl DenseTensor {
    pub fn new(shape: Shape, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != shape.len() {
            return Err(Error::Shape(format!(
                "shape {shape:?} needs {} entries, got {}",
                shape.len(),
                entries.len()
            )));
        }
        common_delta(&entries)?;
        Ok(DenseTensor { shape, entries })
    }

    pub fn zeros(shape: Shape) -> Self {
        let n = shape.len();
        DenseTensor { shape, entries: vec![Scalar::zero(); n] }
    }

    /// Integer entries, for literals in tests and docs.
    pub fn from_ints(dims: &[usize], entries: &[i64]) -> Result<Self> {
        Self::new(Shape::new(dims.to_vec())?, entries.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    /// Standard basis tensor `e_{i₁} ⊗ ⋯ ⊗ e_{i_d}`.
    pub fn basis(shape: Shape, idx: &[usize]) -> Result<Self> {
        let mut t = Self::zeros(shape);
        let o = t.shape.offset(idx)?;
        t.entries[o] = Scalar::one();
        Ok(t)
    }

    pub(crate) fn scalar(x: Scalar) -> Self {
        DenseTensor { shape: Shape::scalar(), entries: vec![x] }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn get(&self, idx: &[usize]) -> Result<&Scalar> {
        Ok(&self.entries[self.shape.offset(idx)?])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// The field shared by all entries (`None` for ℚ).
    pub fn delta(&self) -> Option<Delta> {
        common_delta(&self.entries).expect("entries share one field")
    }

    /// `vs[0] ⊗ ⋯ ⊗ vs[d−1]`.
    pub fn outer_product(vs: &[Vec<Scalar>]) -> Result<Self> {
        if vs.is_empty() {
            return Err(Error::Shape("outer product of no vectors".into()));
        }
        if vs.iter().any(|v| v.iter().all(Scalar::is_zero)) {
            return Err(Error::ZeroVector);
        }
        Ok(Self::outer_unchecked(vs))
    }

    /// Outer product allowing zero vectors and the empty (scalar) case.
    pub(crate) fn outer_unchecked(vs: &[Vec<Scalar>]) -> Self {
        Self::scaled_outer(Scalar::one(), vs)
    }

    /// `c · vs[0] ⊗ ⋯ ⊗ vs[d−1]`.
    pub(crate) fn scaled_outer(c: Scalar, vs: &[Vec<Scalar>]) -> Self {
        let shape = Shape(vs.iter().map(Vec::len).collect());
        let mut entries = vec![c];
        for v in vs {
            let mut next = Vec::with_capacity(entries.len() * v.len());
            for e in &entries {
                for x in v {
                    next.push(if e.is_zero() || x.is_zero() { Scalar::zero() } else { e * x });
                }
            }
            entries = next;
        }
        DenseTensor { shape, entries }
    }

    /// Fixes coordinate `layer` of `mode`, giving an order-(d−1) tensor.
    pub fn slice(&self, mode: usize, layer: usize) -> Result<Self> {
        let dims = self.dims();
        if mode >= dims.len() {
            return Err(Error::Index(format!("mode {mode} of an order-{} tensor", dims.len())));
        }
        if layer >= dims[mode] {
            return Err(Error::Index(format!("layer {layer} of a mode of size {}", dims[mode])));
        }
        let outer: usize = dims[..mode].iter().product();
        let inner: usize = dims[mode + 1..].iter().product();
        let mut entries = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * dims[mode] + layer) * inner;
            entries.extend_from_slice(&self.entries[base..base + inner]);
        }
        let mut new_dims = dims.to_vec();
        new_dims.remove(mode);
        Ok(DenseTensor { shape: Shape(new_dims), entries })
    }

    /// Multilinear multiplication by `m` in one mode: `m` is `new × dims[mode]`.
    pub fn mode_apply(&self, mode: usize, m: &ExactMatrix) -> Result<Self> {
        let dims = self.dims();
        if mode >= dims.len() {
            return Err(Error::Index(format!("mode {mode} of an order-{} tensor", dims.len())));
        }
        if m.cols() != dims[mode] {
            return Err(Error::Shape(format!(
                "matrix with {} columns applied to a mode of size {}",
                m.cols(),
                dims[mode]
            )));
        }
        let outer: usize = dims[..mode].iter().product();
        let inner: usize = dims[mode + 1..].iter().product();
        let (n_old, n_new) = (dims[mode], m.rows());
        let mut entries = vec![Scalar::zero(); outer * n_new * inner];
        for o in 0..outer {
            for j in 0..n_old {
                let src = (o * n_old + j) * inner;
                for i in 0..n_new {
                    let f = m.get(i, j);
                    if f.is_zero() {
                        continue;
                    }
                    let dst = (o * n_new + i) * inner;
                    for k in 0..inner {
                        let x = &self.entries[src + k];
                        if !x.is_zero() {
                            entries[dst + k] = &entries[dst + k] + &(f * x);
                        }
                    }
                }
            }
        }
        let mut new_dims = dims.to_vec();
        new_dims[mode] = n_new;
        Ok(DenseTensor { shape: Shape(new_dims), entries })
    }

    /// Entrywise `Σ cᵢ·Tᵢ`.
    pub fn linear_combine(terms: &[(Scalar, &DenseTensor)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Shape("empty linear combination".into()));
        };
        if terms.iter().any(|(_, t)| t.shape != first.shape) {
            return Err(Error::Shape("linear combination of tensors with different shapes".into()));
        }
        let mut entries = vec![Scalar::zero(); first.entries.len()];
        for (c, t) in terms {
            if c.is_zero() {
                continue;
            }
            for (e, x) in entries.iter_mut().zip(&t.entries) {
                if !x.is_zero() {
                    *e = e.checked_add(&c.checked_mul(x)?)?;
                }
            }
        }
        Ok(DenseTensor { shape: first.shape.clone(), entries })
    }

    /// `self += other`, entrywise.
    pub fn add_assign(&mut self, other: &DenseTensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Shape("sum of tensors with different shapes".into()));
        }
        for (e, x) in self.entries.iter_mut().zip(&other.entries) {
            if !x.is_zero() {
                *e = e.checked_add(x)?;
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DenseTensor { shape: self.shape.clone(), entries: self.entries.iter().map(|x| c * x).collect() }
    }

    /// Reorders modes: output mode `k` is input mode `perm[k]`.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Self> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Index(format!("{perm:?} is not a permutation of {d} modes")));
        }
        let old_strides = self.shape.strides();
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims()[p]).collect();
        let mut entries = Vec::with_capacity(self.entries.len());
        for_each_index(&new_dims, |idx| {
            let off: usize = idx.iter().zip(perm).map(|(i, &p)| i * old_strides[p]).sum();
            entries.push(self.entries[off].clone());
        });
        Ok(DenseTensor { shape: Shape(new_dims), entries })
    }
}
