//! Certified rank decompositions of border-rank ≤ 2 tensors.
//!
//! Rank-2 cores are split through the two rank-one members of their slice
//! pencil. A core on the tangent developable is written in a product basis
//! adapted to its tangency point `O = w₁ ⊗ ⋯ ⊗ w_q`, where it reads
//! `α·O + Σ βᵢ·Dᵢ` with `Dᵢ` the `i`-th tangent direction; choosing a point on
//! each of the first `q − 1` lines `O + tᵢDᵢ` forces the last one.

use serde::Serialize;
use serde_json::Value;

use crate::classify::{classify_detailed, BorderRankClass, PencilRootStructure};
use crate::concision::{normalize_vector, ConciseCore};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{common_delta, parse_delta, Delta, ProjPoint, RootStructure, Scalar};
use crate::tensor::{DenseTensor, VectorPerMode};

/// `coeff · vectors[0] ⊗ ⋯ ⊗ vectors[d−1]`, each vector with last nonzero
/// coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankOneTerm {
    pub coeff: Scalar,
    pub vectors: VectorPerMode,
}

impl RankOneTerm {
    /// Normalizes every vector, folding the scales into the coefficient.
    pub fn new(coeff: Scalar, vectors: VectorPerMode) -> Result<Self> {
        let mut coeff = coeff;
        let mut out = Vec::with_capacity(vectors.len());
        for v in &vectors {
            let (s, n) = normalize_vector(v)?;
            coeff = coeff.checked_mul(&s)?;
            out.push(n);
        }
        Ok(RankOneTerm { coeff, vectors: out })
    }

    pub fn to_tensor(&self) -> DenseTensor {
        DenseTensor::scaled_outer(self.coeff.clone(), &self.vectors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<RankOneTerm>,
    pub claimed_rank: usize,
}

impl Decomposition {
    fn new(terms: Vec<RankOneTerm>) -> Self {
        Decomposition { claimed_rank: terms.len(), terms }
    }

    /// The quadratic field the terms live in, `None` for ℚ.
    pub fn field(&self) -> Result<Option<Delta>> {
        let scalars = self.terms.iter().flat_map(|t| std::iter::once(&t.coeff).chain(t.vectors.iter().flatten()));
        Ok(common_delta(scalars)?)
    }

    pub fn to_json(&self) -> Result<Value> {
        let delta = self.field()?.map(|d| match i64::try_from(d.value()) {
            Ok(v) => Value::from(v),
            Err(_) => Value::from(d.value().to_string()),
        });
        Ok(serde_json::json!({
            "claimed_rank": self.claimed_rank,
            "terms": self.terms,
            "field": { "delta": delta },
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("decomposition: {what}"));
        let claimed_rank = v
            .get("claimed_rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer \"claimed_rank\""))? as usize;
        let raw_terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing array \"terms\""))?;
        let mut terms = Vec::with_capacity(raw_terms.len());
        for t in raw_terms {
            let coeff = Scalar::from_json(t.get("coeff").ok_or_else(|| bad("term without \"coeff\""))?)?;
            let vectors = t
                .get("vectors")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without \"vectors\""))?
                .iter()
                .map(|vec| {
                    vec.as_array()
                        .ok_or_else(|| bad("vector is not an array"))?
                        .iter()
                        .map(|x| Scalar::from_json(x).map_err(Error::from))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<VectorPerMode>>()?;
            terms.push(RankOneTerm { coeff, vectors });
        }
        if let Some(d) = v.get("field").and_then(|f| f.get("delta")).filter(|d| !d.is_null()) {
            Delta::new(parse_delta(d)?)?;
        }
        Ok(Decomposition { terms, claimed_rank })
    }

    /// `Σ coeffᵢ · ⊗ vectorsᵢ`, or `None` when the terms disagree on shape.
    pub fn reconstruct(&self) -> Option<DenseTensor> {
        let first = self.terms.first()?;
        let dims: Vec<usize> = first.vectors.iter().map(Vec::len).collect();
        if self.terms.iter().any(|term| !term.vectors.iter().map(Vec::len).eq(dims.iter().copied())) {
            return None;
        }
        let mut acc = first.to_tensor();
        for term in &self.terms[1..] {
            acc.add_assign(&term.to_tensor()).ok()?;
        }
        Some(acc)
    }
}

/// A tangency point `O = w₁ ⊗ ⋯ ⊗ w_q`, complements `vᵢ` and the
/// coordinates `core = α·O + Σ βᵢ·(w₁ ⊗ ⋯ ⊗ vᵢ ⊗ ⋯ ⊗ w_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentFrame {
    pub w: VectorPerMode,
    pub v: VectorPerMode,
    pub alpha: Scalar,
    pub beta: Vec<Scalar>,
}

impl TangentFrame {
    pub fn q(&self) -> usize {
        self.w.len()
    }

    /// Re-expands the frame into a tensor.
    pub fn expand(&self) -> DenseTensor {
        let mut acc = DenseTensor::outer_unchecked(&self.w).scale(&self.alpha);
        for (i, b) in self.beta.iter().enumerate() {
            let mut vs = self.w.clone();
            vs[i] = self.v[i].clone();
            let d = DenseTensor::outer_unchecked(&vs);
            acc = DenseTensor::linear_combine(&[(Scalar::one(), &acc), (b.clone(), &d)]).expect("same shape");
        }
        acc
    }
}

/// The free points `tᵢ` on the lines `O + tᵢDᵢ`, `i < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentParams {
    pub t: Vec<Scalar>,
}

impl TangentParams {
    pub fn new(t: Vec<Scalar>) -> Result<Self> {
        if t.iter().any(Scalar::is_zero) {
            return Err(Error::InvalidParams("every parameter must be nonzero".into()));
        }
        Ok(TangentParams { t })
    }

    /// `(t₁, 1, …, 1)` with `q − 1` entries.
    pub fn with_first(q: usize, t1: Scalar) -> Self {
        let mut t = vec![Scalar::one(); q.saturating_sub(1)];
        if let Some(first) = t.first_mut() {
            *first = t1;
        }
        TangentParams { t }
    }
}

/// Splits a rank-one tensor into its factors.
pub fn factor_rank_one(t: &DenseTensor) -> Result<RankOneTerm> {
    let Some(flat) = t.entries().iter().position(|x| !x.is_zero()) else {
        return Err(Error::NotRankOne);
    };
    let idx = t.shape().unravel(flat);
    let pivot = t.entries()[flat].clone();
    let mut vectors = Vec::with_capacity(t.order());
    for (mode, &n) in t.dims().iter().enumerate() {
        let mut probe = idx.clone();
        let fibre = (0..n)
            .map(|j| {
                probe[mode] = j;
                t.get(&probe).cloned()
            })
            .collect::<Result<Vec<_>>>()?;
        vectors.push(fibre);
    }
    // ⊗ fibres = pivot^(d−1) · t
    let d = t.order() as u32;
    let coeff = pivot.pow(d.saturating_sub(1)).recip()?;
    let term = RankOneTerm::new(coeff, vectors)?;
    if term.to_tensor() != *t {
        return Err(Error::NotRankOne);
    }
    Ok(term)
}

/// Two-term decomposition of a concise `2^q` core from the two rank-one
/// members `Sₖ = λₖM₀ + μₖM₁` of its slice pencil.
pub fn decompose_rank_two(core: &DenseTensor, roots: &PencilRootStructure) -> Result<Decomposition> {
    let RootStructure::TwoDistinct(p1, p2) = &roots.structure else {
        return Err(Error::Internal("rank-two split needs two distinct pencil roots".into()));
    };
    let mode = roots.mode;
    let (m0, m1) = (core.slice(mode, 0)?, core.slice(mode, 1)?);
    let member = |p: &ProjPoint| {
        DenseTensor::linear_combine(&[(p.lambda.clone(), &m0), (p.mu.clone(), &m1)]).and_then(|s| {
            factor_rank_one(&s).map_err(|_| Error::Internal("pencil root member is not of rank one".into()))
        })
    };
    let (s1, s2) = (member(p1)?, member(p2)?);
    // [S₁; S₂] = A [M₀; M₁] with A = [[λ₁, μ₁], [λ₂, μ₂]], so
    // core = e₀ ⊗ M₀ + e₁ ⊗ M₁ = a ⊗ S₁ + b ⊗ S₂ with (a | b) = A⁻¹.
    let det = p1.cross(p2);
    let inv = det.recip().map_err(|_| Error::Internal("distinct pencil roots with vanishing determinant".into()))?;
    let a = vec![&p2.mu * &inv, -(&p2.lambda * &inv)];
    let b = vec![-(&p1.mu * &inv), &p1.lambda * &inv];
    let term = |mode_vec: Vec<Scalar>, s: RankOneTerm| {
        let mut vectors = s.vectors;
        vectors.insert(mode, mode_vec);
        RankOneTerm::new(s.coeff, vectors)
    };
    Ok(Decomposition::new(vec![term(a, s1)?, term(b, s2)?]))
}

fn projectively_equal(a: &[Scalar], b: &[Scalar]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// First standard basis vector independent of the 2-vector `w`.
fn complement(w: &[Scalar]) -> Vec<Scalar> {
    if w[1].is_zero() {
        vec![Scalar::zero(), Scalar::one()]
    } else {
        vec![Scalar::one(), Scalar::zero()]
    }
}

/// The rank-one member of the slice pencil along `mode`: `⊗_{j≠mode} wⱼ`.
fn double_root_member(core: &DenseTensor, mode: usize) -> Result<VectorPerMode> {
    let p = crate::classify::slice_pencil_gcd(core, mode)?;
    let root = match &p.structure {
        RootStructure::DoubleRoot(r) | RootStructure::DegenerateLinear(r) => r,
        RootStructure::TwoDistinct(..) => {
            return Err(Error::Internal(format!("mode {mode} pencil has two simple roots on a tangent core")))
        }
    };
    let s = DenseTensor::linear_combine(&[(root.lambda.clone(), &core.slice(mode, 0)?), (root.mu.clone(), &core.slice(mode, 1)?)])?;
    let f = factor_rank_one(&s).map_err(|_| Error::Internal(format!("mode {mode} double-root member is not of rank one")))?;
    Ok(f.vectors)
}

/// Recovers the tangency point and the coordinates of a tangent core.
pub fn tangent_frame(core: &DenseTensor) -> Result<TangentFrame> {
    let q = core.order();
    if q < 2 || core.dims().iter().any(|&n| n != 2) {
        return Err(Error::Shape(format!("tangent frame needs a concise 2^q core with q ≥ 2, got {:?}", core.shape())));
    }
    let w: VectorPerMode = if q == 2 {
        // Any O on the conic through the matrix works; take w₀ = e₀.
        let (_, w1) = normalize_vector(&core.slice(0, 1)?.into_entries())
            .map_err(|_| Error::Internal("2×2 core with a zero row".into()))?;
        vec![vec![Scalar::one(), Scalar::zero()], w1]
    } else {
        let from0 = double_root_member(core, 0)?;
        let from1 = double_root_member(core, 1)?;
        // from0 = (w₁, …, w_{q−1}), from1 = (w₀, w₂, …, w_{q−1})
        for j in 2..q {
            if !projectively_equal(&from0[j - 1], &from1[j - 1]) {
                return Err(Error::Internal(format!("modes 0 and 1 disagree on the tangency point in mode {j}")));
            }
        }
        std::iter::once(from1[0].clone()).chain(from0).collect()
    };
    let v: VectorPerMode = w.iter().map(|wi| complement(wi)).collect();
    let mut coords = core.clone();
    for i in 0..q {
        let basis = ExactMatrix::from_columns(&[w[i].clone(), v[i].clone()])?;
        coords = coords.mode_apply(i, &basis.inverse()?)?;
    }
    // index 0 in every mode is wᵢ, index 1 is vᵢ
    let entries = coords.entries();
    let alpha = entries[0].clone();
    let mut beta = Vec::with_capacity(q);
    for i in 0..q {
        beta.push(entries[1 << (q - 1 - i)].clone());
    }
    let stray = entries.iter().enumerate().any(|(k, x)| k.count_ones() >= 2 && !x.is_zero());
    if stray {
        return Err(Error::Internal("core has components outside the tangent space at the recovered point".into()));
    }
    if beta.iter().any(Scalar::is_zero) {
        return Err(Error::Internal("a tangent coordinate vanishes on a concise core".into()));
    }
    Ok(TangentFrame { w, v, alpha, beta })
}

/// `(c, t)` with `core = Σ cᵢ·(w₁ ⊗ ⋯ ⊗ (wᵢ + tᵢvᵢ) ⊗ ⋯ ⊗ w_q)`; the last pair
/// is forced by the first `q − 1`.
pub fn tangent_coefficients(frame: &TangentFrame, params: &TangentParams) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let q = frame.q();
    if params.t.len() + 1 != q {
        return Err(Error::InvalidParams(format!("expected {} parameters for a rank-{q} tangent point, got {}", q - 1, params.t.len())));
    }
    if params.t.iter().any(Scalar::is_zero) {
        return Err(Error::InvalidParams("every parameter must be nonzero".into()));
    }
    let mut c = Vec::with_capacity(q);
    for (b, t) in frame.beta.iter().zip(&params.t) {
        c.push(b.checked_div(t)?);
    }
    let mut last = frame.alpha.clone();
    for ci in &c {
        last = last.checked_sub(ci)?;
    }
    if last.is_zero() {
        let t1 = &params.t[0];
        let mut next = t1 + &Scalar::one();
        if next.is_zero() {
            next = &next + &Scalar::one();
        }
        return Err(Error::DegenerateParams { suggestion: next.to_string() });
    }
    let t_last = frame.beta[q - 1].checked_div(&last)?;
    c.push(last);
    let mut t = params.t.clone();
    t.push(t_last);
    Ok((c, t))
}

pub fn decompose_tangent(frame: &TangentFrame, params: &TangentParams) -> Result<Decomposition> {
    let (c, t) = tangent_coefficients(frame, params)?;
    let mut terms = Vec::with_capacity(frame.q());
    for i in 0..frame.q() {
        let mut vs = frame.w.clone();
        vs[i] = frame.w[i].iter().zip(&frame.v[i]).map(|(w, v)| w + &(&t[i] * v)).collect();
        terms.push(RankOneTerm::new(c[i].clone(), vs)?);
    }
    Ok(Decomposition::new(terms))
}

/// Carries a decomposition of the concise core back to the original space.
pub fn lift(dec: &Decomposition, cc: &ConciseCore) -> Result<Decomposition> {
    let d = cc.original_shape.order();
    let mut terms = Vec::with_capacity(dec.terms.len());
    for term in &dec.terms {
        if term.vectors.len() != cc.q() {
            return Err(Error::Shape(format!("term with {} modes lifted through a {}-mode core", term.vectors.len(), cc.q())));
        }
        let mut vectors: Vec<Option<Vec<Scalar>>> = vec![None; d];
        for (k, &m) in cc.mode_map.iter().enumerate() {
            vectors[m] = Some(cc.essential_bases[k].mul_vec(&term.vectors[k])?);
        }
        for (m, f) in &cc.dropped_factors {
            vectors[*m] = Some(f.clone());
        }
        let vectors = vectors.into_iter().map(|v| v.ok_or_else(|| Error::Internal("unmapped mode".into()))).collect::<Result<_>>()?;
        terms.push(RankOneTerm::new(term.coeff.clone(), vectors)?);
    }
    Ok(Decomposition { terms, claimed_rank: dec.claimed_rank })
}

/// Classifies `t` and returns a verified decomposition of length equal to
/// its rank. Without `params`, tangent points use `t = (1, …, 1)`, then
/// `t₁ = 2, 3, …` if the last coefficient vanishes.
pub fn decompose(t: &DenseTensor, params: Option<&TangentParams>) -> Result<Decomposition> {
    let cls = classify_detailed(t)?;
    if params.is_some() && !matches!(cls.class, BorderRankClass::Tangent(_) | BorderRankClass::BeyondSigmaTwo) {
        return Err(Error::InvalidParams(format!("only tangent points take parameters; this input is {}", cls.class)));
    }
    let dec = match cls.class {
        BorderRankClass::Zero => Decomposition::new(Vec::new()),
        BorderRankClass::BeyondSigmaTwo => return Err(Error::NotInSigma2),
        BorderRankClass::RankOne => Decomposition::new(vec![factor_rank_one(t)?]),
        BorderRankClass::GenericRank2 => {
            let cc = cls.concise.as_ref().ok_or_else(|| Error::Internal("missing concise core".into()))?;
            let pencil = cls.pencil.as_ref().ok_or_else(|| Error::Internal("missing pencil".into()))?;
            lift(&decompose_rank_two(&cc.core, pencil)?, cc)?
        }
        BorderRankClass::Tangent(q) => {
            let cc = cls.concise.as_ref().ok_or_else(|| Error::Internal("missing concise core".into()))?;
            let frame = tangent_frame(&cc.core)?;
            let core_dec = match params {
                Some(p) => decompose_tangent(&frame, p)?,
                None => default_schedule(&frame, q)?,
            };
            lift(&core_dec, cc)?
        }
    };
    if !verify(&dec, t) {
        return Err(Error::Internal("decomposition failed exact reconstruction".into()));
    }
    Ok(dec)
}

fn default_schedule(frame: &TangentFrame, q: usize) -> Result<Decomposition> {
    // c_q is a non-constant affine function of 1/t₁, so at most one t₁ fails.
    for t1 in 1..=(q as i64 + 1) {
        match decompose_tangent(frame, &TangentParams::with_first(q, Scalar::from_int(t1))) {
            Err(Error::DegenerateParams { .. }) => continue,
            other => return other,
        }
    }
    Err(Error::Internal("default parameter schedule exhausted".into()))
}

/// Exact check that `dec` sums to `t`.
pub fn verify(dec: &Decomposition, t: &DenseTensor) -> bool {
    if dec.terms.len() != dec.claimed_rank {
        return false;
    }
    match dec.reconstruct() {
        None => dec.terms.is_empty() && t.is_zero(),
        Some(r) => r == *t,
    }
}
