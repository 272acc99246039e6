//! Seeded generators for instances of known stratum, with ground truth.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{Delta, Rational, Scalar};
use crate::symmetric::HomPoly;
use crate::tensor::{DenseTensor, Shape, VectorPerMode};

pub const DEFAULT_HEIGHT: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Rank1,
    Rank2,
    Tangent,
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank1" => Ok(GenKind::Rank1),
            "rank2" => Ok(GenKind::Rank2),
            "tangent" => Ok(GenKind::Tangent),
            other => Err(Error::InvalidSpec(format!("unknown kind {other:?}; expected rank1, rank2 or tangent"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub shape: Shape,
    /// Modes carrying a tangent direction; all modes of size ≥ 2 when absent.
    pub tangent_modes: Option<Vec<usize>>,
    pub seed: u64,
    /// Bound on numerator and denominator of every drawn rational.
    pub height: u32,
    /// For `Rank2`: draw the two points as a conjugate pair over ℚ(√δ).
    pub delta: Option<i64>,
}

impl GenSpec {
    pub fn new(kind: GenKind, shape: Shape, seed: u64) -> Self {
        GenSpec { kind, shape, tangent_modes: None, seed, height: DEFAULT_HEIGHT, delta: None }
    }
}

/// What the generator intended; the classifier must agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sidecar {
    pub kind: GenKind,
    pub stratum: &'static str,
    pub rank: usize,
    pub border_rank: usize,
    pub eta: usize,
    pub seed: u64,
    pub shape: Vec<usize>,
    pub tangent_modes: Option<Vec<usize>>,
    pub delta: Option<i64>,
    /// Tangency point and coordinates for tangent instances.
    pub frame: Option<GenFrame>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenFrame {
    pub w: VectorPerMode,
    pub v: Vec<(usize, Vec<Scalar>)>,
    pub alpha: Scalar,
    pub beta: Vec<Scalar>,
}

pub struct RationalSampler {
    rng: ChaCha8Rng,
    height: i64,
}

impl RationalSampler {
    pub fn new(seed: u64, height: u32) -> Self {
        RationalSampler { rng: ChaCha8Rng::seed_from_u64(seed), height: i64::from(height.max(1)) }
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-self.height..=self.height);
        let d = self.rng.gen_range(1..=self.height);
        Rational::new(n, d)
    }

    pub fn nonzero(&mut self) -> Rational {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn vector(&mut self, n: usize) -> Vec<Rational> {
        loop {
            let v: Vec<Rational> = (0..n).map(|_| self.rational()).collect();
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }

    /// A vector independent of `w` (which must have length ≥ 2).
    pub fn independent_of(&mut self, w: &[Rational]) -> Vec<Rational> {
        loop {
            let v = self.vector(w.len());
            if !proportional(&v, w) {
                return v;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        use rand::seq::SliceRandom;
        xs.shuffle(&mut self.rng);
    }
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

fn lift(v: &[Rational]) -> Vec<Scalar> {
    v.iter().cloned().map(Scalar::from).collect()
}

/// Draws an instance and its ground truth.
pub fn generate(spec: &GenSpec) -> Result<(DenseTensor, Sidecar)> {
    let dims = spec.shape.dims().to_vec();
    let wide: Vec<usize> = (0..dims.len()).filter(|&i| dims[i] >= 2).collect();
    let mut rng = RationalSampler::new(spec.seed, spec.height);
    let mut sidecar = Sidecar {
        kind: spec.kind,
        stratum: "rank1",
        rank: 1,
        border_rank: 1,
        eta: 1,
        seed: spec.seed,
        shape: dims.clone(),
        tangent_modes: None,
        delta: None,
        frame: None,
    };
    if spec.delta.is_some() && spec.kind != GenKind::Rank2 {
        return Err(Error::InvalidSpec("a field extension only applies to rank2 instances".into()));
    }
    if spec.tangent_modes.is_some() && spec.kind != GenKind::Tangent {
        return Err(Error::InvalidSpec("tangent modes only apply to tangent instances".into()));
    }
    let t = match spec.kind {
        GenKind::Rank1 => {
            let vs: Vec<Vec<Scalar>> = dims.iter().map(|&n| lift(&rng.vector(n))).collect();
            DenseTensor::outer_product(&vs)?.scale(&Scalar::from(rng.nonzero()))
        }
        GenKind::Rank2 => {
            if wide.len() < 2 {
                return Err(Error::InvalidSpec(format!("rank 2 needs two modes of size ≥ 2, shape {dims:?} has {}", wide.len())));
            }
            // three or more differing modes: off the tangent developable;
            // exactly two: a rank-2 matrix, which lies on a tangent plane
            let (stratum, eta) = if wide.len() >= 3 { ("rank2", 2) } else { ("tangent", 2) };
            sidecar.stratum = stratum;
            sidecar.rank = 2;
            sidecar.border_rank = 2;
            sidecar.eta = eta;
            match spec.delta {
                None => rank_two(&mut rng, &dims)?,
                Some(delta) => {
                    sidecar.delta = Some(delta);
                    conjugate_rank_two(&mut rng, &dims, delta)?
                }
            }
        }
        GenKind::Tangent => {
            let modes = match &spec.tangent_modes {
                Some(e) => {
                    let mut e = e.clone();
                    e.sort_unstable();
                    e.dedup();
                    if let Some(&bad) = e.iter().find(|&&i| i >= dims.len() || dims[i] < 2) {
                        return Err(Error::InvalidSpec(format!("mode {bad} cannot carry a tangent direction in shape {dims:?}")));
                    }
                    e
                }
                None => wide.clone(),
            };
            if modes.len() < 2 {
                return Err(Error::InvalidSpec(format!("a tangent instance needs |E| ≥ 2, got {modes:?}")));
            }
            let (t, frame) = tangent(&mut rng, &dims, &modes)?;
            sidecar.stratum = "tangent";
            sidecar.rank = modes.len();
            sidecar.border_rank = 2;
            sidecar.eta = modes.len();
            sidecar.tangent_modes = Some(modes);
            sidecar.frame = Some(frame);
            t
        }
    };
    Ok((t, sidecar))
}

fn rank_two(rng: &mut RationalSampler, dims: &[usize]) -> Result<DenseTensor> {
    let mut a = Vec::with_capacity(dims.len());
    let mut b = Vec::with_capacity(dims.len());
    for &n in dims {
        let x = rng.vector(n);
        // independent wherever there is room, so the points differ in every wide mode
        let y = if n >= 2 { rng.independent_of(&x) } else { x.clone() };
        a.push(lift(&x));
        b.push(lift(&y));
    }
    let ta = DenseTensor::outer_product(&a)?;
    let tb = DenseTensor::outer_product(&b)?;
    DenseTensor::linear_combine(&[(Scalar::from(rng.nonzero()), &ta), (Scalar::from(rng.nonzero()), &tb)])
}

/// `c·a₁⊗⋯⊗a_d + c̄·ā₁⊗⋯⊗ā_d` with `aᵢ = xᵢ + yᵢ√δ`: rational entries,
/// decomposition only over ℚ(√δ).
fn conjugate_rank_two(rng: &mut RationalSampler, dims: &[usize], delta: i64) -> Result<DenseTensor> {
    let field = Delta::new(BigInt::from(delta))?;
    let mut a = Vec::with_capacity(dims.len());
    let mut abar = Vec::with_capacity(dims.len());
    for &n in dims {
        if n < 2 {
            let x = lift(&rng.vector(1));
            a.push(x.clone());
            abar.push(x);
            continue;
        }
        let x = rng.vector(n);
        let y = rng.independent_of(&x);
        let v: Vec<Scalar> = x.iter().zip(&y).map(|(p, q)| Scalar::quad(p.clone(), q.clone(), &field)).collect();
        abar.push(v.iter().map(Scalar::conj).collect());
        a.push(v);
    }
    let c = Scalar::quad(rng.nonzero(), rng.nonzero(), &field);
    let ta = DenseTensor::outer_product(&a)?;
    let tb = DenseTensor::outer_product(&abar)?;
    let t = DenseTensor::linear_combine(&[(c.clone(), &ta), (c.conj(), &tb)])?;
    // the sum is fixed by conjugation, so every entry is rational
    let entries = t.entries().iter().map(|x| x.as_rational().cloned().map(Scalar::from)).collect::<Option<Vec<_>>>();
    let entries = entries.ok_or_else(|| Error::Internal("conjugate sum left the rationals".into()))?;
    DenseTensor::new(t.shape().clone(), entries)
}

/// `α·O + Σ_{i∈E} βᵢ·Dᵢ`, expanded from its coordinates: a core with one
/// coordinate per mode outside `E` and two inside, mapped up by `[wᵢ]` or
/// `[wᵢ vᵢ]`.
fn tangent(rng: &mut RationalSampler, dims: &[usize], modes: &[usize]) -> Result<(DenseTensor, GenFrame)> {
    let w: Vec<Vec<Rational>> = dims.iter().map(|&n| rng.vector(n)).collect();
    let alpha = Scalar::from(rng.rational());
    let mut vs = Vec::with_capacity(modes.len());
    let mut beta = Vec::with_capacity(modes.len());
    for &i in modes {
        vs.push((i, lift(&rng.independent_of(&w[i]))));
        beta.push(Scalar::from(rng.nonzero()));
    }
    let core_dims: Vec<usize> = (0..dims.len()).map(|i| if modes.contains(&i) { 2 } else { 1 }).collect();
    let core_shape = Shape::new(core_dims)?;
    let mut entries = vec![Scalar::zero(); core_shape.len()];
    entries[0] = alpha.clone();
    for (&i, b) in modes.iter().zip(&beta) {
        let mut idx = vec![0; dims.len()];
        idx[i] = 1;
        entries[core_shape.offset(&idx)?] = b.clone();
    }
    let mut t = DenseTensor::new(core_shape, entries)?;
    for (i, wi) in w.iter().enumerate() {
        let mut cols = vec![lift(wi)];
        if let Some((_, v)) = vs.iter().find(|(m, _)| *m == i) {
            cols.push(v.clone());
        }
        t = t.mode_apply(i, &ExactMatrix::from_columns(&cols)?)?;
    }
    let frame = GenFrame { w: w.iter().map(|x| lift(x)).collect(), v: vs, alpha, beta };
    Ok((t, frame))
}

/// Two independent binary linear forms.
pub fn binary_pair(seed: u64, height: u32) -> (HomPoly, HomPoly) {
    let mut rng = RationalSampler::new(seed, height);
    let l = rng.vector(2);
    let m = rng.independent_of(&l);
    (HomPoly::linear(&l).expect("two variables"), HomPoly::linear(&m).expect("two variables"))
}

impl Sidecar {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("sidecar serializes")
    }
}
