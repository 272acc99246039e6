//! Homogeneous polynomials as symmetric tensors, and symmetric rank in
//! border rank ≤ 2.
//!
//! The symmetric rank is computed from the polynomial side only: after
//! restricting to its essential variables the form is binary, and the kernel
//! of its `(d−1) × 3` catalecticant is an apolar quadric whose roots are the
//! points of a minimal Waring decomposition (two simple roots) or witness the
//! `L^{d−1}M` shape (a double root).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::classify::{classify, BorderRankClass};
use crate::concision::compress;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{binary_quadratic_roots, Rational, RootStructure, Scalar};
use crate::tensor::{for_each_index, DenseTensor, Shape};

/// `Σ coeff · x^exponent` with every exponent summing to `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    n_vars: usize,
    degree: u32,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl HomPoly {
    pub fn new(n_vars: usize, degree: u32, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        if n_vars == 0 || degree == 0 {
            return Err(Error::Parse("a form needs at least one variable and degree ≥ 1".into()));
        }
        let mut coeffs: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n_vars || e.iter().sum::<u32>() != degree {
                return Err(Error::Parse(format!("exponent {e:?} is not a degree-{degree} monomial in {n_vars} variables")));
            }
            let slot = coeffs.entry(e).or_insert_with(Rational::zero);
            *slot = &*slot + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(HomPoly { n_vars, degree, coeffs })
    }

    /// `Σ cᵢ xᵢ`.
    pub fn linear(c: &[Rational]) -> Result<Self> {
        let n = c.len();
        Self::new(
            n,
            1,
            c.iter().enumerate().map(|(i, ci)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, ci.clone())
            }),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, exponent: &[u32]) -> Rational {
        self.coeffs.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_same_ring(other)?;
        if self.degree != other.degree {
            return Err(Error::Parse("adding forms of different degrees".into()));
        }
        Self::new(self.n_vars, self.degree, self.coeffs.iter().chain(&other.coeffs).map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn mul(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_same_ring(other)?;
        let mut terms = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                terms.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2));
            }
        }
        Self::new(self.n_vars, self.degree + other.degree, terms)
    }

    pub fn pow(&self, k: u32) -> Result<HomPoly> {
        if k == 0 {
            return Err(Error::Parse("zeroth power is not a form of positive degree".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `f(A·y)`: each `xᵢ` becomes the `i`-th row of `a` as a linear form in `y`.
    pub fn substitute(&self, a: &[Vec<Rational>]) -> Result<HomPoly> {
        if a.len() != self.n_vars || a.iter().any(|r| r.len() != self.n_vars) {
            return Err(Error::Shape("substitution matrix must be n_vars × n_vars".into()));
        }
        let rows = a.iter().map(|r| HomPoly::linear(r)).collect::<Result<Vec<_>>>()?;
        let mut out = HomPoly { n_vars: self.n_vars, degree: self.degree, coeffs: BTreeMap::new() };
        for (e, c) in &self.coeffs {
            let mut m: Option<HomPoly> = None;
            for (i, &k) in e.iter().enumerate().filter(|(_, &k)| k > 0) {
                let p = rows[i].pow(k)?;
                m = Some(match m {
                    Some(m) => m.mul(&p)?,
                    None => p,
                });
            }
            let m = m.expect("positive degree");
            let scaled = HomPoly::new(self.n_vars, self.degree, m.coeffs.into_iter().map(|(e, x)| (e, &x * c)))?;
            out = out.add(&scaled)?;
        }
        Ok(out)
    }

    fn check_same_ring(&self, other: &HomPoly) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::Parse("forms in different numbers of variables".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(e, c)| serde_json::json!({ "exponents": e, "coeff": c.to_string() }))
            .collect();
        serde_json::json!({ "n_vars": self.n_vars, "degree": self.degree, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("polynomial: {what}"));
        let n_vars = v.get("n_vars").and_then(Value::as_u64).ok_or_else(|| bad("missing integer \"n_vars\""))? as usize;
        let degree = v.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("missing integer \"degree\""))?;
        let degree = u32::try_from(degree).map_err(|_| bad("degree too large"))?;
        let raw = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing array \"terms\""))?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let e = t
                .get("exponents")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without \"exponents\""))?
                .iter()
                .map(|x| x.as_u64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| bad("exponent is not a small integer")))
                .collect::<Result<Vec<u32>>>()?;
            let c = Scalar::from_json(t.get("coeff").ok_or_else(|| bad("term without \"coeff\""))?)?;
            let c = c.as_rational().cloned().ok_or_else(|| bad("coefficients must be rational"))?;
            terms.push((e, c));
        }
        Self::new(n_vars, degree, terms)
    }
}

fn multinomial(e: &[u32]) -> BigInt {
    let fact = |n: u32| (1..=n).fold(BigInt::from(1), |acc, k| acc * k);
    let total: u32 = e.iter().sum();
    e.iter().fold(fact(total), |acc, &k| acc / fact(k))
}

/// The symmetric tensor `T` with `f(x) = Σ T[i₁…i_d] x_{i₁}⋯x_{i_d}`.
pub fn poly_to_tensor(f: &HomPoly) -> Result<DenseTensor> {
    if f.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let dims = vec![f.n_vars; f.degree as usize];
    let mut entries = Vec::with_capacity(f.n_vars.pow(f.degree));
    let mut cache: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
    for_each_index(&dims, |idx| {
        let mut e = vec![0u32; f.n_vars];
        for &i in idx {
            e[i] += 1;
        }
        let x = cache
            .entry(e)
            .or_insert_with_key(|e| {
                let c = f.coeff(e);
                if c.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar::from(&c / &Rational::from(multinomial(e)))
                }
            })
            .clone();
        entries.push(x);
    });
    DenseTensor::new(Shape::new(dims)?, entries)
}

/// Symmetric (Waring) rank of a form whose tensor has border rank ≤ 2.
pub fn symmetric_rank_br2(f: &HomPoly) -> Result<usize> {
    let t = poly_to_tensor(f)?;
    let d = f.degree as usize;
    // Symmetric input gives the same basis in every mode, hence a symmetric core.
    let core = compress(&t, 2)?.core;
    let r = core.dims()[0];
    if r == 1 {
        return Ok(1);
    }
    if d == 2 {
        return Ok(2);
    }
    // a_k: core entry with k indices equal to 1
    let a: Vec<Scalar> = (0..=d).map(|k| core.entries()[(1usize << k) - 1].clone()).collect();
    let rows: Vec<Vec<Scalar>> = (0..d - 1).map(|i| (0..3).map(|j| a[i + j].clone()).collect()).collect();
    let h = ExactMatrix::from_rows(rows)?;
    let (rref, pivots) = h.rref();
    match pivots.len() {
        3 => return Err(Error::NotInSigma2),
        2 => {}
        _ => return Err(Error::Internal("catalecticant rank 1 with two essential variables".into())),
    }
    let free = (0..3).find(|c| !pivots.contains(c)).expect("one free column");
    let mut kernel = vec![Scalar::zero(); 3];
    kernel[free] = Scalar::one();
    for (k, &p) in pivots.iter().enumerate() {
        kernel[p] = -rref.get(k, free);
    }
    // the quadric h₀u² + h₁uv + h₂v² vanishes at (α : β) for every power (αx + βy)^d used
    Ok(match binary_quadratic_roots(&kernel[0], &kernel[1], &kernel[2])? {
        RootStructure::TwoDistinct(..) => 2,
        RootStructure::DoubleRoot(_) | RootStructure::DegenerateLinear(_) => d,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymRankReport {
    pub tensor_rank: usize,
    pub symmetric_rank: usize,
    pub equal: bool,
    pub stratum: &'static str,
}

/// Tensor rank through classification, symmetric rank through apolarity.
pub fn comon_check(f: &HomPoly) -> Result<SymRankReport> {
    let class = classify(&poly_to_tensor(f)?)?;
    if class == BorderRankClass::BeyondSigmaTwo {
        return Err(Error::NotInSigma2);
    }
    let tensor_rank = class.rank().expect("σ₂ class has a rank");
    let symmetric_rank = symmetric_rank_br2(f)?;
    Ok(SymRankReport { tensor_rank, symmetric_rank, equal: tensor_rank == symmetric_rank, stratum: class.tag() })
}
