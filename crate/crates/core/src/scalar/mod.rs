//! Exact scalars: rationals, optionally extended by a single square root.
//!
//! A [`Scalar`] is `a + b·√δ` with rational `a`, `b` and a squarefree integer
//! `δ ∉ {0, 1}`. Plain rationals carry no `δ` and combine with any context;
//! two irrational scalars combine only when their `δ` agree.

mod rational;
pub mod roots;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use rational::{squarefree_decompose, Rational};
pub use roots::{binary_quadratic_roots, BinaryForm, ProjPoint, RootStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: sqrt({0}) vs sqrt({1})")]
    DeltaMismatch(BigInt, BigInt),
    #[error("zero form")]
    ZeroForm,
    #[error("square root needs an extension of degree > 2 over the rationals")]
    UnsupportedExtension,
    #[error("invalid extension parameter {0}: must be squarefree and not 0 or 1")]
    InvalidDelta(BigInt),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// A squarefree integer `δ ∉ {0, 1}` naming the field ℚ(√δ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Delta(Arc<(BigInt, Rational)>);

impl Delta {
    pub fn new(d: BigInt) -> Result<Self, ScalarError> {
        if d == BigInt::from(0) || d.is_one() {
            return Err(ScalarError::InvalidDelta(d));
        }
        let (s, m) = squarefree_decompose(&d);
        if !s.is_one() || m != d {
            return Err(ScalarError::InvalidDelta(d));
        }
        let q = Rational::from(d.clone());
        Ok(Delta(Arc::new((d, q))))
    }

    pub fn value(&self) -> &BigInt {
        &self.0 .0
    }

    fn as_rational(&self) -> &Rational {
        &self.0 .1
    }
}

impl fmt::Debug for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "√{}", self.value())
    }
}

/// `re + im·√δ`. When `im = 0` the scalar is a plain rational and `delta` is
/// `None`, so derived equality is coefficient-wise equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: Rational,
    im: Rational,
    delta: Option<Delta>,
}

/// The operation selector for [`Scalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero() -> Self {
        Rational::zero().into()
    }

    pub fn one() -> Self {
        Rational::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        Rational::from_integer(n).into()
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Rational::new(n, d).into()
    }

    /// `re + im·√delta`.
    pub fn quad(re: Rational, im: Rational, delta: &Delta) -> Self {
        if im.is_zero() {
            re.into()
        } else {
            Scalar { re, im, delta: Some(delta.clone()) }
        }
    }

    /// `√delta` itself.
    pub fn sqrt_of(delta: &Delta) -> Self {
        Self::quad(Rational::zero(), Rational::one(), delta)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn delta(&self) -> Option<&Delta> {
        self.delta.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.delta.is_none()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.re)
    }

    pub fn height(&self) -> u64 {
        if self.im.is_zero() {
            self.re.height()
        } else {
            self.re.height() + self.im.height()
        }
    }

    fn context(&self, other: &Self) -> Result<Option<Delta>, ScalarError> {
        match (&self.delta, &other.delta) {
            (None, d) | (d, None) => Ok(d.clone()),
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            (Some(a), Some(b)) => Err(ScalarError::DeltaMismatch(a.value().clone(), b.value().clone())),
        }
    }

    fn build(re: Rational, im: Rational, delta: Option<Delta>) -> Self {
        match delta {
            Some(d) if !im.is_zero() => Scalar { re, im, delta: Some(d) },
            _ => re.into(),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if self.delta.is_none() && rhs.delta.is_none() {
            return Ok((&self.re + &rhs.re).into());
        }
        let ctx = self.context(rhs)?;
        Ok(Self::build(&self.re + &rhs.re, &self.im + &rhs.im, ctx))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if self.delta.is_none() && rhs.delta.is_none() {
            return Ok((&self.re * &rhs.re).into());
        }
        let ctx = self.context(rhs)?;
        let d = ctx.as_ref().expect("irrational operand has a delta").as_rational();
        let re = &(&self.re * &rhs.re) + &(&(&self.im * &rhs.im) * d);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Ok(Self::build(re, im, ctx))
    }

    /// `a² − δb²`; nonzero for nonzero scalars because δ is not a square.
    pub fn norm(&self) -> Rational {
        match &self.delta {
            None => &self.re * &self.re,
            Some(d) => &(&self.re * &self.re) - &(&(&self.im * &self.im) * d.as_rational()),
        }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im, delta: self.delta.clone() }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.delta.is_none() {
            return Ok(self.re.recip()?.into());
        }
        let n = self.norm().recip()?;
        Ok(Self::build(&self.re * &n, -&(&self.im * &n), self.delta.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.context(rhs)?;
        self.checked_mul(&rhs.recip()?)
    }

    pub fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self, ScalarError> {
        match op {
            ArithOp::Add => self.checked_add(rhs),
            ArithOp::Sub => self.checked_sub(rhs),
            ArithOp::Mul => self.checked_mul(rhs),
            ArithOp::Div => self.checked_div(rhs),
        }
    }

    /// A square root of `self`.
    ///
    /// Inside ℚ the result may adjoin `√m` for the squarefree part `m`. Inside
    /// ℚ(√δ) the root must already live in ℚ(√δ); otherwise the request needs
    /// a degree-4 field and is refused.
    pub fn sqrt(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(r) = self.as_rational() {
            if let Some(s) = r.sqrt_exact() {
                return Ok(s.into());
            }
            let pq = r.numer() * r.denom();
            let (s, m) = squarefree_decompose(&pq);
            let delta = Delta::new(m)?;
            let coeff = Rational::from_bigints(s, r.denom())?;
            return Ok(Self::quad(Rational::zero(), coeff, &delta));
        }
        let delta = self.delta.clone().expect("irrational scalar has a delta");
        // (x + y√δ)² = self  ⇔  x² + δy² = a, 2xy = b.
        let n = self.norm().sqrt_exact().ok_or(ScalarError::UnsupportedExtension)?;
        let two = Rational::from_integer(2);
        for x2 in [&(&self.re + &n) / &two, &(&self.re - &n) / &two] {
            if let Some(x) = x2.sqrt_exact() {
                if x.is_zero() {
                    continue;
                }
                let y = &self.im / &(&two * &x);
                let cand = Self::quad(x, y, &delta);
                if &cand * &cand == *self {
                    return Ok(cand);
                }
            }
        }
        Err(ScalarError::UnsupportedExtension)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(re: Rational) -> Self {
        Scalar { re, im: Rational::zero(), delta: None }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

// The operator impls panic where the checked methods return errors. Inside a
// single computation every scalar shares one field, so a panic here is a bug.
impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.checked_div(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im, delta: self.delta.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.delta {
            None => write!(f, "{}", self.re),
            Some(d) => write!(f, "({}) + ({})*sqrt({})", self.re, self.im, d.value()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Picks the common field of a collection of scalars.
pub fn common_delta<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<Option<Delta>, ScalarError> {
    let mut out: Option<Delta> = None;
    for x in xs {
        if let Some(d) = &x.delta {
            match &out {
                None => out = Some(d.clone()),
                Some(o) if o == d => {}
                Some(o) => return Err(ScalarError::DeltaMismatch(o.value().clone(), d.value().clone())),
            }
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    a: String,
    b: String,
    delta: serde_json::Value,
}

fn delta_to_json(d: &BigInt) -> serde_json::Value {
    match d.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(d.to_string()),
    }
}

/// `"p/q"` for rationals, `{"a": "p/q", "b": "p/q", "delta": n}` otherwise.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.delta {
            None => s.serialize_str(&self.re.to_string()),
            Some(d) => QuadRepr {
                a: self.re.to_string(),
                b: self.im.to_string(),
                delta: delta_to_json(d.value()),
            }
            .serialize(s),
        }
    }
}

pub(crate) fn parse_delta(v: &serde_json::Value) -> Result<BigInt, ScalarError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| ScalarError::Parse(n.to_string())),
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| ScalarError::Parse(s.clone())),
        other => Err(ScalarError::Parse(other.to_string())),
    }
}

impl Scalar {
    /// Parses the JSON encoding: a `"p/q"` string, an integer, or a
    /// `{"a", "b", "delta"}` object.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(s) => Ok(s.parse::<Rational>()?.into()),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Scalar::from_int(i)),
                None => Ok(n.to_string().parse::<Rational>()?.into()),
            },
            serde_json::Value::Object(_) => {
                let q: QuadRepr =
                    serde_json::from_value(v.clone()).map_err(|e| ScalarError::Parse(e.to_string()))?;
                let delta = Delta::new(parse_delta(&q.delta)?)?;
                Ok(Scalar::quad(q.a.parse()?, q.b.parse()?, &delta))
            }
            other => Err(ScalarError::Parse(other.to_string())),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Scalar::from_json(&v).map_err(serde::de::Error::custom)
    }
}
