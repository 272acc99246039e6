//! Binary forms in `(λ:μ)`, their gcds, and the root structure of quadratics.

use std::fmt;

use super::{Scalar, ScalarError};

/// A point `(λ:μ)` of the projective line, scaled so the last nonzero
/// coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub lambda: Scalar,
    pub mu: Scalar,
}

impl ProjPoint {
    pub fn new(lambda: Scalar, mu: Scalar) -> Result<Self, ScalarError> {
        if mu.is_zero() {
            if lambda.is_zero() {
                return Err(ScalarError::ZeroForm);
            }
            return Ok(ProjPoint { lambda: Scalar::one(), mu });
        }
        Ok(ProjPoint { lambda: lambda.checked_div(&mu)?, mu: Scalar::one() })
    }

    /// `λ₁μ₂ − λ₂μ₁`; zero iff the points coincide.
    pub fn cross(&self, other: &ProjPoint) -> Scalar {
        &(&self.lambda * &other.mu) - &(&other.lambda * &self.mu)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} : {:?})", self.lambda, self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum RootStructure {
    TwoDistinct(ProjPoint, ProjPoint),
    DoubleRoot(ProjPoint),
    /// `c·μ²`: the form drops to degree 0 in λ; its single root is `(1:0)`.
    DegenerateLinear(ProjPoint),
}

impl RootStructure {
    pub fn is_distinct(&self) -> bool {
        matches!(self, RootStructure::TwoDistinct(..))
    }

    /// The repeated root, for the double and degenerate cases.
    pub fn repeated(&self) -> Option<&ProjPoint> {
        match self {
            RootStructure::TwoDistinct(..) => None,
            RootStructure::DoubleRoot(p) | RootStructure::DegenerateLinear(p) => Some(p),
        }
    }
}

/// Roots of `a·λ² + b·λμ + c·μ²` in homogeneous coordinates.
///
/// Non-square discriminants adjoin `√Δ` (see [`Scalar::sqrt`]).
pub fn binary_quadratic_roots(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<RootStructure, ScalarError> {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(ScalarError::ZeroForm);
    }
    if a.is_zero() {
        if b.is_zero() {
            return Ok(RootStructure::DegenerateLinear(ProjPoint::new(Scalar::one(), Scalar::zero())?));
        }
        // μ·(bλ + cμ)
        let inf = ProjPoint::new(Scalar::one(), Scalar::zero())?;
        let fin = ProjPoint::new(-c, b.clone())?;
        return Ok(RootStructure::TwoDistinct(fin, inf));
    }
    let disc = b.checked_mul(b)?.checked_sub(&Scalar::from_int(4).checked_mul(a)?.checked_mul(c)?)?;
    let two_a = Scalar::from_int(2).checked_mul(a)?;
    if disc.is_zero() {
        let root = (-b).checked_div(&two_a)?;
        return Ok(RootStructure::DoubleRoot(ProjPoint::new(root, Scalar::one())?));
    }
    let s = disc.sqrt()?;
    let r1 = (-b).checked_add(&s)?.checked_div(&two_a)?;
    let r2 = (-b).checked_sub(&s)?.checked_div(&two_a)?;
    Ok(RootStructure::TwoDistinct(
        ProjPoint::new(r1, Scalar::one())?,
        ProjPoint::new(r2, Scalar::one())?,
    ))
}

/// A homogeneous binary form; `coeffs[i]` multiplies `λ^(deg−i)·μ^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm{:?}", self.coeffs)
    }
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs a degree");
        BinaryForm { coeffs }
    }

    /// The linear form `p·λ + q·μ`.
    pub fn linear(p: Scalar, q: Scalar) -> Self {
        BinaryForm { coeffs: vec![p, q] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, p: &ProjPoint) -> Scalar {
        let d = self.degree() as u32;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Scalar::zero(), |acc, (i, c)| {
                let i = i as u32;
                &acc + &(&(c * &p.lambda.pow(d - i)) * &p.mu.pow(i))
            })
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "forms of different degree");
        BinaryForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Splits off `μ^m` and returns `(m, f(λ, 1))` with the affine
    /// polynomial's coefficients in ascending powers of λ.
    fn dehomogenize(&self) -> (usize, Vec<Scalar>) {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let mut asc: Vec<Scalar> = self.coeffs[m..].to_vec();
        asc.reverse();
        (m, asc)
    }

    /// Monic-normalised gcd of a family of forms (zero forms are ignored).
    /// Returns `None` when every form is zero.
    pub fn gcd_all<'a>(forms: impl IntoIterator<Item = &'a BinaryForm>) -> Result<Option<BinaryForm>, ScalarError> {
        let mut mu_power: Option<usize> = None;
        let mut g: Option<Vec<Scalar>> = None;
        for f in forms {
            if f.is_zero() {
                continue;
            }
            let (m, p) = f.dehomogenize();
            mu_power = Some(mu_power.map_or(m, |x| x.min(m)));
            g = Some(match g {
                None => monic(p)?,
                Some(h) => poly_gcd(h, p)?,
            });
        }
        let (Some(m), Some(g)) = (mu_power, g) else {
            return Ok(None);
        };
        let mut coeffs = vec![Scalar::zero(); m];
        coeffs.extend(g.into_iter().rev());
        Ok(Some(BinaryForm { coeffs }))
    }
}

fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.len() > 1 && p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn monic(p: Vec<Scalar>) -> Result<Vec<Scalar>, ScalarError> {
    let p = trim(p);
    let lead = p.last().cloned().unwrap_or_else(Scalar::zero);
    if lead.is_zero() {
        return Ok(p);
    }
    p.iter().map(|c| c.checked_div(&lead)).collect()
}

fn poly_rem(mut a: Vec<Scalar>, b: &[Scalar]) -> Result<Vec<Scalar>, ScalarError> {
    let lb = b.last().expect("nonempty divisor");
    while a.len() >= b.len() && !(a.len() == 1 && a[0].is_zero()) {
        let la = a.last().unwrap().clone();
        if la.is_zero() {
            a.pop();
            continue;
        }
        let q = la.checked_div(lb)?;
        let shift = a.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            a[shift + i] = a[shift + i].checked_sub(&q.checked_mul(bc)?)?;
        }
        a.pop();
        if a.is_empty() {
            a.push(Scalar::zero());
        }
    }
    Ok(trim(a))
}

fn is_zero_poly(p: &[Scalar]) -> bool {
    p.iter().all(Scalar::is_zero)
}

fn poly_gcd(a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Vec<Scalar>, ScalarError> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !is_zero_poly(&b) {
        let r = poly_rem(a, &b)?;
        a = b;
        b = r;
    }
    monic(a)
}
