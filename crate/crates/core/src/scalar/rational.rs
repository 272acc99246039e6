//! Exact rationals with an inline fast path.
//!
//! Values whose reduced numerator and denominator both fit in an `i64` are
//! stored inline and combined through `i128` intermediates; everything else
//! falls back to [`BigRational`]. The representation is canonical: a value
//! that fits inline is never stored as `Big`, so structural equality is value
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `den > 0`, `gcd(num, den) = 1`, `num != i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn fits_small(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Rational(Repr::Small(n, 1))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    /// Builds a rational from an arbitrary big-integer fraction.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::from_big(BigRational::new(num, den)))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        if n == 0 {
            return Self::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if fits_small(n) && fits_small(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    /// Canonicalises a big rational (which `num-rational` keeps reduced).
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(r))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => match r.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    /// Bit size of numerator plus denominator; a pivot-quality measure.
    pub fn height(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => {
                (64 - n.unsigned_abs().leading_zeros() as u64) + (64 - d.leading_zeros() as u64)
            }
            Repr::Big(r) => r.numer().bits() + r.denom().bits(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        match &self.0 {
            Repr::Small(0, _) => Err(ScalarError::DivisionByZero),
            Repr::Small(n, d) => Ok(if *n < 0 {
                Rational(Repr::Small(-d, -n))
            } else {
                Rational(Repr::Small(*d, *n))
            }),
            Repr::Big(r) => Ok(Self::from_big(r.recip())),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The exact square root if `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (sn, sd) = (n.sqrt(), d.sqrt());
        if &sn * &sn == n && &sd * &sd == d {
            Some(Self::from_big(BigRational::new_raw(sn, sd)))
        } else {
            None
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(0, _), _) => rhs.clone(),
            (_, Repr::Small(0, _)) => self.clone(),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    return Rational::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_add(c * b) {
                    Some(n) => Rational::from_i128(n, b * d),
                    None => Rational::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rational::zero(),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                // Cross-cancel first so the product is already reduced.
                let g1 = gcd_u64(a.unsigned_abs(), *d as u64) as i64;
                let g2 = gcd_u64(c.unsigned_abs(), *b as u64) as i64;
                let n = (a / g1) as i128 * (c / g2) as i128;
                let dd = (b / g2) as i128 * (d / g1) as i128;
                if fits_small(n) && fits_small(dd) {
                    Rational(Repr::Small(n as i64, dd as i64))
                } else {
                    Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(dd))))
                }
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

/// Panics on division by zero, like the integer operators.
impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        self.checked_div(rhs).expect("rational division by zero")
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational { (&self).$m(rhs) }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    /// Accepts `"p"` or `"p/q"` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

/// Writes `n = s² · m` with `m` squarefree (sign kept in `m`).
///
/// Trial division runs to `10⁵`; a leftover cofactor is absorbed into `s`
/// if it is a perfect square, otherwise kept in `m`. Cofactors carrying a
/// repeated prime above the bound are therefore not fully reduced.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "squarefree part of zero");
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rem = n.abs();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(100_000u32);
    while &p * &p <= rem && p <= bound {
        let mut e = 0u32;
        loop {
            let (q, r) = rem.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rem = q;
            e += 1;
        }
        if e > 0 {
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = rem.sqrt();
    if &r * &r == rem {
        s *= r;
    } else {
        m *= rem;
    }
    (s, sign * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Independent cross-multiplication check through BigRational.
    fn big_check(x: &Rational, y: &Rational) {
        let (bx, by) = (x.to_big(), y.to_big());
        assert_eq!((x + y).to_big(), &bx + &by);
        assert_eq!((x - y).to_big(), &bx - &by);
        assert_eq!((x * y).to_big(), &bx * &by);
        if !y.is_zero() {
            assert_eq!((x / y).to_big(), &bx / &by);
        }
    }

    #[test]
    fn basic_sums() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(1, 2) - r(1, 2), Rational::zero());
        assert_eq!(r(-4, 6), r(2, -3));
        assert_eq!(r(3, 1).to_string(), "3");
        assert_eq!(r(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let sum = &big + &big;
        assert_eq!(sum.to_big(), BigRational::from_integer(BigInt::from(i64::MAX) * 2));
        big_check(&sum, &r(7, 3));
        big_check(&r(i64::MAX, 3), &r(-i64::MAX, 7));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("5/10".parse::<Rational>().unwrap(), r(1, 2));
        assert_eq!(" -7 ".parse::<Rational>().unwrap(), r(-7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        let huge: Rational = "123456789012345678901234567891/7".parse().unwrap();
        assert_eq!(huge.to_string(), "123456789012345678901234567891/7");
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(r(1, 2).checked_div(&Rational::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn squarefree_parts() {
        let cases = [(12, 2, 3), (-8, 2, -2), (1, 1, 1), (49, 7, 1), (-1, 1, -1), (90, 3, 10)];
        for (n, s, m) in cases {
            assert_eq!(squarefree_decompose(&BigInt::from(n)), (BigInt::from(s), BigInt::from(m)));
        }
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(r(9, 4).sqrt_exact(), Some(r(3, 2)));
        assert_eq!(r(2, 1).sqrt_exact(), None);
        assert_eq!(r(-1, 1).sqrt_exact(), None);
    }

    proptest::proptest! {
        #[test]
        fn matches_big_rational(a in -1_000_000_000_000i64..1_000_000_000_000, b in 1i64..1_000_000_000,
                                c in i64::MIN + 1..i64::MAX, d in 1i64..i64::MAX) {
            big_check(&r(a, b), &r(c, d));
            big_check(&r(c, d), &r(a, b));
        }
    }
}
