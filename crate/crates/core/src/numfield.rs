//! Exact arithmetic in the quadratic field ℚ(√2).
//!
//! Every action, payoff, transition probability and discount factor of the
//! game lives in this field, so all value computations, comparisons and
//! min/max selections are carried out without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A number `rat + root·√2` with arbitrary-precision rational coefficients.
///
/// Both coefficients are kept in lowest terms (this is what `BigRational`
/// does after every operation), so equality is component-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactQuad {
    rat: BigRational,
    root: BigRational,
}

impl ExactQuad {
    pub fn new(rat: BigRational, root: BigRational) -> Self {
        ExactQuad { rat, root }
    }

    pub fn from_integer(n: i64) -> Self {
        ExactQuad::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num / den` as a rational element. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactQuad::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactQuad::new(r, BigRational::zero())
    }

    /// `a + b√2` from small rational pairs `(a_num, a_den)`, `(b_num, b_den)`.
    pub fn from_parts(a: (i64, i64), b: (i64, i64)) -> Self {
        ExactQuad::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
        )
    }

    pub fn sqrt2() -> Self {
        ExactQuad::new(BigRational::zero(), BigRational::one())
    }

    /// `2^exp` for any integer exponent.
    pub fn pow2(exp: i32) -> Self {
        let big = BigInt::one() << exp.unsigned_abs();
        let r = if exp >= 0 {
            BigRational::from_integer(big)
        } else {
            BigRational::new(BigInt::one(), big)
        };
        ExactQuad::from_rational(r)
    }

    /// Rational part `a` of `a + b√2`.
    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    /// Coefficient `b` of `√2` in `a + b√2`.
    pub fn root(&self) -> &BigRational {
        &self.root
    }

    pub fn is_rational(&self) -> bool {
        self.root.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        ExactQuad::new(self.rat.clone(), -self.root.clone())
    }

    /// Field norm `a² − 2b²`, which vanishes only at zero.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(2.into()) * &self.root * &self.root
    }

    /// Exact sign relative to zero, decided without floating point.
    pub fn sign(&self) -> Ordering {
        let a = self.rat.cmp(&BigRational::zero());
        let b = self.root.cmp(&BigRational::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Mixed signs: |a| vs |b|√2, i.e. a² vs 2b².
            (Ordering::Greater, Ordering::Less) => self.norm().cmp(&BigRational::zero()),
            (Ordering::Less, Ordering::Greater) => BigRational::zero().cmp(&self.norm()),
        }
    }

    pub fn signum(&self) -> i8 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(ExactQuad::new(&self.rat / &n, -(&self.root / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Greatest integer `k` with `k ≤ self`.
    pub fn floor(&self) -> BigInt {
        // Over the common denominator q: self = (A + B√2) / q with q > 0.
        let q = self.rat.denom() * self.root.denom();
        let a = self.rat.numer() * self.root.denom();
        let b = self.root.numer() * self.rat.denom();
        // r < B√2 < r + 1 when B ≠ 0.
        let r = if b.is_zero() {
            BigInt::zero()
        } else {
            let s = (BigInt::from(2) * &b * &b).sqrt();
            if b.is_negative() {
                -s - 1
            } else {
                s
            }
        };
        let k = (a + r).div_floor(&q);
        let next = ExactQuad::from_rational(BigRational::from_integer(&k + 1));
        if (self - &next).sign() != Ordering::Less {
            k + 1
        } else {
            k
        }
    }

    /// Decimal expansion rounded half away from zero to `digits` fractional
    /// digits. Never prints a negative zero.
    pub fn approx(&self, digits: usize) -> String {
        let scale = BigInt::from(10).pow(digits as u32);
        let magnitude = self.abs() * ExactQuad::from_rational(BigRational::from_integer(scale))
            + ExactQuad::from_ratio(1, 2);
        let scaled = magnitude.floor();
        let mut body = scaled.to_string();
        if digits > 0 {
            if body.len() <= digits {
                body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
            }
            body.insert(body.len() - digits, '.');
        }
        if self.is_negative() && !scaled.is_zero() {
            format!("-{body}")
        } else {
            body
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.root.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }

    /// Exact value of a finite binary64 number.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(ExactQuad::from_rational)
            .ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
    }
}

impl Zero for ExactQuad {
    fn zero() -> Self {
        ExactQuad::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.root.is_zero()
    }
}

impl One for ExactQuad {
    fn one() -> Self {
        ExactQuad::from_integer(1)
    }
}

impl PartialOrd for ExactQuad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactQuad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl Neg for ExactQuad {
    type Output = ExactQuad;
    fn neg(self) -> ExactQuad {
        ExactQuad::new(-self.rat, -self.root)
    }
}

impl Neg for &ExactQuad {
    type Output = ExactQuad;
    fn neg(self) -> ExactQuad {
        ExactQuad::new(-&self.rat, -&self.root)
    }
}

impl<'a> Add<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn add(self, rhs: &ExactQuad) -> ExactQuad {
        ExactQuad::new(&self.rat + &rhs.rat, &self.root + &rhs.root)
    }
}

impl<'a> Sub<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn sub(self, rhs: &ExactQuad) -> ExactQuad {
        ExactQuad::new(&self.rat - &rhs.rat, &self.root - &rhs.root)
    }
}

impl<'a> Mul<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn mul(self, rhs: &ExactQuad) -> ExactQuad {
        // (a+b√2)(c+d√2) = (ac+2bd) + (ad+bc)√2
        let two = BigRational::from_integer(2.into());
        ExactQuad::new(
            &self.rat * &rhs.rat + two * &self.root * &rhs.root,
            &self.rat * &rhs.root + &self.root * &rhs.rat,
        )
    }
}

/// Panics on a zero divisor; use [`ExactQuad::checked_div`] to get an error instead.
impl<'a> Div<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn div(self, rhs: &ExactQuad) -> ExactQuad {
        self.checked_div(rhs)
            .expect("division by zero in ExactQuad")
    }
}

macro_rules! forward_owned_binop {
    ($($imp:ident $method:ident),*) => {$(
        impl $imp<ExactQuad> for ExactQuad {
            type Output = ExactQuad;
            fn $method(self, rhs: ExactQuad) -> ExactQuad {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a ExactQuad> for ExactQuad {
            type Output = ExactQuad;
            fn $method(self, rhs: &ExactQuad) -> ExactQuad {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<ExactQuad> for &'a ExactQuad {
            type Output = ExactQuad;
            fn $method(self, rhs: ExactQuad) -> ExactQuad {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl From<i64> for ExactQuad {
    fn from(n: i64) -> Self {
        ExactQuad::from_integer(n)
    }
}

impl From<BigRational> for ExactQuad {
    fn from(r: BigRational) -> Self {
        ExactQuad::from_rational(r)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact form `p/q+r/s*sqrt2`; parts equal to zero are omitted.
impl fmt::Display for ExactQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.root.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.rat)),
            (true, false) => write!(f, "{}*sqrt2", fmt_ratio(&self.root)),
            (false, false) => {
                let op = if self.root.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}*sqrt2",
                    fmt_ratio(&self.rat),
                    op,
                    fmt_ratio(&self.root.abs())
                )
            }
        }
    }
}

impl fmt::Debug for ExactQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (≈{})", self, self.approx(8))
    }
}

/// Parses an unsigned rational written as an integer, a decimal (`0.125`) or
/// a fraction (`p/q`).
fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || int.len() + frac.len() == 0 {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = BigInt::from(10).pow(frac.len() as u32);
    Ok(BigRational::new(digits, den))
}

/// Accepts the `Display` form plus decimal literals, e.g. `0.1`,
/// `3/4-1/2*sqrt2`, `-sqrt2`, `2*sqrt2`.
impl FromStr for ExactQuad {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (idx, c) in s.char_indices() {
            if (c == '+' || c == '-') && idx > 0 {
                terms.push(&s[start..idx]);
                start = idx;
            }
        }
        terms.push(&s[start..]);

        let mut out = ExactQuad::zero();
        for term in terms {
            let (negative, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            let value = if let Some(coef) = body.strip_suffix("sqrt2") {
                let coef = match coef.strip_suffix('*') {
                    Some(c) => parse_rational(c)?,
                    None if coef.is_empty() => BigRational::one(),
                    None => return Err(Error::Parse(format!("invalid term {term:?}"))),
                };
                ExactQuad::new(BigRational::zero(), coef)
            } else {
                ExactQuad::from_rational(parse_rational(body)?)
            };
            out = if negative { out - value } else { out + value };
        }
        Ok(out)
    }
}
