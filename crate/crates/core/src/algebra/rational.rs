//! Rational helpers and Gaussian rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge numerator and denominator: scale down by bit length
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = (nb.min(db) - 60).max(0) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `p/q` for non-integers, `p` for integers.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Result of parsing a user-facing number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRational {
    pub value: Q,
    /// The input was a decimal within tolerance of a half-integer and was
    /// snapped onto it.
    pub snapped: bool,
}

/// Parse `p/q`, an integer, or a decimal.  Decimals within `1e-9` of a
/// half-integer are snapped onto it and flagged.
pub fn parse_rational(s: &str) -> Result<ParsedRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(ParsedRational { value: Q::new(n, d), snapped: false });
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(ParsedRational { value: Q::from_integer(n), snapped: false });
    }
    let value = parse_decimal(s).ok_or_else(bad)?;
    let two = q(2);
    let doubled = &value * &two;
    let nearest = doubled.round();
    let gap = (&doubled - &nearest).abs() / &two;
    if !gap.is_zero() && to_f64(&gap) < 1e-9 {
        return Ok(ParsedRational { value: nearest / two, snapped: true });
    }
    Ok(ParsedRational { value, snapped: false })
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse().ok()?;
    let scale = frac.len() as i32 + 1 - exp;
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        Q::new(digits, num_traits::pow(ten, scale as usize))
    } else {
        Q::from_integer(digits * num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Some(v)
}

/// Exact complex number with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Q,
    pub im: Q,
}

impl GaussRat {
    pub fn new(re: Q, im: Q) -> Self {
        GaussRat { re, im }
    }
    pub fn real(re: Q) -> Self {
        GaussRat { re, im: Q::zero() }
    }
    pub fn zero() -> Self {
        Self::real(Q::zero())
    }
    pub fn one() -> Self {
        Self::real(Q::one())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
    pub fn mul(&self, o: &Self) -> Self {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    pub fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }
    pub fn add_q(&self, q: &Q) -> Self {
        GaussRat::new(&self.re + q, self.im.clone())
    }

    /// Parse `re` or `re,im`, each part in [`parse_rational`] syntax.
    pub fn parse(s: &str) -> Result<(Self, bool)> {
        match s.split_once(',') {
            Some((a, b)) => {
                let a = parse_rational(a)?;
                let b = parse_rational(b)?;
                Ok((GaussRat::new(a.value, b.value), a.snapped || b.snapped))
            }
            None => {
                let a = parse_rational(s)?;
                Ok((GaussRat::real(a.value), a.snapped))
            }
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_q(&self.re))
        } else {
            write!(f, "{},{}", format_q(&self.re), format_q(&self.im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-11/5").unwrap().value, qf(-11, 5));
        assert_eq!(parse_rational("-2.2").unwrap().value, qf(-11, 5));
        assert_eq!(parse_rational("3").unwrap().value, q(3));
        assert_eq!(parse_rational("1e-2").unwrap().value, qf(1, 100));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn snaps_near_half_integers() {
        let p = parse_rational("-1.50000000001").unwrap();
        assert!(p.snapped);
        assert_eq!(p.value, qf(-3, 2));
        let p = parse_rational("-1.5001").unwrap();
        assert!(!p.snapped);
    }

    #[test]
    fn gauss_arithmetic() {
        let (z, _) = GaussRat::parse("1/2,-3").unwrap();
        let w = z.mul(&z);
        assert_eq!(w, GaussRat::new(qf(1, 4) - q(9), q(-3)));
        assert_eq!(z.to_string(), "1/2,-3");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(5), q(120));
    }
}
