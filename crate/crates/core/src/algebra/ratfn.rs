//! Rational functions `num / den` in lowest terms with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{MultiPoly, PolyRing};
use super::rational::Q;
use super::Coeff;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.common_ring(&den)?;
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFn { num: p, den: MultiPoly::one() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> Arc<PolyRing> {
        if self.num.is_constant() {
            self.den.ring().clone()
        } else {
            self.num.ring().clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::one);
        if lc.is_one() {
            return RationalFn { num, den };
        }
        let inv = Q::one() / lc;
        RationalFn { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn add_fn(&self, o: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_poly(&self.num + &o.num);
            }
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_constant() {
            let num = &self.num * &o.den + &o.num * &self.den;
            // coprime denominators and reduced inputs: no cancellation possible
            return Self::normalize_lc(num, &self.den * &o.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = &self.num * &d2 + &o.num * &d1;
        let den = &d1 * &o.den;
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, &g);
        if h.is_constant() {
            return Self::normalize_lc(num, den);
        }
        Self::normalize_lc(num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
    }

    pub fn neg_fn(&self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub_fn(&self, o: &RationalFn) -> RationalFn {
        self.add_fn(&o.neg_fn())
    }

    pub fn mul_fn(&self, o: &RationalFn) -> RationalFn {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.num * &o.num);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let cut = |p: &MultiPoly, g: &MultiPoly| if g.is_constant() { p.clone() } else { p.div_exact(g).expect("gcd divides") };
        let num = cut(&self.num, &g1) * cut(&o.num, &g2);
        let den = cut(&self.den, &g2) * cut(&o.den, &g1);
        Self::normalize_lc(num, den)
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RationalFn {
        self.mul_fn(&Self::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Q) -> RationalFn {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn div_fn(&self, o: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul_fn(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> RationalFn {
        RationalFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative in variable `var` of the common ring.
    pub fn derivative(&self, var: usize) -> RationalFn {
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return RationalFn { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n/d)' = (n' d - n d') / d^2; the result keeps a factor of d only
        // through the gcd with d, so reduce against d first.
        let num = &dn * &self.den - &self.num * &dd;
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn eval_q(&self, point: &[Q]) -> Result<Q> {
        let d = self.den.eval_q(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_q(point) / d)
    }

    /// Substitute rational functions for the variables.
    pub fn substitute(&self, subs: &[RationalFn]) -> Result<RationalFn> {
        let n = substitute_poly(&self.num, subs);
        let d = substitute_poly(&self.den, subs);
        n.div_fn(&d)
    }

    pub fn with_ring(self, ring: &Arc<PolyRing>) -> Result<RationalFn> {
        Ok(RationalFn { num: self.num.with_ring(ring)?, den: self.den.with_ring(ring)? })
    }
}

/// Evaluate a polynomial at rational-function arguments.
pub fn substitute_poly(p: &MultiPoly, subs: &[RationalFn]) -> RationalFn {
    let mut cache: std::collections::BTreeMap<(usize, u32), RationalFn> = Default::default();
    let mut acc = RationalFn::zero();
    for (m, c) in p.terms() {
        let mut t = RationalFn::constant(c.clone());
        for (v, e) in m.iter() {
            let pw = cache.entry((v, e)).or_insert_with(|| subs[v].pow(e)).clone();
            t = t.mul_fn(&pw);
        }
        acc = acc.add_fn(&t);
    }
    acc
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl From<MultiPoly> for RationalFn {
    fn from(p: MultiPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RationalFn> for &RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                self.$inner(rhs)
            }
        }
        impl $tr<RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                self.$inner(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                self.$inner(rhs)
            }
        }
        impl $tr<RationalFn> for &RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_fn);
forward_binop!(Sub, sub, sub_fn);
forward_binop!(Mul, mul, mul_fn);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.neg_fn()
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.neg_fn()
    }
}

impl Coeff for RationalFn {
    fn zero_coeff() -> Self {
        RationalFn::zero()
    }
    fn from_q(q: &Q) -> Self {
        RationalFn::constant(q.clone())
    }
    fn is_zero_coeff(&self) -> bool {
        self.num.is_zero()
    }
    fn scale(&self, q: &Q) -> Self {
        RationalFn::scale(self, q)
    }
    fn term_count(&self) -> usize {
        RationalFn::term_count(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    #[test]
    fn canonical_form() {
        let r = PolyRing::new(["x", "y"]);
        let (x, y) = (r.var("x"), r.var("y"));
        let a = RationalFn::new(&x * &x - &y * &y, (&x - &y).scale(&q(3))).unwrap();
        let b = RationalFn::new(&x + &y, MultiPoly::constant(q(3))).unwrap();
        assert_eq!(a, b);
        assert!(a.den().is_one());
        let z = &a - &b;
        assert!(z.is_zero());
        assert!(RationalFn::new(x.clone(), MultiPoly::zero()).is_err());
    }

    #[test]
    fn sum_of_fractions() {
        let r = PolyRing::new(["x", "y"]);
        let (x, y) = (r.var("x"), r.var("y"));
        let w = &x - &y;
        let f = RationalFn::new(x.clone(), w.clone()).unwrap();
        let g = RationalFn::new(y.clone(), w.clone()).unwrap();
        assert_eq!(&f - &g, RationalFn::one());
        let h = RationalFn::new(MultiPoly::one(), w.pow(2)).unwrap();
        let s = &f + &h;
        let expect = RationalFn::new(&x * &w + MultiPoly::one(), w.pow(2)).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn quotient_rule() {
        let r = PolyRing::new(["x", "y"]);
        let (x, y) = (r.var("x"), r.var("y"));
        let f = RationalFn::new(y.clone(), x.clone()).unwrap();
        let d = f.derivative(0);
        assert_eq!(d, RationalFn::new(-&y, &x * &x).unwrap());
        assert_eq!(f.derivative(1), RationalFn::new(MultiPoly::one(), x.clone()).unwrap());
    }
}
