//! Finite log-polyhomogeneous symbols `Σ ρ^{β+a} (log ρ)^j c_{a,j}(y)`.
//!
//! The real exponent `β` is kept in `[0, 1)` and the integer offsets `a`
//! carry the rest, so products with `ρ^q` never need a formal exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::rational::{format_q, q, to_f64, Q};
use crate::algebra::{MultiPoly, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LogSymbol {
    ring: Arc<PolyRing>,
    base: Q,
    terms: BTreeMap<(i64, u32), MultiPoly>,
}

/// Split `e` into its fractional part in `[0,1)` and its floor.
fn split_exponent(e: &Q) -> (Q, i64) {
    let fl = e.floor();
    let off = fl.to_integer().to_i64().expect("exponent out of range");
    (e - fl, off)
}

impl LogSymbol {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        LogSymbol { ring: ring.clone(), base: Q::zero(), terms: BTreeMap::new() }
    }

    /// `ρ^e (log ρ)^j c(y)`.
    pub fn monomial(ring: &Arc<PolyRing>, e: &Q, j: u32, c: MultiPoly) -> Result<Self> {
        let (base, off) = split_exponent(e);
        let mut s = LogSymbol { ring: ring.clone(), base, terms: BTreeMap::new() };
        let c = c.with_ring(ring)?;
        if !c.is_zero() {
            s.terms.insert((off, j), c);
        }
        Ok(s)
    }

    pub fn power(ring: &Arc<PolyRing>, e: &Q) -> Self {
        Self::monomial(ring, e, 0, MultiPoly::one()).expect("constant fits any ring")
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn base(&self) -> &Q {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(exponent, log power, coefficient)`, exponent ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Q, u32, &MultiPoly)> + '_ {
        self.terms
            .iter()
            .map(move |((a, j), c)| (&self.base + q(*a), *j, c))
    }

    pub fn max_log_power(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.keys().all(|k| k.1 == 0)
    }

    /// Membership in `ρ^e C^∞_even`: no logs and every exponent is `e + 2a`,
    /// `a ≥ 0`.
    pub fn is_even_at(&self, e: &Q) -> bool {
        self.terms().all(|(x, j, _)| {
            let d = x - e;
            j == 0 && d.is_integer() && !d.is_negative() && d.to_integer().is_even()
        })
    }

    /// Leading term in the order used by the indicial solver: smallest
    /// exponent, then largest log power.
    pub fn leading(&self) -> Option<(Q, u32, &MultiPoly)> {
        let a = self.terms.keys().next()?.0;
        let (k, c) = self
            .terms
            .range((a, 0)..(a + 1, 0))
            .next_back()
            .expect("offset present");
        Some((&self.base + q(a), k.1, c))
    }

    fn align(&self, other: &LogSymbol) -> Result<Q> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && self.ring.names() != other.ring.names() {
            return Err(Error::DomainMismatch("log symbols over different y-rings".into()));
        }
        match (self.is_zero(), other.is_zero()) {
            (true, _) => Ok(other.base.clone()),
            (_, true) => Ok(self.base.clone()),
            _ if self.base == other.base => Ok(self.base.clone()),
            _ => Err(Error::DomainMismatch(format!(
                "exponent classes {} and {} do not mix",
                format_q(&self.base),
                format_q(&other.base)
            ))),
        }
    }

    fn add_scaled(&self, other: &LogSymbol, c: &Q) -> Result<LogSymbol> {
        let base = self.align(other)?;
        let mut out = self.clone();
        out.base = base;
        for (k, v) in &other.terms {
            let add = v.scale(c);
            let e = out.terms.entry(*k).or_insert_with(MultiPoly::zero);
            *e = e.add_poly(&add);
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out.normalise();
        Ok(out)
    }

    fn normalise(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.base = Q::zero();
        }
    }

    pub fn add(&self, other: &LogSymbol) -> Result<LogSymbol> {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &LogSymbol) -> Result<LogSymbol> {
        self.add_scaled(other, &-Q::one())
    }

    pub fn scale(&self, c: &Q) -> LogSymbol {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out.normalise();
        out
    }

    /// Multiplication by a polynomial in `y` (ρ-independent, hence even).
    pub fn mul_poly(&self, p: &MultiPoly) -> Result<LogSymbol> {
        let p = p.clone().with_ring(&self.ring)?;
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul_poly(&p);
        }
        out.normalise();
        Ok(out)
    }

    /// Multiplication by `ρ^e`.
    pub fn shift(&self, e: &Q) -> LogSymbol {
        if self.is_zero() {
            return self.clone();
        }
        let (b, off) = split_exponent(&(&self.base + e));
        let carry = off;
        LogSymbol {
            ring: self.ring.clone(),
            base: b,
            terms: self.terms.iter().map(|((a, j), c)| ((a + carry, *j), c.clone())).collect(),
        }
    }

    /// Multiplication by `(log ρ)^l`.
    pub fn mul_log(&self, l: u32) -> LogSymbol {
        let mut out = self.clone();
        out.terms = self.terms.iter().map(|((a, j), c)| ((*a, j + l), c.clone())).collect();
        out
    }

    /// `ρ∂_ρ`.
    pub fn rho_drho(&self) -> LogSymbol {
        let mut out = LogSymbol::zero(&self.ring);
        out.base = self.base.clone();
        for ((a, j), c) in &self.terms {
            let sigma = &self.base + q(*a);
            if !sigma.is_zero() {
                let e = out.terms.entry((*a, *j)).or_insert_with(MultiPoly::zero);
                *e = e.add_poly(&c.scale(&sigma));
            }
            if *j > 0 {
                let e = out.terms.entry((*a, j - 1)).or_insert_with(MultiPoly::zero);
                *e = e.add_poly(&c.scale(&q(*j as i64)));
            }
        }
        out.normalise();
        out
    }

    /// `∂_ρ = ρ^{-1}·ρ∂_ρ`.
    pub fn d_rho(&self) -> LogSymbol {
        self.rho_drho().shift(&-Q::one())
    }

    /// `∂/∂y_i` applied to the coefficients.
    pub fn d_y(&self, i: usize) -> LogSymbol {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.derivative(i);
        }
        out.normalise();
        out
    }

    /// Flat nonnegative Laplacian `-Σ ∂²_{y_i}` on the coefficients.
    pub fn flat_laplacian_y(&self) -> LogSymbol {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            let mut acc = MultiPoly::zero();
            for i in 0..self.ring.len() {
                acc = acc.sub_poly(&v.derivative(i).derivative(i));
            }
            *v = acc;
        }
        out.normalise();
        out
    }

    pub fn eval_f64(&self, rho: f64, y: &[f64]) -> f64 {
        let lr = rho.ln();
        self.terms()
            .map(|(e, j, c)| rho.powf(to_f64(&e)) * lr.powi(j as i32) * c.eval_f64(y))
            .sum()
    }
}

impl fmt::Display for LogSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, j, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·ρ^({})", format_q(&e))?;
            if j > 0 {
                write!(f, "·log(ρ)^{j}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LogSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(["y1", "y2"])
    }

    #[test]
    fn exponent_classes() {
        let r = ring();
        let a = LogSymbol::power(&r, &qf(7, 3));
        assert_eq!(a.base(), &qf(1, 3));
        let b = a.shift(&qf(-7, 3));
        assert!(b.is_even_at(&Q::zero()));
        assert!(a.add(&LogSymbol::power(&r, &qf(1, 2))).is_err());
        assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn euler_operator_on_logs() {
        let r = ring();
        let s = qf(3, 2);
        // ρ∂ρ(ρ^s log ρ) = s ρ^s log ρ + ρ^s
        let f = LogSymbol::power(&r, &s).mul_log(1);
        let want = f.scale(&s).add(&LogSymbol::power(&r, &s)).unwrap();
        assert_eq!(f.rho_drho(), want);
        let x = 0.37;
        let num = (f.eval_f64(x * (1.0 + 1e-6), &[0.0, 0.0]) - f.eval_f64(x * (1.0 - 1e-6), &[0.0, 0.0]))
            / 2e-6;
        assert!((num - want.eval_f64(x, &[0.0, 0.0])).abs() < 1e-6);
    }

    #[test]
    fn leading_prefers_high_logs() {
        let r = ring();
        let f = LogSymbol::power(&r, &q(2))
            .add(&LogSymbol::power(&r, &q(1)).mul_log(2))
            .unwrap()
            .add(&LogSymbol::power(&r, &q(1)))
            .unwrap();
        let (e, j, _) = f.leading().unwrap();
        assert_eq!((e, j), (q(1), 2));
        assert!(!f.is_log_free());
    }
}
