//! Sparse multivariate polynomials over `Q` in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use super::rational::{format_q, q, Q};
use super::Coeff;
use crate::error::{Error, Result};

/// Ordered list of variable names.  Variable `i` sorts before variable
/// `i + 1` in the lex tie-break.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<PolyRing> {
        Arc::new(PolyRing { names: names.into_iter().map(Into::into).collect() })
    }

    /// Shared ring with no variables, used by constants.
    pub fn empty() -> Arc<PolyRing> {
        static EMPTY: OnceLock<Arc<PolyRing>> = OnceLock::new();
        EMPTY.get_or_init(|| Arc::new(PolyRing { names: Vec::new() })).clone()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(self: &Arc<Self>, name: &str) -> MultiPoly {
        let i = self.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        MultiPoly::var(self, i)
    }
}

/// Exponent vector stored sparsely as `(variable, exponent)` pairs sorted by
/// variable, with the total degree cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    exps: Vec<(u16, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        Monomial { deg: e, exps: vec![(i as u16, e)] }
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        let pairs: Vec<(u16, u32)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i as u16, e))
            .collect();
        Monomial { deg: exps.iter().sum(), exps: pairs }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        match self.exps.binary_search_by_key(&(var as u16), |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.exps.last().map(|p| p.0 as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { deg: self.deg + other.deg, exps: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.iter().all(|(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        let exps: Vec<(u16, u32)> = other
            .exps
            .iter()
            .filter_map(|&(v, e)| {
                let r = e - self.exponent(v as usize);
                (r > 0).then_some((v, r))
            })
            .collect();
        Monomial { deg: other.deg - self.deg, exps }
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: Vec<(u16, u32)> = self
            .exps
            .iter()
            .filter_map(|&(v, e)| {
                let m = e.min(other.exponent(v as usize));
                (m > 0).then_some((v, m))
            })
            .collect();
        Monomial { deg: exps.iter().map(|p| p.1).sum(), exps }
    }

    /// Drop variable `var`, returning its exponent and the rest.
    pub fn split_var(&self, var: usize) -> (u32, Monomial) {
        let e = self.exponent(var);
        if e == 0 {
            return (0, self.clone());
        }
        let exps: Vec<(u16, u32)> = self.exps.iter().copied().filter(|p| p.0 as usize != var).collect();
        (e, Monomial { deg: self.deg - e, exps })
    }

    /// Keep only the variables selected by `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Monomial {
        let exps: Vec<(u16, u32)> = self.exps.iter().copied().filter(|p| keep[p.0 as usize]).collect();
        Monomial { deg: exps.iter().map(|p| p.1).sum(), exps }
    }

    fn remap(&self, map: &[usize]) -> Monomial {
        let mut exps: Vec<(u16, u32)> = self.exps.iter().map(|&(v, e)| (map[v as usize] as u16, e)).collect();
        exps.sort_unstable();
        Monomial { deg: self.deg, exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => {
                    if x.0 < y.0 {
                        return Ordering::Greater;
                    }
                    if x.0 > y.0 {
                        return Ordering::Less;
                    }
                    if x.1 != y.1 {
                        return x.1.cmp(&y.1);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.is_constant() || same_ring(&self.ring, &other.ring))
    }
}

impl Eq for MultiPoly {}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { ring: PolyRing::empty(), terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { ring: PolyRing::empty(), terms }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.len(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i, 1), Q::one());
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                assert!(v < ring.len(), "monomial outside ring");
            }
            *map.entry(m).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { ring: ring.clone(), terms: map }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Q::zero))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Mask of variables that actually occur.
    pub fn support(&self) -> Vec<bool> {
        let mut used = vec![false; self.ring.len()];
        for m in self.terms.keys() {
            for (v, _) in m.iter() {
                used[v] = true;
            }
        }
        used
    }

    /// The ring both operands can be read in; constants adopt the other ring.
    pub fn common_ring(&self, other: &MultiPoly) -> Result<Arc<PolyRing>> {
        if same_ring(&self.ring, &other.ring) {
            return Ok(self.ring.clone());
        }
        if other.is_constant() {
            return Ok(self.ring.clone());
        }
        if self.is_constant() {
            return Ok(other.ring.clone());
        }
        Err(Error::DomainMismatch(format!(
            "rings {:?} and {:?} differ",
            self.ring.names(),
            other.ring.names()
        )))
    }

    fn ring_with(&self, other: &MultiPoly) -> Arc<PolyRing> {
        self.common_ring(other).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Re-express in `ring`, matching variables by name.
    pub fn embed(&self, ring: &Arc<PolyRing>) -> Result<MultiPoly> {
        if same_ring(&self.ring, ring) {
            return Ok(MultiPoly { ring: ring.clone(), terms: self.terms.clone() });
        }
        let mut map = Vec::with_capacity(self.ring.len());
        let used = self.support();
        for (i, name) in self.ring.names().iter().enumerate() {
            match ring.index_of(name) {
                Some(j) => map.push(j),
                None if !used[i] => map.push(0),
                None => {
                    return Err(Error::DomainMismatch(format!("variable {name} not in target ring")))
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| (m.remap(&map), c.clone()));
        Ok(MultiPoly::from_terms(ring, terms))
    }

    pub fn scale(&self, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { ring: self.ring.clone(), terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { ring: self.ring.clone(), terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(m, v)| (m.mul(mono), v * c)).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    fn add_assign_scaled(&mut self, other: &MultiPoly, sign: bool) {
        let ring = self.ring_with(other);
        self.ring = ring;
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    if sign {
                        *v += c;
                    } else {
                        *v -= c;
                    }
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), if sign { c.clone() } else { -c });
                }
            }
        }
    }

    pub fn add_poly(&self, other: &MultiPoly) -> MultiPoly {
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        big.add_assign_scaled(small, true);
        big
    }

    pub fn sub_poly(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, false);
        out
    }

    pub fn mul_poly(&self, other: &MultiPoly) -> MultiPoly {
        let ring = self.ring_with(other);
        if self.is_zero() || other.is_zero() {
            return MultiPoly { ring, terms: BTreeMap::new() };
        }
        if let Some(c) = self.constant_value() {
            let mut p = other.scale(&c);
            p.ring = ring;
            return p;
        }
        if let Some(c) = other.constant_value() {
            let mut p = self.scale(&c);
            p.ring = ring;
            return p;
        }
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { ring, terms: acc }
    }

    /// Multiplication that refuses to build more than `budget` terms.
    pub fn checked_mul(&self, other: &MultiPoly, budget: usize) -> Result<MultiPoly> {
        self.common_ring(other)?;
        if self.len().saturating_mul(other.len()) > budget.saturating_mul(4) {
            return Err(Error::Resource(format!(
                "product of {} and {} terms exceeds budget {budget}",
                self.len(),
                other.len()
            )));
        }
        let p = self.mul_poly(other);
        if p.len() > budget {
            return Err(Error::Resource(format!("{} terms exceeds budget {budget}", p.len())));
        }
        Ok(p)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        if acc.is_constant() {
            acc.ring = self.ring.clone();
        }
        acc
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            if e == 0 {
                continue;
            }
            let nm = rest.mul(&Monomial::var(var, e - 1));
            terms.insert(nm, c * q(e as i64));
        }
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = super::rational::to_f64(c);
            for (v, e) in m.iter() {
                t *= point[v].powi(e as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t *= num_traits::pow(point[v].clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Substitute polynomials for variables.  `subs[i]` replaces variable `i`;
    /// the results share the ring of the substituted values.
    pub fn substitute(&self, subs: &[MultiPoly]) -> MultiPoly {
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            for (v, e) in m.iter() {
                let p = cache.entry((v, e)).or_insert_with(|| subs[v].pow(e)).clone();
                t = t.mul_poly(&p);
            }
            acc = acc.add_poly(&t);
        }
        acc
    }

    /// Group by the variables outside `keep`: returns the coefficient
    /// polynomials (involving only `keep`-variables), one per distinct
    /// monomial in the other variables.
    pub fn coefficients_outside(&self, keep: &[bool]) -> Vec<MultiPoly> {
        let drop: Vec<bool> = keep.iter().map(|k| !k).collect();
        let mut groups: BTreeMap<Monomial, BTreeMap<Monomial, Q>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry(m.restrict(&drop)).or_default().insert(m.restrict(keep), c.clone());
        }
        groups
            .into_values()
            .map(|terms| MultiPoly { ring: self.ring.clone(), terms })
            .collect()
    }

    /// Coefficients of powers of `var`, index = exponent.
    pub fn to_univariate(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out: Vec<BTreeMap<Monomial, Q>> = vec![BTreeMap::new(); d + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            out[e as usize].insert(rest, c.clone());
        }
        out.into_iter().map(|terms| MultiPoly { ring: self.ring.clone(), terms }).collect()
    }

    pub fn from_univariate(ring: &Arc<PolyRing>, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (e, p) in coeffs.iter().enumerate() {
            let xe = Monomial::var(var, e as u32);
            for (m, c) in &p.terms {
                terms.insert(m.mul(&xe), c.clone());
            }
        }
        MultiPoly { ring: ring.clone(), terms }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading()?;
        let ring = self.common_ring(d).ok()?;
        if let Some(c) = d.constant_value() {
            let mut out = self.scale(&(Q::one() / c));
            out.ring = ring;
            return Some(out);
        }
        if d.len() == 1 {
            let inv = Q::one() / lc;
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.insert(lm.quotient(m), c * &inv);
            }
            return Some(MultiPoly { ring, terms });
        }
        let lm = lm.clone();
        let lc = lc.clone();
        let mut r = self.clone();
        let mut quo = BTreeMap::new();
        while let Some((rm, rc)) = r.leading() {
            if !lm.divides(rm) || rm.degree() < lm.degree() {
                return None;
            }
            let tm = lm.quotient(rm);
            let tc = rc / &lc;
            let step = d.mul_monomial(&tm, &tc);
            r.add_assign_scaled(&step, false);
            quo.insert(tm, tc);
        }
        Some(MultiPoly { ring, terms: quo })
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&(Q::one() / c)),
            _ => self.clone(),
        }
    }

    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn with_ring(mut self, ring: &Arc<PolyRing>) -> Result<MultiPoly> {
        if same_ring(&self.ring, ring) || self.is_constant() {
            self.ring = ring.clone();
            return Ok(self);
        }
        self.embed(ring)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut parts = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(format_q(&a));
            }
            for (v, e) in m.iter() {
                let name = self.ring.names.get(v).map(String::as_str).unwrap_or("?");
                if e == 1 {
                    parts.push(name.to_string());
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl From<Q> for MultiPoly {
    fn from(c: Q) -> Self {
        MultiPoly::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$inner(rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$inner(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$inner(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$inner(&rhs)
            }
        }
    };
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident, $sign:expr) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: MultiPoly) -> MultiPoly {
                if $sign && rhs.len() > self.len() {
                    let mut r = rhs;
                    r.add_assign_scaled(&self, true);
                    return r;
                }
                self.add_assign_scaled(&rhs, $sign);
                self
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: &MultiPoly) -> MultiPoly {
                self.add_assign_scaled(rhs, $sign);
                self
            }
        }
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.clone().$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.clone().$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add, true);
owned_binop!(Sub, sub, false);
forward_binop!(Mul, mul, mul_poly);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Q::one())
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Q::one())
    }
}

impl Coeff for MultiPoly {
    fn zero_coeff() -> Self {
        MultiPoly::zero()
    }
    fn from_q(q: &Q) -> Self {
        MultiPoly::constant(q.clone())
    }
    fn is_zero_coeff(&self) -> bool {
        self.terms.is_empty()
    }
    fn scale(&self, q: &Q) -> Self {
        MultiPoly::scale(self, q)
    }
    fn term_count(&self) -> usize {
        self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(["x", "y", "z"])
    }

    #[test]
    fn grlex_order() {
        let x2 = Monomial::from_dense(&[2, 0, 0]);
        let xy = Monomial::from_dense(&[1, 1, 0]);
        let y2 = Monomial::from_dense(&[0, 2, 0]);
        let x = Monomial::from_dense(&[1, 0, 0]);
        let z3 = Monomial::from_dense(&[0, 0, 3]);
        assert!(x2 > xy && xy > y2 && y2 > x);
        assert!(z3 > x2);
        assert!(Monomial::one() < x);
    }

    #[test]
    fn arithmetic_and_division() {
        let r = ring();
        let x = r.var("x");
        let y = r.var("y");
        let p = &x + &y;
        let sq = &p * &p;
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.div_exact(&p).unwrap(), p);
        assert!(sq.div_exact(&(&x - &y)).is_none());
        let d = sq.derivative(0);
        assert_eq!(d, (&x + &y).scale(&q(2)));
        assert_eq!(p.pow(3).eval_q(&[q(1), q(2), q(0)]), q(27));
    }

    #[test]
    fn constants_adopt_rings() {
        let r = ring();
        let x = r.var("x");
        let s = &x + &MultiPoly::constant(qf(1, 2));
        assert_eq!(s.ring().len(), 3);
        let other = PolyRing::new(["u"]).var("u");
        assert!(x.common_ring(&other).is_err());
    }

    #[test]
    fn embed_by_name() {
        let small = PolyRing::new(["z", "x"]);
        let p = small.var("z") * small.var("x");
        let q = p.embed(&ring()).unwrap();
        assert_eq!(q, ring().var("x") * ring().var("z"));
        assert!(ring().var("y").embed(&small).is_err());
    }

    #[test]
    fn substitution() {
        let r = ring();
        let p = r.var("x") * r.var("x") - r.var("y");
        let t = PolyRing::new(["t"]);
        let tt = t.var("t");
        let s = p.substitute(&[tt.clone(), tt.pow(2), MultiPoly::zero()]);
        assert!(s.is_zero());
    }
}
