//! Derivations of a polynomial ring, extended to rational functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::poly::{MultiPoly, PolyRing};
use super::ratfn::RationalFn;
use crate::error::{Error, Result};

/// A derivation determined by its values on the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    ring: Arc<PolyRing>,
    images: BTreeMap<usize, MultiPoly>,
}

impl Derivation {
    pub fn new(ring: &Arc<PolyRing>, images: impl IntoIterator<Item = (usize, MultiPoly)>) -> Self {
        let images = images
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, p)| {
                assert!(v < ring.len(), "derivation variable out of range");
                (v, p.with_ring(ring).expect("derivation image lies in the ring"))
            })
            .collect();
        Derivation { ring: ring.clone(), images }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn image(&self, var: usize) -> MultiPoly {
        self.images.get(&var).cloned().unwrap_or_else(MultiPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    fn check(&self, p: &MultiPoly) -> Result<()> {
        if p.is_constant() {
            return Ok(());
        }
        if p.ring() == &self.ring || **p.ring() == *self.ring {
            return Ok(());
        }
        Err(Error::DomainMismatch(format!(
            "derivation over {:?} applied to polynomial over {:?}",
            self.ring.names(),
            p.ring().names()
        )))
    }

    pub fn apply_poly(&self, p: &MultiPoly) -> Result<MultiPoly> {
        self.check(p)?;
        let mut acc = MultiPoly::zero();
        let support = p.support();
        for (v, img) in &self.images {
            if !support.get(*v).copied().unwrap_or(false) {
                continue;
            }
            acc = acc + img * p.derivative(*v);
        }
        Ok(acc)
    }

    pub fn apply(&self, f: &RationalFn) -> Result<RationalFn> {
        self.check(f.num())?;
        self.check(f.den())?;
        if f.den().is_constant() {
            let n = self.apply_poly(f.num())?;
            // denominators are monic, so a constant one is 1
            return Ok(RationalFn::from_poly(n));
        }
        let dn = self.apply_poly(f.num())?;
        let dd = self.apply_poly(f.den())?;
        let num = &dn * f.den() - f.num() * &dd;
        RationalFn::new(num, f.den() * f.den())
    }

    /// `[self, other] = self o other - other o self`.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        if self.ring != other.ring && *self.ring != *other.ring {
            return Err(Error::DomainMismatch("derivations over different rings".into()));
        }
        let mut vars: Vec<usize> = self.images.keys().chain(other.images.keys()).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        let mut images = Vec::new();
        for v in vars {
            let a = self.apply_poly(&other.image(v))?;
            let b = other.apply_poly(&self.image(v))?;
            images.push((v, a - b));
        }
        Ok(Derivation::new(&self.ring, images))
    }

    pub fn scale(&self, c: &super::Q) -> Derivation {
        Derivation::new(&self.ring, self.images.iter().map(|(v, p)| (*v, p.scale(c))))
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let mut images = self.images.clone();
        for (v, p) in &other.images {
            let e = images.entry(*v).or_insert_with(MultiPoly::zero);
            *e = &*e + p;
        }
        Derivation::new(&self.ring, images)
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&-super::rational::q(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    #[test]
    fn euler_and_rotation() {
        let r = PolyRing::new(["x", "y"]);
        let (x, y) = (r.var("x"), r.var("y"));
        let euler = Derivation::new(&r, [(0, x.clone()), (1, y.clone())]);
        let rot = Derivation::new(&r, [(0, -&y), (1, x.clone())]);
        let p = &x * &x + &y * &y;
        assert!(rot.apply_poly(&p).unwrap().is_zero());
        assert_eq!(euler.apply_poly(&p).unwrap(), p.scale(&q(2)));
        assert!(euler.commutator(&rot).unwrap().is_zero());
        let f = RationalFn::new(x.clone(), y.clone()).unwrap();
        assert!(euler.apply(&f).unwrap().is_zero());
    }

    #[test]
    fn foreign_polynomial_rejected() {
        let r = PolyRing::new(["x"]);
        let other = PolyRing::new(["z"]);
        let d = Derivation::new(&r, [(0, MultiPoly::one())]);
        assert!(matches!(d.apply_poly(&other.var("z")), Err(Error::DomainMismatch(_))));
    }
}
