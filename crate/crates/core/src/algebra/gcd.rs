//! Multivariate polynomial gcd over `Q` by recursive primitive remainder
//! sequences, with shortcuts for monomials, divisibility and variables that
//! occur in only one operand.

use super::poly::{Monomial, MultiPoly};
use super::rational::Q;

/// Monic greatest common divisor.  `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let ring = a.common_ring(b).unwrap_or_else(|e| panic!("{e}"));
    let g = gcd_rec(a, b);
    g.with_ring(&ring).expect("gcd stays in the common ring").monic()
}

fn one_like(a: &MultiPoly) -> MultiPoly {
    MultiPoly::one().with_ring(a.ring()).expect("constants embed everywhere")
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return one_like(a);
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    if a == b {
        return a.monic();
    }

    let sa = a.support();
    let sb = b.support();
    if sa != sb {
        let common: Vec<bool> = sa.iter().zip(&sb).map(|(x, y)| *x && *y).collect();
        if !common.iter().any(|&c| c) {
            return one_like(a);
        }
        let mut parts = Vec::new();
        for (p, s) in [(a, &sa), (b, &sb)] {
            if *s == common {
                parts.push(p.clone());
            } else {
                parts.extend(p.coefficients_outside(&common));
            }
        }
        return gcd_many(parts);
    }

    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.monic();
    }

    let var = main_variable(a, b, &sa);
    let ua = a.to_univariate(var);
    let ub = b.to_univariate(var);
    let ca = gcd_many(ua.clone());
    let cb = gcd_many(ub.clone());
    let c = gcd_rec(&ca, &cb);
    let mut p = divide_all(&ua, &ca);
    let mut q = divide_all(&ub, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            q = vec![one_like(a)];
            break;
        }
        let cr = gcd_many(r.clone());
        p = q;
        q = divide_all(&r, &cr);
    }
    let cq = gcd_many(q.clone());
    let g = MultiPoly::from_univariate(a.ring(), var, &divide_all(&q, &cq));
    (c * g).monic()
}

fn gcd_many(mut parts: Vec<MultiPoly>) -> MultiPoly {
    parts.retain(|p| !p.is_zero());
    parts.sort_by_key(MultiPoly::len);
    let mut it = parts.into_iter();
    let Some(mut g) = it.next() else {
        return MultiPoly::zero();
    };
    g = g.monic();
    for p in it {
        if g.is_constant() {
            break;
        }
        g = gcd_rec(&g, &p);
    }
    if g.is_constant() {
        return one_like(&g);
    }
    g
}

fn monomial_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut acc: Option<Monomial> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        acc = Some(match acc {
            None => m.clone(),
            Some(g) => g.gcd(m),
        });
        if acc.as_ref().is_some_and(Monomial::is_one) {
            break;
        }
    }
    let m = acc.unwrap_or_else(Monomial::one);
    MultiPoly::from_terms(a.ring(), [(m, Q::from_integer(1.into()))])
}

fn main_variable(a: &MultiPoly, b: &MultiPoly, support: &[bool]) -> usize {
    (0..support.len())
        .filter(|&v| support[v])
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial has a variable")
}

fn divide_all(coeffs: &[MultiPoly], c: &MultiPoly) -> Vec<MultiPoly> {
    coeffs.iter().map(|p| p.div_exact(c).expect("content divides every coefficient")).collect()
}

fn trim(mut v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    while v.last().is_some_and(MultiPoly::is_zero) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn pseudo_rem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MultiPoly> = r.iter().map(|c| c * &lb).collect();
        for (i, bc) in b.iter().enumerate() {
            if bc.is_zero() {
                continue;
            }
            next[i + shift] = &next[i + shift] - &(bc * &lr);
        }
        debug_assert!(next[dr].is_zero());
        r = trim(next);
    }
    if r.iter().all(MultiPoly::is_zero) {
        return Vec::new();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyRing;
    use crate::algebra::rational::q;

    #[test]
    fn common_factor_recovered() {
        let r = PolyRing::new(["x", "y", "z"]);
        let (x, y, z) = (r.var("x"), r.var("y"), r.var("z"));
        let f = &x - &y;
        let a = &f * &f * (&x + &z);
        let b = &f * (&y * &z + MultiPoly::constant(q(3)));
        assert_eq!(gcd(&a, &b), f.monic());
        let coprime = gcd(&(&x + &y), &(&x - &y));
        assert!(coprime.is_one());
    }

    #[test]
    fn extraneous_variables() {
        let r = PolyRing::new(["a", "b", "c", "d"]);
        let (a, b, c, d) = (r.var("a"), r.var("b"), r.var("c"), r.var("d"));
        let w = &a - &b;
        let num = &w * (&c * &d + &c * &c) * &w;
        let den = w.pow(3);
        assert_eq!(gcd(&num, &den), w.pow(2).monic());
    }

    #[test]
    fn monomials() {
        let r = PolyRing::new(["x", "y"]);
        let (x, y) = (r.var("x"), r.var("y"));
        let a = x.pow(3) * &y + x.pow(2) * y.pow(2);
        assert_eq!(gcd(&a, &(x.pow(5) * &y)), x.pow(2) * &y);
    }
}
