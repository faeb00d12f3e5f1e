//! Product quadrature on `S^n`: Gauss–Jacobi in the last coordinate with
//! weight `(1-t²)^{(n-2)/2}`, recursing to a uniform trapezoid rule on `S^1`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::jacobi::GaussJacobi;
use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::hypgeo::Vector;

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub n: usize,
    pub order: usize,
    /// Polynomials in `y` up to this total degree are integrated exactly.
    pub exact_degree: usize,
    pub nodes: Vec<(Vector, f64)>,
}

pub fn sphere_volume(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * sphere_volume(n - 2),
    }
}

fn nz(k: usize) -> NonZeroUsize {
    NonZeroUsize::new(k.max(1)).expect("positive")
}

fn raw_nodes(n: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
    if n == 1 {
        let m = 2 * order;
        let w = 2.0 * PI / m as f64;
        return (0..m)
            .map(|k| {
                let a = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                (vec![a.cos(), a.sin()], w)
            })
            .collect();
    }
    let alpha = (n as f64 - 2.0) / 2.0;
    let rule: Vec<(f64, f64)> = if n == 2 {
        GaussLegendre::new(nz(order)).as_node_weight_pairs().to_vec()
    } else {
        let a = alpha.try_into().expect("alpha > -1");
        GaussJacobi::new(nz(order), a, a).as_node_weight_pairs().to_vec()
    };
    let lower = raw_nodes(n - 1, order);
    let mut out = Vec::with_capacity(rule.len() * lower.len());
    for &(t, wt) in &rule {
        let r = (1.0 - t * t).max(0.0).sqrt();
        for (u, wu) in &lower {
            let mut y: Vec<f64> = u.iter().map(|c| c * r).collect();
            y.push(t);
            out.push((y, wt * wu));
        }
    }
    out
}

impl QuadratureGrid {
    /// `order` Jacobi nodes per level and `2·order` trapezoid nodes on the
    /// circle; exact through degree `2·order - 1`.
    pub fn new(n: usize, order: usize) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::InvalidInput(format!("sphere dimension {n} not supported")));
        }
        if order < 2 {
            return Err(Error::InvalidInput("grid order must be at least 2".into()));
        }
        let nodes = raw_nodes(n, order)
            .into_iter()
            .map(|(y, w)| (Vector::from_vec(y), w))
            .collect();
        let g = QuadratureGrid { n, order, exact_degree: 2 * order - 1, nodes };
        g.self_test()?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }

    pub fn integrate<F: Fn(&Vector) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|(y, w)| w * f(y)).sum()
    }

    fn self_test(&self) -> Result<()> {
        let vol = sphere_volume(self.n);
        if (self.volume() - vol).abs() > 1e-12 * vol {
            return Err(Error::Numerical("quadrature weights do not sum to the sphere volume".into()));
        }
        // ∫ y_0² = vol/(n+1), and odd moments vanish
        if self.exact_degree >= 2 {
            let m2 = self.integrate(|y| y[0] * y[0]);
            let m1 = self.integrate(|y| y[self.n] * y[0] * y[0]);
            if (m2 - vol / (self.n as f64 + 1.0)).abs() > 1e-12 * vol || m1.abs() > 1e-12 * vol {
                return Err(Error::Numerical("quadrature moment self-test failed".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫ Π y_i^{2b_i} dS = 2 Π Γ(b_i + ½) / Γ(Σ b_i + (n+1)/2)`.
    fn even_moment(b: &[usize]) -> f64 {
        let g = |x: f64| libm::tgamma(x);
        let num: f64 = b.iter().map(|&k| g(k as f64 + 0.5)).product();
        let tot: f64 = b.iter().sum::<usize>() as f64 + b.len() as f64 / 2.0;
        2.0 * num / g(tot)
    }

    #[test]
    fn volumes() {
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
        for n in 1..=3 {
            let g = QuadratureGrid::new(n, 6).unwrap();
            assert!((g.volume() - sphere_volume(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_on_monomials() {
        for n in [2usize, 3] {
            let g = QuadratureGrid::new(n, 5).unwrap();
            for b in [[1usize, 1, 0, 0], [2, 0, 1, 0], [0, 0, 2, 2], [1, 1, 1, 1]] {
                let bb = &b[..n + 1];
                if 2 * bb.iter().sum::<usize>() > g.exact_degree {
                    continue;
                }
                let v = g.integrate(|y| bb.iter().enumerate().map(|(i, &k)| y[i].powi(2 * k as i32)).product());
                assert!((v - even_moment(bb)).abs() < 1e-12, "n={n} b={bb:?}: {v} vs {}", even_moment(bb));
            }
            let odd = g.integrate(|y| y[0] * y[1] * y[n].powi(3));
            assert!(odd.abs() < 1e-13);
        }
    }
}
