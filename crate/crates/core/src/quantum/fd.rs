//! Finite-difference oracle for the collar operators, computed on the
//! hyperboloid from geodesics and parallel transport.  Nothing here uses the
//! collar formula, so agreement with the symbolic operators is a genuine
//! cross-check.

use crate::algebra::rational::{to_f64, Q};
use crate::error::{Error, Result};
use crate::hypgeo::{from_halfspace, halfspace_push, rough_laplacian_fd, tangent_basis, to_halfspace, Vector};

use super::collar::{CollarModel, Field};

/// Evaluate a field at `x` on the tangent vector `w` (`m = 1`) or as a
/// function (`m = 0`, `w` ignored).
pub fn eval_field(f: &Field, m: usize, x: &Vector, w: &Vector) -> f64 {
    let (rho, y) = to_halfspace(x);
    let ys: Vec<f64> = y.iter().copied().collect();
    if m == 0 {
        return f.comps[0].eval_f64(rho, &ys);
    }
    let (dr, dy) = halfspace_push(x, w);
    let mut s = f.comps[0].eval_f64(rho, &ys) * dr;
    for (i, c) in f.comps[1..].iter().enumerate() {
        s += c.eval_f64(rho, &ys) * dy[i];
    }
    s
}

#[derive(Clone, Debug)]
pub struct FdReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    pub order: f64,
    pub scale: f64,
}

/// Compare the symbolic `𝒜_s f` with its finite-difference value at the
/// half-space point `(ρ, y)`, for steps `h` and `h/2`.
pub fn fd_cross_check(model: &CollarModel, f: &Field, m: usize, s: &Q, rho: f64, y: &[f64], h: f64) -> Result<FdReport> {
    if y.len() != model.n || rho <= 0.0 {
        return Err(Error::InvalidInput("sample point outside the half-space".into()));
    }
    let sym = model.a_operator(s, f, m)?;
    let x = from_halfspace(rho, &Vector::from_column_slice(y));
    let sf = to_f64(s);
    let shift = sf * (model.n as f64 - sf) + m as f64;
    let probes: Vec<Vector> = if m == 0 { vec![x.clone()] } else { tangent_basis(&x) };
    let mut errors = Vec::new();
    let mut scale: f64 = 0.0;
    let steps = vec![h, h / 2.0];
    for &hh in &steps {
        let mut e: f64 = 0.0;
        for v in &probes {
            let num = rough_laplacian_fd(|p, w| eval_field(f, m, p, w), &x, v, hh) - shift * eval_field(f, m, &x, v);
            let exact = eval_field(&sym, m, &x, v);
            scale = scale.max(exact.abs());
            e = e.max((num - exact).abs());
        }
        errors.push(e);
    }
    let order = (errors[0] / errors[1]).log2();
    if !order.is_finite() {
        return Err(Error::Numerical("degenerate finite-difference errors".into()));
    }
    Ok(FdReport { steps, errors, order, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;
    use crate::algebra::MultiPoly;
    use crate::hypgeo::mink;
    use crate::quantum::LogSymbol;

    #[test]
    fn basis_is_orthonormal() {
        let x = from_halfspace(0.7, &Vector::from_column_slice(&[0.3, -0.2]));
        let b = tangent_basis(&x);
        assert_eq!(b.len(), 3);
        for (i, u) in b.iter().enumerate() {
            assert!(mink(u, &x).abs() < 1e-12);
            for (j, v) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((mink(u, v) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scalar_and_one_form_agree() {
        let c = CollarModel::new(2).unwrap();
        let y1 = MultiPoly::var(c.ring(), 0);
        let y2 = MultiPoly::var(c.ring(), 1);
        let s = qf(5, 2);
        let u = LogSymbol::monomial(c.ring(), &qf(3, 2), 1, y1.pow(2).add_poly(&y2)).unwrap();
        let r = fd_cross_check(&c, &Field::scalar(u.clone()), 0, &s, 0.8, &[0.2, -0.1], 0.02).unwrap();
        assert!(r.order > 1.8 && r.order < 2.2, "{r:?}");
        let mut w = Field::zero(c.ring(), 3);
        w.comps[0] = u.clone();
        w.comps[1] = LogSymbol::monomial(c.ring(), &qf(1, 2), 0, y2.pow(2)).unwrap();
        w.comps[2] = LogSymbol::monomial(c.ring(), &qf(-1, 2), 0, y1.clone()).unwrap();
        let r = fd_cross_check(&c, &w, 1, &s, 0.8, &[0.2, -0.1], 0.02).unwrap();
        assert!(r.order > 1.8 && r.order < 2.2, "{r:?}");
    }
}
