//! The Poisson transform `𝒫_λ ω(x) = ∫ P(x,y)^{n+λ} (τ_-^* ω)(y) dS(y)` for
//! functions and one-forms, and the fibre pushforward it agrees with.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypgeo::{
    boundary_action, mink, poisson_kernel_unchecked, tangent_basis, tau_minus_inv, Matrix, PointSH, Vector, TOL,
};

use super::quadrature::QuadratureGrid;

type Eval = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// Smooth boundary field of rank `m ∈ {0, 1}`.  Functions return a length-1
/// vector; one-forms return their metric dual in `R^{n+1}`, tangent at `y`.
#[derive(Clone)]
pub struct BoundaryField {
    pub n: usize,
    pub m: usize,
    pub name: String,
    eval: Eval,
}

impl std::fmt::Debug for BoundaryField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BoundaryField({}, n={}, m={})", self.name, self.n, self.m)
    }
}

impl BoundaryField {
    pub fn new<F: Fn(&Vector) -> Vector + Send + Sync + 'static>(n: usize, m: usize, name: &str, f: F) -> Result<Self> {
        if m > 1 {
            return Err(Error::InvalidInput(format!("numerical transform supports m ≤ 1, got {m}")));
        }
        Ok(BoundaryField { n, m, name: name.to_string(), eval: Arc::new(f) })
    }

    pub fn scalar<F: Fn(&Vector) -> f64 + Send + Sync + 'static>(n: usize, name: &str, f: F) -> Self {
        Self::new(n, 0, name, move |y| Vector::from_element(1, f(y))).expect("m = 0")
    }

    pub fn eval(&self, y: &Vector) -> Vector {
        (self.eval)(y)
    }

    pub fn zero(n: usize, m: usize) -> Result<Self> {
        let len = if m == 0 { 1 } else { n + 1 };
        Self::new(n, m, "0", move |_| Vector::zeros(len))
    }

    /// Real, `L²`-normalised spherical harmonic on `S^2`, `ℓ ≤ 2`; `k ≥ 0`
    /// selects the cosine and `k < 0` the sine family.
    pub fn harmonic(l: usize, k: i32) -> Result<Self> {
        use std::f64::consts::PI;
        let c = |a: f64| (a / (4.0 * PI)).sqrt();
        let f: Box<dyn Fn(&Vector) -> f64 + Send + Sync> = match (l, k) {
            (0, 0) => Box::new(move |_| c(1.0)),
            (1, 0) => Box::new(move |y| c(3.0) * y[2]),
            (1, 1) => Box::new(move |y| c(3.0) * y[0]),
            (1, -1) => Box::new(move |y| c(3.0) * y[1]),
            (2, 0) => Box::new(move |y| c(5.0) * 0.5 * (3.0 * y[2] * y[2] - 1.0)),
            (2, 1) => Box::new(move |y| c(15.0) * y[0] * y[2]),
            (2, -1) => Box::new(move |y| c(15.0) * y[1] * y[2]),
            (2, 2) => Box::new(move |y| c(15.0) * 0.5 * (y[0] * y[0] - y[1] * y[1])),
            (2, -2) => Box::new(move |y| c(15.0) * y[0] * y[1]),
            _ => return Err(Error::InvalidInput(format!("harmonic Y_{l}^{k} not tabulated"))),
        };
        Ok(Self::scalar(2, &format!("Y{l}^{k}"), f))
    }

    /// The rotation field `y ↦ e_2 × y` (dual of a divergence-free one-form
    /// on `S^2`).
    pub fn rotation_field() -> Self {
        Self::new(2, 1, "rot", |y| Vector::from_vec(vec![-y[1], y[0], 0.0])).expect("m = 1")
    }

    /// Gradient of the height `y_2` (not divergence-free).
    pub fn height_gradient() -> Self {
        Self::new(2, 1, "grad", |y| {
            let mut v = -(y * y[2]);
            v[2] += 1.0;
            v
        })
        .expect("m = 1")
    }

    /// Largest radial component `|<ω(y), y>|` over the grid.
    pub fn tangency_defect(&self, grid: &QuadratureGrid) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        grid.nodes.iter().map(|(y, _)| self.eval(y).dot(y).abs()).fold(0.0, f64::max)
    }
}

fn check_point(x: &Vector, n: usize) -> Result<()> {
    if x.len() != n + 2 {
        return Err(Error::DomainMismatch("point dimension".into()));
    }
    let r = mink(x, x) + 1.0;
    if r.abs() > TOL * x[0] * x[0] || x[0] <= 0.0 {
        return Err(Error::InvalidInput("point is not on the hyperboloid".into()));
    }
    Ok(())
}

/// `𝒫_λ ω(x)`: a scalar (length 1) or the ambient dual of a covector at `x`.
pub fn poisson_transform(w: &BoundaryField, lambda: f64, x: &Vector, grid: &QuadratureGrid) -> Result<Vector> {
    check_point(x, w.n)?;
    if grid.n != w.n {
        return Err(Error::DomainMismatch("grid and field live on different spheres".into()));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidInput("λ must be finite".into()));
    }
    let s = w.n as f64 + lambda;
    let len = if w.m == 0 { 1 } else { w.n + 2 };
    let mut acc = Vector::zeros(len);
    for (y, wt) in &grid.nodes {
        let p = poisson_kernel_unchecked(x, y);
        let k = wt * p.powf(s);
        let v = w.eval(y);
        if w.m == 0 {
            acc[0] += k * v[0];
        } else {
            let xi = x - crate::hypgeo::null_lift(y) * p;
            let pt = PointSH { x: x.clone(), xi };
            acc += tau_minus_inv(&pt, &v) * k;
        }
    }
    if acc.iter().any(|c| !c.is_finite()) {
        return Err(Error::Numerical("transform overflowed; unsupported regime".into()));
    }
    Ok(acc)
}

/// Value paired with a grid-doubling error estimate.
#[derive(Clone, Debug)]
pub struct TransformValue {
    pub value: Vector,
    pub error: f64,
}

pub fn poisson_transform_estimated(w: &BoundaryField, lambda: f64, x: &Vector, order: usize) -> Result<TransformValue> {
    let coarse = poisson_transform(w, lambda, x, &QuadratureGrid::new(w.n, order)?)?;
    let fine = poisson_transform(w, lambda, x, &QuadratureGrid::new(w.n, 2 * order)?)?;
    let error = (&fine - &coarse).amax();
    Ok(TransformValue { value: fine, error })
}

/// `(T_γ)^{λ+m} U_γ^* ω` for a function.
pub fn twisted_pullback(w: &BoundaryField, g: &Matrix, lambda: f64) -> Result<BoundaryField> {
    if w.m != 0 {
        return Err(Error::InvalidInput("twisted pullback implemented for functions".into()));
    }
    crate::hypgeo::check_lorentz(g)?;
    let (w2, g2) = (w.clone(), g.clone());
    Ok(BoundaryField::scalar(w.n, &format!("{}∘γ", w.name), move |y| {
        let (t, u) = boundary_action(&g2, y).expect("checked Lorentz matrix and unit point");
        t.powf(lambda) * w2.eval(&u)[0]
    }))
}

/// `|𝒫_λ(T_γ^λ U_γ^* ω)(x) - 𝒫_λ ω(γx)|` for a function `ω`.
pub fn equivariance_residual(w: &BoundaryField, lambda: f64, g: &Matrix, x: &Vector, grid: &QuadratureGrid) -> Result<f64> {
    let lhs = poisson_transform(&twisted_pullback(w, g, lambda)?, lambda, x, grid)?;
    let rhs = poisson_transform(w, lambda, &(g * x), grid)?;
    Ok((lhs - rhs).amax())
}

/// `∫_{S_x} u(x, ξ) dS(ξ)` over the unit tangent sphere at `x`.
pub fn fiber_pushforward<F: Fn(&PointSH) -> f64 + Sync>(u: F, x: &Vector, grid: &QuadratureGrid) -> Result<f64> {
    check_point(x, grid.n)?;
    let basis = tangent_basis(x);
    Ok(grid
        .nodes
        .par_iter()
        .map(|(th, w)| {
            let mut xi = Vector::zeros(x.len());
            for (c, e) in th.iter().zip(&basis) {
                xi += e * *c;
            }
            w * u(&PointSH { x: x.clone(), xi })
        })
        .sum())
}

/// The fibre integrand `Φ_-^λ ω(B_-)` whose pushforward is `𝒫_λ ω` for
/// functions.
pub fn fiber_integrand(w: &BoundaryField, lambda: f64) -> impl Fn(&PointSH) -> f64 + Sync + '_ {
    move |p: &PointSH| {
        let (phi, b) = crate::hypgeo::boundary_map(p, -1);
        phi.powf(lambda) * w.eval(&b)[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::{from_halfspace, random_lorentz, unit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn base_point_values() {
        let g = QuadratureGrid::new(2, 12).unwrap();
        let e0 = unit(4, 0);
        let one = BoundaryField::scalar(2, "1", |_| 1.0);
        let v = poisson_transform(&one, 1.0, &e0, &g).unwrap()[0];
        assert!((v - 4.0 * PI).abs() < 1e-12);
        let y1 = BoundaryField::harmonic(1, 0).unwrap();
        assert!(poisson_transform(&y1, 1.0, &e0, &g).unwrap()[0].abs() < 1e-14);
    }

    #[test]
    fn grid_doubling_converges() {
        let x = from_halfspace(0.8, &Vector::from_vec(vec![0.3, -0.1]));
        let y20 = BoundaryField::harmonic(2, 0).unwrap();
        let v = poisson_transform_estimated(&y20, 1.0, &x, 24).unwrap();
        assert!(v.error < 1e-8, "{}", v.error);
    }

    #[test]
    fn pushforward_agrees() {
        let x = from_halfspace(1.3, &Vector::from_vec(vec![0.2, 0.4]));
        let g = QuadratureGrid::new(2, 40).unwrap();
        let w = BoundaryField::harmonic(2, 1).unwrap();
        let a = poisson_transform(&w, 0.5, &x, &g).unwrap()[0];
        let b = fiber_pushforward(fiber_integrand(&w, 0.5), &x, &g).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        let e0 = unit(4, 0);
        let vol = fiber_pushforward(|_| 1.0, &e0, &g).unwrap();
        assert!((vol - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn equivariant_under_lorentz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = QuadratureGrid::new(2, 40).unwrap();
        let w = BoundaryField::harmonic(2, 1).unwrap();
        let x = from_halfspace(0.9, &Vector::from_vec(vec![0.1, 0.2]));
        for _ in 0..3 {
            let l = random_lorentz(&mut rng, 2, 0.5);
            assert!(equivariance_residual(&w, 1.0, &l, &x, &g).unwrap() < 1e-9);
        }
    }

    #[test]
    fn one_form_transform_is_tangent() {
        let g = QuadratureGrid::new(2, 16).unwrap();
        let x = from_halfspace(0.7, &Vector::from_vec(vec![0.2, 0.1]));
        let w = BoundaryField::rotation_field();
        assert!(w.tangency_defect(&g) < 1e-15);
        let v = poisson_transform(&w, 1.0, &x, &g).unwrap();
        assert!(mink(&v, &x).abs() < 1e-12);
    }
}
