//! Hyperboloid model of `H^{n+1}`, its unit sphere bundle, boundary maps and
//! the upper half-space chart.
//!
//! Points live in `R^{1,n+1}` with `<x,y> = -x_0 y_0 + Σ x_i y_i`.  Boundary
//! points are unit vectors `y ∈ S^n ⊂ R^{n+1}`, identified with the null
//! rays through `(1, y)`.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::rational::{q, Q};
use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative tolerance for membership checks on floating input.
pub const TOL: f64 = 1e-9;

pub fn mink(a: &Vector, b: &Vector) -> f64 {
    -a[0] * b[0] + a.rows(1, a.len() - 1).dot(&b.rows(1, b.len() - 1))
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// `(1, y)` for a boundary point `y`.
pub fn null_lift(y: &Vector) -> Vector {
    let mut v = Vector::zeros(y.len() + 1);
    v[0] = 1.0;
    v.rows_mut(1, y.len()).copy_from(y);
    v
}

fn spatial(v: &Vector) -> Vector {
    v.rows(1, v.len() - 1).into_owned()
}

/// A point `(x, ξ)` of the unit sphere bundle `SH`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSH {
    pub x: Vector,
    pub xi: Vector,
}

impl PointSH {
    /// Validates `<x,x> = -1`, `x_0 > 0`, `<ξ,ξ> = 1`, `<x,ξ> = 0`.
    pub fn new(x: Vector, xi: Vector) -> Result<Self> {
        if x.len() != xi.len() || x.len() < 3 {
            return Err(Error::InvalidInput("x and xi must have equal length n+2 >= 3".into()));
        }
        let scale = x.amax().max(xi.amax()).max(1.0).powi(2);
        let bad = |what: &str, v: f64| Error::InvalidInput(format!("{what} violated by {v:e}"));
        let r = mink(&x, &x) + 1.0;
        if r.abs() > TOL * scale {
            return Err(bad("<x,x> = -1", r));
        }
        if x[0] <= 0.0 {
            return Err(Error::InvalidInput("x must lie on the upper sheet".into()));
        }
        let r = mink(&xi, &xi) - 1.0;
        if r.abs() > TOL * scale {
            return Err(bad("<xi,xi> = 1", r));
        }
        let r = mink(&x, &xi);
        if r.abs() > TOL * scale {
            return Err(bad("<x,xi> = 0", r));
        }
        Ok(PointSH { x, xi })
    }

    /// `(e_0, e_{n+1})`.
    pub fn base(n: usize) -> Self {
        PointSH { x: unit(n + 2, 0), xi: unit(n + 2, n + 1) }
    }

    pub fn n(&self) -> usize {
        self.x.len() - 2
    }
}

/// Geodesic flow `φ_t(x,ξ) = (x cosh t + ξ sinh t, x sinh t + ξ cosh t)`.
pub fn flow(p: &PointSH, t: f64) -> PointSH {
    let (c, s) = (t.cosh(), t.sinh());
    PointSH { x: &p.x * c + &p.xi * s, xi: &p.x * s + &p.xi * c }
}

/// `x ± ξ = Φ_± (1, B_±)`; returns `(Φ_±, B_±)`.
pub fn boundary_map(p: &PointSH, sign: i32) -> (f64, Vector) {
    let v = if sign >= 0 { &p.x + &p.xi } else { &p.x - &p.xi };
    let phi = v[0];
    (phi, spatial(&v) / phi)
}

pub fn check_boundary_point(y: &Vector) -> Result<()> {
    let r = y.norm_squared() - 1.0;
    if r.abs() > TOL {
        return Err(Error::InvalidInput(format!("boundary point off the unit sphere by {r:e}")));
    }
    Ok(())
}

/// `P(x, y) = -1 / <x, (1, y)>`.
pub fn poisson_kernel(x: &Vector, y: &Vector) -> Result<f64> {
    check_boundary_point(y)?;
    Ok(poisson_kernel_unchecked(x, y))
}

pub fn poisson_kernel_unchecked(x: &Vector, y: &Vector) -> f64 {
    let mut s = x[0];
    for i in 0..y.len() {
        s -= x[i + 1] * y[i];
    }
    1.0 / s
}

/// `ξ_±(x, y) = ∓x ± P(x,y)(1, y)`: the unit vector at `x` whose `B_±` is `y`.
pub fn xi_pm(x: &Vector, y: &Vector, sign: i32) -> Result<Vector> {
    let p = poisson_kernel(x, y)?;
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    Ok((null_lift(y) * p - x) * s)
}

/// `τ_-: E_{(x,ξ)} → T_{B_-} S^n`, `v ↦ v + <v,e_0>e_0 - <v,y>y`, returned
/// as a vector in `R^{n+1}`.
pub fn tau_minus(p: &PointSH, v: &Vector) -> Vector {
    let (_, b) = boundary_map(p, -1);
    let vs = spatial(v);
    let c = vs.dot(&b);
    vs - b * c
}

/// `τ_-^{-1} ζ = ζ + <ζ,x>(x - ξ)` for `ζ ∈ T_{B_-} S^n`.
pub fn tau_minus_inv(p: &PointSH, zeta: &Vector) -> Vector {
    let mut z = Vector::zeros(zeta.len() + 1);
    z.rows_mut(1, zeta.len()).copy_from(zeta);
    let c = mink(&z, &p.x);
    z + (&p.x - &p.xi) * c
}

/// Pull back a boundary covector at `B_-(p)` (given by its metric dual
/// `ζ`) to `E_p`, returned as its metric dual in `E_p`.  As `τ_-` is an
/// isometry this is `τ_-^{-1} ζ`.
pub fn tau_minus_pullback(p: &PointSH, zeta: &Vector) -> Result<Vector> {
    let (_, b) = boundary_map(p, -1);
    if zeta.len() != b.len() {
        return Err(Error::DomainMismatch("covector dimension".into()));
    }
    if zeta.dot(&b).abs() > TOL * zeta.norm().max(1.0) {
        return Err(Error::InvalidInput("covector is not tangent to the sphere at B_-".into()));
    }
    Ok(tau_minus_inv(p, zeta))
}

/// Check `γ ∈ SO_0(1, n+1)` up to floating tolerance.
pub fn check_lorentz(g: &Matrix) -> Result<()> {
    let d = g.nrows();
    if g.ncols() != d || d < 3 {
        return Err(Error::InvalidInput("Lorentz matrix must be square of size >= 3".into()));
    }
    let mut eta = Matrix::identity(d, d);
    eta[(0, 0)] = -1.0;
    let r = (g.transpose() * &eta * g - &eta).amax();
    let scale = g.amax().powi(2).max(1.0);
    if r > TOL * scale {
        return Err(Error::InvalidInput(format!("matrix does not preserve the form (residual {r:e})")));
    }
    if g[(0, 0)] <= 0.0 {
        return Err(Error::InvalidInput("matrix reverses time orientation".into()));
    }
    if g.clone().determinant() <= 0.0 {
        return Err(Error::InvalidInput("matrix reverses orientation".into()));
    }
    Ok(())
}

/// `γ(1, y) = T_γ(y) (1, U_γ(y))`; returns `(T, U)`.
pub fn boundary_action(g: &Matrix, y: &Vector) -> Result<(f64, Vector)> {
    check_lorentz(g)?;
    check_boundary_point(y)?;
    if g.nrows() != y.len() + 1 {
        return Err(Error::DomainMismatch("boundary point dimension".into()));
    }
    let v = g * null_lift(y);
    let t = v[0];
    Ok((t, spatial(&v) / t))
}

/// Boost of rapidity `t` in the `(0, k)` plane.
pub fn boost(n: usize, k: usize, t: f64) -> Matrix {
    let mut g = Matrix::identity(n + 2, n + 2);
    let (c, s) = (t.cosh(), t.sinh());
    g[(0, 0)] = c;
    g[(k, k)] = c;
    g[(0, k)] = s;
    g[(k, 0)] = s;
    g
}

/// Rotation by `θ` in the spatial `(i, j)` plane.
pub fn rotation(n: usize, i: usize, j: usize, theta: f64) -> Matrix {
    let mut g = Matrix::identity(n + 2, n + 2);
    let (c, s) = (theta.cos(), theta.sin());
    g[(i, i)] = c;
    g[(j, j)] = c;
    g[(i, j)] = -s;
    g[(j, i)] = s;
    g
}

/// Random element of `SO_0(1, n+1)`: rotation · boost · rotation with the
/// rapidity bounded by `max_rapidity`.
pub fn random_lorentz<R: Rng>(rng: &mut R, n: usize, max_rapidity: f64) -> Matrix {
    let mut rot = || {
        let mut g = Matrix::identity(n + 2, n + 2);
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                g = rotation(n, i, j, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)) * g;
            }
        }
        g
    };
    let r1 = rot();
    let r2 = rot();
    let t = rng.gen_range(-max_rapidity..max_rapidity);
    r1 * boost(n, 1, t) * r2
}

/// A frame `γ ∈ SO_0(1,n+1)` with `γ e_0 = x` and `γ e_{n+1} = ξ`.
pub fn frame_at(p: &PointSH) -> Matrix {
    let d = p.x.len();
    let mut cols: Vec<Vector> = vec![p.x.clone()];
    let mut spatial_cols: Vec<Vector> = Vec::new();
    for a in 1..d {
        if spatial_cols.len() == d - 2 {
            break;
        }
        let mut v = unit(d, a);
        v += &p.x * mink(&v, &p.x);
        v -= &p.xi * mink(&v, &p.xi);
        for f in &spatial_cols {
            v -= f * mink(&v, f);
        }
        let nn = mink(&v, &v);
        if nn > 1e-6 {
            spatial_cols.push(v / nn.sqrt());
        }
    }
    cols.extend(spatial_cols);
    cols.push(p.xi.clone());
    let mut g = Matrix::from_columns(&cols);
    if g.clone().determinant() < 0.0 {
        for r in 0..d {
            g[(r, 1)] = -g[(r, 1)];
        }
    }
    g
}

/// Hyperboloid point to half-space coordinates `(ρ, y)`:
/// `ρ = 1/(x_0 - x_{n+1})`, `y_i = ρ x_i`.
pub fn to_halfspace(x: &Vector) -> (f64, Vector) {
    let n = x.len() - 2;
    let rho = 1.0 / (x[0] - x[n + 1]);
    (rho, x.rows(1, n).into_owned() * rho)
}

pub fn from_halfspace(rho: f64, y: &Vector) -> Vector {
    let n = y.len();
    let s = rho * rho + y.norm_squared();
    let mut x = Vector::zeros(n + 2);
    x[0] = (1.0 + s) / (2.0 * rho);
    x[n + 1] = (s - 1.0) / (2.0 * rho);
    x.rows_mut(1, n).copy_from(&(y / rho));
    x
}

/// Differential of [`to_halfspace`]: tangent vector `w` at `x` to
/// `(dρ, dy)`.
pub fn halfspace_push(x: &Vector, w: &Vector) -> (f64, Vector) {
    let n = x.len() - 2;
    let rho = 1.0 / (x[0] - x[n + 1]);
    let drho = -rho * rho * (w[0] - w[n + 1]);
    let dy = w.rows(1, n).into_owned() * rho + x.rows(1, n).into_owned() * drho;
    (drho, dy)
}

/// Stereographic projection `S^n \ {e_{n+1}} → R^n`, compatible with the
/// half-space chart at infinity.
pub fn stereographic(y: &Vector) -> Vector {
    let n = y.len() - 1;
    y.rows(0, n).into_owned() / (1.0 - y[n])
}

pub fn inverse_stereographic(z: &Vector) -> Vector {
    let a = z.norm_squared();
    let mut y = Vector::zeros(z.len() + 1);
    y.rows_mut(0, z.len()).copy_from(&(z * (2.0 / (a + 1.0))));
    y[z.len()] = (a - 1.0) / (a + 1.0);
    y
}

/// Half-space Poisson kernel `ρ / (ρ^2 + |y - y'|^2)`.  The hyperboloid
/// kernel at the matching boundary point equals this times `1 + |y'|^2`.
pub fn halfspace_poisson(rho: f64, y: &Vector, yp: &Vector) -> f64 {
    rho / (rho * rho + (y - yp).norm_squared())
}

/// Coefficients of `ρ τ_-^* dy_i = b_i dρ/ρ + Σ_j b_ij dy_j` in the
/// half-space model, with `r = y - y'`:
/// `b_i = -2ρ^2 r_i / (ρ^2 + |r|^2)`, `b_ij = δ_ij - 2 r_i r_j / (ρ^2 + |r|^2)`.
pub fn halfspace_tau_coefficients(rho: &Q, r: &[Q]) -> Result<(Vec<Q>, Vec<Vec<Q>>)> {
    let denom = rho * rho + r.iter().map(|x| x * x).sum::<Q>();
    if denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let two = q(2);
    let b = r.iter().map(|ri| -(&two * rho * rho * ri) / &denom).collect();
    let bm = (0..r.len())
        .map(|i| {
            (0..r.len())
                .map(|j| {
                    let d = if i == j { Q::one() } else { Q::zero() };
                    d - &two * &r[i] * &r[j] / &denom
                })
                .collect()
        })
        .collect();
    Ok((b, bm))
}

/// Tangent vector `τ_-^{-1} ∂_{y_i}` in half-space coordinates `(∂ρ, ∂y)`,
/// computed through the hyperboloid and rescaled from the round to the flat
/// boundary metric.
pub fn halfspace_tau_inv_numeric(rho: f64, y: &Vector, yp: &Vector, i: usize) -> (f64, Vector) {
    let x = from_halfspace(rho, y);
    let big_y = inverse_stereographic(yp);
    let pk = poisson_kernel_unchecked(&x, &big_y);
    let xi = null_lift(&big_y) * pk - &x;
    let p = PointSH { x: x.clone(), xi: -xi };
    // derivative of inverse stereographic projection along e_i
    let a = yp.norm_squared();
    let mut d = Vector::zeros(yp.len() + 1);
    for k in 0..yp.len() {
        let delta = if k == i { 1.0 } else { 0.0 };
        d[k] = 2.0 * delta / (a + 1.0) - 4.0 * yp[k] * yp[i] / ((a + 1.0) * (a + 1.0));
    }
    d[yp.len()] = 4.0 * yp[i] / ((a + 1.0) * (a + 1.0));
    let conf = 2.0 / (1.0 + a);
    let v = tau_minus_inv(&p, &(d / conf));
    halfspace_push(&x, &v)
}

/// Orthonormal basis of `T_x H^{n+1}`.
pub fn tangent_basis(x: &Vector) -> Vec<Vector> {
    let d = x.len();
    let mut out: Vec<Vector> = Vec::with_capacity(d - 1);
    for a in 0..d {
        if out.len() == d - 1 {
            break;
        }
        let mut v = unit(d, a);
        v += x * mink(&v, x);
        for f in &out {
            v -= f * mink(&v, f);
        }
        let nn = mink(&v, &v);
        if nn > 1e-8 {
            out.push(v / nn.sqrt());
        }
    }
    out
}

/// Point at time `t` on the unit-speed geodesic from `x` with velocity `e`,
/// together with the parallel transport of `v` to it.
pub fn geodesic_transport(x: &Vector, e: &Vector, v: &Vector, t: f64) -> (Vector, Vector) {
    let (c, s) = (t.cosh(), t.sinh());
    let p = x * c + e * s;
    let k = mink(v, e);
    let pv = v - e * k + (x * s + e * c) * k;
    (p, pv)
}

/// Rough Laplacian `∇*∇` of a one-form (or the Laplacian of a function,
/// ignoring `v`) by second differences along geodesics.  The form is given
/// as `f(point, tangent vector)`.
pub fn rough_laplacian_fd<F: Fn(&Vector, &Vector) -> f64>(f: F, x: &Vector, v: &Vector, h: f64) -> f64 {
    let mut acc = 0.0;
    for e in tangent_basis(x) {
        let at = |t: f64| {
            let (p, pv) = geodesic_transport(x, &e, v, t);
            f(&p, &pv)
        };
        acc += (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
    }
    -acc
}

/// As [`rough_laplacian_fd`] with the five-point stencil, `O(h⁴)`.
pub fn rough_laplacian_fd4<F: Fn(&Vector, &Vector) -> f64>(f: F, x: &Vector, v: &Vector, h: f64) -> f64 {
    let mut acc = 0.0;
    for e in tangent_basis(x) {
        let at = |t: f64| {
            let (p, pv) = geodesic_transport(x, &e, v, t);
            f(&p, &pv)
        };
        acc += (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h)) / (12.0 * h * h);
    }
    -acc
}

/// Divergence with the four-point central stencil, `O(h⁴)`.
pub fn divergence_fd4<F: Fn(&Vector, &Vector) -> f64>(f: F, x: &Vector, h: f64) -> f64 {
    let mut acc = 0.0;
    for e in tangent_basis(x) {
        let at = |t: f64| {
            let (p, pv) = geodesic_transport(x, &e, &e, t);
            f(&p, &pv)
        };
        acc += (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
    }
    acc
}

/// Divergence `Σ_i (∇_{e_i} f)(e_i)` of a one-form by central differences.
pub fn divergence_fd<F: Fn(&Vector, &Vector) -> f64>(f: F, x: &Vector, h: f64) -> f64 {
    let mut acc = 0.0;
    for e in tangent_basis(x) {
        let at = |t: f64| {
            let (p, pv) = geodesic_transport(x, &e, &e, t);
            f(&p, &pv)
        };
        acc += (at(h) - at(-h)) / (2.0 * h);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn fourth_order_stencil_on_linear_coordinate() {
        // Hess(x_0) = x_0 g on the hyperboloid, so the stencil returns -(n+1) x_0
        let x = from_halfspace(0.6, &v(&[0.3, -0.4]));
        let f = |p: &Vector, _: &Vector| p[0];
        let want = -3.0 * x[0];
        let e2 = (rough_laplacian_fd(f, &x, &x, 1e-2) - want).abs();
        let e4 = (rough_laplacian_fd4(f, &x, &x, 1e-2) - want).abs();
        let e4h = (rough_laplacian_fd4(f, &x, &x, 2e-2) - want).abs();
        assert!(e4 < 1e-8 && e4 < 1e-3 * e2, "{e2} {e4}");
        assert!((e4h / e4).log2() > 3.5, "{e4h} {e4}");
        // div dx_0 = tr Hess(x_0) = (n+1) x_0
        let df = |_: &Vector, w: &Vector| w[0];
        let div = divergence_fd4(df, &x, 1e-2);
        assert!((div - 3.0 * x[0]).abs() < 1e-8, "{div}");
    }

    #[test]
    fn base_boundary_maps() {
        let p = PointSH::base(2);
        let (phi, b) = boundary_map(&p, 1);
        assert_eq!(phi, 1.0);
        assert_eq!(b, v(&[0.0, 0.0, 1.0]));
        let (phi, b) = boundary_map(&p, -1);
        assert_eq!(phi, 1.0);
        assert_eq!(b, v(&[0.0, 0.0, -1.0]));
    }

    #[test]
    fn kernel_at_origin() {
        let x = unit(4, 0);
        let y = v(&[0.0, 0.6, 0.8]);
        assert_eq!(poisson_kernel(&x, &y).unwrap(), 1.0);
        assert_eq!(xi_pm(&x, &y, -1).unwrap(), v(&[0.0, 0.0, -0.6, -0.8]));
        assert!(poisson_kernel(&x, &v(&[0.0, 0.0, 2.0])).is_err());
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(PointSH::new(v(&[1.0, 0.5, 0.0, 0.0]), v(&[0.0, 0.0, 0.0, 1.0])).is_err());
        assert!(PointSH::new(v(&[-1.0, 0.0, 0.0, 0.0]), v(&[0.0, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn frames_are_lorentz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g = random_lorentz(&mut rng, 3, 1.0);
            check_lorentz(&g).unwrap();
            let p = PointSH { x: g.column(0).into_owned(), xi: g.column(4).into_owned() };
            let f = frame_at(&p);
            check_lorentz(&f).unwrap();
            assert!((f.column(0) - &p.x).amax() < 1e-12);
            assert!((f.column(4) - &p.xi).amax() < 1e-12);
        }
    }

    #[test]
    fn halfspace_round_trip() {
        let y = v(&[0.3, -0.2]);
        let x = from_halfspace(0.7, &y);
        assert!((mink(&x, &x) + 1.0).abs() < 1e-13);
        let (rho, y2) = to_halfspace(&x);
        assert!((rho - 0.7).abs() < 1e-14 && (y2 - y).amax() < 1e-14);
    }

    #[test]
    fn halfspace_tau_matches_hyperboloid() {
        let (rho, y, yp) = (0.7, v(&[0.2, -0.4]), v(&[-0.5, 0.1]));
        let r = &y - &yp;
        let rr = rho * rho + r.norm_squared();
        for i in 0..2 {
            let (drho, dy) = halfspace_tau_inv_numeric(rho, &y, &yp, i);
            assert!((drho + 2.0 * rho * rho * r[i] / rr).abs() < 1e-12);
            for j in 0..2 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((dy[j] - rho * (d - 2.0 * r[i] * r[j] / rr)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tau_coefficients_even_in_rho() {
        use crate::algebra::rational::qf;
        let r = [qf(1, 3), qf(-2, 7)];
        let (b1, m1) = halfspace_tau_coefficients(&qf(2, 5), &r).unwrap();
        let (b2, m2) = halfspace_tau_coefficients(&qf(-2, 5), &r).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(m1, m2);
        let (b0, m0) = halfspace_tau_coefficients(&qf(2, 5), &[Q::zero(), Q::zero()]).unwrap();
        assert!(b0.iter().all(Q::is_zero));
        assert_eq!(m0[0][0], Q::one());
        assert!(m0[0][1].is_zero());
    }
}
