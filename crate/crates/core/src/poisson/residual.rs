//! Finite-difference certificate that `𝒫_λ ω` solves
//! `(∇*∇ - s(n-s) - m) u = 0` with `s = n + λ`, plus `div u` for one-forms.
//! Fourth-order geodesic stencils; second differences lose too many digits
//! to cancellation before the truncation error drops below `1e-6`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypgeo::{divergence_fd4, mink, rough_laplacian_fd4, tangent_basis, to_halfspace, unit, Vector};

use super::quadrature::QuadratureGrid;
use super::transform::{poisson_transform, BoundaryField};

#[derive(Clone, Debug)]
pub struct PointResidual {
    pub point_id: usize,
    pub rho: f64,
    pub y: Vec<f64>,
    /// Residual at the requested step `h`.
    pub residual: f64,
    /// Residual at `2h`, for the refinement order.
    pub residual_coarse: f64,
    pub divergence: f64,
    pub magnitude: f64,
}

#[derive(Clone, Debug)]
pub struct ResidualStats {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub step: f64,
    pub points: Vec<PointResidual>,
    pub max_residual: f64,
    pub max_divergence: f64,
    /// `log₂` of the summed residual ratio between steps `2h` and `h`; about
    /// 4 while truncation dominates.
    pub order: f64,
}

impl ResidualStats {
    pub fn csv(&self) -> String {
        let mut out = String::from("point_id,rho");
        for i in 1..=self.n {
            out.push_str(&format!(",y{i}"));
        }
        out.push_str(",residual\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.16e}", p.point_id, p.rho));
            for c in &p.y {
                out.push_str(&format!(",{c:.16e}"));
            }
            out.push_str(&format!(",{:.16e}\n", p.residual));
        }
        out
    }
}

/// Points at hyperbolic distance at most `radius` from `e_0`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, count: usize, radius: f64) -> Vec<Vector> {
    (0..count)
        .map(|_| {
            let mut dir = Vector::from_fn(n + 1, |_, _| rng.gen_range(-1.0..1.0));
            while dir.norm() < 1e-3 {
                dir = Vector::from_fn(n + 1, |_, _| rng.gen_range(-1.0..1.0));
            }
            dir /= dir.norm();
            let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
            let mut x = unit(n + 2, 0) * r.cosh();
            for i in 0..=n {
                x[i + 1] += r.sinh() * dir[i];
            }
            x
        })
        .collect()
}

pub fn pde_residual(w: &BoundaryField, lambda: f64, points: &[Vector], grid: &QuadratureGrid, h: f64) -> Result<ResidualStats> {
    if !(h > 0.0 && h < 0.25) {
        return Err(Error::InvalidInput(format!("finite-difference step {h} out of range")));
    }
    let n = w.n;
    let m = w.m;
    let s = n as f64 + lambda;
    let shift = s * (n as f64 - s) + m as f64;
    let value = |p: &Vector, v: &Vector| -> f64 {
        let u = poisson_transform(w, lambda, p, grid).expect("validated point");
        if m == 0 {
            u[0]
        } else {
            mink(&u, v)
        }
    };
    for x in points {
        poisson_transform(w, lambda, x, grid)?;
    }
    let rows: Vec<PointResidual> = points
        .par_iter()
        .enumerate()
        .map(|(id, x)| {
            let probes = if m == 0 { vec![x.clone()] } else { tangent_basis(x) };
            let mut r = [0.0f64; 2];
            let mut mag = 0.0f64;
            for v in &probes {
                let u0 = value(x, v);
                mag = mag.max(u0.abs());
                for (slot, hh) in [h, 2.0 * h].into_iter().enumerate() {
                    let lap = rough_laplacian_fd4(value, x, v, hh);
                    r[slot] = r[slot].max((lap - shift * u0).abs());
                }
            }
            let divergence = if m == 1 { divergence_fd4(value, x, h).abs() } else { 0.0 };
            let (rho, y) = to_halfspace(x);
            PointResidual {
                point_id: id,
                rho,
                y: y.iter().copied().collect(),
                residual: r[0],
                residual_coarse: r[1],
                divergence,
                magnitude: mag,
            }
        })
        .collect();
    let fine: f64 = rows.iter().map(|p| p.residual).sum();
    let coarse: f64 = rows.iter().map(|p| p.residual_coarse).sum();
    let order = if fine > 0.0 { (coarse / fine).log2() } else { f64::INFINITY };
    let noise = rows.iter().map(|p| p.magnitude).fold(0.0, f64::max) * 1e-14 / (h * h);
    if fine > noise && coarse < fine {
        return Err(Error::Numerical(format!(
            "step {h} too small: halving the step increased the residual"
        )));
    }
    Ok(ResidualStats {
        n,
        m,
        lambda,
        step: h,
        max_residual: rows.iter().map(|p| p.residual).fold(0.0, f64::max),
        max_divergence: rows.iter().map(|p| p.divergence).fold(0.0, f64::max),
        points: rows,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_field_has_zero_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = random_points(&mut rng, 2, 3, 1.0);
        let g = QuadratureGrid::new(2, 8).unwrap();
        let st = pde_residual(&BoundaryField::zero(2, 0).unwrap(), 1.0, &pts, &g, 1e-3).unwrap();
        assert_eq!(st.max_residual, 0.0);
    }

    #[test]
    fn harmonic_transform_is_eigenfunction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = random_points(&mut rng, 2, 4, 1.0);
        let g = QuadratureGrid::new(2, 32).unwrap();
        let st = pde_residual(&BoundaryField::harmonic(1, 0).unwrap(), 1.0, &pts, &g, 1e-2).unwrap();
        assert!(st.max_residual < 1e-6, "{st:?}");
        assert!(st.order > 1.8, "{st:?}");
        assert!(st.csv().starts_with("point_id,rho,y1,y2,residual\n"));
    }

    #[test]
    fn one_form_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = random_points(&mut rng, 2, 3, 0.8);
        let g = QuadratureGrid::new(2, 32).unwrap();
        for w in [BoundaryField::rotation_field(), BoundaryField::height_gradient()] {
            let st = pde_residual(&w, 1.0, &pts, &g, 1e-2).unwrap();
            assert!(st.max_residual < 1e-5 && st.max_divergence < 1e-5 && st.order > 1.8, "{}: {st:?}", w.name);
        }
    }
}
