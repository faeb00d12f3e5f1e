//! Operators on the flat collar model of the half-space `ρ > 0, y ∈ R^n`,
//! `g = (dρ² + |dy|²)/ρ²`, where `h` is flat and `B = 0`.
//!
//! One-forms are stored in the coordinate coframe as `a dρ + Σ b_i dy_i`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::rational::{format_q, q, Q};
use crate::algebra::PolyRing;
use crate::error::{Error, Result};

use super::symbol::LogSymbol;

/// Upper bound on solver steps; each step removes one leading term.
const SOLVE_STEPS: usize = 10_000;

/// Symbol-valued field: one component for `m = 0`, `n + 1` (`a, b_1..b_n`)
/// for `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub comps: Vec<LogSymbol>,
}

impl Field {
    pub fn scalar(f: LogSymbol) -> Self {
        Field { comps: vec![f] }
    }

    pub fn zero(ring: &Arc<PolyRing>, len: usize) -> Self {
        Field { comps: vec![LogSymbol::zero(ring); len] }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_log_free(&self) -> bool {
        self.comps.iter().all(|c| c.is_log_free())
    }

    pub fn max_log_power(&self) -> u32 {
        self.comps.iter().map(|c| c.max_log_power()).max().unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.comps.iter().map(|c| c.len()).sum()
    }

    fn zip(&self, o: &Field, f: impl Fn(&LogSymbol, &LogSymbol) -> Result<LogSymbol>) -> Result<Field> {
        if self.comps.len() != o.comps.len() {
            return Err(Error::DomainMismatch("fields of different rank".into()));
        }
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(Field { comps })
    }

    pub fn add(&self, o: &Field) -> Result<Field> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Field) -> Result<Field> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn map(&self, f: impl Fn(&LogSymbol) -> LogSymbol) -> Field {
        Field { comps: self.comps.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Q) -> Field {
        self.map(|x| x.scale(c))
    }

    pub fn shift(&self, e: &Q) -> Field {
        self.map(|x| x.shift(e))
    }

    pub fn mul_log(&self, l: u32) -> Field {
        self.map(|x| x.mul_log(l))
    }

    pub fn rho_drho(&self) -> Field {
        self.map(|x| x.rho_drho())
    }
}

/// Operator of the form `-(ρ∂ρ)² + p ρ∂ρ + ρ²Δ_y + c`, whose indicial
/// polynomial is `I(σ) = -σ² + pσ + c`.
#[derive(Clone, Debug)]
pub struct EulerOperator {
    pub p: Q,
    pub c: Q,
}

impl EulerOperator {
    pub fn indicial(&self, sigma: &Q) -> Q {
        -(sigma * sigma) + &self.p * sigma + &self.c
    }

    pub fn indicial_derivative(&self, sigma: &Q) -> Q {
        -(q(2) * sigma) + &self.p
    }

    pub fn apply(&self, f: &LogSymbol) -> LogSymbol {
        let e = f.rho_drho();
        let ee = e.rho_drho();
        let tr = f.flat_laplacian_y().shift(&q(2));
        ee.scale(&-Q::one())
            .add(&e.scale(&self.p))
            .and_then(|x| x.add(&tr))
            .and_then(|x| x.add(&f.scale(&self.c)))
            .expect("operator preserves the exponent class")
    }

    /// Solve `apply(u) = rhs` by peeling leading terms.  Where `I(σ) = 0` the
    /// log power goes up by one; a double root is an error.
    pub fn solve(&self, rhs: &LogSymbol) -> Result<LogSymbol> {
        let ring = rhs.ring().clone();
        let mut r = rhs.clone();
        let mut u = LogSymbol::zero(&ring);
        for _ in 0..SOLVE_STEPS {
            let Some((sigma, j, c)) = r.leading() else {
                return Ok(u);
            };
            let c = c.clone();
            let ind = self.indicial(&sigma);
            let t = if !ind.is_zero() {
                LogSymbol::monomial(&ring, &sigma, j, c)?.scale(&(Q::one() / ind))
            } else {
                let d = self.indicial_derivative(&sigma);
                if d.is_zero() {
                    return Err(Error::Exceptional(format!(
                        "double indicial root at exponent {}",
                        format_q(&sigma)
                    )));
                }
                LogSymbol::monomial(&ring, &sigma, j + 1, c)?
                    .scale(&(Q::one() / (q(j as i64 + 1) * d)))
            };
            r = r.sub(&self.apply(&t))?;
            u = u.add(&t)?;
        }
        Err(Error::Resource("indicial solver did not terminate".into()))
    }
}

#[derive(Clone, Debug)]
pub struct CollarModel {
    pub n: usize,
    ring: Arc<PolyRing>,
}

impl CollarModel {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("collar model needs n ≥ 1".into()));
        }
        let ring = PolyRing::new((1..=n).map(|i| format!("y{i}")));
        Ok(CollarModel { n, ring })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    fn nq(&self) -> Q {
        q(self.n as i64)
    }

    /// Scalar Laplacian `-(ρ∂ρ)² + ρ²Δ_h + (n - tr_h B)ρ∂ρ` with `B = 0`.
    pub fn laplacian(&self, f: &LogSymbol) -> LogSymbol {
        EulerOperator { p: self.nq(), c: Q::zero() }.apply(f)
    }

    /// `Δ - s(n-s)` on functions.
    pub fn scalar_operator(&self, s: &Q) -> EulerOperator {
        EulerOperator { p: self.nq(), c: -(s * (self.nq() - s)) }
    }

    /// `∇*∇ - s(n-s) - 1` on one-forms with `a = 0` and `div_y b = 0`,
    /// acting componentwise on `b`.
    pub fn transverse_operator(&self, s: &Q) -> EulerOperator {
        EulerOperator { p: self.nq() - q(2), c: self.nq() - q(1) - s * (self.nq() - s) }
    }

    fn check_rank(&self, f: &Field, m: usize) -> Result<()> {
        let want = match m {
            0 => 1,
            1 => self.n + 1,
            _ => return Err(Error::InvalidInput(format!("m = {m} is not supported"))),
        };
        if f.comps.len() != want {
            return Err(Error::DomainMismatch(format!(
                "field has {} components, m = {m} needs {want}",
                f.comps.len()
            )));
        }
        Ok(())
    }

    /// Codifferential `δ` of a one-form.
    pub fn codifferential(&self, f: &Field) -> Result<LogSymbol> {
        self.check_rank(f, 1)?;
        let a = &f.comps[0];
        let one_minus_n = q(1) - self.nq();
        let mut out = a.shift(&q(1)).scale(&one_minus_n).add(&a.d_rho().shift(&q(2)))?;
        for i in 0..self.n {
            out = out.add(&f.comps[i + 1].d_y(i).shift(&q(2)))?;
        }
        Ok(out.scale(&-Q::one()))
    }

    /// Hodge Laplacian `dδ + δd` on one-forms.
    pub fn hodge(&self, f: &Field) -> Result<Field> {
        self.check_rank(f, 1)?;
        let n = self.n;
        let a = &f.comps[0];
        let b = &f.comps[1..];
        // F = dφ: F_{0i} = ∂_ρ b_i - ∂_i a, F_{ij} = ∂_i b_j - ∂_j b_i
        let f0: Vec<LogSymbol> =
            (0..n).map(|i| b[i].d_rho().sub(&a.d_y(i))).collect::<Result<_>>()?;
        let fij = |i: usize, j: usize| b[j].d_y(i).sub(&b[i].d_y(j));
        let del = self.codifferential(f)?;
        let mut out = Vec::with_capacity(n + 1);
        // ρ-component: ∂_ρ δφ + ρ² Σ_i ∂_i F_{0i}
        let mut c0 = del.d_rho();
        for (i, fi) in f0.iter().enumerate() {
            c0 = c0.add(&fi.d_y(i).shift(&q(2)))?;
        }
        out.push(c0);
        // y_j-component: ∂_j δφ - ρ((3-n)F_{0j} + ρ∂_ρF_{0j}) - ρ² Σ_i ∂_i F_{ij}
        let three_minus_n = q(3) - self.nq();
        for j in 0..n {
            let mut c = del.d_y(j);
            let t = f0[j].scale(&three_minus_n).add(&f0[j].rho_drho())?.shift(&q(1));
            c = c.sub(&t)?;
            for i in 0..n {
                c = c.sub(&fij(i, j)?.d_y(i).shift(&q(2)))?;
            }
            out.push(c);
        }
        Ok(Field { comps: out })
    }

    /// Rough Laplacian; on one-forms `∇*∇ = Δ_H + n` (Ricci `= -n`).
    pub fn rough_laplacian(&self, f: &Field, m: usize) -> Result<Field> {
        self.check_rank(f, m)?;
        match m {
            0 => Ok(Field::scalar(self.laplacian(&f.comps[0]))),
            _ => self.hodge(f)?.add(&f.scale(&self.nq())),
        }
    }

    /// `𝒜_s = ∇*∇ - s(n-s) - m`.
    pub fn a_operator(&self, s: &Q, f: &Field, m: usize) -> Result<Field> {
        let shift = s * (self.nq() - s) + q(m as i64);
        self.rough_laplacian(f, m)?.sub(&f.scale(&shift))
    }

    /// Divergence `-δ`; zero for functions.
    pub fn divergence(&self, f: &Field, m: usize) -> Result<LogSymbol> {
        self.check_rank(f, m)?;
        match m {
            0 => Ok(LogSymbol::zero(&self.ring)),
            _ => Ok(self.codifferential(f)?.scale(&-Q::one())),
        }
    }

    /// Both components of `(∇*∇ - s(n-s) - m, -2 div)` applied to `f`.
    pub fn q_operator_residual(&self, f: &Field, s: &Q, m: usize) -> Result<(Field, LogSymbol)> {
        let first = self.a_operator(s, f, m)?;
        let second = self.divergence(f, m)?.scale(&q(-2));
        Ok((first, second))
    }

    /// `∇_{ρ∂ρ}` on coordinate components: `dρ ↦ dρ`, `dy ↦ dy`, so every
    /// component picks up `+1` for `m = 1`.
    pub fn nabla_rho_drho(&self, f: &Field, m: usize) -> Result<Field> {
        self.check_rank(f, m)?;
        let e = f.rho_drho();
        if m == 0 {
            Ok(e)
        } else {
            e.add(f)
        }
    }

    /// `(dρ/ρ) ⌟ f = ρ a` for a one-form.
    pub fn contract_drho(&self, f: &Field) -> Result<LogSymbol> {
        self.check_rank(f, 1)?;
        Ok(f.comps[0].shift(&q(1)))
    }

    /// `(dρ/ρ) σ g` as a one-form.
    pub fn sym_drho(&self, g: &LogSymbol) -> Field {
        let mut out = Field::zero(&self.ring, self.n + 1);
        out.comps[0] = g.shift(&-Q::one());
        out
    }

    /// `ρ∂ρ` applied to the coefficients in the frame `(ρdρ, dy)`.
    pub fn frame_euler(&self, f: &Field, m: usize) -> Result<Field> {
        self.check_rank(f, m)?;
        if m == 0 {
            return Ok(f.rho_drho());
        }
        let mut out = f.rho_drho();
        out.comps[0] = out.comps[0].sub(&f.comps[0])?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;
    use crate::algebra::MultiPoly;

    #[test]
    fn indicial_identity() {
        let c = CollarModel::new(3).unwrap();
        for s in [qf(1, 3), q(2), qf(-5, 2)] {
            let f = LogSymbol::power(c.ring(), &s);
            let lhs = c.laplacian(&f);
            assert_eq!(lhs, f.scale(&(&s * (q(3) - &s))));
            let g = f.mul_log(1);
            let want = g.scale(&(&s * (q(3) - &s))).add(&f.scale(&(q(3) - q(2) * &s))).unwrap();
            assert_eq!(c.laplacian(&g), want);
        }
        assert!(c.laplacian(&LogSymbol::power(c.ring(), &q(0))).is_zero());
    }

    #[test]
    fn solver_inverts() {
        let c = CollarModel::new(2).unwrap();
        let op = c.scalar_operator(&qf(1, 3));
        let y1 = MultiPoly::var(c.ring(), 0);
        let rhs = LogSymbol::monomial(c.ring(), &qf(1, 3), 1, y1.pow(4))
            .unwrap()
            .add(&LogSymbol::monomial(c.ring(), &qf(7, 3), 0, y1.clone()).unwrap())
            .unwrap();
        let u = op.solve(&rhs).unwrap();
        assert_eq!(op.apply(&u), rhs);
        assert!(c.scalar_operator(&q(1)).solve(&LogSymbol::power(c.ring(), &q(1))).is_err());
    }

    #[test]
    fn hodge_matches_transverse_reduction() {
        let c = CollarModel::new(2).unwrap();
        let s = qf(2, 5);
        let y2 = MultiPoly::var(c.ring(), 1);
        let mut f = Field::zero(c.ring(), 3);
        f.comps[1] = LogSymbol::monomial(c.ring(), &(&s - q(1)), 1, y2.pow(3)).unwrap();
        let full = c.a_operator(&s, &f, 1).unwrap();
        let red = c.transverse_operator(&s).apply(&f.comps[1]);
        assert!(full.comps[0].is_zero());
        assert_eq!(full.comps[1], red);
        assert!(full.comps[2].is_zero());
        assert!(c.divergence(&f, 1).unwrap().is_zero());
    }

    #[test]
    fn scalar_hodge_commutes_with_d() {
        // dΔ = Δ_H d on exact forms.
        let c = CollarModel::new(2).unwrap();
        let y1 = MultiPoly::var(c.ring(), 0);
        let u = LogSymbol::monomial(c.ring(), &qf(3, 4), 1, y1.pow(3)).unwrap();
        let du = |u: &LogSymbol| Field { comps: vec![u.d_rho(), u.d_y(0), u.d_y(1)] };
        let lhs = du(&c.laplacian(&u));
        let rhs = c.hodge(&du(&u)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
