//! Jordan chains of the collar operator and the log-free combinations
//! `Φ^{(k)} = ρ^{-s₀+m} Σ_ℓ (-log ρ)^ℓ/ℓ! φ^{(k-ℓ)}`.

use num_traits::{One, Zero};

use crate::algebra::rational::{factorial, format_q, q, Q};
use crate::algebra::MultiPoly;
use crate::error::{Error, Result};

use super::collar::{CollarModel, EulerOperator, Field};
use super::symbol::LogSymbol;

#[derive(Clone, Debug)]
pub struct JordanChain {
    pub n: usize,
    pub m: usize,
    pub s0: Q,
    /// `φ^{(1)}, …, φ^{(j)}`.
    pub states: Vec<Field>,
}

impl JordanChain {
    pub fn order(&self) -> usize {
        self.states.len()
    }

    fn state(&self, k: usize) -> Option<&Field> {
        if k == 0 {
            None
        } else {
            self.states.get(k - 1)
        }
    }
}

/// Default seed: `1 + y_1²` for functions, `(1 + y_2²) dy_1` for one-forms
/// (`1 · dy_1` when `n = 1`).
pub fn default_seed(model: &CollarModel, m: usize) -> MultiPoly {
    let r = model.ring();
    let v = if m == 0 || model.n == 1 { None } else { Some(1) };
    match v {
        None if m == 1 => MultiPoly::one(),
        None => MultiPoly::one().add_poly(&MultiPoly::var(r, 0).pow(2)),
        Some(i) => MultiPoly::one().add_poly(&MultiPoly::var(r, i).pow(2)),
    }
}

fn operator_for(model: &CollarModel, s0: &Q, m: usize) -> EulerOperator {
    if m == 0 {
        model.scalar_operator(s0)
    } else {
        model.transverse_operator(s0)
    }
}

fn wrap(model: &CollarModel, m: usize, x: LogSymbol) -> Field {
    if m == 0 {
        Field::scalar(x)
    } else {
        let mut f = Field::zero(model.ring(), model.n + 1);
        f.comps[1] = x;
        f
    }
}

/// Build `φ^{(1)}, …, φ^{(j)}` with leading term `ρ^{s₀-m} c(y)` in the
/// scalar (`m = 0`) or `dy_1` (`m = 1`) slot.
pub fn jordan_build(model: &CollarModel, s0: &Q, j: usize, m: usize, seed: &MultiPoly) -> Result<JordanChain> {
    if j == 0 {
        return Err(Error::InvalidInput("Jordan order must be at least 1".into()));
    }
    if m > 1 {
        return Err(Error::InvalidInput(format!("m = {m} is not supported")));
    }
    let n = q(model.n as i64);
    if q(2) * s0 == n {
        return Err(Error::Exceptional(format!("s0 = {} = n/2", format_q(s0))));
    }
    let seed = seed.clone().with_ring(model.ring())?;
    if seed.is_zero() {
        return Err(Error::InvalidInput("seed must be nonzero".into()));
    }
    if m == 1 && !seed.derivative(0).is_zero() {
        return Err(Error::InvalidInput("one-form seed must not depend on y1".into()));
    }
    let op = operator_for(model, s0, m);
    let lead = s0 - q(m as i64);
    let t = LogSymbol::monomial(model.ring(), &lead, 0, seed)?;
    let phi1 = t.sub(&op.solve(&op.apply(&t))?)?;
    if !phi1.is_even_at(&lead) {
        return Err(Error::Exceptional(format!(
            "indicial collision: no smooth eigenstate at s0 = {}",
            format_q(s0)
        )));
    }
    let mult = &n - q(2) * s0;
    let mut raw = vec![phi1];
    for k in 1..j {
        let mut rhs = raw[k - 1].scale(&mult);
        if k >= 2 {
            rhs = rhs.sub(&raw[k - 2])?;
        }
        raw.push(op.solve(&rhs)?);
    }
    let states = raw.into_iter().map(|x| wrap(model, m, x)).collect();
    Ok(JordanChain { n: model.n, m, s0: s0.clone(), states })
}

/// `Φ^{(k)}`; `Φ^{(0)} = 0`.
pub fn phi(chain: &JordanChain, ring_model: &CollarModel, k: usize) -> Result<Field> {
    let len = chain.states.first().map(|f| f.comps.len()).unwrap_or(1);
    let mut acc = Field::zero(ring_model.ring(), len);
    for l in 0..k {
        let Some(st) = chain.state(k - l) else { continue };
        let sign = if l % 2 == 0 { Q::one() } else { -Q::one() };
        let term = st.mul_log(l as u32).scale(&(sign / factorial(l)));
        acc = acc.add(&term)?;
    }
    Ok(acc.shift(&(q(chain.m as i64) - &chain.s0)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCheck {
    pub k: usize,
    pub recursion: bool,
    pub log_free: bool,
    pub even: bool,
    pub intermediate: bool,
    /// Second component `ρ^{-s₀+m}(-2div)ρ^{s₀-m}Φ^{(k)} = -2(dρ/ρ)⌟Φ^{(k-1)}`.
    pub divergence: bool,
    pub final_display: bool,
    pub max_log_in_state: u32,
}

impl PhiCheck {
    pub fn passed(&self) -> bool {
        self.recursion && self.log_free && self.even && self.intermediate && self.divergence && self.final_display
    }
}

#[derive(Clone, Debug)]
pub struct PhiReport {
    pub n: usize,
    pub m: usize,
    pub s0: Q,
    pub j: usize,
    /// Residual of `Δρ^{s₀} - s₀(n-s₀)ρ^{s₀}` and of its `n - s₀` partner.
    pub indicial_pair: bool,
    pub checks: Vec<PhiCheck>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.indicial_pair && self.checks.iter().all(PhiCheck::passed)
    }
}

/// Verify the recursion, log cancellation, the intermediate identity and
/// (for `m = 1`) the divergence component and the final display.
pub fn verify_phi_ansatz(model: &CollarModel, chain: &JordanChain) -> Result<PhiReport> {
    let m = chain.m;
    let s0 = &chain.s0;
    let n = q(model.n as i64);
    let mq = q(m as i64);
    let conj = &mq - s0;
    let indicial_pair = [s0.clone(), &n - s0].iter().all(|s| {
        let f = LogSymbol::power(model.ring(), s);
        model.laplacian(&f).sub(&f.scale(&(s * (&n - s)))).map(|r| r.is_zero()).unwrap_or(false)
    });
    let len = chain.states[0].comps.len();
    let zero = Field::zero(model.ring(), len);
    let mut checks = Vec::new();
    let mut prev = zero.clone();
    for k in 1..=chain.order() {
        let cur = phi(chain, model, k)?;
        // recursion
        let a_k = model.a_operator(s0, &chain.states[k - 1], m)?;
        let mut rhs = chain.state(k - 1).cloned().unwrap_or_else(|| zero.clone()).scale(&(&n - q(2) * s0));
        if k >= 2 {
            if let Some(p2) = chain.state(k - 2) {
                rhs = rhs.sub(p2)?;
            }
        }
        let recursion = a_k.sub(&rhs)?.is_zero();
        let log_free = cur.is_log_free();
        let even = cur.comps.iter().enumerate().all(|(i, c)| {
            // the dρ slot carries one extra power of ρ in the (ρdρ, dy) frame
            let e = if m == 1 && i == 0 { Q::one() } else { Q::zero() };
            c.is_zero() || c.is_even_at(&e)
        });
        let lhs = model.a_operator(s0, &cur.shift(&-conj.clone()), m)?.shift(&conj);
        let right = model
            .nabla_rho_drho(&prev.shift(&-mq.clone()), m)?
            .shift(&mq)
            .scale(&q(2));
        let intermediate = lhs.sub(&right)?.is_zero();
        let (divergence, final_display) = if m == 0 {
            let fd = lhs.sub(&model.frame_euler(&prev, 0)?.scale(&q(2)))?.is_zero();
            (true, fd)
        } else {
            let second = model.divergence(&cur.shift(&-conj.clone()), 1)?.shift(&conj).scale(&q(-2));
            let want = model.contract_drho(&prev)?.scale(&q(-2));
            let divergence = second.sub(&want)?.is_zero();
            let combined = lhs.add(&model.sym_drho(&second))?;
            let fd = combined.sub(&model.frame_euler(&prev, 1)?.scale(&q(2)))?.is_zero();
            (divergence, fd)
        };
        checks.push(PhiCheck {
            k,
            recursion,
            log_free,
            even,
            intermediate,
            divergence,
            final_display,
            max_log_in_state: chain.states[k - 1].max_log_power(),
        });
        prev = cur;
    }
    Ok(PhiReport { n: model.n, m, s0: s0.clone(), j: chain.order(), indicial_pair, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;

    #[test]
    fn chain_two_flat_mode() {
        let c = CollarModel::new(2).unwrap();
        let s0 = qf(1, 3);
        let ch = jordan_build(&c, &s0, 2, 0, &MultiPoly::one()).unwrap();
        assert_eq!(ch.states[0].comps[0], LogSymbol::power(c.ring(), &s0));
        // 𝒜(ρ^s log ρ) = (n-2s)ρ^s, so φ^{(2)} = ρ^{s₀} log ρ
        assert_eq!(ch.states[1].comps[0], LogSymbol::power(c.ring(), &s0).mul_log(1));
        assert!(phi(&ch, &c, 2).unwrap().is_zero());
    }

    #[test]
    fn rejects_degenerate_requests() {
        let c = CollarModel::new(2).unwrap();
        assert!(jordan_build(&c, &q(1), 2, 0, &MultiPoly::one()).is_err());
        assert!(jordan_build(&c, &qf(1, 3), 0, 0, &MultiPoly::one()).is_err());
        assert!(jordan_build(&c, &qf(1, 3), 2, 2, &MultiPoly::one()).is_err());
        let y1 = MultiPoly::var(c.ring(), 0);
        assert!(jordan_build(&c, &qf(1, 3), 2, 1, &y1).is_err());
    }

    #[test]
    fn scalar_chains_pass() {
        for n in [1usize, 2, 3] {
            let c = CollarModel::new(n).unwrap();
            for s0 in [qf(1, 3), qf(-3, 4), qf(7, 2)] {
                let seed = default_seed(&c, 0);
                let ch = jordan_build(&c, &s0, 4, 0, &seed).unwrap();
                let rep = verify_phi_ansatz(&c, &ch).unwrap();
                assert!(rep.passed(), "n={n} s0={s0}: {:?}", rep.checks);
                assert!(rep.checks[3].max_log_in_state >= 3);
            }
        }
    }

    #[test]
    fn one_form_chains_pass() {
        for n in [1usize, 2, 3] {
            let c = CollarModel::new(n).unwrap();
            for s0 in [qf(1, 3), qf(-2, 5)] {
                let seed = default_seed(&c, 1);
                let ch = jordan_build(&c, &s0, 3, 1, &seed).unwrap();
                let rep = verify_phi_ansatz(&c, &ch).unwrap();
                assert!(rep.passed(), "n={n} s0={s0}: {:?}", rep.checks);
            }
        }
    }
}
