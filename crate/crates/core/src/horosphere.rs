//! Horosphere operators on twisted sections `Φ₋^λ ⊗ u`, where `u` is a
//! symmetric tensor in the equivariant frame `e_1..e_n` with rational
//! coefficients in the frame coordinates and the formal parameter `λ`.
//!
//! Generators act through [`to_derivation`]; on a twisted coefficient the
//! twist contributes `λ χ_X` with `χ_X = X(Φ₋)/Φ₋`, so `χ_A = -1`,
//! `χ_{N⁻_k} = 0` and `χ_{N⁺_k} = 2 f_{k,0}/Φ₋`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::rational::{factorial, q, Q};
use crate::algebra::{term_budget, Derivation, MultiPoly, PolyRing, RationalFn};
use crate::bands::{p_rk, BandPolynomial};
use crate::error::{Error, Result};
use crate::liealg::{generator, to_derivation, FrameRing, Generator};
use crate::symtensor::{multisets, Index, SymTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `Φ₋^λ ⊗ body`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSection {
    pub body: SymTensor<RationalFn>,
}

impl TwistedSection {
    pub fn degree(&self) -> usize {
        self.body.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.body.term_count()
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(TwistedSection { body: self.body.sub(&o.body)? })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(TwistedSection { body: self.body.add(&o.body)? })
    }

    pub fn scale(&self, c: &Q) -> Self {
        TwistedSection { body: self.body.scale(c) }
    }
}

/// A (not necessarily symmetric) tensor: components indexed by ordered
/// sequences over the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FullTensor {
    pub n: usize,
    pub order: usize,
    pub comps: BTreeMap<Index, RationalFn>,
}

impl FullTensor {
    /// The multilinear form of a symmetric tensor.
    pub fn from_sym(u: &SymTensor<RationalFn>) -> Self {
        let mut comps = BTreeMap::new();
        for (k, c) in u.components() {
            for perm in arrangements(&k) {
                comps.insert(perm, c.clone());
            }
        }
        FullTensor { n: u.fibre_dim(), order: u.degree(), comps }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let comps = self.comps.iter().map(|(k, v)| (k.clone(), v.scale(c))).filter(|(_, v)| !v.is_zero()).collect();
        FullTensor { n: self.n, order: self.order, comps }
    }

    pub fn is_symmetric(&self) -> bool {
        self.comps.iter().all(|(k, v)| arrangements(k).iter().all(|p| self.comps.get(p) == Some(v)))
    }

    pub fn term_count(&self) -> usize {
        self.comps.values().map(RationalFn::term_count).sum()
    }
}

/// Distinct orderings of a multiset.
fn arrangements(k: &[u8]) -> Vec<Index> {
    let mut v = k.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // next-permutation enumeration skips repeats
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return out;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

#[derive(Clone, Debug)]
struct TwistedDerivation {
    der: Derivation,
    /// `λ χ_X`, if nonzero.
    lambda_chi: Option<RationalFn>,
}

impl TwistedDerivation {
    fn apply(&self, c: &RationalFn) -> Result<RationalFn> {
        let mut out = self.der.apply(c)?;
        if let Some(lc) = &self.lambda_chi {
            out = out + lc * c;
        }
        Ok(out)
    }
}


/// Operator algebra of the horosphere in dimension `n` (fibre dimension of
/// the unstable bundle), over the frame ring with `λ`.
#[derive(Clone, Debug)]
pub struct Horosphere {
    pub n: usize,
    pub frame: FrameRing,
    a: TwistedDerivation,
    plus: Vec<TwistedDerivation>,
    minus: Vec<TwistedDerivation>,
    budget: usize,
}

impl Horosphere {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let frame = FrameRing::new(n, true);
        let phi = RationalFn::from_poly(frame.phi_minus());
        let lambda = RationalFn::from_poly(frame.lambda());
        let make = |g: Generator| -> Result<TwistedDerivation> {
            let der = to_derivation(&generator(g, n)?, &frame)?;
            let chi = der.apply(&phi)?.div_fn(&phi)?;
            let lambda_chi = (!chi.is_zero()).then(|| &lambda * &chi);
            Ok(TwistedDerivation { der, lambda_chi })
        };
        let a = make(Generator::A)?;
        let plus = (1..=n).map(|k| make(Generator::NPlus(k))).collect::<Result<Vec<_>>>()?;
        let minus = (1..=n).map(|k| make(Generator::NMinus(k))).collect::<Result<Vec<_>>>()?;
        Ok(Horosphere { n, frame, a, plus, minus, budget: term_budget() })
    }

    /// Replace the term budget taken from the global setting at construction.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn guard(&self, u: TwistedSection) -> Result<TwistedSection> {
        let t = u.term_count();
        if t > self.budget {
            return Err(Error::Resource(format!("{t} terms exceed the budget of {}", self.budget)));
        }
        Ok(u)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.frame.ring
    }

    pub fn lambda(&self) -> RationalFn {
        RationalFn::from_poly(self.frame.lambda())
    }

    fn check(&self, u: &TwistedSection) -> Result<()> {
        if u.body.fibre_dim() != self.n {
            return Err(Error::DomainMismatch(format!(
                "section with fibre dimension {} on a horosphere of dimension {}",
                u.body.fibre_dim(),
                self.n
            )));
        }
        Ok(())
    }

    fn apply_twisted(&self, x: &TwistedDerivation, u: &TwistedSection) -> Result<TwistedSection> {
        self.check(u)?;
        self.guard(TwistedSection { body: u.body.try_map(|c| x.apply(c))? })
    }

    /// `A(Φ₋^λ f) = Φ₋^λ(-λ f + A f)`, componentwise.
    pub fn flow_derivative_a(&self, u: &TwistedSection) -> Result<TwistedSection> {
        self.apply_twisted(&self.a, u)
    }

    /// Lie derivative along `N^±_k`, `k = 1..=n`.
    pub fn lie_n(&self, sign: Sign, k: usize, u: &TwistedSection) -> Result<TwistedSection> {
        let list = match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        };
        let x = list
            .get(k.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidInput(format!("N index {k} out of range 1..={}", self.n)))?;
        self.apply_twisted(x, u)
    }

    /// Rotation `R_ij` (`1 ≤ i, j ≤ n`) acting on the coefficients.
    pub fn lie_rotation(&self, i: usize, j: usize, u: &TwistedSection) -> Result<TwistedSection> {
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(Error::InvalidInput(format!("rotation R{i}{j} outside the frame")));
        }
        let der = to_derivation(&generator(Generator::R(i, j), self.n)?, &self.frame)?;
        self.apply_twisted(&TwistedDerivation { der, lambda_chi: None }, u)
    }

    /// `d_± = Σ e_k σ N^±_k`.
    pub fn d(&self, sign: Sign, u: &TwistedSection) -> Result<TwistedSection> {
        let mut out = SymTensor::zero(self.n, u.degree() + 1);
        for k in 1..=self.n {
            let nk = self.lie_n(sign, k, u)?;
            out = out.add(&nk.body.basis_product(k - 1))?;
        }
        self.guard(TwistedSection { body: out })
    }

    /// `div_± = -Σ e_k ⌟ N^±_k`.
    pub fn div(&self, sign: Sign, u: &TwistedSection) -> Result<TwistedSection> {
        let mut out = SymTensor::zero(self.n, u.degree().saturating_sub(1));
        if u.degree() == 0 {
            self.check(u)?;
            return Ok(TwistedSection { body: out });
        }
        for k in 1..=self.n {
            let nk = self.lie_n(sign, k, u)?;
            out = out.sub(&nk.body.basis_contract(k - 1))?;
        }
        self.guard(TwistedSection { body: out })
    }

    /// `Δ_± = div_± d_± - d_± div_±`.
    pub fn delta(&self, sign: Sign, u: &TwistedSection) -> Result<TwistedSection> {
        let a = self.div(sign, &self.d(sign, u)?)?;
        if u.degree() == 0 {
            return Ok(a);
        }
        let b = self.d(sign, &self.div(sign, u)?)?;
        self.guard(a.sub(&b)?)
    }

    pub fn lefschetz(&self, u: &TwistedSection) -> Result<TwistedSection> {
        self.check(u)?;
        Ok(TwistedSection { body: u.body.lefschetz() })
    }

    pub fn trace(&self, u: &TwistedSection) -> Result<TwistedSection> {
        self.check(u)?;
        Ok(TwistedSection { body: u.body.trace() })
    }

    /// `∇_± T = Σ e_k ⊗ N^±_k T`, the new slot first.
    pub fn nabla(&self, sign: Sign, t: &FullTensor) -> Result<FullTensor> {
        if t.n != self.n {
            return Err(Error::DomainMismatch("tensor fibre differs from horosphere dimension".into()));
        }
        let list = match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        };
        let mut comps = BTreeMap::new();
        for (k, x) in list.iter().enumerate() {
            for (idx, c) in &t.comps {
                let v = x.apply(c)?;
                if !v.is_zero() {
                    let mut key = Vec::with_capacity(idx.len() + 1);
                    key.push(k as u8);
                    key.extend_from_slice(idx);
                    comps.insert(key, v);
                }
            }
        }
        let out = FullTensor { n: self.n, order: t.order + 1, comps };
        if out.term_count() > self.budget {
            return Err(Error::Resource("full tensor exceeds the term budget".into()));
        }
        Ok(out)
    }

    /// `P(A) u` by Horner's rule.
    pub fn apply_polynomial_in_a(&self, p: &BandPolynomial, u: &TwistedSection) -> Result<TwistedSection> {
        let mut it = p.coeffs.iter().rev();
        let top = it.next().expect("nonempty polynomial");
        let mut acc = u.scale(top);
        for c in it {
            acc = self.guard(self.flow_derivative_a(&acc)?.add(&u.scale(c))?)?;
        }
        Ok(acc)
    }

    pub fn scalar(&self, c: RationalFn) -> TwistedSection {
        TwistedSection { body: SymTensor::scalar(self.n, c) }
    }

    /// `Φ₋^λ · 1`.
    pub fn unit_section(&self) -> TwistedSection {
        self.scalar(RationalFn::one())
    }

    /// A random section of degree `m`: a few frame components, each a small
    /// integer polynomial in the frame coordinates (and sometimes `λ`),
    /// sometimes divided by `Φ₋`.
    pub fn random_section<R: Rng>(&self, rng: &mut R, m: usize) -> TwistedSection {
        let keys = multisets(self.n, m);
        let nvars = self.ring().len();
        let mut body = SymTensor::zero(self.n, m);
        let nterms = rng.gen_range(1..=keys.len().min(3));
        for _ in 0..nterms {
            let key = keys[rng.gen_range(0..keys.len())].clone();
            let mut p = MultiPoly::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let mut c = rng.gen_range(-3i64..=3);
                if c == 0 {
                    c = 1;
                }
                let mut t = MultiPoly::constant(q(c));
                for _ in 0..rng.gen_range(0..=2) {
                    t = t * MultiPoly::var(self.ring(), rng.gen_range(0..nvars));
                }
                p = p + t;
            }
            let c = if rng.gen_bool(0.5) {
                RationalFn::new(p, self.frame.phi_minus()).expect("nonzero denominator")
            } else {
                RationalFn::from_poly(p)
            };
            body.add_term(key, c);
        }
        TwistedSection { body }
    }
}

/// `Y_1..Y_{n+1}`, ambient coordinates on the boundary sphere.
pub fn boundary_ring(n: usize) -> Arc<PolyRing> {
    PolyRing::new((1..=n + 1).map(|i| format!("Y{i}")))
}

fn embed_boundary(omega: &SymTensor<MultiPoly>, ring: &Arc<PolyRing>) -> Result<SymTensor<MultiPoly>> {
    omega.try_map(|p| {
        p.embed(ring)
            .map_err(|_| Error::InvalidInput(format!("boundary coefficient {p} is not a polynomial in {:?}", ring.names())))
    })
}

/// Whether `ω` (fibre `R^{n+1}`, polynomial in `Y`) restricts to a
/// trace-free tensor on the unit sphere: the tangential trace, pulled back to
/// the tangent space and written in stereographic coordinates, vanishes.
pub fn boundary_tracefree(omega: &SymTensor<MultiPoly>) -> Result<bool> {
    if omega.degree() < 2 {
        return Ok(true);
    }
    let d = omega.fibre_dim();
    if d < 2 {
        return Err(Error::InvalidInput("boundary fibre must have dimension n+1 >= 2".into()));
    }
    let n = d - 1;
    let ring = boundary_ring(n);
    let omega = embed_boundary(omega, &ring)?;
    let y: Vec<MultiPoly> = (0..d).map(|a| MultiPoly::var(&ring, a)).collect();
    let yy = omega.contract(&y)?.contract(&y)?;
    let tangential_trace = omega.trace().sub(&yy)?;
    let proj: Vec<Vec<MultiPoly>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    let delta = if a == b { MultiPoly::one() } else { MultiPoly::zero() };
                    delta - &y[a] * &y[b]
                })
                .collect()
        })
        .collect();
    let pulled = tangential_trace.pull_linear(&proj)?;
    // Y = (2z, |z|^2 - 1) / (|z|^2 + 1); clear the common denominator
    let zring = PolyRing::new((1..=n).map(|i| format!("z{i}")));
    let z: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&zring, i)).collect();
    let r2 = z.iter().fold(MultiPoly::zero(), |acc, zi| acc + zi * zi);
    let den = &r2 + MultiPoly::one();
    let mut nums: Vec<MultiPoly> = z.iter().map(|zi| zi.scale(&q(2))).collect();
    nums.push(&r2 - MultiPoly::one());
    for (_, c) in pulled.iter() {
        let deg = c.total_degree();
        let mut acc = MultiPoly::zero();
        for (mono, coef) in c.terms() {
            let mut t = den.pow(deg - mono.degree()).scale(coef);
            for (v, e) in mono.iter() {
                t = t * nums[v].pow(e);
            }
            acc = acc + t;
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Constant symmetric `S` made tangentially trace-free on the sphere:
/// `S - ((tr S - S(Y,Y)) / n) I`.
pub fn tracefree_quadratic(n: usize, s: &[Vec<Q>]) -> Result<SymTensor<MultiPoly>> {
    let d = n + 1;
    if s.len() != d || s.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidInput("matrix size must be n+1".into()));
    }
    let ring = boundary_ring(n);
    let y: Vec<MultiPoly> = (0..d).map(|a| MultiPoly::var(&ring, a)).collect();
    let mut tr = MultiPoly::zero();
    for a in 0..d {
        tr = tr + MultiPoly::constant(s[a][a].clone());
        for b in 0..d {
            tr = tr - (&y[a] * &y[b]).scale(&s[a][b]);
        }
    }
    let corr = tr.scale(&(q(1) / q(n as i64)));
    let mut comps = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut c = MultiPoly::constant(s[a][b].clone());
            if a == b {
                c = c - &corr;
            }
            comps.push((vec![a as u8, b as u8], c));
        }
    }
    Ok(SymTensor::from_components(d, 2, comps))
}

/// Boundary tensors used by default in the inversion check.  Orders 0..2
/// are trace-free on the sphere; higher orders are constant powers of a
/// coordinate covector, made trace-free by the harmonic projection of the
/// state.
pub fn default_boundary_tensor(n: usize, r: usize) -> Result<SymTensor<MultiPoly>> {
    let d = n + 1;
    let ring = boundary_ring(n);
    Ok(match r {
        0 => SymTensor::scalar(d, ring.var("Y1") + MultiPoly::constant(q(2))),
        1 => {
            let mut v = vec![MultiPoly::zero(); d];
            v[0] = MultiPoly::one();
            v[1] = MultiPoly::constant(q(-3));
            SymTensor::vector(&v)
        }
        2 => {
            let mut s = vec![vec![Q::from_integer(0.into()); d]; d];
            s[0][1] = q(1);
            s[1][0] = q(1);
            s[0][0] = q(2);
            tracefree_quadratic(n, &s)?
        }
        _ => SymTensor::basis(d, &vec![0u8; r], MultiPoly::one()),
    })
}

impl Horosphere {
    /// Model state `Φ₋^λ 𝒬₋ω` for a boundary tensor `ω` that is trace-free on
    /// the sphere.
    pub fn build_twisted_state(&self, omega: &SymTensor<MultiPoly>) -> Result<TwistedSection> {
        if !boundary_tracefree(omega)? {
            return Err(Error::InvalidInput("boundary tensor is not trace-free on the sphere".into()));
        }
        self.state_from_ambient(omega)
    }

    /// Harmonic part of the frame tensor `T_K = ω(Y)(v_{k1}, ..., v_{km})`,
    /// with `w = x - ξ`, `Y = w_sp / w_0` and `v_k` the spatial part of
    /// `f_k - (f_{k,0}/w_0) w`.  No trace condition is imposed on `ω`.
    pub fn state_from_ambient(&self, omega: &SymTensor<MultiPoly>) -> Result<TwistedSection> {
        let n = self.n;
        let d = n + 1;
        if omega.fibre_dim() != d {
            return Err(Error::DomainMismatch(format!(
                "boundary tensor has fibre dimension {}, expected {d}",
                omega.fibre_dim()
            )));
        }
        let m = omega.degree();
        let omega = embed_boundary(omega, &boundary_ring(n))?;
        let fr = &self.frame;
        let w: Vec<MultiPoly> = (0..n + 2).map(|a| fr.x(a) - fr.xi(a)).collect();
        let w0 = w[0].clone();
        // homogenise: ω(w_sp / w0) = ω_h(w) / w0^D
        let deg = omega.iter().map(|(_, p)| p.total_degree()).max().unwrap_or(0);
        let w0_pows: Vec<MultiPoly> = (0..=deg).map(|e| w0.pow(e)).collect();
        let omega_h = omega.map(|p| {
            let mut acc = MultiPoly::zero();
            for (mono, c) in p.terms() {
                let mut t = w0_pows[(deg - mono.degree()) as usize].scale(c);
                for (v, e) in mono.iter() {
                    t = t * w[v + 1].pow(e);
                }
                acc = acc + t;
            }
            acc
        });
        // v_k = V_k / w0, spatial components a = 1..=n+1
        let vecs: Vec<Vec<MultiPoly>> = (1..=n)
            .map(|k| (1..=d).map(|a| &w0 * fr.f(k, a) - fr.f(k, 0) * &w[a]).collect())
            .collect();
        let den = w0.pow(deg + m as u32);
        let mut comps = Vec::new();
        for key in multisets(n, m) {
            let args: Vec<Vec<MultiPoly>> = key.iter().map(|&k| vecs[k as usize].clone()).collect();
            let num = omega_h.evaluate(&args)?;
            if num.len() > self.budget {
                return Err(Error::Resource("model state exceeds the term budget".into()));
            }
            comps.push((key, RationalFn::new(num, den.clone())?));
        }
        let body = SymTensor::from_components(n, m, comps);
        let body = if m >= 2 && n >= 2 { body.harmonic_part()? } else { body };
        self.guard(TwistedSection { body })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateReport {
    /// `A u = -λ u`.
    pub a_eigen: bool,
    /// `N⁻_k u = 0` for all `k`.
    pub unstable_killed: bool,
    /// `Λ u = 0`.
    pub trace_free: bool,
    /// Components satisfy the rotation-equivariance rule.
    pub equivariant: bool,
}

impl StateReport {
    pub fn all_pass(&self) -> bool {
        self.a_eigen && self.unstable_killed && self.trace_free && self.equivariant
    }
}

impl Horosphere {
    pub fn check_state(&self, u: &TwistedSection) -> Result<StateReport> {
        let au = self.flow_derivative_a(u)?;
        let a_eigen = au.add(&TwistedSection { body: u.body.mul_coeff(&self.lambda()) })?.is_zero();
        let mut unstable_killed = true;
        for k in 1..=self.n {
            unstable_killed &= self.lie_n(Sign::Minus, k, u)?.is_zero();
        }
        let trace_free = self.trace(u)?.is_zero();
        Ok(StateReport { a_eigen, unstable_killed, trace_free, equivariant: self.check_equivariance(u)? })
    }

    /// `R_ij u_K = Σ_l (u_{K[l→i]} δ_{j,k_l} - u_{K[l→j]} δ_{i,k_l})` for all
    /// `1 ≤ i < j ≤ n`, on the components of `u`.
    pub fn check_equivariance(&self, u: &TwistedSection) -> Result<bool> {
        let comps = u.body.components();
        let get = |k: &[u8]| {
            let mut s = k.to_vec();
            s.sort_unstable();
            comps.get(&s).cloned().unwrap_or_else(RationalFn::zero)
        };
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let lhs = self.lie_rotation(i, j, u)?.body.components();
                for key in multisets(self.n, u.degree()) {
                    let (ii, jj) = ((i - 1) as u8, (j - 1) as u8);
                    let mut rhs = RationalFn::zero();
                    for l in 0..key.len() {
                        if key[l] == jj {
                            let mut k2 = key.clone();
                            k2[l] = ii;
                            rhs = rhs + get(&k2);
                        }
                        if key[l] == ii {
                            let mut k2 = key.clone();
                            k2[l] = jj;
                            rhs = rhs - get(&k2);
                        }
                    }
                    let l = lhs.get(&key).cloned().unwrap_or_else(RationalFn::zero);
                    if l != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversionReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub k: usize,
    /// `(d₋)^m (Δ₊)^k (div₊)^r u - L^k P_{r,k}(A) u` vanishes identically.
    pub exact_zero: bool,
    /// Number of nonzero coefficient terms in that difference.
    pub residual_terms: usize,
    pub lhs_nonzero: bool,
    /// The rational `c` with `lhs = c · rhs` exactly, if one exists.
    pub proportionality: Option<Q>,
    /// `P_{r,k}(-λ)`, the scalar by which the left side acts on the state.
    pub lambda_polynomial: String,
    pub state: StateReport,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.exact_zero && self.lhs_nonzero && self.state.all_pass()
    }
}

impl Horosphere {
    /// Both sides of the band inversion identity on the state built from `ω`
    /// (degree `r`), with `m = r + 2k`.
    pub fn verify_horocycle_inversion(&self, r: usize, k: usize, omega: &SymTensor<MultiPoly>) -> Result<InversionReport> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidInput("inversion identity needs n >= 2".into()));
        }
        if omega.degree() != r {
            return Err(Error::InvalidInput(format!("boundary tensor of degree {} for r = {r}", omega.degree())));
        }
        let m = r + 2 * k;
        let u = self.state_from_ambient(omega)?;
        let state = self.check_state(&u)?;
        let mut lhs = u.clone();
        for _ in 0..r {
            lhs = self.div(Sign::Plus, &lhs)?;
        }
        for _ in 0..k {
            lhs = self.delta(Sign::Plus, &lhs)?;
        }
        for _ in 0..m {
            lhs = self.d(Sign::Minus, &lhs)?;
        }
        let p = p_rk(n, r, k)?;
        let mut rhs = self.apply_polynomial_in_a(&p, &u)?;
        for _ in 0..k {
            rhs = self.lefschetz(&rhs)?;
        }
        let diff = lhs.sub(&rhs)?;
        let proportionality = constant_ratio(&lhs, &rhs)?;
        let at_minus_lambda = BandPolynomial {
            coeffs: p.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect(),
            ..p.clone()
        };
        Ok(InversionReport {
            n,
            m,
            r,
            k,
            exact_zero: diff.is_zero(),
            residual_terms: diff.term_count(),
            lhs_nonzero: !lhs.is_zero(),
            proportionality,
            lambda_polynomial: at_minus_lambda.to_string_in("lambda"),
            state,
        })
    }

    /// `(∇₋)^m u` as a full tensor and `ι((d₋)^m u) = m! (∇₋)^m u`.
    pub fn check_nabla_power(&self, sign: Sign, u: &TwistedSection, m: usize) -> Result<(bool, bool)> {
        let mut t = FullTensor::from_sym(&u.body);
        let mut du = u.clone();
        for _ in 0..m {
            t = self.nabla(sign, &t)?;
            du = self.d(sign, &du)?;
        }
        let symmetric = t.is_symmetric();
        let agrees = FullTensor::from_sym(&du.body) == t.scale(&factorial(m));
        Ok((symmetric, agrees))
    }
}

/// `c` with `a = c b` for a rational constant `c`, if any.
fn constant_ratio(a: &TwistedSection, b: &TwistedSection) -> Result<Option<Q>> {
    let Some((key, bc)) = b.body.iter().next() else {
        return Ok(None);
    };
    let ratio = a.body.coeff(key).div_fn(bc)?;
    let Some(c) = ratio.num().constant_value().filter(|_| ratio.den().is_one()) else {
        return Ok(None);
    };
    Ok(a.sub(&b.scale(&c))?.is_zero().then_some(c))
}

/// One row of the commutation table.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutationCheck {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
}

impl CommutationCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

impl Horosphere {
    /// Every relation of the table on one section; returns `(name, holds)`.
    /// At the ends of the grading some operators produce zero tensors of
    /// nominal degree; those are compared as zero regardless of shape.
    pub fn commutation_relations(&self, u: &TwistedSection) -> Result<Vec<(String, bool)>> {
        let mut out = Vec::new();
        let au = self.flow_derivative_a(u)?;
        let lu = self.lefschetz(u)?;
        let tu = self.trace(u)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let s = sign.value();
            let tag = if s > 0 { "+" } else { "-" };
            let du = self.d(sign, u)?;
            let divu = self.div(sign, u)?;
            let deltau = self.delta(sign, u)?;
            let a = |v: &TwistedSection| self.flow_derivative_a(v);
            let d = |v: &TwistedSection| self.d(sign, v);
            let dv = |v: &TwistedSection| self.div(sign, v);
            let l = |v: &TwistedSection| self.lefschetz(v);
            let t = |v: &TwistedSection| self.trace(v);
            let rel = [
                (format!("[A,d{tag}] = {tag}d{tag}"), vec![(1, a(&du)?), (-1, d(&au)?), (-s, du.clone())]),
                (format!("[A,div{tag}] = {tag}div{tag}"), vec![(1, a(&divu)?), (-1, dv(&au)?), (-s, divu.clone())]),
                (
                    format!("[A,Delta{tag}] = {tag}2Delta{tag}"),
                    vec![(1, a(&deltau)?), (-1, self.delta(sign, &au)?), (-2 * s, deltau.clone())],
                ),
                (format!("[Lambda,div{tag}] = 0"), vec![(1, t(&divu)?), (-1, dv(&tu)?)]),
                (format!("[L,d{tag}] = 0"), vec![(1, l(&du)?), (-1, d(&lu)?)]),
                (format!("[Lambda,d{tag}] = -2div{tag}"), vec![(1, t(&du)?), (-1, d(&tu)?), (2, divu.clone())]),
                (format!("[L,div{tag}] = 2d{tag}"), vec![(1, l(&divu)?), (-1, dv(&lu)?), (-2, du.clone())]),
            ];
            for (name, terms) in rel {
                out.push((name, vanishes(&terms)?));
            }
        }
        Ok(out)
    }
}

/// `Σ c_i v_i = 0`, ignoring zero terms; nonzero terms of different shape
/// cannot cancel.
fn vanishes(terms: &[(i64, TwistedSection)]) -> Result<bool> {
    let mut acc: Option<TwistedSection> = None;
    for (c, v) in terms {
        if v.is_zero() {
            continue;
        }
        let v = v.scale(&q(*c));
        acc = Some(match acc {
            None => v,
            Some(a) if a.body.degree() != v.body.degree() => return Ok(false),
            Some(a) => a.add(&v)?,
        });
    }
    Ok(acc.is_none_or(|a| a.is_zero()))
}

/// Run the table on `count` random sections for each `n` in `ns`, degrees
/// cycling through `0..=m_max`.
pub fn commutation_table<R: Rng>(rng: &mut R, ns: &[usize], m_max: usize, count: usize) -> Result<Vec<CommutationCheck>> {
    let mut table: BTreeMap<String, CommutationCheck> = BTreeMap::new();
    for &n in ns {
        let h = Horosphere::new(n)?;
        for i in 0..count {
            let u = h.random_section(rng, i % (m_max + 1));
            for (name, ok) in h.commutation_relations(&u)? {
                let e = table.entry(name.clone()).or_insert(CommutationCheck { name, instances: 0, failures: 0 });
                e.instances += 1;
                if !ok {
                    e.failures += 1;
                }
            }
        }
    }
    Ok(table.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arrangements_of_multiset() {
        assert_eq!(arrangements(&[0, 0, 1]).len(), 3);
        assert_eq!(arrangements(&[0, 1, 2]).len(), 6);
        assert_eq!(arrangements(&[]).len(), 1);
    }

    #[test]
    fn flow_on_unit() {
        let h = Horosphere::new(2).unwrap();
        let a1 = h.flow_derivative_a(&h.unit_section()).unwrap();
        assert_eq!(a1.body.coeff(&[]), -h.lambda());
        let c = h.scalar(RationalFn::constant(q(5)));
        let ac = h.flow_derivative_a(&c).unwrap();
        assert_eq!(ac.body.coeff(&[]), h.lambda().scale(&q(-5)));
        // the untwisted derivative of a constant is zero
        let x = RationalFn::from_poly(h.frame.x(1));
        let ax = h.flow_derivative_a(&h.scalar(x.clone())).unwrap().body.coeff(&[]);
        assert_eq!(ax, RationalFn::from_poly(h.frame.xi(1)) - h.lambda() * x);
    }

    #[test]
    fn tracefree_on_sphere() {
        let n = 2;
        let ring = boundary_ring(n);
        // δ_ab restricted to the sphere has tangential trace n
        let id = SymTensor::from_components(3, 2, (0..3u8).map(|a| (vec![a, a], MultiPoly::one())));
        assert!(!boundary_tracefree(&id).unwrap());
        // Y ⊗ Y restricts to zero
        let y: Vec<MultiPoly> = (0..3).map(|a| MultiPoly::var(&ring, a)).collect();
        let yy = SymTensor::vector(&y).sym_product(&SymTensor::vector(&y)).unwrap();
        assert!(boundary_tracefree(&yy).unwrap());
        assert!(boundary_tracefree(&default_boundary_tensor(2, 2).unwrap()).unwrap());
        assert!(boundary_tracefree(&default_boundary_tensor(3, 2).unwrap()).unwrap());
    }

    #[test]
    fn model_states_are_resonant() {
        for (n, r) in [(2, 0), (2, 1), (2, 2), (3, 1)] {
            let h = Horosphere::new(n).unwrap();
            let u = h.build_twisted_state(&default_boundary_tensor(n, r).unwrap()).unwrap();
            assert!(!u.is_zero());
            let rep = h.check_state(&u).unwrap();
            assert!(rep.all_pass(), "n={n} r={r}: {rep:?}");
            assert!(h.d(Sign::Minus, &u).unwrap().is_zero());
        }
    }

    #[test]
    fn non_tracefree_rejected() {
        let h = Horosphere::new(2).unwrap();
        let id = SymTensor::from_components(3, 2, (0..3u8).map(|a| (vec![a, a], MultiPoly::one())));
        assert!(matches!(h.build_twisted_state(&id), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inversion_small_cases() {
        let h = Horosphere::new(2).unwrap();
        for (r, k) in [(0, 0), (1, 0), (0, 1)] {
            let rep = h.verify_horocycle_inversion(r, k, &default_boundary_tensor(2, r).unwrap()).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn inversion_constant_off_by_r_factorial() {
        // exact computation gives 2^{k+r} m! r!, one factor r! short of the
        // printed constant
        let h = Horosphere::new(2).unwrap();
        let rep = h.verify_horocycle_inversion(2, 0, &default_boundary_tensor(2, 2).unwrap()).unwrap();
        assert!(!rep.exact_zero);
        assert!(rep.state.all_pass());
        assert_eq!(rep.proportionality, Some(crate::algebra::rational::qf(1, 2)));
    }

    #[test]
    fn commutators_on_random_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for row in commutation_table(&mut rng, &[2], 2, 6).unwrap() {
            assert!(row.passed(), "{row:?}");
        }
    }

    #[test]
    fn nabla_and_d_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = Horosphere::new(2).unwrap();
        let u = h.random_section(&mut rng, 0);
        for m in 1..=3 {
            assert_eq!(h.check_nabla_power(Sign::Minus, &u, m).unwrap(), (true, true));
        }
    }

    #[test]
    fn budget_exceeded_is_resource_error() {
        let h = Horosphere::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = h.random_section(&mut rng, 1);
        let h = h.with_budget(1);
        assert!(matches!(h.d(Sign::Plus, &u), Err(Error::Resource(_))));
    }
}
