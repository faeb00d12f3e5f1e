//! The Lie algebra `so(1, n+1)` as exact `(n+2) x (n+2)` matrices, and its
//! realisation by derivations on the coordinate ring of the frame bundle.
//!
//! Coordinates are `(x_0, x_1, ..., x_{n+1})` with `η = diag(-1, 1, ..., 1)`.
//! A group element `γ` is a frame whose columns are `x = γ e_0`,
//! `f_k = γ e_k` (`k = 1..n`) and `ξ = γ e_{n+1}`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::rational::{format_q, q, Q};
use crate::algebra::{Derivation, MultiPoly, PolyRing};
use crate::error::{Error, Result};

/// Sign `ε` in `[D_X, D_Y] = ε D_{[X,Y]}` for [`to_derivation`].
pub const REPRESENTATION_SIGN: i32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzMatrix {
    dim: usize,
    entries: Vec<Q>,
}

impl LorentzMatrix {
    pub fn zero(dim: usize) -> Self {
        LorentzMatrix { dim, entries: vec![Q::zero(); dim * dim] }
    }

    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(dim);
        m.entries[i * dim + j] = Q::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Q::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        LorentzMatrix { dim: self.dim, entries }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        LorentzMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LorentzMatrix { dim: self.dim, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `Xᵀ η + η X = 0`.
    pub fn preserves_form(&self) -> bool {
        let d = self.dim;
        let eta = |i: usize| if i == 0 { q(-1) } else { q(1) };
        (0..d).all(|i| (0..d).all(|j| (self.get(j, i) * eta(j) + eta(i) * self.get(i, j)).is_zero()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(crate::algebra::rational::to_f64).collect()
    }
}

impl std::fmt::Display for LorentzMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| format_q(self.get(i, j))).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Named generators.  Spatial indices run over `1..=n+1` for `R` and `P`,
/// over `1..=n` for `N±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    R(usize, usize),
    P(usize),
    A,
    NPlus(usize),
    NMinus(usize),
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::R(i, j) => write!(f, "R{i}{j}"),
            Generator::P(k) => write!(f, "P{k}"),
            Generator::A => write!(f, "A"),
            Generator::NPlus(k) => write!(f, "N+{k}"),
            Generator::NMinus(k) => write!(f, "N-{k}"),
        }
    }
}

/// Matrix of a named generator in `so(1, n+1)`.
pub fn generator(g: Generator, n: usize) -> Result<LorentzMatrix> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let d = n + 2;
    let spatial = |i: usize| (1..=n + 1).contains(&i);
    let bad = || Error::InvalidInput(format!("generator {g} out of range for n = {n}"));
    let r = |i: usize, j: usize| LorentzMatrix::unit(d, i, j).sub(&LorentzMatrix::unit(d, j, i));
    let p = |k: usize| LorentzMatrix::unit(d, 0, k).add(&LorentzMatrix::unit(d, k, 0));
    Ok(match g {
        Generator::R(i, j) => {
            if !spatial(i) || !spatial(j) || i == j {
                return Err(bad());
            }
            r(i, j)
        }
        Generator::P(k) => {
            if !spatial(k) {
                return Err(bad());
            }
            p(k)
        }
        Generator::A => p(n + 1),
        Generator::NPlus(k) | Generator::NMinus(k) => {
            if !(1..=n).contains(&k) {
                return Err(bad());
            }
            let sign = if matches!(g, Generator::NPlus(_)) { q(1) } else { q(-1) };
            p(k).add(&r(n + 1, k).scale(&sign))
        }
    })
}

pub fn bracket(x: &LorentzMatrix, y: &LorentzMatrix) -> LorentzMatrix {
    x.matmul(y).sub(&y.matmul(x))
}

/// Basis `{R_ij (i<j), P_k}` of `so(1, n+1)`.
pub fn standard_basis(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            out.push(Generator::R(i, j));
        }
    }
    for k in 1..=n + 1 {
        out.push(Generator::P(k));
    }
    out
}

/// Coordinates of `x` in [`standard_basis`]; `None` if `x` is not in the
/// algebra.  For this basis the linear system is diagonal: the `P_k`
/// coefficient is the `(0,k)` entry and the `R_ij` coefficient the `(i,j)`
/// entry.  The reconstruction is checked exactly.
pub fn decompose(x: &LorentzMatrix, n: usize) -> Option<Vec<(Generator, Q)>> {
    let mut out = Vec::new();
    let mut rebuilt = LorentzMatrix::zero(n + 2);
    for g in standard_basis(n) {
        let c = match g {
            Generator::R(i, j) => x.get(i, j).clone(),
            Generator::P(k) => x.get(0, k).clone(),
            _ => unreachable!(),
        };
        if !c.is_zero() {
            rebuilt = rebuilt.add(&generator(g, n).ok()?.scale(&c));
            out.push((g, c));
        }
    }
    (rebuilt == *x).then_some(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub n: usize,
    pub relations: Vec<RelationCheck>,
    /// Every bracket of basis elements decomposes with integer coefficients.
    pub closure_ok: bool,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.closure_ok && self.relations.iter().all(RelationCheck::passed)
    }
}

/// Check the commutation relations of `A, N±_k, R_ij` exactly.
pub fn verify_structure_constants(n: usize) -> Result<StructureReport> {
    verify_structure_constants_with(n, &|g| generator(g, n))
}

/// As [`verify_structure_constants`] with a caller-supplied generator table,
/// so that corrupted tables can be shown to fail.
pub fn verify_structure_constants_with(
    n: usize,
    gen: &dyn Fn(Generator) -> Result<LorentzMatrix>,
) -> Result<StructureReport> {
    let a = gen(Generator::A)?;
    let np: Vec<LorentzMatrix> = (1..=n).map(|k| gen(Generator::NPlus(k))).collect::<Result<_>>()?;
    let nm: Vec<LorentzMatrix> = (1..=n).map(|k| gen(Generator::NMinus(k))).collect::<Result<_>>()?;
    let r = |i: usize, j: usize| -> Result<LorentzMatrix> {
        if i == j {
            Ok(LorentzMatrix::zero(n + 2))
        } else {
            gen(Generator::R(i, j))
        }
    };
    let zero = LorentzMatrix::zero(n + 2);
    let delta = |i: usize, j: usize| if i == j { q(1) } else { q(0) };
    let mut relations = Vec::new();
    let mut check = |name: &str, items: Vec<(String, LorentzMatrix, LorentzMatrix)>| {
        let instances = items.len();
        let failures = items
            .into_iter()
            .filter(|(_, l, r)| l != r)
            .map(|(label, l, r)| format!("{label}: got {l}, expected {r}"))
            .collect();
        relations.push(RelationCheck { name: name.to_string(), instances, failures });
    };

    let mut items = Vec::new();
    for i in 0..n {
        items.push((format!("[A,N+{}]", i + 1), bracket(&a, &np[i]), np[i].clone()));
        items.push((format!("[A,N-{}]", i + 1), bracket(&a, &nm[i]), nm[i].scale(&q(-1))));
    }
    check("[A,N±_i] = ±N±_i", items);

    let mut items = Vec::new();
    for i in 0..n {
        for j in 0..n {
            items.push((format!("[N+{},N+{}]", i + 1, j + 1), bracket(&np[i], &np[j]), zero.clone()));
            items.push((format!("[N-{},N-{}]", i + 1, j + 1), bracket(&nm[i], &nm[j]), zero.clone()));
        }
    }
    check("[N±_i,N±_j] = 0", items);

    let mut items = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rhs = a.scale(&(q(2) * delta(i, j))).add(&r(i + 1, j + 1)?.scale(&q(2)));
            items.push((format!("[N+{},N-{}]", i + 1, j + 1), bracket(&np[i], &nm[j]), rhs));
        }
    }
    check("[N+_i,N-_j] = 2A δ_ij + 2R_ij", items);

    let mut items = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                items.push((format!("[R{i}{j},A]"), bracket(&r(i, j)?, &a), zero.clone()));
            }
        }
    }
    check("[R_ij,A] = 0", items);

    let mut items = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for k in 1..=n {
                for (label, nn) in [("N+", &np), ("N-", &nm)] {
                    let rhs = nn[i - 1].scale(&delta(j, k)).sub(&nn[j - 1].scale(&delta(i, k)));
                    items.push((format!("[R{i}{j},{label}{k}]"), bracket(&r(i, j)?, &nn[k - 1]), rhs));
                }
            }
        }
    }
    check("[R_ij,N±_k] = N±_i δ_jk - N±_j δ_ik", items);

    let basis = standard_basis(n);
    let mut closure_ok = true;
    for x in &basis {
        for y in &basis {
            let b = bracket(&gen(*x)?, &gen(*y)?);
            match decompose(&b, n) {
                Some(c) => closure_ok &= c.iter().all(|(_, v)| v.is_integer()),
                None => closure_ok = false,
            }
        }
    }
    Ok(StructureReport { n, relations, closure_ok })
}

/// Polynomial ring of frame coordinates, optionally with a leading
/// parameter `lambda`.
#[derive(Clone, Debug)]
pub struct FrameRing {
    pub n: usize,
    pub ring: Arc<PolyRing>,
    offset: usize,
}

impl FrameRing {
    pub fn new(n: usize, with_lambda: bool) -> Self {
        let d = n + 2;
        let mut names = Vec::new();
        if with_lambda {
            names.push("lambda".to_string());
        }
        for col in 0..d {
            for row in 0..d {
                names.push(Self::column_name(n, col, row));
            }
        }
        FrameRing { n, ring: PolyRing::new(names), offset: usize::from(with_lambda) }
    }

    fn column_name(n: usize, col: usize, row: usize) -> String {
        if col == 0 {
            format!("x{row}")
        } else if col == n + 1 {
            format!("xi{row}")
        } else {
            format!("f{col}_{row}")
        }
    }

    pub fn has_lambda(&self) -> bool {
        self.offset == 1
    }

    pub fn lambda(&self) -> MultiPoly {
        assert!(self.has_lambda(), "ring has no lambda");
        MultiPoly::var(&self.ring, 0)
    }

    /// Variable index of entry `row` of column `col`.
    pub fn index(&self, col: usize, row: usize) -> usize {
        self.offset + col * (self.n + 2) + row
    }

    pub fn entry(&self, col: usize, row: usize) -> MultiPoly {
        MultiPoly::var(&self.ring, self.index(col, row))
    }

    pub fn x(&self, row: usize) -> MultiPoly {
        self.entry(0, row)
    }

    pub fn xi(&self, row: usize) -> MultiPoly {
        self.entry(self.n + 1, row)
    }

    /// Frame vector `f_k`, `k = 1..=n`.
    pub fn f(&self, k: usize, row: usize) -> MultiPoly {
        self.entry(k, row)
    }

    /// `Φ_- = x_0 - ξ_0`.
    pub fn phi_minus(&self) -> MultiPoly {
        self.x(0) - self.xi(0)
    }

    /// `Φ_+ = x_0 + ξ_0`.
    pub fn phi_plus(&self) -> MultiPoly {
        self.x(0) + self.xi(0)
    }

    /// Value of every variable at the frame `γ` (row-major `d x d`), with
    /// `lambda` set to `lambda`.
    pub fn point(&self, gamma: &[f64], lambda: f64) -> Vec<f64> {
        let d = self.n + 2;
        let mut v = vec![0.0; self.ring.len()];
        if self.has_lambda() {
            v[0] = lambda;
        }
        for col in 0..d {
            for row in 0..d {
                v[self.index(col, row)] = gamma[row * d + col];
            }
        }
        v
    }
}

/// Left-invariant vector field of `M` on the frame bundle: the derivation
/// with `D_M(c_j) = Σ_i M_ij c_i` on the columns `c_j` of `γ`.
pub fn to_derivation(m: &LorentzMatrix, frame: &FrameRing) -> Result<Derivation> {
    let d = frame.n + 2;
    if m.dim() != d {
        return Err(Error::DomainMismatch(format!("{}x{} matrix on frames of size {d}", m.dim(), m.dim())));
    }
    let mut images = Vec::new();
    for j in 0..d {
        for row in 0..d {
            let mut img = MultiPoly::zero();
            for i in 0..d {
                let c = m.get(i, j);
                if !c.is_zero() {
                    img = img + frame.entry(i, row).scale(c);
                }
            }
            images.push((frame.index(j, row), img));
        }
    }
    Ok(Derivation::new(&frame.ring, images))
}

/// The ambient left action `c_j ↦ M c_j`.  It is an anti-homomorphism and
/// does not satisfy `A Φ_- = -Φ_-`; kept for comparison.
pub fn ambient_derivation(m: &LorentzMatrix, frame: &FrameRing) -> Result<Derivation> {
    let d = frame.n + 2;
    if m.dim() != d {
        return Err(Error::DomainMismatch("matrix size differs from frame size".into()));
    }
    let mut images = Vec::new();
    for col in 0..d {
        for a in 0..d {
            let mut img = MultiPoly::zero();
            for b in 0..d {
                let c = m.get(a, b);
                if !c.is_zero() {
                    img = img + frame.entry(col, b).scale(c);
                }
            }
            images.push((frame.index(col, a), img));
        }
    }
    Ok(Derivation::new(&frame.ring, images))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub n: usize,
    /// `D_A Φ_- = -Φ_-` holds.
    pub anchor_ok: bool,
    /// `ε` if `[D_X, D_Y] = ε D_{[X,Y]}` holds with one sign for all pairs.
    pub epsilon: Option<i32>,
    pub pairs_checked: usize,
}

/// Determine the sign of the derivation representation built by `realise`
/// over all pairs of basis generators, and test the anchor `A Φ_- = -Φ_-`.
pub fn representation_sign_with(
    n: usize,
    realise: &dyn Fn(&LorentzMatrix, &FrameRing) -> Result<Derivation>,
) -> Result<SignReport> {
    let frame = FrameRing::new(n, false);
    let da = realise(&generator(Generator::A, n)?, &frame)?;
    let phi = frame.phi_minus();
    let anchor_ok = da.apply_poly(&phi)? == -&phi;

    let basis = standard_basis(n);
    let mats: Vec<LorentzMatrix> = basis.iter().map(|g| generator(*g, n)).collect::<Result<_>>()?;
    let ders: Vec<Derivation> = mats.iter().map(|m| realise(m, &frame)).collect::<Result<_>>()?;
    let mut eps: Option<i32> = None;
    let mut consistent = true;
    let mut pairs = 0;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            pairs += 1;
            let lhs = ders[i].commutator(&ders[j])?;
            let rhs = realise(&bracket(&mats[i], &mats[j]), &frame)?;
            let s = if lhs == rhs {
                1
            } else if lhs == rhs.scale(&q(-1)) {
                -1
            } else {
                consistent = false;
                continue;
            };
            if rhs.is_zero() {
                continue;
            }
            match eps {
                None => eps = Some(s),
                Some(e) if e != s => consistent = false,
                _ => {}
            }
        }
    }
    Ok(SignReport { n, anchor_ok, epsilon: if consistent { eps } else { None }, pairs_checked: pairs })
}

pub fn representation_sign(n: usize) -> Result<SignReport> {
    representation_sign_with(n, &to_derivation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_lie_in_algebra() {
        for n in 1..=4 {
            for g in standard_basis(n) {
                assert!(generator(g, n).unwrap().preserves_form());
            }
            assert!(generator(Generator::NPlus(n), n).unwrap().preserves_form());
        }
    }

    #[test]
    fn n_plus_one_matrix() {
        let m = generator(Generator::NPlus(1), 2).unwrap();
        assert_eq!(*m.get(0, 1), q(1));
        assert_eq!(*m.get(1, 0), q(1));
        assert_eq!(*m.get(3, 1), q(1));
        assert_eq!(*m.get(1, 3), q(-1));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(generator(Generator::NPlus(3), 2).is_err());
        assert!(generator(Generator::R(1, 1), 2).is_err());
        assert!(generator(Generator::P(0), 2).is_err());
    }

    #[test]
    fn relations_hold() {
        for n in 2..=3 {
            let rep = verify_structure_constants(n).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn frame_action_on_columns() {
        let frame = FrameRing::new(2, false);
        let da = to_derivation(&generator(Generator::A, 2).unwrap(), &frame).unwrap();
        assert_eq!(da.apply_poly(&frame.x(1)).unwrap(), frame.xi(1));
        assert_eq!(da.apply_poly(&frame.xi(2)).unwrap(), frame.x(2));
        assert!(da.apply_poly(&frame.f(1, 0)).unwrap().is_zero());
        let dn = to_derivation(&generator(Generator::NMinus(1), 2).unwrap(), &frame).unwrap();
        assert_eq!(dn.apply_poly(&frame.phi_minus()).unwrap(), MultiPoly::zero());
    }

    #[test]
    fn derivation_sign_and_anchor() {
        let rep = representation_sign(2).unwrap();
        assert!(rep.anchor_ok);
        assert_eq!(rep.epsilon, Some(REPRESENTATION_SIGN));
        let amb = representation_sign_with(2, &ambient_derivation).unwrap();
        assert!(!amb.anchor_ok);
        assert_eq!(amb.epsilon, Some(-1));
    }
}
