//! Symmetric tensors `Sym^m R^n` with the Euclidean metric.
//!
//! A tensor is stored as coefficients on the unnormalised products
//! `e_K = e_{k1} σ ... σ e_{km}`, keyed by the non-decreasing index sequence
//! `K` (0-based).  With this basis `Sym R^n` is the polynomial ring in
//! `t_1..t_n`: `σ` is multiplication, `e_j ⌟` is `∂/∂t_j`, `L` multiplies by
//! `|t|^2` and `Λ` is the flat Laplacian.  The inner product extends `g` by
//! summing over permutations, so `<e_K, e_K> = α(K)!` where `α` counts
//! repeated indices.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::algebra::linsolve::rref;
use crate::algebra::rational::{binomial, factorial, q, Q};
use crate::algebra::{Coeff, MultiPoly};
use crate::error::{Error, Result};

pub type Index = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<S: Coeff> {
    n: usize,
    m: usize,
    coeffs: BTreeMap<Index, S>,
}

/// `dim Sym^m R^n`.
pub fn sym_dim(n: usize, m: usize) -> usize {
    binomial((n + m) as i64 - 1, m as i64) as usize
}

/// Non-decreasing sequences of length `m` over `0..n`, in lex order.
pub fn multisets(n: usize, m: usize) -> Vec<Index> {
    fn rec(n: usize, m: usize, start: usize, cur: &mut Index, out: &mut Vec<Index>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(n, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `α(K)!`, the product of factorials of index multiplicities.
pub fn multiplicity_factorial(k: &[u8]) -> Q {
    let mut acc = Q::one();
    let mut i = 0;
    while i < k.len() {
        let mut j = i;
        while j < k.len() && k[j] == k[i] {
            j += 1;
        }
        acc *= factorial(j - i);
        i = j;
    }
    acc
}

fn multiplicity(k: &[u8], j: u8) -> usize {
    k.iter().filter(|&&x| x == j).count()
}

fn merge(a: &[u8], b: &[u8]) -> Index {
    let mut v: Index = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

fn remove_one(k: &[u8], j: u8) -> Index {
    let mut v = k.to_vec();
    let pos = v.iter().position(|&x| x == j).expect("index present");
    v.remove(pos);
    v
}

impl<S: Coeff> SymTensor<S> {
    pub fn zero(n: usize, m: usize) -> Self {
        SymTensor { n, m, coeffs: BTreeMap::new() }
    }

    /// `c · e_K` for an arbitrary (unsorted) index sequence.
    pub fn basis(n: usize, k: &[u8], c: S) -> Self {
        let mut key = k.to_vec();
        key.sort_unstable();
        assert!(key.iter().all(|&i| (i as usize) < n), "index out of range");
        let mut t = Self::zero(n, k.len());
        t.add_term(key, c);
        t
    }

    pub fn scalar(n: usize, c: S) -> Self {
        Self::basis(n, &[], c)
    }

    /// Degree-one tensor `Σ v_i e_i`.
    pub fn vector(v: &[S]) -> Self {
        let mut t = Self::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            t.add_term(vec![i as u8], c.clone());
        }
        t
    }

    pub fn fibre_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: &[u8]) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero_coeff)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, &S)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(Coeff::term_count).sum()
    }

    pub fn add_term(&mut self, k: Index, c: S) {
        debug_assert_eq!(k.len(), self.m);
        if c.is_zero_coeff() {
            return;
        }
        match self.coeffs.remove(&k) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero_coeff() {
                    self.coeffs.insert(k, s);
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    pub fn map<F: FnMut(&S) -> S>(&self, mut f: F) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (k, c) in &self.coeffs {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn try_map<F: FnMut(&S) -> Result<S>>(&self, mut f: F) -> Result<Self> {
        let mut out = Self::zero(self.n, self.m);
        for (k, c) in &self.coeffs {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    fn check_shape(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.m != o.m {
            return Err(Error::DomainMismatch(format!(
                "Sym^{} R^{} vs Sym^{} R^{}",
                self.m, self.n, o.m, o.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_shape(o)?;
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, a: &Q) -> Self {
        self.map(|c| c.scale(a))
    }

    /// Multiply every coefficient by `a`.
    pub fn mul_coeff(&self, a: &S) -> Self {
        self.map(|c| c.clone() * a)
    }

    /// Symmetric product `a σ b` (unnormalised).
    pub fn sym_product(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DomainMismatch(format!("fibre dimensions {} and {}", self.n, o.n)));
        }
        let mut out = Self::zero(self.n, self.m + o.m);
        for (k, a) in &self.coeffs {
            for (l, b) in &o.coeffs {
                out.add_term(merge(k, l), a.clone() * b);
            }
        }
        Ok(out)
    }

    /// `e_j σ u`.
    pub fn basis_product(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.m + 1);
        for (k, c) in &self.coeffs {
            out.add_term(merge(k, &[j as u8]), c.clone());
        }
        out
    }

    /// `e_j ⌟ u`.
    pub fn basis_contract(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.m.saturating_sub(1));
        if self.m == 0 {
            return out;
        }
        for (k, c) in &self.coeffs {
            let mult = multiplicity(k, j as u8);
            if mult > 0 {
                out.add_term(remove_one(k, j as u8), c.scale(&q(mult as i64)));
            }
        }
        out
    }

    /// `v ⌟ u` for a vector `v` given by its components.
    pub fn contract(&self, v: &[S]) -> Result<Self> {
        if v.len() != self.n {
            return Err(Error::DomainMismatch("vector length differs from fibre dimension".into()));
        }
        let mut out = Self::zero(self.n, self.m.saturating_sub(1));
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero_coeff() {
                continue;
            }
            out = out.add(&self.basis_contract(j).mul_coeff(vj))?;
        }
        Ok(out)
    }

    /// `L u = Σ_i e_i σ e_i σ u`.
    pub fn lefschetz(&self) -> Self {
        let mut out = Self::zero(self.n, self.m + 2);
        for i in 0..self.n {
            for (k, c) in &self.coeffs {
                out.add_term(merge(k, &[i as u8, i as u8]), c.clone());
            }
        }
        out
    }

    /// `Λ u = Σ_i e_i ⌟ e_i ⌟ u`; zero in degree below two.
    pub fn trace(&self) -> Self {
        let mut out = Self::zero(self.n, self.m.saturating_sub(2));
        if self.m < 2 {
            return out;
        }
        for i in 0..self.n {
            let part = self.basis_contract(i).basis_contract(i);
            for (k, c) in part.coeffs {
                out.add_term(k, c);
            }
        }
        out
    }

    /// Inner product `Σ_K c_K d_K α(K)!`.
    pub fn inner(&self, o: &Self) -> Result<S> {
        self.check_shape(o)?;
        let mut acc = S::zero_coeff();
        for (k, a) in &self.coeffs {
            if let Some(b) = o.coeffs.get(k) {
                acc = acc + (a.clone() * b).scale(&multiplicity_factorial(k));
            }
        }
        Ok(acc)
    }

    /// `T(v_1, ..., v_m) = <T, v_1 σ ... σ v_m>`.
    pub fn evaluate(&self, vectors: &[Vec<S>]) -> Result<S> {
        if vectors.len() != self.m {
            return Err(Error::DomainMismatch(format!(
                "{} arguments for a degree {} tensor",
                vectors.len(),
                self.m
            )));
        }
        let mut prod = SymTensor::scalar(self.n, S::from_q(&Q::one()));
        for v in vectors {
            prod = prod.sym_product(&SymTensor::vector(v))?;
        }
        self.inner(&prod)
    }

    /// Components `T_L = T(e_{l1}, ..., e_{lm})` on sorted index sequences.
    pub fn components(&self) -> BTreeMap<Index, S> {
        self.coeffs
            .iter()
            .map(|(k, c)| (k.clone(), c.scale(&multiplicity_factorial(k))))
            .collect()
    }

    /// Inverse of [`components`](Self::components).
    pub fn from_components(n: usize, m: usize, comps: impl IntoIterator<Item = (Index, S)>) -> Self {
        let mut out = Self::zero(n, m);
        for (mut k, c) in comps {
            k.sort_unstable();
            let f = Q::one() / multiplicity_factorial(&k);
            out.add_term(k, c.scale(&f));
        }
        out
    }

    /// Linear substitution `e_a ↦ Σ_b M[a][b] e_b`, i.e. `T ↦ T ∘ Mᵀ`.
    pub fn pull_linear(&self, mat: &[Vec<S>]) -> Result<Self> {
        let target = mat.first().map_or(0, Vec::len);
        if mat.len() != self.n {
            return Err(Error::DomainMismatch("substitution matrix has wrong row count".into()));
        }
        let images: Vec<SymTensor<S>> = mat.iter().map(|row| SymTensor::vector(row)).collect();
        let mut out = SymTensor::zero(target, self.m);
        for (k, c) in &self.coeffs {
            let mut t = SymTensor::scalar(target, c.clone());
            for &i in k {
                t = t.sym_product(&images[i as usize])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Decompose `u = Σ_k L^k v_k` with every `v_k` trace-free.  Returns
    /// `v_0, v_1, ...` with `deg v_k = m - 2k`.
    pub fn trace_free_decompose(&self) -> Result<Vec<SymTensor<S>>> {
        let table = decomposition_table(self.n, self.m)?;
        let kmax = self.m / 2;
        let mut parts: Vec<SymTensor<S>> = (0..=kmax).map(|k| SymTensor::zero(self.n, self.m - 2 * k)).collect();
        for (key, c) in &self.coeffs {
            let pieces = &table[key];
            for (k, piece) in pieces.iter().enumerate() {
                for (j, a) in piece.iter() {
                    parts[k].add_term(j.clone(), c.scale(a));
                }
            }
        }
        Ok(parts)
    }

    /// Trace-free part `v_0` of the decomposition.
    pub fn harmonic_part(&self) -> Result<SymTensor<S>> {
        Ok(self.trace_free_decompose()?.swap_remove(0))
    }
}

type Table = HashMap<Index, Vec<SymTensor<Q>>>;

/// Per-basis-element decomposition over `Q`, computed once per `(n, m)` by
/// solving the linear system for the ansatz `Σ L^k v_k` with `Λ v_k = 0`.
fn decomposition_table(n: usize, m: usize) -> Result<Arc<Table>> {
    if n < 2 {
        return Err(Error::InvalidInput("fibre dimension must be at least 2".into()));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&(n, m)) {
        return Ok(t.clone());
    }
    let table = Arc::new(build_table(n, m)?);
    cache.lock().expect("cache lock").insert((n, m), table.clone());
    Ok(table)
}

fn build_table(n: usize, m: usize) -> Result<Table> {
    let kmax = m / 2;
    let target = multisets(n, m);
    let target_pos: HashMap<&Index, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    // unknowns: coefficients of v_k on Sym^{m-2k}
    let mut unknowns: Vec<(usize, Index)> = Vec::new();
    for k in 0..=kmax {
        for j in multisets(n, m - 2 * k) {
            unknowns.push((k, j));
        }
    }
    // equation rows: Sym^m components, then Λ v_k components for each k
    let mut trace_rows: Vec<(usize, HashMap<Index, usize>)> = Vec::new();
    let mut offset = target.len();
    for k in 0..=kmax {
        let deg = m - 2 * k;
        if deg < 2 {
            continue;
        }
        let idx: HashMap<Index, usize> = multisets(n, deg - 2).into_iter().enumerate().map(|(i, j)| (j, offset + i)).collect();
        offset += idx.len();
        trace_rows.push((k, idx));
    }
    let rows = offset;
    let cols = unknowns.len();
    if rows != cols {
        return Err(Error::Numerical(format!("decomposition system is {rows}x{cols}")));
    }
    let mut a = vec![vec![Q::zero(); cols + rows]; rows];
    for (col, (k, j)) in unknowns.iter().enumerate() {
        let mut t = SymTensor::<Q>::basis(n, j, Q::one());
        for _ in 0..*k {
            t = t.lefschetz();
        }
        for (key, c) in t.iter() {
            a[target_pos[key]][col] += c;
        }
        if let Some((_, idx)) = trace_rows.iter().find(|(kk, _)| kk == k) {
            let tr = SymTensor::<Q>::basis(n, j, Q::one()).trace();
            for (key, c) in tr.iter() {
                a[idx[key]][col] += c;
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[cols + i] = Q::one();
    }
    let piv = rref(&mut a);
    if piv.len() < cols || piv[cols - 1] != cols - 1 {
        return Err(Error::Numerical("singular trace decomposition system".into()));
    }
    let mut table = Table::new();
    for (ti, key) in target.iter().enumerate() {
        let mut parts: Vec<SymTensor<Q>> = (0..=kmax).map(|k| SymTensor::zero(n, m - 2 * k)).collect();
        for (col, (k, j)) in unknowns.iter().enumerate() {
            // solution for rhs e_key is column `cols + ti` of the inverse
            let x = &a[col][cols + ti];
            if !x.is_zero() {
                parts[*k].add_term(j.clone(), x.clone());
            }
        }
        table.insert(key.clone(), parts);
    }
    Ok(table)
}

/// `dim ker(Λ: Sym^m → Sym^{m-2})` computed by exact elimination.
pub fn trace_kernel_dim(n: usize, m: usize) -> usize {
    let src = multisets(n, m);
    if m < 2 {
        return src.len();
    }
    let dst = multisets(n, m - 2);
    let pos: HashMap<&Index, usize> = dst.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut mat = vec![vec![Q::zero(); src.len()]; dst.len()];
    for (c, k) in src.iter().enumerate() {
        for (key, v) in SymTensor::<Q>::basis(n, k, Q::one()).trace().iter() {
            mat[pos[key]][c] += v;
        }
    }
    src.len() - crate::algebra::linsolve::rank(&mat)
}

/// Closed-form dimension of the trace-free part.
pub fn tracefree_dim(n: usize, m: usize) -> usize {
    let a = sym_dim(n, m);
    let b = if m >= 2 { sym_dim(n, m - 2) } else { 0 };
    a - b
}

/// Flat symmetrised derivative `d u = Σ_j e_j σ ∂_j u` on tensor fields with
/// polynomial coefficients in `t_1..t_n` (variable `j` of the coefficient
/// ring is the `j`-th coordinate).
pub fn flat_d(u: &SymTensor<MultiPoly>) -> SymTensor<MultiPoly> {
    let mut out = SymTensor::zero(u.n, u.m + 1);
    for j in 0..u.n {
        for (k, c) in u.basis_product(j).coeffs {
            out.add_term(k, c.derivative(j));
        }
    }
    out
}

/// `div u = -Σ_j e_j ⌟ ∂_j u`.
pub fn flat_div(u: &SymTensor<MultiPoly>) -> SymTensor<MultiPoly> {
    let mut out = SymTensor::zero(u.n, u.m.saturating_sub(1));
    for j in 0..u.n {
        for (k, c) in u.basis_contract(j).coeffs {
            out.add_term(k, -c.derivative(j));
        }
    }
    out
}

/// `Σ c_i v_i = 0`; zero terms of nominal degree are ignored.
fn vanishes(terms: &[(i64, SymTensor<MultiPoly>)]) -> bool {
    let mut acc: BTreeMap<Index, MultiPoly> = BTreeMap::new();
    for (c, v) in terms {
        for (k, x) in &v.coeffs {
            let e = acc.entry(k.clone()).or_insert_with(MultiPoly::zero);
            *e = e.add_poly(&x.scale(&q(*c)));
        }
    }
    acc.values().all(|x| x.is_zero())
}

/// Random field of degree `m` on `R^n` with small integer polynomial
/// coefficients in `t_1..t_n`.
pub fn random_flat_field<R: rand::Rng>(rng: &mut R, n: usize, m: usize) -> SymTensor<MultiPoly> {
    let ring = crate::algebra::PolyRing::new((1..=n).map(|i| format!("t{i}")));
    let keys = multisets(n, m);
    let mut u = SymTensor::zero(n, m);
    for _ in 0..rng.gen_range(1..=keys.len().min(3)) {
        let key = keys[rng.gen_range(0..keys.len())].clone();
        let mut p = MultiPoly::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let c = match rng.gen_range(-3i64..=3) {
                0 => 1,
                c => c,
            };
            let mut t = MultiPoly::constant(q(c));
            for _ in 0..rng.gen_range(0..=3) {
                t = t * MultiPoly::var(&ring, rng.gen_range(0..n));
            }
            p = p + t;
        }
        u.add_term(key, p);
    }
    u
}

/// The flat relations `[Λ,div] = 0 = [L,d]`, `[Λ,d] = -2div`,
/// `[L,div] = 2d`, evaluated on `u`.
pub fn flat_commutation_relations(u: &SymTensor<MultiPoly>) -> Vec<(String, bool)> {
    let (du, divu) = (flat_d(u), flat_div(u));
    let (lu, tu) = (u.lefschetz(), u.trace());
    vec![
        ("[Lambda,div] = 0".into(), vanishes(&[(1, divu.trace()), (-1, flat_div(&tu))])),
        ("[L,d] = 0".into(), vanishes(&[(1, du.lefschetz()), (-1, flat_d(&lu))])),
        ("[Lambda,d] = -2div".into(), vanishes(&[(1, du.trace()), (-1, flat_d(&tu)), (2, divu.clone())])),
        ("[L,div] = 2d".into(), vanishes(&[(1, divu.lefschetz()), (-1, flat_div(&lu)), (-2, du.clone())])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;

    fn e(n: usize, k: &[u8]) -> SymTensor<Q> {
        SymTensor::basis(n, k, Q::one())
    }

    #[test]
    fn flat_relations_on_polynomial_field() {
        use crate::algebra::PolyRing;
        let r = PolyRing::new(["t1", "t2", "t3"]);
        let t = |i| MultiPoly::var(&r, i);
        let mut u = SymTensor::zero(3, 2);
        u.add_term(vec![0, 1], t(0).mul_poly(&t(2)).pow(2));
        u.add_term(vec![2, 2], t(1).pow(3).add_poly(&t(0)));
        for (name, ok) in flat_commutation_relations(&u) {
            assert!(ok, "{name}");
        }
        assert!(!flat_d(&u).is_zero());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn flat_relations_hold(seed in 0u64..10_000, n in 2usize..4, m in 0usize..4) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let u = random_flat_field(&mut rng, n, m);
            for (name, ok) in flat_commutation_relations(&u) {
                proptest::prop_assert!(ok, "{} on {:?}", name, u);
            }
        }

        #[test]
        fn lefschetz_trace_commutator(seed in 0u64..10_000, n in 2usize..4, m in 0usize..4) {
            // [Λ, L] = 2(n + 2m) on Sym^m
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let u = random_flat_field(&mut rng, n, m);
            let mut lhs = u.lefschetz().trace();
            if m >= 2 {
                lhs = lhs.sub(&u.trace().lefschetz()).unwrap();
            }
            proptest::prop_assert_eq!(lhs, u.scale(&q(2 * (n + 2 * m) as i64)));
        }
    }

    #[test]
    fn contraction_of_product() {
        let u = e(2, &[0]).sym_product(&e(2, &[1])).unwrap();
        assert_eq!(u.basis_contract(0), e(2, &[1]));
        let v = e(2, &[0, 0]);
        assert_eq!(v.basis_contract(0), e(2, &[0]).scale(&q(2)));
    }

    #[test]
    fn permutation_sum_inner_product() {
        let a = e(2, &[0, 1]);
        assert_eq!(a.inner(&a).unwrap(), q(1));
        let b = e(2, &[0, 0]);
        assert_eq!(b.inner(&b).unwrap(), q(2));
        // <v1 σ v2, w1 σ w2> = g(v1,w1)g(v2,w2) + g(v1,w2)g(v2,w1)
        let v1 = vec![q(1), q(2)];
        let v2 = vec![q(3), q(-1)];
        let w1 = vec![qf(1, 2), q(1)];
        let w2 = vec![q(0), q(5)];
        let g = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(x, y)| x * y).sum::<Q>();
        let lhs = SymTensor::vector(&v1)
            .sym_product(&SymTensor::vector(&v2))
            .unwrap()
            .inner(&SymTensor::vector(&w1).sym_product(&SymTensor::vector(&w2)).unwrap())
            .unwrap();
        assert_eq!(lhs, g(&v1, &w1) * g(&v2, &w2) + g(&v1, &w2) * g(&v2, &w1));
    }

    #[test]
    fn trace_of_metric() {
        for n in 2..5 {
            let one = SymTensor::scalar(n, Q::one());
            assert_eq!(one.lefschetz().trace(), one.scale(&q(2 * n as i64)));
        }
    }

    #[test]
    fn decomposition_of_small_tensor() {
        let u = e(3, &[0, 0]);
        let parts = u.trace_free_decompose().unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].trace().is_zero());
        assert_eq!(parts[1], SymTensor::scalar(3, qf(1, 3)));
        let rebuilt = parts[0].add(&parts[1].lefschetz()).unwrap();
        assert_eq!(rebuilt, u);
    }

    #[test]
    fn kernel_dimension_formula() {
        for n in 2..=4 {
            for m in 0..=5 {
                assert_eq!(trace_kernel_dim(n, m), tracefree_dim(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_fibre() {
        assert!(e(1, &[0, 0]).trace_free_decompose().is_err());
    }
}
