//! The band polynomial `P_{r,k}`, the exceptional set and the bookkeeping of
//! resonance bands.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{factorial, format_q, q, qf, GaussRat, Q};
use crate::error::{Error, Result};

/// `P_{r,k}(A)` as a univariate polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BandPolynomial {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub k: usize,
    pub coeffs: Vec<Q>,
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl BandPolynomial {
    /// Linear factors `(c0 + c1 A)` of the product form, without the constant.
    pub fn linear_factors(n: usize, r: usize, k: usize) -> Vec<(Q, Q)> {
        let n = n as i64;
        let (ri, ki) = (r as i64, k as i64);
        let mut out = Vec::new();
        for j in 1..=ki {
            out.push((q(ri + j - 1), q(1)));
            out.push((q(n - 2 * j), q(-2)));
        }
        for j in 1..=ri {
            out.push((q(-n - j + 2), q(1)));
        }
        out
    }

    pub fn constant_factor(r: usize, k: usize) -> Q {
        let m = r + 2 * k;
        let two = Q::from_integer(num_bigint::BigInt::from(2).pow((k + r) as u32));
        two * factorial(m) * factorial(r) * factorial(r)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Q {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval_q(&self, a: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * a + c)
    }

    pub fn eval_gauss(&self, a: &GaussRat) -> GaussRat {
        self.coeffs.iter().rev().fold(GaussRat::zero(), |acc, c| acc.mul(a).add_q(c))
    }

    pub fn eval_f64(&self, a: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + crate::algebra::rational::to_f64(c))
    }

    /// Value of the product form, for cross-checking the expansion.
    pub fn eval_product(n: usize, r: usize, k: usize, a: &Q) -> Q {
        Self::linear_factors(n, r, k)
            .iter()
            .fold(Self::constant_factor(r, k), |acc, (c0, c1)| acc * (c0 + c1 * a))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(if mono.is_empty() { format_q(c) } else { format!("{}*{}", format_q(c), mono) });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Expanded `P_{r,k}` for `m = r + 2k`.
pub fn p_rk(n: usize, r: usize, k: usize) -> Result<BandPolynomial> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n}, need n >= 2")));
    }
    let mut coeffs = vec![BandPolynomial::constant_factor(r, k)];
    for (c0, c1) in BandPolynomial::linear_factors(n, r, k) {
        coeffs = poly_mul(&coeffs, &[c0, c1]);
    }
    Ok(BandPolynomial { n, m: r + 2 * k, r, k, coeffs })
}

pub fn p_rk_eval(n: usize, r: usize, k: usize, a: &GaussRat) -> Result<GaussRat> {
    Ok(p_rk(n, r, k)?.eval_gauss(a))
}

/// `λ₀ ∈ -n/2 - ½ℕ₀`.
pub fn exceptional_member(lambda0: &GaussRat, n: usize) -> bool {
    if !lambda0.is_real() {
        return false;
    }
    let j = -(q(n as i64) + &lambda0.re * q(2));
    j.is_integer() && !j.is_negative()
}

fn check_admissible(lambda0: &GaussRat, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n}, need n >= 2")));
    }
    if exceptional_member(lambda0, n) {
        return Err(Error::Exceptional(format!("lambda0 = {lambda0} lies in -n/2 - N0/2 for n = {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub m: usize,
    pub r: usize,
    pub k: usize,
    pub value: GaussRat,
    pub zero: bool,
    /// `Re λ₀ + m ≤ 0`.
    pub in_band: bool,
    /// m even, r = 0, k = m/2 and λ₀ + m = 0.
    pub stated_exception: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub n: usize,
    pub lambda0: GaussRat,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    /// In-band zeros that are not the stated exception.
    pub fn false_zeros(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.in_band && r.zero && !r.stated_exception).collect()
    }

    /// Stated exceptions at which the polynomial does not vanish.
    pub fn missed_exceptions(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.stated_exception && !r.zero).collect()
    }

    /// Zeros outside `Re λ₀ + m ≤ 0`, where nothing is claimed.
    pub fn out_of_band_zeros(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| !r.in_band && r.zero).collect()
    }

    pub fn consistent(&self) -> bool {
        self.false_zeros().is_empty() && self.missed_exceptions().is_empty()
    }
}

pub fn stated_exception(lambda0: &GaussRat, m: usize, r: usize, k: usize) -> bool {
    m % 2 == 0 && r == 0 && 2 * k == m && lambda0.add_q(&q(m as i64)).is_zero()
}

/// Evaluate `P_{r,k}(-(λ₀+m))` for every `m ≤ m_max` and `r + 2k = m`.
pub fn nonvanishing_scan(n: usize, lambda0: &GaussRat, m_max: usize) -> Result<ScanReport> {
    check_admissible(lambda0, n)?;
    let triples: Vec<(usize, usize, usize)> =
        (0..=m_max).flat_map(|m| (0..=m / 2).map(move |k| (m, m - 2 * k, k))).collect();
    let rows = triples
        .par_iter()
        .map(|&(m, r, k)| {
            let a = lambda0.add_q(&q(m as i64)).neg();
            let value = p_rk_eval(n, r, k, &a)?;
            Ok(ScanRow {
                m,
                r,
                k,
                zero: value.is_zero(),
                value,
                in_band: &lambda0.re + q(m as i64) <= Q::zero(),
                stated_exception: stated_exception(lambda0, m, r, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport { n, lambda0: lambda0.clone(), rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandEntry {
    pub m: usize,
    pub k: usize,
    pub tensor_order: usize,
    pub s0: GaussRat,
    pub excluded: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceTable {
    pub lambda0: GaussRat,
    pub n: usize,
    pub entries: Vec<BandEntry>,
    /// Bands with `Re λ₀ + m > 0` start here; they are empty.
    pub first_empty_band: usize,
    pub empty_bands_note: String,
}

pub fn correspondence_table(lambda0: &GaussRat, n: usize) -> Result<CorrespondenceTable> {
    check_admissible(lambda0, n)?;
    // largest m with Re λ₀ + m ≤ 0
    let bound = -&lambda0.re;
    let m_top: Option<usize> =
        if bound.is_negative() { None } else { Some(bound.floor().to_integer().try_into().map_err(|_| Error::Resource("band index too large".into()))?) };
    let mut entries = Vec::new();
    if let Some(mt) = m_top {
        if mt > 10_000 {
            return Err(Error::Resource(format!("{mt} bands requested")));
        }
        for m in 0..=mt {
            let s0 = lambda0.add_q(&q((m + n) as i64));
            let resonant_zero = lambda0.is_real() && lambda0.re == q(-(m as i64)) && m % 2 == 0 && m > 0;
            for k in 0..=m / 2 {
                let (excluded, reason) = if resonant_zero {
                    (true, format!("lambda0 = -{m} in -2N: the unstable-killed kernel at A-eigenvalue 0 is trivial in band {m}"))
                } else {
                    (false, String::new())
                };
                entries.push(BandEntry { m, k, tensor_order: m - 2 * k, s0: s0.clone(), excluded, reason });
            }
        }
    }
    let first_empty_band = m_top.map_or(0, |m| m + 1);
    Ok(CorrespondenceTable {
        lambda0: lambda0.clone(),
        n,
        entries,
        first_empty_band,
        empty_bands_note: format!("bands m >= {first_empty_band} are empty by resonance half-plane (Re lambda0 + m > 0)"),
    })
}

/// Admissible grid used by the acceptance scan: rationals in `[-6, -1]` with
/// denominators 1..=7 plus a few complex points.
pub fn scan_grid(n: usize) -> Vec<GaussRat> {
    let mut out = Vec::new();
    for den in 1..=7i64 {
        for num in (-6 * den)..=(-den) {
            let v = qf(num, den);
            if v.denom() != &num_bigint::BigInt::from(den) {
                continue;
            }
            out.push(GaussRat::real(v));
        }
    }
    for (re, im) in [(-1, 1), (-2, 1), (-3, -2), (-5, 3)] {
        out.push(GaussRat::new(q(re), qf(im, 3)));
    }
    out.retain(|l| !exceptional_member(l, n));
    out.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    out
}

impl CorrespondenceTable {
    pub fn has_exclusions(&self) -> bool {
        self.entries.iter().any(|e| e.excluded)
    }
}

impl BandEntry {
    pub fn matches(&self, m: usize, k: usize, order: usize, s0: &GaussRat) -> bool {
        self.m == m && self.k == k && self.tensor_order == order && &self.s0 == s0
    }
}

pub fn leading_sign_expected(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_band() {
        let p = p_rk(4, 0, 0).unwrap();
        assert_eq!(p.coeffs, vec![q(1)]);
    }

    #[test]
    fn printed_values() {
        assert_eq!(p_rk(2, 1, 0).unwrap().eval_q(&q(-3)), q(-8));
        for n in 2..6 {
            assert!(p_rk(n, 0, 1).unwrap().eval_q(&q(0)).is_zero());
        }
        // 2^1 * 2! * (A)(-2A + n - 2) for r = 0, k = 1
        assert_eq!(p_rk(2, 0, 1).unwrap().coeffs, vec![q(0), q(0), q(-8)]);
    }

    #[test]
    fn expansion_matches_product() {
        for n in 2..6 {
            for r in 0..4 {
                for k in 0..3 {
                    let p = p_rk(n, r, k).unwrap();
                    assert_eq!(p.degree(), r + 2 * k);
                    assert_eq!(leading_sign_expected(k), if p.leading().is_positive() { 1 } else { -1 });
                    for a in [qf(-7, 3), q(0), q(5), qf(1, 2)] {
                        assert_eq!(p.eval_q(&a), BandPolynomial::eval_product(n, r, k, &a));
                    }
                }
            }
        }
    }

    #[test]
    fn exceptional_set() {
        assert!(exceptional_member(&GaussRat::real(qf(-3, 2)), 3));
        assert!(exceptional_member(&GaussRat::real(q(-2)), 3));
        assert!(!exceptional_member(&GaussRat::real(q(-1)), 3));
        assert!(!exceptional_member(&GaussRat::new(q(-2), q(1)), 2));
        assert!(!exceptional_member(&GaussRat::real(qf(-1, 3)), 2));
    }

    #[test]
    fn table_for_minus_eleven_fifths() {
        let t = correspondence_table(&GaussRat::real(qf(-11, 5)), 2).unwrap();
        assert_eq!(t.entries.len(), 4);
        let want = [(0, 0, 0, qf(-1, 5)), (1, 0, 1, qf(4, 5)), (2, 0, 2, qf(9, 5)), (2, 1, 0, qf(9, 5))];
        for (e, (m, k, o, s)) in t.entries.iter().zip(want) {
            assert!(e.matches(m, k, o, &GaussRat::real(s)));
            assert!(!e.excluded);
        }
        assert_eq!(t.first_empty_band, 3);
    }

    #[test]
    fn exclusions_and_empty() {
        let t = correspondence_table(&GaussRat::real(q(-2)), 5).unwrap();
        assert!(t.entries.iter().filter(|e| e.m == 2).all(|e| e.excluded));
        assert!(t.entries.iter().filter(|e| e.m < 2).all(|e| !e.excluded));
        assert!(correspondence_table(&GaussRat::real(q(1)), 3).unwrap().entries.is_empty());
        assert!(matches!(correspondence_table(&GaussRat::real(q(-1)), 2), Err(Error::Exceptional(_))));
    }

    #[test]
    fn scan_refuses_exceptional() {
        assert!(nonvanishing_scan(2, &GaussRat::real(q(-3)), 3).is_err());
        assert!(nonvanishing_scan(4, &GaussRat::real(q(-2)), 3).is_err());
    }

    #[test]
    fn scan_finds_exception() {
        let r = nonvanishing_scan(5, &GaussRat::real(q(-2)), 6).unwrap();
        assert!(r.consistent());
        let zeros: Vec<_> = r.rows.iter().filter(|x| x.zero && x.in_band).collect();
        assert_eq!(zeros.len(), 1);
        assert_eq!((zeros[0].m, zeros[0].r, zeros[0].k), (2, 0, 1));
    }
}
