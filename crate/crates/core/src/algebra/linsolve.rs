//! Exact Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use super::rational::Q;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Unique solution of `A x = b`, or `None` if the system is singular or
/// inconsistent.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qf};

    #[test]
    fn small_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_unique(&a, &[q(1), q(2)]).unwrap();
        assert_eq!(x, vec![qf(1, 5), qf(3, 5)]);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert!(solve_unique(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(1), q(1)]).is_none());
    }
}
