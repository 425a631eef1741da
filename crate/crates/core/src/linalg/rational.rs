//! Rational elimination: inertia, LDL^T, rank, inverses and row spaces.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

type Q = BigRational;

fn to_q(m: &IntMatrix) -> Vec<Vec<Q>> {
    m.rows()
        .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect()
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix,
/// by symmetric Gaussian elimination (Sylvester's law of inertia).
pub fn inertia(gram: &IntMatrix) -> (usize, usize, usize) {
    assert!(gram.is_symmetric(), "inertia of non-symmetric matrix");
    let mut a = to_q(gram);
    let mut n = a.len();
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        let last = n - 1;
        let diag = (0..n).find(|&i| !a[i][i].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let off = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = off else { break };
                // Row/col i += row/col j makes the diagonal 2 a_ij (both diagonals are zero).
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        // Move pivot to the end and eliminate.
        a.swap(pivot, last);
        for row in a.iter_mut() {
            row.swap(pivot, last);
        }
        let p = a[last][last].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in 0..last {
            if a[i][last].is_zero() {
                continue;
            }
            let f = &a[i][last] / &p;
            for k in 0..last {
                let v = &f * &a[last][k];
                a[i][k] -= v;
            }
        }
        a.truncate(last);
        for row in a.iter_mut() {
            row.truncate(last);
        }
        n = last;
    }
    let total = gram.nrows();
    (pos, neg, total - pos - neg)
}

/// `A = L D L^T` for a positive definite matrix, with `L` unit lower triangular.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub d: Vec<Q>,
    /// `l[i][j]` for `j < i`.
    pub l: Vec<Vec<Q>>,
}

/// `None` unless the matrix is positive definite.
pub fn ldl(a: &IntMatrix) -> Option<Ldl> {
    let n = a.nrows();
    let aq = to_q(a);
    let mut d: Vec<Q> = Vec::with_capacity(n);
    let mut l: Vec<Vec<Q>> = vec![Vec::new(); n];
    for j in 0..n {
        let mut dj = aq[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        for i in j + 1..n {
            let mut v = aq[i][j].clone();
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            let lij = v / &dj;
            l[i].push(lij);
        }
        d.push(dj);
    }
    Some(Ldl { d, l })
}

/// Reduced row echelon form over Q, zero rows dropped.
pub fn row_space_rref(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in 0..ncols {
                let v = &f * &a[r][k];
                a[i][k] -= v;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Rank over Q.
pub fn rank(m: &IntMatrix) -> usize {
    row_space_rref(&to_q(m)).len()
}

pub fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<Q>>> {
    assert!(m.is_square());
    let n = m.nrows();
    let mut a = to_q(m);
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
    }
    let red = row_space_rref(&a);
    if red.len() < n || (0..n).any(|i| !red[i][i].is_one()) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
pub(crate) fn big_q(x: &num_bigint::BigInt) -> Q {
    Q::from_integer(x.clone())
}
