//! Hermite and Smith normal forms, integer kernels and affine solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row Hermite normal form together with the unimodular transform `u`,
/// so that `u * a = h`. The first `rank` rows of `h` are nonzero.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hnf_with_transform(a: &IntMatrix) -> Hnf {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for j in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, j)].is_zero())
                .min_by(|&x, &y| h[(x, j)].abs().cmp(&h[(y, j)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(r, j)]);
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
                if !h[(i, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, j)].div_floor(&h[(r, j)]);
            h.sub_row_multiple(i, r, &q);
            u.sub_row_multiple(i, r, &q);
        }
        pivots.push(j);
        r += 1;
    }
    Hnf {
        h,
        u,
        rank: r,
        pivots,
    }
}

/// Canonical row HNF with zero rows dropped.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let res = hnf_with_transform(a);
    let rows: Vec<Vec<BigInt>> = res.h.rows().take(res.rank).map(<[BigInt]>::to_vec).collect();
    IntMatrix::from_row_vecs(a.ncols(), rows)
}

/// Z-basis (in HNF) of `{x in Z^n : m x = 0}`. The result is saturated.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.ncols();
    if m.nrows() == 0 {
        return IntMatrix::identity(n);
    }
    let res = hnf_with_transform(&m.transpose());
    let rows: Vec<Vec<BigInt>> = res.u.rows().skip(res.rank).map(<[BigInt]>::to_vec).collect();
    hnf(&IntMatrix::from_row_vecs(n, rows))
}

/// Integer solutions of `m x = rhs`: a particular solution and a kernel basis
/// (rows). `None` when no integer solution exists.
pub fn solve_affine(m: &IntMatrix, rhs: &[BigInt]) -> Option<(Vec<BigInt>, IntMatrix)> {
    let n = m.ncols();
    assert_eq!(m.nrows(), rhs.len(), "rhs length mismatch");
    let res = hnf_with_transform(&m.transpose());
    let h = &res.h;
    let mut z: Vec<BigInt> = Vec::with_capacity(res.rank);
    for (i, &pc) in res.pivots.iter().enumerate() {
        let mut acc = rhs[pc].clone();
        for (k, zk) in z.iter().enumerate() {
            acc -= zk * &h[(k, pc)];
        }
        let (q, rem) = acc.div_rem(&h[(i, pc)]);
        if !rem.is_zero() {
            return None;
        }
        z.push(q);
    }
    for (j, target) in rhs.iter().enumerate() {
        let s: BigInt = z.iter().enumerate().map(|(k, zk)| zk * &h[(k, j)]).sum();
        if &s != target {
            return None;
        }
    }
    let mut x0 = vec![BigInt::zero(); n];
    for (k, zk) in z.iter().enumerate() {
        for (x, uk) in x0.iter_mut().zip(res.u.row(k)) {
            *x += zk * uk;
        }
    }
    let kernel_rows: Vec<Vec<BigInt>> = res.u.rows().skip(res.rank).map(<[BigInt]>::to_vec).collect();
    Some((x0, IntMatrix::from_row_vecs(n, kernel_rows)))
}

/// Unimodular matrix whose first row is the primitive vector `u`.
pub fn extend_to_basis(u: &[BigInt]) -> Option<IntMatrix> {
    let n = u.len();
    let col = IntMatrix::from_row_vecs(1, u.iter().map(|x| vec![x.clone()]).collect());
    let res = hnf_with_transform(&col);
    if res.rank != 1 || !res.h[(0, 0)].is_one() {
        return None;
    }
    let inv = res.u.unimodular_inverse()?;
    let m = inv.transpose();
    debug_assert_eq!(m.row(0), u);
    debug_assert_eq!(m.nrows(), n);
    Some(m)
}

/// Nonzero invariant factors of the Smith normal form, each dividing the next.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.nrows();
    let cols = m.ncols();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(diag);
            };
            m.swap_rows(t, pi);
            swap_cols(&mut m, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                m.sub_row_multiple(i, t, &q);
                clean &= m[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                sub_col_multiple(&mut m, j, t, &q);
                clean &= m[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = m[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    m.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        diag.push(m[(t, t)].abs());
    }
    finish(diag)
}

fn finish(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    diag.sort();
    diag
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.nrows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

fn sub_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for i in 0..m.nrows() {
        let v = &m[(i, source)] * factor;
        m[(i, target)] -= v;
    }
}
