//! LLL reduction driven by a positive definite Gram matrix, in integer
//! arithmetic throughout (subdeterminants `d_i` and scaled coefficients `λ`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Returns a unimodular `t` such that `t * gram * t^T` is LLL-reduced
/// (delta = 3/4). Panics if `gram` is not positive definite.
pub fn lll_transform(gram: &IntMatrix) -> IntMatrix {
    lll_transform_checked(gram).expect("LLL needs a positive definite Gram matrix")
}

/// As [`lll_transform`], or `None` when `gram` is not positive definite. The
/// `d_i` are the leading minors of the final basis, so their positivity is a
/// definiteness certificate.
pub fn lll_transform_checked(gram: &IntMatrix) -> Option<IntMatrix> {
    let n = gram.nrows();
    let mut s = State {
        g: gram.clone(),
        t: IntMatrix::identity(n),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    if n == 0 {
        return Some(s.t);
    }
    // 1-based indices below; basis vector i is row i - 1
    s.d[0] = BigInt::one();
    s.d[1] = s.g[(0, 0)].clone();
    if !s.d[1].is_positive() {
        return None;
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            if !s.extend_gso(k) {
                return None;
            }
        }
        loop {
            s.reduce(k, k - 1);
            let lhs = BigInt::from(4) * &s.d[k] * &s.d[k - 2];
            let l = &s.lam[k][k - 1];
            let rhs = BigInt::from(3) * &s.d[k - 1] * &s.d[k - 1] - BigInt::from(4) * l * l;
            if lhs < rhs {
                s.swap(k, kmax);
                if !s.d[k - 1].is_positive() {
                    return None;
                }
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    s.reduce(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Some(s.t)
}

struct State {
    g: IntMatrix,
    t: IntMatrix,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn extend_gso(&mut self, k: usize) -> bool {
        for j in 1..=k {
            let mut u = self.g[(k - 1, j - 1)].clone();
            for i in 1..j {
                u = (&self.d[i] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i - 1];
            }
            if j < k {
                self.lam[k][j] = u;
            } else if u.is_positive() {
                self.d[k] = u;
            } else {
                return false;
            }
        }
        true
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam = BigInt::from(2) * &self.lam[k][l];
        if two_lam.abs() <= self.d[l] {
            return;
        }
        // nearest integer to lam / d
        let q = (&two_lam + &self.d[l]).div_floor(&(BigInt::from(2) * &self.d[l]));
        let (rk, rl) = (k - 1, l - 1);
        self.t.sub_row_multiple(rk, rl, &q);
        self.g.sub_row_multiple(rk, rl, &q);
        for i in 0..self.g.nrows() {
            let v = &self.g[(i, rl)] * &q;
            self.g[(i, rk)] -= v;
        }
        let v = &q * &self.d[l];
        self.lam[k][l] -= v;
        for i in 1..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        let (a, b) = (k - 1, k - 2);
        self.g.swap_rows(a, b);
        swap_cols(&mut self.g, a, b);
        self.t.swap_rows(a, b);
        for j in 1..k - 1 {
            let tmp = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], tmp);
        }
        let lam = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&big_b * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = big_b;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for i in 0..m.nrows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}
