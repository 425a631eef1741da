//! Independent reference computations for tests. Small integer arithmetic
//! only; nothing here calls into the library beyond reading Gram matrices.

#![allow(dead_code)]

use num_traits::ToPrimitive;
use salemlat::Lattice;

pub type Mat = Vec<Vec<i128>>;

pub fn gram(l: &Lattice) -> Mat {
    l.gram()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect())
        .collect()
}

pub fn form(g: &Mat, x: &[i128], y: &[i128]) -> i128 {
    let n = g.len();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn content(x: &[i128]) -> i128 {
    x.iter().fold(0, |g, &v| gcd(g, v))
}

/// First nonzero coordinate positive.
pub fn sign_normalize(x: &mut [i128]) {
    if x.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}

/// Fraction-free determinant.
pub fn det(m: &Mat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn minor(m: &Mat, skip: usize) -> Mat {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| *v).collect())
        .collect()
}

/// Sylvester's criterion.
pub fn is_positive_definite(a: &Mat) -> bool {
    (1..=a.len()).all(|k| {
        let lead: Mat = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&lead) > 0
    })
}

fn isqrt(x: i128) -> i128 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Every `x` with `x^T a x = t` for positive definite `a`, found by scanning
/// the box `|x_i| <= sqrt(t (a^-1)_ii)`. Sign-normalized, sorted.
pub fn boxed_norm_vectors(a: &Mat, t: i128) -> Vec<Vec<i128>> {
    let n = a.len();
    let d = det(a);
    assert!(d > 0);
    let bounds: Vec<i128> = (0..n).map(|i| isqrt(t * det(&minor(a, i)) / d)).collect();
    let mut out = Vec::new();
    let mut x = vec![0i128; n];
    box_rec(a, t, &bounds, 0, &mut x, &mut out);
    out.sort();
    out
}

fn box_rec(a: &Mat, t: i128, bounds: &[i128], i: usize, x: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
    if i == x.len() {
        if form(a, x, x) == t && x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) {
            out.push(x.clone());
        }
        return;
    }
    for v in -bounds[i]..=bounds[i] {
        x[i] = v;
        box_rec(a, t, bounds, i + 1, x, out);
    }
    x[i] = 0;
}

/// Primitive isotropic vectors in `[-bound, bound]^n`, sign-normalized, sorted.
pub fn isotropic_box(g: &Mat, bound: i128) -> Vec<Vec<i128>> {
    let n = g.len();
    let mut out = Vec::new();
    let mut x = vec![0i128; n];
    // lin[j] = sum_{i < depth} x_i g_ij, quad = q of the prefix
    let mut lin = vec![vec![0i128; n]; n + 1];
    iso_rec(g, bound, 0, &mut x, &mut lin, 0, &mut out);
    out.sort();
    out
}

fn iso_rec(
    g: &Mat,
    bound: i128,
    depth: usize,
    x: &mut Vec<i128>,
    lin: &mut Vec<Vec<i128>>,
    quad: i128,
    out: &mut Vec<Vec<i128>>,
) {
    let n = x.len();
    if depth == n - 1 {
        let k = n - 1;
        for v in -bound..=bound {
            let q = quad + 2 * v * lin[depth][k] + v * v * g[k][k];
            if q == 0 {
                x[k] = v;
                let c = content(x);
                if c == 1 && x.iter().find(|&&w| w != 0).is_some_and(|&w| w > 0) {
                    out.push(x.clone());
                }
            }
        }
        x[k] = 0;
        return;
    }
    for v in -bound..=bound {
        x[depth] = v;
        let q = quad + 2 * v * lin[depth][depth] + v * v * g[depth][depth];
        for j in 0..n {
            lin[depth + 1][j] = lin[depth][j] + v * g[depth][j];
        }
        iso_rec(g, bound, depth + 1, x, lin, q, out);
    }
    x[depth] = 0;
}

/// Column operations on a single row `w` until it reads `(gcd, 0, ..., 0)`.
/// Returns the unimodular column matrix `u` and its inverse.
fn clear_row(w: &[i128]) -> (Mat, Mat) {
    let n = w.len();
    let mut w = w.to_vec();
    let mut u: Mat = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut uinv = u.clone();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&j| w[j] != 0).collect();
        if nz.len() <= 1 {
            if let Some(&j) = nz.first() {
                if j != 0 {
                    w.swap(0, j);
                    for r in u.iter_mut() {
                        r.swap(0, j);
                    }
                    uinv.swap(0, j);
                }
            }
            return (u, uinv);
        }
        let p = *nz.iter().min_by_key(|&&j| w[j].abs()).unwrap();
        for &j in &nz {
            if j == p {
                continue;
            }
            let k = w[j] / w[p];
            // column j -= k column p; the inverse picks up row p += k row j
            w[j] -= k * w[p];
            for r in u.iter_mut() {
                r[j] -= k * r[p];
            }
            for c in 0..n {
                let add = k * uinv[j][c];
                uinv[p][c] += add;
            }
        }
    }
}

fn mat_vec(m: &Mat, x: &[i128]) -> Vec<i128> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Gram matrix of `e⊥ / Ze` for primitive isotropic `e`, built from a kernel
/// basis obtained by gcd column operations.
pub fn quotient_gram(g: &Mat, e: &[i128]) -> Mat {
    let n = g.len();
    let w = mat_vec(g, e);
    let (u, uinv) = clear_row(&w);
    // kernel basis: columns 1..n of u
    let kernel: Vec<Vec<i128>> = (1..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect();
    let coords = mat_vec(&uinv, e);
    assert_eq!(coords[0], 0, "e lies in its own complement");
    let c: Vec<i128> = coords[1..].to_vec();
    // basis of Z^(n-1) whose first column is c: clear_row on c as a row gives
    // columns with c^T u2 = (±1, 0, ...); the inverse's first row is then ±c
    let (_, u2inv) = clear_row(&c);
    let m = n - 1;
    // rows 1.. of u2inv span a complement of c
    let comp: Vec<Vec<i128>> = (1..m)
        .map(|r| {
            let coeffs = &u2inv[r];
            (0..n)
                .map(|i| (0..m).map(|k| coeffs[k] * kernel[k][i]).sum())
                .collect()
        })
        .collect();
    comp.iter()
        .map(|a| comp.iter().map(|b| form(g, a, b)).collect())
        .collect()
}

/// Pairwise size reduction until `2|a_ij| <= a_jj` for all `i != j`.
fn pairwise_reduce(a: &mut Mat) {
    let n = a.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j || 2 * a[i][j].abs() <= a[j][j] {
                    continue;
                }
                let k = (2 * a[i][j] + a[j][j]).div_euclid(2 * a[j][j]);
                // b_i -= k b_j
                for c in 0..n {
                    let v = a[j][c];
                    a[i][c] -= k * v;
                }
                for r in 0..n {
                    let v = a[r][j];
                    a[r][i] -= k * v;
                }
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// All `x` with `x^T a x = t`, by depth-first search on a floating LDL with
/// slack; every hit is verified exactly.
pub fn short_vectors(a: &Mat, t: i128) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    visit_short_vectors(a, t, &mut |x| {
        out.push(x.to_vec());
        true
    });
    out
}

/// Calls `visit` on each solution until it returns `false`.
pub fn visit_short_vectors(a: &Mat, t: i128, visit: &mut dyn FnMut(&[i128]) -> bool) {
    let n = a.len();
    let af: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let mut l = vec![vec![0f64; n]; n];
    let mut d = vec![0f64; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = af[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = s / d[j];
        }
        let mut s = af[i][i];
        for k in 0..i {
            s -= l[i][k] * l[i][k] * d[k];
        }
        d[i] = s;
    }
    let mut x = vec![0i128; n];
    fp_rec(a, &l, &d, t, n, t as f64, &mut x, visit);
}

#[allow(clippy::too_many_arguments)]
fn fp_rec(
    a: &Mat,
    l: &[Vec<f64>],
    d: &[f64],
    t: i128,
    level: usize,
    rem: f64,
    x: &mut Vec<i128>,
    visit: &mut dyn FnMut(&[i128]) -> bool,
) -> bool {
    if level == 0 {
        return form(a, x, x) != t || visit(x);
    }
    let i = level - 1;
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| l[j][i] * x[j] as f64).sum::<f64>();
    let half = (rem.max(0.0) / d[i]).sqrt() + 1e-6;
    let lo = (center - half).ceil() as i128;
    let hi = (center + half).floor() as i128;
    for v in lo..=hi {
        let diff = v as f64 - center;
        let used = d[i] * diff * diff;
        if used > rem + 1e-6 {
            continue;
        }
        x[i] = v;
        if !fp_rec(a, l, d, t, i, rem - used, x, visit) {
            x[i] = 0;
            return false;
        }
    }
    x[i] = 0;
    true
}

/// Rank over Q by gcd-normalized elimination.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for (p, b) in &basis {
            if v[*p] != 0 {
                let (x, y) = (b[*p], v[*p]);
                for k in 0..v.len() {
                    v[k] = v[k] * x - b[k] * y;
                }
                let c = content(&v);
                if c > 1 {
                    v.iter_mut().for_each(|t| *t /= c);
                }
            }
        }
        if let Some(p) = v.iter().position(|&t| t != 0) {
            basis.push((p, v));
        }
    }
    basis.len()
}

/// Verdict data for `e`: `(rank_perp, rank_perp_two, infinite)`, or `None`
/// when `e⊥ / Ze` is not negative definite.
pub fn fibration_oracle(g: &Mat, e: &[i128]) -> Option<(usize, usize, bool)> {
    let n = g.len();
    let q = quotient_gram(g, e);
    let mut a: Mat = q.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    if !is_positive_definite(&a) {
        return None;
    }
    pairwise_reduce(&mut a);
    let m = a.len();
    let mut roots: Vec<Vec<i128>> = Vec::new();
    let mut root_rank = 0;
    visit_short_vectors(&a, 2, &mut |x| {
        roots.push(x.to_vec());
        root_rank = rank(&roots);
        if roots.len() > root_rank {
            roots.pop();
        }
        root_rank < m
    });
    let rank_perp = n - 1;
    let rank_perp_two = 1 + root_rank;
    Some((rank_perp, rank_perp_two, rank_perp_two < rank_perp))
}

/// Euler's totient by trial division.
pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k as i128, n as i128) == 1).count() as u64
}

/// Coefficients of the n-th cyclotomic polynomial by dividing `x^n - 1` by
/// `Phi_d` for proper divisors `d`.
pub fn cyclotomic(n: u64) -> Vec<i128> {
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = divide_monic(&p, &cyclotomic(d));
        }
    }
    p
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dv) in den.iter().enumerate() {
            rem[k + j] -= c * dv;
        }
    }
    assert!(rem.iter().all(|&v| v == 0));
    quot
}

/// Largest real root above 1 by floating bisection, for cross-checks.
pub fn float_root_above_one(coeffs: &[i128]) -> f64 {
    let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
    let mut hi = 1.0 + coeffs.iter().map(|c| c.abs() as f64).fold(0.0, f64::max);
    // walk down to bracket the largest root
    let mut lo = hi;
    let step = 1e-3;
    let s_hi = eval(hi).signum();
    while lo > 1.0 && eval(lo).signum() == s_hi {
        lo -= step;
    }
    hi = lo + step;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid).signum() == eval(hi).signum() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
