//! Short vectors of definite forms, reflections and Weyl-chamber walks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeVector, Sublattice};
use crate::linalg::{
    self, enumerate_ellipsoid, ldl, lll_transform, lll_transform_checked, rational_inverse, row_space_rref, solve_affine,
    IntMatrix, Visit,
};

type Q = BigRational;

/// Vectors of one norm, one representative per sign pair, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<LatticeVector>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Reflections applied to `h`, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkResult {
    pub final_vector: LatticeVector,
    pub word: Vec<LatticeVector>,
    pub steps: usize,
}

/// All `x` with `x^T gram x = target` for a negative definite `gram`, up to sign.
/// Coordinates are with respect to the basis of `gram`.
pub fn norm_vectors_of_gram(gram: &IntMatrix, target: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    check_target(target)?;
    let mut out = Vec::new();
    for_each_norm_vector(gram, target, &mut |x| {
        out.push(x.to_vec());
        Visit::Continue
    })?;
    out.sort();
    Ok(out)
}

/// Calls `visit` on one representative of each sign pair of norm-`target`
/// vectors, in unspecified order. Returns `false` if stopped early.
pub fn for_each_norm_vector(
    gram: &IntMatrix,
    target: &BigInt,
    visit: &mut dyn FnMut(&[BigInt]) -> Visit,
) -> Result<bool> {
    let n = gram.nrows();
    let pos = gram.neg();
    if n == 0 {
        return Ok(true);
    }
    let t = lll_transform_checked(&pos).ok_or(Error::NotNegativeDefinite)?;
    let reduced = t.congruence(&pos);
    let f = ldl(&reduced).expect("reduction keeps definiteness");
    let radius = Q::from_integer(-target);
    let center = vec![Q::zero(); n];
    let done = enumerate_ellipsoid(&f, &center, &radius, &mut |y, value| {
        if value != &radius {
            return Visit::Continue;
        }
        let mut x = t.vec_mul(y);
        if first_nonzero_negative(&x) {
            return Visit::Continue;
        }
        linalg::normalize_sign(&mut x);
        visit(&x)
    });
    Ok(done)
}

fn first_nonzero_negative(x: &[BigInt]) -> bool {
    x.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative)
}

fn check_target(target: &BigInt) -> Result<()> {
    if !target.is_negative() || target.is_odd() {
        return Err(Error::BadTargetNorm(target.to_string()));
    }
    Ok(())
}

/// Norm-`target` vectors of a negative definite lattice.
pub fn enumerate_norm_vectors(l: &Lattice, target: &BigInt) -> Result<RootSet> {
    let roots = norm_vectors_of_gram(l.gram(), target)?;
    Ok(RootSet {
        roots: roots.into_iter().map(LatticeVector).collect(),
    })
}

/// Norm-`target` vectors of a negative definite sublattice, in ambient coordinates.
pub fn enumerate_norm_vectors_in(l: &Lattice, s: &Sublattice, target: &BigInt) -> Result<RootSet> {
    let local = norm_vectors_of_gram(&l.sublattice_gram(s), target)?;
    let mut roots: Vec<LatticeVector> = local
        .iter()
        .map(|y| {
            let mut x = s.basis().vec_mul(y);
            linalg::normalize_sign(&mut x);
            LatticeVector(x)
        })
        .collect();
    roots.sort();
    Ok(RootSet { roots })
}

/// Sublattice of `s` generated by its (-2)-vectors.
pub fn root_sublattice(l: &Lattice, s: &Sublattice) -> Result<Sublattice> {
    let roots = enumerate_norm_vectors_in(l, s, &BigInt::from(-2))?;
    Ok(Sublattice::span_vectors(l.dim(), &roots.roots))
}

/// Rank of the root sublattice of a negative definite Gram matrix, stopping as
/// soon as the rank is full.
pub fn root_rank(gram: &IntMatrix) -> Result<usize> {
    let n = gram.nrows();
    if n == 0 {
        return Ok(0);
    }
    let pos = gram.neg();
    // rank is invariant under the change of basis, and reduced bases often
    // consist of roots already
    let t = lll_transform_checked(&pos).ok_or(Error::NotNegativeDefinite)?;
    let reduced = t.congruence(&pos);
    let two = BigInt::from(2);
    let mut span: Vec<Vec<Q>> = (0..n)
        .filter(|&i| reduced[(i, i)] == two)
        .map(|i| (0..n).map(|j| Q::from_integer(BigInt::from(u8::from(i == j)))).collect())
        .collect();
    if span.len() == n {
        return Ok(n);
    }
    for_each_norm_vector(&reduced.neg(), &-two, &mut |x| {
        let mut rows = span.clone();
        rows.push(x.iter().map(|v| Q::from_integer(v.clone())).collect());
        let reduced = row_space_rref(&rows);
        if reduced.len() > span.len() {
            span = reduced;
        }
        if span.len() == n {
            Visit::Stop
        } else {
            Visit::Continue
        }
    })?;
    Ok(span.len())
}

fn require_root(l: &Lattice, delta: &LatticeVector) -> Result<()> {
    let q = l.norm(delta)?;
    if q != BigInt::from(-2) {
        return Err(Error::NotARoot(q.to_string()));
    }
    Ok(())
}

/// `x + (x, delta) delta`.
pub fn reflect(l: &Lattice, delta: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
    require_root(l, delta)?;
    l.check_vector(x)?;
    let c = l.inner_unchecked(x.coords(), delta.coords());
    Ok(x.add(&delta.scaled(&c)))
}

/// Matrix of the reflection in `delta` (columns are images of basis vectors).
pub fn reflection_matrix(l: &Lattice, delta: &LatticeVector) -> Result<IntMatrix> {
    require_root(l, delta)?;
    let n = l.dim();
    let row = l.pairing_row(delta.coords());
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += &delta.coords()[i] * &row[j];
        }
    }
    Ok(m)
}

/// Integer solutions `x` of `q(x) = target` subject to `(a_i, x) = c_i` for
/// each constraint, assuming the form is negative definite on the common
/// kernel of the constraints. Results are sorted.
pub(crate) fn constrained_norm_vectors(
    l: &Lattice,
    constraints: &[&[BigInt]],
    values: &[BigInt],
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    let n = l.dim();
    let rows: Vec<Vec<BigInt>> = constraints.iter().map(|a| l.pairing_row(a)).collect();
    let m = IntMatrix::from_row_vecs(n, rows);
    let Some((x0, kernel)) = solve_affine(&m, values) else {
        return Vec::new();
    };
    let q0 = l.inner_unchecked(&x0, &x0);
    let k = kernel.nrows();
    if k == 0 {
        return if &q0 == target { vec![x0] } else { Vec::new() };
    }
    // q(x0 + y K) = q0 + 2 y.g - y^T A y with A = -K G K^T.
    let a = kernel.congruence(l.gram()).neg();
    let t = lll_transform(&a);
    let basis = t.mul(&kernel);
    let a = basis.congruence(l.gram()).neg();
    let g = basis.mul_vec(&l.pairing_row(&x0));
    let ainv = rational_inverse(&a).expect("definite block is invertible");
    let gq: Vec<Q> = g.iter().map(|v| Q::from_integer(v.clone())).collect();
    let center: Vec<Q> = ainv
        .iter()
        .map(|row| row.iter().zip(&gq).map(|(x, y)| x * y).sum())
        .collect();
    let gag: Q = gq.iter().zip(&center).map(|(x, y)| x * y).sum();
    let radius = Q::from_integer(q0 - target) + gag;
    let f = ldl(&a).expect("form must be negative definite on the constraint kernel");
    let mut out = Vec::new();
    enumerate_ellipsoid(&f, &center, &radius, &mut |y, value| {
        if value == &radius {
            let shift = basis.vec_mul(y);
            out.push(x0.iter().zip(&shift).map(|(a, b)| a + b).collect());
        }
        Visit::Continue
    });
    out.sort();
    out
}

/// A root `delta` with `(x, delta) < 0 <= (reference, delta)`, chosen with the
/// smallest `|(x, delta)|` and then the lexicographically smallest coordinates.
/// `x` must satisfy `q(x) >= 0` and lie in the cone component of `reference`.
/// Hitting a root orthogonal to `reference` raises `OnWall`.
pub fn first_violating_root(
    l: &Lattice,
    x: &LatticeVector,
    reference: &LatticeVector,
) -> Result<Option<LatticeVector>> {
    let a = l.norm(x)?;
    let r = l.norm(reference)?;
    let b = l.inner(x, reference)?;
    let disc = &b * &b - &a * &r;
    if disc.is_zero() {
        // x is a positive multiple of the reference.
        return Ok(None);
    }
    let bound = BigInt::from(2) * &disc;
    let minus_two = BigInt::from(-2);
    let mut c = BigInt::from(-1);
    while &r * &c * &c <= bound {
        let abs_c = -&c;
        let mut found: Vec<Vec<BigInt>> = Vec::new();
        let mut cp = BigInt::zero();
        loop {
            let lhs = &r * &c * &c + BigInt::from(2) * &b * &abs_c * &cp + &a * &cp * &cp;
            if lhs > bound {
                break;
            }
            let sols = constrained_norm_vectors(
                l,
                &[x.coords(), reference.coords()],
                &[c.clone(), cp.clone()],
                &minus_two,
            );
            if cp.is_zero() {
                if let Some(delta) = sols.into_iter().next() {
                    return Err(Error::OnWall(format!("{:?}", LatticeVector(delta))));
                }
            } else {
                found.extend(sols);
            }
            cp += 1;
        }
        if let Some(best) = found.into_iter().min() {
            return Ok(Some(LatticeVector(best)));
        }
        c -= 1;
    }
    Ok(None)
}

/// Reflects `h` until no root separates it from the chamber of `reference`.
pub fn weyl_walk(
    l: &Lattice,
    h: &LatticeVector,
    reference: &LatticeVector,
    budget: usize,
) -> Result<WalkResult> {
    l.require_hyperbolic()?;
    let qh = l.norm(h)?;
    if !qh.is_positive() {
        return Err(Error::NotPositive(qh.to_string()));
    }
    let qr = l.norm(reference)?;
    if !qr.is_positive() {
        return Err(Error::NotPositive(qr.to_string()));
    }
    if !l.inner(h, reference)?.is_positive() {
        return Err(Error::OppositeCones);
    }
    walk_from(l, h, reference, budget)
}

pub(crate) fn walk_from(
    l: &Lattice,
    h: &LatticeVector,
    reference: &LatticeVector,
    budget: usize,
) -> Result<WalkResult> {
    let mut current = h.clone();
    let mut word = Vec::new();
    while let Some(delta) = first_violating_root(l, &current, reference)? {
        if word.len() == budget {
            return Err(Error::BudgetExceeded { budget });
        }
        current = reflect(l, &delta, &current)?;
        word.push(delta);
    }
    let steps = word.len();
    Ok(WalkResult {
        final_vector: current,
        word,
        steps,
    })
}

/// Applies the reflections of `word` to `x`, in order.
pub fn replay(l: &Lattice, word: &[LatticeVector], x: &LatticeVector) -> Result<LatticeVector> {
    word.iter().try_fold(x.clone(), |acc, delta| reflect(l, delta, &acc))
}

/// True when `x` pairs nonnegatively with every root in the chamber of `reference`.
pub fn is_in_chamber_closure(
    l: &Lattice,
    x: &LatticeVector,
    reference: &LatticeVector,
) -> Result<bool> {
    Ok(first_violating_root(l, x, reference)?.is_none())
}
