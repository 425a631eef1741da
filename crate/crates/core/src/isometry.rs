//! Lattice isometries: validation, cone orientation, characteristic
//! polynomials and the stable-subspace dichotomy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::{row_space_rref, IntMatrix};
use crate::registry::{Named, Registry};
use crate::salem::{strip_cyclotomic, IntPolynomial};

type Q = BigRational;

/// An integral matrix preserving the form; columns are images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    matrix: IntMatrix,
    det: i8,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: IntMatrix::identity(n),
            det: 1,
        }
    }

    /// For matrices already known to be isometries (products, inverses).
    #[cfg(test)]
    pub(crate) fn trusted(matrix: IntMatrix, det: i8) -> Self {
        Isometry { matrix, det }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: self.matrix.mul(&other.matrix),
            det: self.det * other.det,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self
            .matrix
            .unimodular_inverse()
            .expect("isometries are unimodular");
        Isometry {
            matrix: inv,
            det: self.det,
        }
    }

    pub fn pow(&self, k: u64) -> Isometry {
        Isometry {
            matrix: self.matrix.pow(&BigInt::from(k)),
            det: if k % 2 == 0 { 1 } else { self.det },
        }
    }

    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        LatticeVector(self.matrix.mul_vec(x.coords()))
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

pub fn validate_isometry(l: &Lattice, m: &IntMatrix) -> Result<Isometry> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: m.nrows(),
        });
    }
    if &m.transpose().congruence(l.gram()) != l.gram() {
        return Err(Error::NotFormPreserving);
    }
    let d = m.det();
    let det = if d.is_one() {
        1
    } else if d == BigInt::from(-1) {
        -1
    } else {
        return Err(Error::NotUnimodular(d.to_string()));
    };
    Ok(Isometry {
        matrix: m.clone(),
        det,
    })
}

fn require_reference(l: &Lattice, h: &LatticeVector) -> Result<()> {
    if !l.norm(h)?.is_positive() {
        return Err(Error::ReferenceNotPositive);
    }
    Ok(())
}

/// Whether `g` maps the cone component of `h_ref` to itself.
pub fn preserves_positive_cone(l: &Lattice, g: &Isometry, h_ref: &LatticeVector) -> Result<bool> {
    require_reference(l, h_ref)?;
    Ok(l.inner(&g.apply(h_ref), h_ref)?.is_positive())
}

pub fn in_so_plus(l: &Lattice, g: &Isometry, h_ref: &LatticeVector) -> Result<bool> {
    let cone = preserves_positive_cone(l, g, h_ref)?;
    Ok(g.det == 1 && cone)
}

/// A method for `det(tI - m)`.
pub trait CharPolyMethod: Named + Send + Sync {
    fn char_poly(&self, m: &IntMatrix) -> IntPolynomial;
}

/// Faddeev-LeVerrier with exact integer division.
pub struct FaddeevLeVerrier;

impl Named for FaddeevLeVerrier {
    fn name(&self) -> &'static str {
        "faddeev-leverrier"
    }
}

impl CharPolyMethod for FaddeevLeVerrier {
    fn char_poly(&self, a: &IntMatrix) -> IntPolynomial {
        let n = a.nrows();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = a.mul(&m);
            for i in 0..n {
                m[(i, i)] += &coeffs[n - k + 1];
            }
            let tr = a.mul(&m).trace();
            let (q, r) = tr.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[n - k] = -q;
        }
        IntPolynomial::new(coeffs)
    }
}

/// Berkowitz's division-free algorithm.
pub struct Berkowitz;

impl Named for Berkowitz {
    fn name(&self) -> &'static str {
        "berkowitz"
    }
}

impl CharPolyMethod for Berkowitz {
    fn char_poly(&self, a: &IntMatrix) -> IntPolynomial {
        let n = a.nrows();
        if n == 0 {
            return IntPolynomial::one();
        }
        // highest degree first
        let mut v = vec![BigInt::one(), -a[(0, 0)].clone()];
        for r in 1..n {
            let row: Vec<BigInt> = (0..r).map(|j| a[(r, j)].clone()).collect();
            let mut col: Vec<BigInt> = (0..r).map(|i| a[(i, r)].clone()).collect();
            let mut t = vec![BigInt::one(), -a[(r, r)].clone()];
            for _ in 0..r {
                let s: BigInt = row.iter().zip(&col).map(|(x, y)| x * y).sum();
                t.push(-s);
                col = (0..r)
                    .map(|i| (0..r).map(|j| &a[(i, j)] * &col[j]).sum())
                    .collect();
            }
            let mut next = vec![BigInt::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate().take(i + 1) {
                    *slot += &t[i - j] * vj;
                }
            }
            v = next;
        }
        v.reverse();
        IntPolynomial::new(v)
    }
}

pub fn char_poly_methods() -> Registry<dyn CharPolyMethod> {
    let mut r: Registry<dyn CharPolyMethod> = Registry::new("char-poly method", "faddeev-leverrier");
    r.register(Box::new(FaddeevLeVerrier));
    r.register(Box::new(Berkowitz));
    r
}

pub fn char_poly(g: &Isometry) -> IntPolynomial {
    FaddeevLeVerrier.char_poly(&g.matrix)
}

/// `Some(order)` for isometries of finite order, `None` otherwise.
///
/// A non-cyclotomic factor forces infinite order. Otherwise every eigenvalue
/// is a root of unity of order dividing `L = lcm` of the cyclotomic indices,
/// and `g` has finite order iff `g^L = I`.
pub fn finite_order(g: &Isometry) -> Option<u64> {
    let (factors, rest) = strip_cyclotomic(&char_poly(g)).expect("char polys are monic");
    if !rest.is_one() {
        return None;
    }
    let l = factors.iter().fold(1u64, |acc, &(n, _)| acc.lcm(&n));
    if !g.pow(l).is_identity() {
        return None;
    }
    let mut divisors: Vec<u64> = (1..=l).filter(|d| l % d == 0).collect();
    divisors.sort_unstable();
    divisors.into_iter().find(|&d| g.pow(d).is_identity())
}

/// A rational subspace, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpan {
    basis: Vec<Vec<Q>>,
}

impl SubspaceSpan {
    pub fn new(vectors: &[Vec<Q>]) -> Result<Self> {
        let basis = row_space_rref(vectors);
        if basis.len() < vectors.len() {
            return Err(Error::DependentSubspace);
        }
        Ok(SubspaceSpan { basis })
    }

    pub fn from_integer_vectors(vectors: &[Vec<BigInt>]) -> Result<Self> {
        let q: Vec<Vec<Q>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect();
        Self::new(&q)
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        row_space_rref(&rows).len() == self.basis.len()
    }
}

/// `span{x, gx, g^2 x, ...}`.
pub fn krylov_subspace(g: &Isometry, x: &LatticeVector) -> SubspaceSpan {
    let mut vectors: Vec<Vec<BigInt>> = Vec::new();
    let mut cur = x.coords().to_vec();
    loop {
        let mut trial = vectors.clone();
        trial.push(cur.clone());
        if SubspaceSpan::from_integer_vectors(&trial).is_err() {
            break;
        }
        vectors = trial;
        cur = g.matrix.mul_vec(&cur);
    }
    SubspaceSpan::from_integer_vectors(&vectors).expect("independent by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    InPerp,
    ContainsE,
    Both,
    NotStable,
    CounterexampleToTheorem,
}

impl StabilityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityVerdict::InPerp => "InPerp",
            StabilityVerdict::ContainsE => "ContainsE",
            StabilityVerdict::Both => "Both",
            StabilityVerdict::NotStable => "NotStable",
            StabilityVerdict::CounterexampleToTheorem => "CounterexampleToTheorem",
        }
    }
}

fn apply_q(m: &IntMatrix, v: &[Q]) -> Vec<Q> {
    (0..m.nrows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .map(|(a, b)| Q::from_integer(a.clone()) * b)
                .sum()
        })
        .collect()
}

/// Classifies a `g`-stable subspace `V` relative to the fixed isotropic `e`:
/// either `V ⊂ e⊥` or `e ∈ V`. Only meaningful on hyperbolic lattices; on
/// `U⊕U` the transvection along an isotropic `v ⊥ e` has stable planes
/// meeting neither condition.
pub fn stable_subspace_dichotomy(
    l: &Lattice,
    g: &Isometry,
    e: &LatticeVector,
    v: &SubspaceSpan,
) -> Result<StabilityVerdict> {
    l.require_hyperbolic()?;
    l.check_vector(e)?;
    if &g.apply(e) != e {
        return Err(Error::DoesNotFixE);
    }
    if let Some(order) = finite_order(g) {
        return Err(Error::FiniteOrder(order.to_string()));
    }
    let mut rows = v.basis.clone();
    rows.extend(v.basis.iter().map(|b| apply_q(&g.matrix, b)));
    if row_space_rref(&rows).len() != v.dim() {
        return Ok(StabilityVerdict::NotStable);
    }
    let ge: Vec<Q> = l
        .pairing_row(e.coords())
        .into_iter()
        .map(Q::from_integer)
        .collect();
    let in_perp = v
        .basis
        .iter()
        .all(|b| b.iter().zip(&ge).map(|(x, y)| x * y).sum::<Q>().is_zero());
    let eq: Vec<Q> = e.coords().iter().map(|x| Q::from_integer(x.clone())).collect();
    let contains_e = v.contains(&eq);
    Ok(match (in_perp, contains_e) {
        (true, true) => StabilityVerdict::Both,
        (true, false) => StabilityVerdict::InPerp,
        (false, true) => StabilityVerdict::ContainsE,
        (false, false) => StabilityVerdict::CounterexampleToTheorem,
    })
}
