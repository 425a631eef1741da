//! Even nondegenerate integer lattices, their sublattices and discriminant groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, hnf, inertia, integer_kernel, smith_invariants, IntMatrix};

/// Coordinates of a lattice element in the lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(linalg::to_big(coords))
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        linalg::content(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn primitive_part(&self) -> LatticeVector {
        LatticeVector(linalg::primitive_part(&self.0))
    }

    /// Representative of `±self` whose first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> LatticeVector {
        let mut v = self.0.clone();
        linalg::normalize_sign(&mut v);
        LatticeVector(v)
    }

    pub fn scaled(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVector(v)
    }
}

/// An even, nondegenerate integral lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    det: BigInt,
    signature: (usize, usize),
}

impl Lattice {
    /// Validates symmetry, evenness and nondegeneracy, and caches the signature.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.nrows(),
                cols: gram.ncols(),
            });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        if let Some(index) = (0..gram.nrows()).find(|&i| gram[(i, i)].is_odd()) {
            return Err(Error::OddDiagonal { index });
        }
        let det = gram.det();
        if det.is_zero() {
            return Err(Error::Degenerate);
        }
        let (pos, neg, _) = inertia(&gram);
        Ok(Lattice {
            gram,
            det,
            signature: (pos, neg),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// `(n_plus, n_minus)`.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Signature `(1, t)` with `t > 0`.
    pub fn is_hyperbolic(&self) -> bool {
        self.signature.0 == 1 && self.signature.1 > 0
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic() {
            Ok(())
        } else {
            Err(Error::NotHyperbolic(self.signature.0, self.signature.1))
        }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature.0 == 0
    }

    pub fn check_vector(&self, x: &LatticeVector) -> Result<()> {
        if x.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            })
        }
    }

    /// `x^T G y`.
    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.inner_unchecked(x.coords(), y.coords()))
    }

    pub(crate) fn inner_unchecked(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        linalg::dot(x, &gy)
    }

    pub fn norm(&self, x: &LatticeVector) -> Result<BigInt> {
        self.inner(x, x)
    }

    /// The linear form `(x, .)` as a coordinate row, i.e. `G x`.
    pub fn pairing_row(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.gram.mul_vec(x)
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let factors = smith_invariants(&self.gram)
            .into_iter()
            .filter(|f| !f.is_one())
            .collect();
        DiscriminantGroup {
            invariant_factors: factors,
        }
    }

    /// Whether `L^*/L` is `(Z/p)^k`; when it is and `k = 2 sigma`, also returns sigma.
    pub fn p_elementary_analysis(&self, p: u64) -> Result<(bool, Option<usize>)> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let disc = self.discriminant_group();
        let pb = BigInt::from(p);
        let elementary = disc.invariant_factors.iter().all(|f| f == &pb);
        let k = disc.invariant_factors.len();
        let sigma = (elementary && k % 2 == 0).then_some(k / 2);
        Ok((elementary, sigma))
    }

    /// `{x in L : (x, s) = 0 for all s in S}`, always primitive.
    pub fn orthogonal_complement(&self, s: &Sublattice) -> Sublattice {
        let pairing = s.basis.mul(&self.gram);
        Sublattice::from_hnf(self.dim(), integer_kernel(&pairing), true)
    }

    /// `L ∩ (S ⊗ Q)`.
    pub fn primitive_closure(&self, s: &Sublattice) -> Sublattice {
        saturate(self.dim(), &s.basis)
    }

    /// `[L : S]` when `S` has full rank.
    pub fn embedding_index(&self, s: &Sublattice) -> EmbeddingIndex {
        if s.rank() < self.dim() {
            return EmbeddingIndex::Infinite;
        }
        let ds = self.sublattice_gram(s).det().abs();
        let dl = self.det.abs();
        let (ratio, rem) = ds.div_rem(&dl);
        assert!(rem.is_zero(), "sublattice determinant not a multiple of the lattice's");
        let index = ratio.sqrt();
        assert_eq!(&index * &index, ratio, "determinant ratio is not a square");
        debug_assert_eq!(index, s.basis.det().abs());
        EmbeddingIndex::Finite(index)
    }

    /// Gram matrix of the sublattice basis, `B G B^T`.
    pub fn sublattice_gram(&self, s: &Sublattice) -> IntMatrix {
        s.basis.congruence(&self.gram)
    }

    /// Whether the restriction of the form to `s` is negative definite.
    pub fn is_negative_definite_on(&self, s: &Sublattice) -> bool {
        let g = self.sublattice_gram(s);
        inertia(&g).1 == g.nrows()
    }

    /// Applies a matrix (columns are images of basis vectors) to `x`.
    pub fn apply(m: &IntMatrix, x: &LatticeVector) -> LatticeVector {
        LatticeVector(m.mul_vec(x.coords()))
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.dim();
        let m = other.dim();
        let mut g = IntMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[(n + i, n + j)] = other.gram[(i, j)].clone();
            }
        }
        Lattice::new(g).expect("direct sum of valid lattices is valid")
    }
}

/// `Finite(index)` or `Infinite` (rank deficit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingIndex {
    Finite(BigInt),
    Infinite,
}

/// `L^*/L` as a list of invariant factors `d_1 | d_2 | ...`, all at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

/// A sublattice of `Z^dim`, stored by its row HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    dim: usize,
    basis: IntMatrix,
    primitive: bool,
}

impl Sublattice {
    /// The sublattice generated by arbitrary (possibly dependent) vectors.
    pub fn span(dim: usize, generators: &[Vec<BigInt>]) -> Self {
        if generators.is_empty() {
            return Self::zero(dim);
        }
        let m = IntMatrix::from_row_vecs(dim, generators.to_vec());
        let h = hnf(&m);
        let primitive = is_saturated(&h);
        Sublattice {
            dim,
            basis: h,
            primitive,
        }
    }

    pub fn span_vectors(dim: usize, generators: &[LatticeVector]) -> Self {
        let g: Vec<Vec<BigInt>> = generators.iter().map(|v| v.0.clone()).collect();
        Self::span(dim, &g)
    }

    /// Requires linearly independent rows.
    pub fn from_basis(basis: IntMatrix) -> Result<Self> {
        let dim = basis.ncols();
        let h = hnf(&basis);
        if h.nrows() < basis.nrows() {
            return Err(Error::DependentBasis);
        }
        let primitive = is_saturated(&h);
        Ok(Sublattice {
            dim,
            basis: h,
            primitive,
        })
    }

    pub(crate) fn from_hnf(dim: usize, basis: IntMatrix, primitive: bool) -> Self {
        debug_assert_eq!(basis.ncols(), dim);
        Sublattice {
            dim,
            basis,
            primitive,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Sublattice {
            dim,
            basis: IntMatrix::zeros(0, dim),
            primitive: true,
        }
    }

    pub fn full(dim: usize) -> Self {
        Sublattice {
            dim,
            basis: IntMatrix::identity(dim),
            primitive: true,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis.rows().map(|r| LatticeVector(r.to_vec())).collect()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Integral membership.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero);
        }
        linalg::solve_affine(&self.basis.transpose(), v).is_some()
    }

    /// Membership in the rational span.
    pub fn contains_rational(&self, v: &[BigInt]) -> bool {
        let mut rows = self.basis.to_rows();
        rows.push(v.to_vec());
        linalg::rank(&IntMatrix::from_row_vecs(self.dim, rows)) == self.rank()
    }

    pub fn is_subset_of(&self, other: &Sublattice) -> bool {
        self.basis.rows().all(|r| other.contains(r))
    }
}

/// Primitive closure of the row span of `basis` in `Z^dim`.
pub(crate) fn saturate(dim: usize, basis: &IntMatrix) -> Sublattice {
    if basis.nrows() == 0 {
        return Sublattice::zero(dim);
    }
    let annihilator = integer_kernel(basis);
    Sublattice::from_hnf(dim, integer_kernel(&annihilator), true)
}

/// `A ∩ B` for primitive sublattices; the result is primitive.
pub fn primitive_intersection(a: &Sublattice, b: &Sublattice) -> Sublattice {
    assert_eq!(a.dim, b.dim);
    let dim = a.dim;
    let ka = integer_kernel(&a.basis);
    let kb = integer_kernel(&b.basis);
    let mut rows = ka.to_rows();
    rows.extend(kb.to_rows());
    if rows.is_empty() {
        return Sublattice::full(dim);
    }
    Sublattice::from_hnf(dim, integer_kernel(&IntMatrix::from_row_vecs(dim, rows)), true)
}

fn is_saturated(h: &IntMatrix) -> bool {
    h.nrows() == 0 || smith_invariants(h).iter().all(One::is_one)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Small standard lattices used by the corpus and tests.
pub mod catalog {
    use super::Lattice;
    use crate::linalg::IntMatrix;

    /// The hyperbolic plane `U`.
    pub fn u() -> Lattice {
        Lattice::from_i64(&[&[0, 1], &[1, 0]]).unwrap()
    }

    /// Rank one lattice `<k>`; `k` must be even and nonzero.
    pub fn rank_one(k: i64) -> Lattice {
        Lattice::from_i64(&[&[k]]).unwrap()
    }

    pub fn a2_neg() -> Lattice {
        Lattice::from_i64(&[&[-2, 1], &[1, -2]]).unwrap()
    }

    /// `E8(-1)`: a chain of seven nodes with the eighth attached to the third.
    pub fn e8_neg() -> Lattice {
        let cartan: [[i64; 8]; 8] = [
            [2, -1, 0, 0, 0, 0, 0, 0],
            [-1, 2, -1, 0, 0, 0, 0, 0],
            [0, -1, 2, -1, 0, 0, 0, -1],
            [0, 0, -1, 2, -1, 0, 0, 0],
            [0, 0, 0, -1, 2, -1, 0, 0],
            [0, 0, 0, 0, -1, 2, -1, 0],
            [0, 0, 0, 0, 0, -1, 2, 0],
            [0, 0, -1, 0, 0, 0, 0, 2],
        ];
        let rows: Vec<Vec<i64>> = cartan.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Lattice::new(IntMatrix::from_rows(&rows).unwrap()).unwrap()
    }

    pub fn u_plus(other: &Lattice) -> Lattice {
        u().direct_sum(other)
    }
}
