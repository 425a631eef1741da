use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fibrations::FibrationAtlas;
use crate::isometry::{finite_order, in_so_plus, validate_isometry, Isometry};
use crate::lattice::{Lattice, LatticeVector, Sublattice};
use crate::linalg::{self, IntMatrix};

/// `x ↦ x - (v,x)e + (e,x)v - ½q(v)(e,x)e`.
pub fn eichler_transvection(l: &Lattice, e: &LatticeVector, v: &LatticeVector) -> Result<Isometry> {
    if !l.norm(e)?.is_zero() || e.is_zero() {
        return Err(Error::NotIsotropic);
    }
    if !e.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if !l.inner(e, v)?.is_zero() {
        return Err(Error::NotOrthogonal);
    }
    if linalg::rank(&IntMatrix::from_row_vecs(l.dim(), vec![e.0.clone(), v.0.clone()])) < 2 {
        return Err(Error::ProportionalToE);
    }
    let n = l.dim();
    let ge = l.pairing_row(e.coords());
    let gv = l.pairing_row(v.coords());
    let (half_q, rem) = l.norm(v)?.div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero(), "even lattice");
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let val = &v.0[i] * &ge[j] - &e.0[i] * &gv[j] - &half_q * &e.0[i] * &ge[j];
            m[(i, j)] += val;
        }
    }
    validate_isometry(l, &m)
}

/// One parabolic generator and the class it fixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub e: LatticeVector,
    pub v: LatticeVector,
    pub g: Isometry,
}

/// Generators `g_1..g_k`; the alphabet is `±1..±k`, `-i` meaning `g_i^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub generators: Vec<Generator>,
    inverses: Vec<Isometry>,
}

impl GeneratorSet {
    /// Checks the invariants: `g e = e`, infinite order and, on hyperbolic
    /// lattices, membership in `SO⁺`.
    pub fn new(l: &Lattice, generators: Vec<Generator>) -> Result<Self> {
        let reference = if l.is_hyperbolic() {
            Some(positive_vector(l))
        } else {
            None
        };
        for gen in &generators {
            if gen.g.apply(&gen.e) != gen.e {
                return Err(Error::DoesNotFixE);
            }
            if let Some(order) = finite_order(&gen.g) {
                return Err(Error::FiniteOrder(order.to_string()));
            }
            if let Some(h) = &reference {
                if !in_so_plus(l, &gen.g, h)? {
                    return Err(Error::Inconsistent(format!(
                        "generator for {:?} is not in SO+",
                        gen.e
                    )));
                }
            }
        }
        let inverses = generators.iter().map(|g| g.g.inverse()).collect();
        Ok(GeneratorSet {
            generators,
            inverses,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The isometry for a signed, 1-based letter.
    pub fn letter(&self, letter: i64) -> &Isometry {
        let idx = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            &self.generators[idx].g
        } else {
            &self.inverses[idx]
        }
    }

    /// Product `g_{w_1} g_{w_2} ... g_{w_k}`.
    pub fn evaluate(&self, word: &[i64], dim: usize) -> Isometry {
        word.iter()
            .fold(Isometry::identity(dim), |acc, &w| acc.compose(self.letter(w)))
    }

    /// Distinct classes fixed by the generators, in generator order.
    pub fn classes(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = Vec::new();
        for g in &self.generators {
            if !out.contains(&g.e) {
                out.push(g.e.clone());
            }
        }
        out
    }

    /// Rank of the span of the fixed classes, rounded down to even, capped by `dim`.
    pub fn target_degree(&self, dim: usize) -> usize {
        let classes = self.classes();
        let rank = Sublattice::span_vectors(dim, &classes).rank().min(dim);
        rank - rank % 2
    }
}

/// Up to `per_class` transvections per class, `v` running over the HNF basis of `e⊥`.
pub fn generators_for_classes(
    l: &Lattice,
    classes: &[LatticeVector],
    per_class: usize,
) -> Result<GeneratorSet> {
    let mut gens = Vec::new();
    for e in classes {
        let perp = l.orthogonal_complement(&Sublattice::span_vectors(l.dim(), std::slice::from_ref(e)));
        let mut taken = 0;
        for v in perp.basis_vectors() {
            if taken == per_class {
                break;
            }
            match eichler_transvection(l, e, &v) {
                Ok(g) => {
                    gens.push(Generator {
                        e: e.clone(),
                        v,
                        g,
                    });
                    taken += 1;
                }
                Err(Error::ProportionalToE) => continue,
                Err(err) => return Err(err),
            }
        }
    }
    GeneratorSet::new(l, gens)
}

/// Generators for every infinite-type class of the atlas.
pub fn build_generators(l: &Lattice, atlas: &FibrationAtlas, per_class: usize) -> Result<GeneratorSet> {
    let classes: Vec<LatticeVector> = atlas.infinite_classes().map(|c| c.e.clone()).collect();
    if classes.is_empty() {
        return Err(Error::NoInfiniteClasses);
    }
    generators_for_classes(l, &classes, per_class.max(1))
}

/// Some vector of positive norm, found by a growing box search. Requires `n_plus > 0`.
pub fn positive_vector(l: &Lattice) -> LatticeVector {
    let n = l.dim();
    for i in 0..n {
        let mut x = LatticeVector::zero(n);
        x.0[i] = BigInt::from(1);
        if l.norm(&x).is_ok_and(|q| q > BigInt::zero()) {
            return x;
        }
    }
    for bound in 1i64.. {
        let side = (2 * bound + 1) as u64;
        let total = side.checked_pow(n as u32).unwrap_or(u64::MAX).min(5_000_000);
        for idx in 0..total {
            let mut rest = idx;
            let coords: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (rest % side) as i64 - bound;
                    rest /= side;
                    c
                })
                .collect();
            let x = LatticeVector::from_i64(&coords);
            if l.norm(&x).is_ok_and(|q| q > BigInt::zero()) {
                let mut c = x.0.clone();
                linalg::normalize_sign(&mut c);
                return LatticeVector(c);
            }
        }
    }
    unreachable!("a lattice with positive index has positive vectors")
}
