//! Moving infinite-type fibration classes from a lattice to a finite-index
//! sublattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fibrations::{fibration_analysis, FibrationClass};
use crate::lattice::{Lattice, LatticeVector, Sublattice};
use crate::linalg::{smith_invariants, IntMatrix};
use crate::roots::{first_violating_root, replay, weyl_walk, WalkResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    /// Exponent of the cokernel of the embedding.
    pub n: BigInt,
    pub h_pullback: LatticeVector,
    pub reference: LatticeVector,
    pub walk: WalkResult,
    /// Pullbacks of `N e_i` before the walk.
    pub pullbacks: Vec<LatticeVector>,
    pub classes: Vec<FibrationClass>,
    /// Whether each class pairs nonnegatively with every root positive on the
    /// reference. Exact, since the search for a violating root is finite.
    pub nef: Vec<bool>,
    pub source_span_rank: usize,
    pub span_rank: usize,
}

/// `iota` has the images of the basis of `L_X` as columns.
pub struct Embedding<'a> {
    pub lx: &'a Lattice,
    pub ly: &'a Lattice,
    pub iota: &'a IntMatrix,
}

impl Embedding<'_> {
    /// Checks shape, finite index and `iotaᵀ G_Y iota = G_X`; returns `N`.
    pub fn validate(&self) -> Result<BigInt> {
        let (nx, ny) = (self.lx.dim(), self.ly.dim());
        if self.iota.nrows() != ny {
            return Err(Error::DimensionMismatch {
                expected: ny,
                got: self.iota.nrows(),
            });
        }
        if self.iota.ncols() != nx || self.iota.det().is_zero() {
            return Err(Error::InfiniteIndex);
        }
        let pulled = self.iota.transpose().congruence(self.ly.gram());
        if &pulled != self.lx.gram() {
            return Err(Error::NotIsometricEmbedding);
        }
        Ok(smith_invariants(self.iota)
            .into_iter()
            .map(|d| d.abs())
            .max()
            .unwrap_or_else(BigInt::one))
    }

    /// `iota⁻¹ y`, which must be integral.
    pub fn pull_back(&self, y: &LatticeVector) -> Option<LatticeVector> {
        let det = self.iota.det();
        let adj = self.iota.adjugate();
        let raw = adj.mul_vec(y.coords());
        let mut out = Vec::with_capacity(raw.len());
        for c in raw {
            let (q, r) = c.div_rem(&det);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(LatticeVector(out))
    }
}

/// Pulls back `N e_i` and `N h_Y`, walks the pulled-back `h` into the chamber
/// of `reference` (default: the pulled-back `h`, nudged off walls), applies
/// the same reflections to each class and reanalyses it in `L_X`.
pub fn transfer_fibrations(
    emb: &Embedding<'_>,
    e_list: &[LatticeVector],
    h_y: &LatticeVector,
    walk_budget: usize,
    reference: Option<&LatticeVector>,
) -> Result<TransferReport> {
    let n = emb.validate()?;
    let qh = emb.ly.norm(h_y)?;
    if !qh.is_positive() {
        return Err(Error::NotPositive(qh.to_string()));
    }
    for e in e_list {
        let class = fibration_analysis(emb.ly, e)?;
        if !class.infinite {
            return Err(Error::Inconsistent(format!("{e:?} is not of infinite type")));
        }
    }
    let pull = |y: &LatticeVector| {
        emb.pull_back(&y.scaled(&n))
            .ok_or_else(|| Error::Inconsistent(format!("N {y:?} is not in the image")))
    };
    let h_x = pull(h_y)?;
    let pullbacks = e_list.iter().map(pull).collect::<Result<Vec<_>>>()?;

    match reference {
        Some(r) => finish(emb.lx, &n, &h_x, r, pullbacks, walk_budget, e_list),
        None => {
            let mut last = None;
            for r in reference_candidates(emb.lx, &h_x) {
                match finish(emb.lx, &n, &h_x, &r, pullbacks.clone(), walk_budget, e_list) {
                    Err(err @ Error::OnWall(_)) => last = Some(err),
                    other => return other,
                }
            }
            Err(last.unwrap_or_else(|| Error::Inconsistent("no reference vector off the walls".into())))
        }
    }
}

/// `h`, then `8h + u` for `u` in the box of radius 1, in a fixed order.
fn reference_candidates(l: &Lattice, h: &LatticeVector) -> Vec<LatticeVector> {
    let dim = l.dim();
    let mut out = vec![h.clone()];
    let big = h.scaled(&BigInt::from(8));
    let total = 3usize.pow(dim.min(8) as u32);
    for idx in 1..total {
        let mut rest = idx;
        let u: Vec<i64> = (0..dim)
            .map(|i| {
                if i >= 8 {
                    return 0;
                }
                let c = (rest % 3) as i64 - 1;
                rest /= 3;
                c
            })
            .collect();
        let cand = big.add(&LatticeVector::from_i64(&u));
        let positive = l.norm(&cand).is_ok_and(|q| q.is_positive())
            && l.inner(&cand, h).is_ok_and(|b| b.is_positive());
        if positive {
            out.push(cand);
        }
    }
    out
}

fn finish(
    lx: &Lattice,
    n: &BigInt,
    h_x: &LatticeVector,
    reference: &LatticeVector,
    pullbacks: Vec<LatticeVector>,
    walk_budget: usize,
    e_list: &[LatticeVector],
) -> Result<TransferReport> {
    let walk = match weyl_walk(lx, h_x, reference, walk_budget) {
        Err(Error::BudgetExceeded { budget }) => return Err(Error::WalkBudgetExceeded(budget)),
        other => other?,
    };
    let mut classes = Vec::with_capacity(pullbacks.len());
    let mut nef = Vec::with_capacity(pullbacks.len());
    for x in &pullbacks {
        let moved = replay(lx, &walk.word, x)?.primitive_part();
        let class = fibration_analysis(lx, &moved)?;
        if !class.infinite {
            return Err(Error::PersistenceViolated(format!("{moved:?}")));
        }
        let pairs_positive = lx.inner(&moved, reference)?.is_positive();
        nef.push(pairs_positive && first_violating_root(lx, &moved, reference)?.is_none());
        classes.push(class);
    }
    let source_span_rank = Sublattice::span_vectors(lx.dim(), e_list).rank();
    let moved: Vec<LatticeVector> = classes.iter().map(|c| c.e.clone()).collect();
    let span_rank = Sublattice::span_vectors(lx.dim(), &moved).rank();
    if span_rank < source_span_rank {
        return Err(Error::PersistenceViolated(format!(
            "span rank {span_rank} below {source_span_rank}"
        )));
    }
    Ok(TransferReport {
        n: n.clone(),
        h_pullback: h_x.clone(),
        reference: reference.clone(),
        walk,
        pullbacks,
        classes,
        nef,
        source_span_rank,
        span_rank,
    })
}
