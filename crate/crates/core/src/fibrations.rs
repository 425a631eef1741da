//! Isotropic classes: the (e⊥)^(2) rank test, box scans, L∞ and the
//! exceptional sublattice.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{primitive_intersection, Lattice, LatticeVector, Sublattice};
use crate::linalg::{self, extend_to_basis, solve_affine, IntMatrix};
use crate::roots::{enumerate_norm_vectors_in, root_rank};

/// A primitive isotropic vector with the ranks of `e⊥` and `(e⊥)^(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationClass {
    pub e: LatticeVector,
    pub rank_perp: usize,
    pub rank_perp_two: usize,
    pub infinite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationAtlas {
    pub classes: Vec<FibrationClass>,
    pub span: Sublattice,
    pub span_rank: usize,
    pub certified_full: bool,
}

impl FibrationAtlas {
    /// Builds the atlas from analysed classes; classes are sorted by `e`.
    pub fn from_classes(dim: usize, mut classes: Vec<FibrationClass>) -> Self {
        classes.sort_by(|a, b| a.e.cmp(&b.e));
        classes.dedup_by(|a, b| a.e == b.e);
        let infinite: Vec<LatticeVector> = classes
            .iter()
            .filter(|c| c.infinite)
            .map(|c| c.e.clone())
            .collect();
        let span = Sublattice::span_vectors(dim, &infinite);
        let span_rank = span.rank();
        FibrationAtlas {
            classes,
            span,
            span_rank,
            certified_full: span_rank == dim,
        }
    }

    pub fn infinite_classes(&self) -> impl Iterator<Item = &FibrationClass> {
        self.classes.iter().filter(|c| c.infinite)
    }
}

pub fn is_primitive_isotropic(l: &Lattice, e: &LatticeVector) -> bool {
    e.dim() == l.dim() && !e.is_zero() && l.norm(e).is_ok_and(|q| q.is_zero()) && e.is_primitive()
}

fn require_primitive_isotropic(l: &Lattice, e: &LatticeVector) -> Result<()> {
    l.check_vector(e)?;
    if is_primitive_isotropic(l, e) {
        Ok(())
    } else {
        Err(Error::NotPrimitiveIsotropic)
    }
}

/// `e⊥` split as `Ze ⊕ W`: returns the rows of `W` (ambient coordinates) and
/// the Gram matrix of `e⊥/Ze` in the induced basis.
pub struct PerpQuotient {
    pub perp: Sublattice,
    pub complement: IntMatrix,
    pub gram: IntMatrix,
}

pub fn perp_quotient(l: &Lattice, e: &LatticeVector) -> Result<PerpQuotient> {
    require_primitive_isotropic(l, e)?;
    let perp = l.orthogonal_complement(&Sublattice::span_vectors(l.dim(), std::slice::from_ref(e)));
    let (u, _) = solve_affine(&perp.basis().transpose(), e.coords())
        .expect("an isotropic vector lies in its own complement");
    let ext = extend_to_basis(&u).expect("e is primitive in its complement");
    let full = ext.mul(perp.basis());
    debug_assert_eq!(full.row(0), e.coords());
    let rows: Vec<Vec<BigInt>> = full.rows().skip(1).map(<[BigInt]>::to_vec).collect();
    let complement = IntMatrix::from_row_vecs(l.dim(), rows);
    let gram = complement.congruence(l.gram());
    Ok(PerpQuotient {
        perp,
        complement,
        gram,
    })
}

fn require_definite_quotient(l: &Lattice, q: &PerpQuotient) -> Result<()> {
    if q.gram.nrows() > 0 && linalg::lll_transform_checked(&q.gram.neg()).is_none() {
        return Err(not_hyperbolic(l));
    }
    Ok(())
}

fn not_hyperbolic(l: &Lattice) -> Error {
    let (p, n) = l.signature();
    Error::NotHyperbolic(p, n)
}

/// Sublattice generated by `e` and every (-2)-vector of `e⊥`.
pub fn perp_two_sublattice(l: &Lattice, e: &LatticeVector) -> Result<Sublattice> {
    let q = perp_quotient(l, e)?;
    require_definite_quotient(l, &q)?;
    let w = Sublattice::from_basis(q.complement.clone())?;
    let roots = enumerate_norm_vectors_in(l, &w, &BigInt::from(-2))?;
    let mut gens = vec![e.clone()];
    gens.extend(roots.roots);
    Ok(Sublattice::span_vectors(l.dim(), &gens))
}

/// Ranks of `e⊥` and `(e⊥)^(2)` and the resulting verdict.
pub fn fibration_analysis(l: &Lattice, e: &LatticeVector) -> Result<FibrationClass> {
    let q = perp_quotient(l, e)?;
    let rank_perp = q.perp.rank();
    let rank_perp_two = 1 + match root_rank(&q.gram) {
        Err(Error::NotNegativeDefinite) => return Err(not_hyperbolic(l)),
        other => other?,
    };
    Ok(FibrationClass {
        e: e.clone(),
        rank_perp,
        rank_perp_two,
        infinite: rank_perp > rank_perp_two,
    })
}

/// Primitive isotropic vectors with sup-norm at most `bound`, one per sign pair, sorted.
pub fn isotropic_vectors_in_box(l: &Lattice, bound: u32) -> Result<Vec<LatticeVector>> {
    let n = l.dim();
    let b = i128::from(bound);
    // |q(x)| <= n^2 max|g| B^2; keep a wide margin for partial sums.
    let worst = BigInt::from(n * n + 4 * n) * l.gram().max_abs() * BigInt::from(b * b + 1);
    if worst.bits() > 120 {
        return Err(Error::ScanOverflow);
    }
    let g: Vec<Vec<i128>> = l
        .gram()
        .rows()
        .map(|r| r.iter().map(|x| x.to_i128().expect("checked above")).collect())
        .collect();
    let pivot = (0..n).rev().find(|&i| g[i][i] != 0).unwrap_or(n - 1);
    let order: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
    let mut scan = BoxScan {
        g: &g,
        order: &order,
        pivot,
        bound: b,
        x: vec![0; n],
        found: Vec::new(),
    };
    let partial = vec![0i128; n];
    scan.descend(0, 0, partial);
    let mut out: Vec<LatticeVector> = scan
        .found
        .into_iter()
        .filter(|x| first_nonzero_positive(x) && gcd_is_one(x))
        .map(|x| LatticeVector(x.into_iter().map(BigInt::from).collect()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

struct BoxScan<'a> {
    g: &'a [Vec<i128>],
    order: &'a [usize],
    pivot: usize,
    bound: i128,
    x: Vec<i128>,
    found: Vec<Vec<i128>>,
}

impl BoxScan<'_> {
    /// `value` is q of the assigned part; `partial[k] = sum_j g[k][j] x_j` over assigned j.
    fn descend(&mut self, depth: usize, value: i128, partial: Vec<i128>) {
        if depth == self.order.len() {
            self.solve_pivot(value, &partial);
            return;
        }
        let i = self.order[depth];
        for t in -self.bound..=self.bound {
            let v = value + 2 * t * partial[i] + self.g[i][i] * t * t;
            let mut next = partial.clone();
            for (k, p) in next.iter_mut().enumerate() {
                *p += self.g[k][i] * t;
            }
            self.x[i] = t;
            self.descend(depth + 1, v, next);
        }
        self.x[i] = 0;
    }

    /// Solves `value + 2 t partial[p] + g_pp t^2 = 0` for the pivot coordinate.
    fn solve_pivot(&mut self, value: i128, partial: &[i128]) {
        let p = self.pivot;
        let a = self.g[p][p];
        let b = partial[p];
        let c = value;
        let push = |scan: &mut Self, t: i128| {
            if t.abs() <= scan.bound {
                let mut x = scan.x.clone();
                x[p] = t;
                if x.iter().any(|&v| v != 0) {
                    scan.found.push(x);
                }
            }
        };
        if a == 0 {
            if b == 0 {
                if c == 0 {
                    for t in -self.bound..=self.bound {
                        push(self, t);
                    }
                }
            } else if c % (2 * b) == 0 {
                push(self, -c / (2 * b));
            }
            return;
        }
        // a t^2 + 2 b t + c = 0, t = (-b ± sqrt(b^2 - a c)) / a
        let disc = b * b - a * c;
        if disc < 0 {
            return;
        }
        let s = isqrt_i128(disc);
        if s * s != disc {
            return;
        }
        for num in [-b + s, -b - s] {
            if num % a == 0 {
                push(self, num / a);
            }
            if s == 0 {
                break;
            }
        }
    }
}

fn isqrt_i128(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn first_nonzero_positive(x: &[i128]) -> bool {
    x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

fn gcd_is_one(x: &[i128]) -> bool {
    let mut g: i128 = 0;
    for &v in x {
        let (mut a, mut b) = (g, v.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        g = a;
        if g == 1 {
            return true;
        }
    }
    g == 1
}

/// Analyses every primitive isotropic vector in the box `[-bound, bound]^dim`.
pub fn scan_isotropic(l: &Lattice, bound: u32) -> Result<FibrationAtlas> {
    let (p, n) = l.signature();
    if p == 0 || n == 0 {
        return Ok(FibrationAtlas::from_classes(l.dim(), Vec::new()));
    }
    l.require_hyperbolic()?;
    let vectors = isotropic_vectors_in_box(l, bound)?;
    let classes: Vec<FibrationClass> = vectors
        .par_iter()
        .map(|e| fibration_analysis(l, e))
        .collect::<Result<_>>()?;
    Ok(FibrationAtlas::from_classes(l.dim(), classes))
}

/// `L∞⊥` from a sample, with the intersection of `(e⊥)^(2)_pr` as a cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    /// Orthogonal complement of the span of the sampled infinite classes.
    pub sublattice: Sublattice,
    /// Saturated intersection of `(e⊥)^(2)` over the sampled infinite classes.
    pub intersection: Sublattice,
    /// The sample spans the lattice, so `sublattice` is exactly `E`.
    pub certified: bool,
}

pub fn exceptional_sublattice(l: &Lattice, atlas: &FibrationAtlas) -> Result<ExceptionalReport> {
    let infinite: Vec<&FibrationClass> = atlas.infinite_classes().collect();
    if infinite.len() < 2 {
        return Err(Error::InsufficientFibrations(infinite.len()));
    }
    let complement = l.orthogonal_complement(&atlas.span);
    let mut intersection = Sublattice::full(l.dim());
    for class in &infinite {
        let two = perp_two_sublattice(l, &class.e)?;
        intersection = primitive_intersection(&intersection, &l.primitive_closure(&two));
    }
    if !intersection.is_subset_of(&complement) {
        return Err(Error::Inconsistent(
            "intersection of (e⊥)^(2) is not contained in the span complement".into(),
        ));
    }
    if atlas.certified_full && intersection != complement {
        return Err(Error::Inconsistent(
            "certified atlas but the two descriptions of E differ".into(),
        ));
    }
    Ok(ExceptionalReport {
        sublattice: complement,
        intersection,
        certified: atlas.certified_full,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// The computable equivalent conditions for even rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenPicardReport {
    /// `Q<E∞> = L ⊗ Q`.
    pub spans_rationally: Verdict,
    /// `∩ (e⊥)^(2)_pr = 0`.
    pub perp_two_intersection_trivial: Verdict,
    /// `E = 0`.
    pub exceptional_trivial: Verdict,
    pub certified_full: bool,
    pub infinite_classes: usize,
}

pub fn even_picard_report(l: &Lattice, atlas: &FibrationAtlas) -> Result<EvenPicardReport> {
    let n = l.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if n < 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    let certified = atlas.certified_full;
    let decide = |holds: bool| match (holds, certified) {
        (true, _) => Verdict::True,
        (false, true) => Verdict::False,
        (false, false) => Verdict::Inconclusive,
    };
    let infinite: Vec<&FibrationClass> = atlas.infinite_classes().collect();
    let spans = decide(certified);
    let (inter, exc) = if infinite.is_empty() {
        (Verdict::Inconclusive, Verdict::Inconclusive)
    } else {
        let mut intersection = Sublattice::full(n);
        for class in &infinite {
            let two = perp_two_sublattice(l, &class.e)?;
            intersection = primitive_intersection(&intersection, &l.primitive_closure(&two));
        }
        let complement = l.orthogonal_complement(&atlas.span);
        (decide(intersection.rank() == 0), decide(complement.rank() == 0))
    };
    let definite: Vec<Verdict> = [spans, inter, exc]
        .into_iter()
        .filter(|v| *v != Verdict::Inconclusive)
        .collect();
    if definite.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Inconsistent(format!(
            "conditions disagree: {} / {} / {}",
            spans.as_str(),
            inter.as_str(),
            exc.as_str()
        )));
    }
    Ok(EvenPicardReport {
        spans_rationally: spans,
        perp_two_intersection_trivial: inter,
        exceptional_trivial: exc,
        certified_full: certified,
        infinite_classes: infinite.len(),
    })
}
