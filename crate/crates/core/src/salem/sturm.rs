use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::qpoly;
use super::IntPolynomial;
use crate::error::{Error, Result};

type Q = BigRational;

/// Sturm sequence `p, p', -rem(p, p'), ...` over the rationals.
pub struct SturmChain {
    chain: Vec<Vec<Q>>,
}

impl SturmChain {
    /// Requires a squarefree polynomial of positive degree.
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p0 = p.to_q();
        let p1 = qpoly::derivative(&p0);
        if p.degree() > 0 && !qpoly::is_constant(&qpoly::gcd(&p0, &p1)) {
            return Err(Error::NotSquarefree);
        }
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = qpoly::rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Ok(SturmChain { chain })
    }

    fn sign_changes(&self, x: &Q) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = qpoly::eval(p, x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b)`.
    pub fn count(&self, a: &Q, b: &Q) -> Result<usize> {
        if a >= b {
            return Err(Error::EmptyInterval);
        }
        for end in [a, b] {
            if qpoly::eval(&self.chain[0], end).is_zero() {
                return Err(Error::EndpointIsRoot(end.to_string()));
            }
        }
        Ok(self.sign_changes(a) - self.sign_changes(b))
    }
}

/// Real roots of a squarefree `p` in the open interval `(a, b)`.
pub fn sturm_count(p: &IntPolynomial, a: &Q, b: &Q) -> Result<usize> {
    SturmChain::new(p)?.count(a, b)
}

/// Bound exceeding the absolute value of every complex root (Cauchy).
pub fn root_bound(p: &IntPolynomial) -> Q {
    let lead = Q::from_integer(p.leading().abs());
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| Q::from_integer(c.abs()))
        .max()
        .unwrap_or_default();
    Q::from_integer(1.into()) + m / lead
}
