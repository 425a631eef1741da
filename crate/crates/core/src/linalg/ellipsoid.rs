//! Fincke-Pohst enumeration of integer points in a rational ellipsoid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rational::Ldl;

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

/// Visits every `y` in `Z^n` with `(y - center)^T A (y - center) <= radius`,
/// where `A = L D L^T` is given by `ldl`. The callback receives the point and
/// its exact form value. Returns `false` if the callback stopped early.
pub fn enumerate_ellipsoid(
    ldl: &Ldl,
    center: &[Q],
    radius: &Q,
    visit: &mut dyn FnMut(&[BigInt], &Q) -> Visit,
) -> bool {
    let n = ldl.d.len();
    assert_eq!(center.len(), n, "center dimension mismatch");
    if radius.is_negative() {
        return true;
    }
    if n == 0 {
        return visit(&[], &Q::zero()) == Visit::Continue;
    }
    let mut state = State {
        ldl,
        center,
        y: vec![BigInt::zero(); n],
        z: vec![Q::zero(); n],
        visit,
        radius: radius.clone(),
    };
    state.level(n - 1, radius.clone())
}

struct State<'a> {
    ldl: &'a Ldl,
    center: &'a [Q],
    y: Vec<BigInt>,
    z: Vec<Q>,
    visit: &'a mut dyn FnMut(&[BigInt], &Q) -> Visit,
    radius: Q,
}

impl State<'_> {
    fn level(&mut self, i: usize, remaining: Q) -> bool {
        let n = self.y.len();
        let mut shift = Q::zero();
        for j in i + 1..n {
            shift += &self.ldl.l[j][i] * &self.z[j];
        }
        let mid = &self.center[i] - shift;
        let di = &self.ldl.d[i];
        let span = (&remaining / di).floor().to_integer();
        let s = span.sqrt();
        let lo = mid.floor().to_integer() - &s;
        let hi = mid.ceil().to_integer() + &s;
        let mut yi = lo;
        while yi <= hi {
            let off = Q::from_integer(yi.clone()) - &mid;
            let term = di * &off * &off;
            if term <= remaining {
                let rest = &remaining - &term;
                self.y[i] = yi.clone();
                self.z[i] = Q::from_integer(yi.clone()) - &self.center[i];
                if i == 0 {
                    let value = &self.radius - &rest;
                    if (self.visit)(&self.y, &value) == Visit::Stop {
                        return false;
                    }
                } else if !self.level(i - 1, rest) {
                    return false;
                }
            }
            yi += 1;
        }
        true
    }
}
