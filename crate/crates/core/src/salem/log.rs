//! Rational enclosures of natural logarithms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

/// `[lo, hi]` containing `ln(x)` for rational `x >= 1`, with `hi - lo <= tol`.
pub fn ln_bounds(x: &Q, tol: &Q) -> (Q, Q) {
    assert!(x >= &Q::one(), "ln_bounds needs x >= 1");
    assert!(tol.is_positive());
    if x.is_one() {
        return (Q::zero(), Q::zero());
    }
    // x = 2^k y with 1 <= y < 2.
    let two = Q::from_integer(2.into());
    let mut k: u64 = 0;
    let mut y = x.clone();
    while y >= two {
        y /= &two;
        k += 1;
    }
    let kq = Q::from_integer(BigInt::from(k));
    let share = tol / (&kq + Q::from_integer(2.into()));
    let (l2_lo, l2_hi) = atanh_ln(&Q::new(1.into(), 3.into()), &share);
    let z = (&y - Q::one()) / (&y + Q::one());
    let (ly_lo, ly_hi) = atanh_ln(&z, &share);
    (&kq * l2_lo + ly_lo, &kq * l2_hi + ly_hi)
}

/// Bounds on `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/3`, width at most `tol`.
fn atanh_ln(z: &Q, tol: &Q) -> (Q, Q) {
    if z.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = Q::zero();
    let mut j: u64 = 0;
    loop {
        let denom = Q::from_integer(BigInt::from(2 * j + 1));
        sum += Q::from_integer(2.into()) * &power / denom;
        power *= &z2;
        j += 1;
        // remaining terms: 2 sum_{i>=j} z^(2i+1)/(2i+1) <= 2 z^(2j+1) / ((2j+1)(1 - z^2))
        let tail = Q::from_integer(2.into()) * &power
            / (Q::from_integer(BigInt::from(2 * j + 1)) * (Q::one() - &z2));
        if &tail <= tol {
            let hi = &sum + tail;
            return (round_down(&sum), round_up(&hi));
        }
    }
}

const BITS: u64 = 96;

/// Truncate to a dyadic rational with `BITS` fractional bits, rounding down.
fn round_down(x: &Q) -> Q {
    let scale = BigInt::one() << BITS;
    let n = (x * Q::from_integer(scale.clone())).floor().to_integer();
    Q::new(n, scale)
}

fn round_up(x: &Q) -> Q {
    let scale = BigInt::one() << BITS;
    let n = (x * Q::from_integer(scale.clone())).ceil().to_integer();
    Q::new(n, scale)
}
