//! Cyclotomic stripping, Salem recognition and spectral radius/entropy bounds.

mod log;
mod poly;
mod sturm;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use log::ln_bounds;
pub use poly::IntPolynomial;
pub use sturm::{root_bound, sturm_count, SturmChain};

use crate::error::{Error, Result};

type Q = BigRational;

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cyclotomic polynomial `Φ_n`, `n >= 1`.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = IntPolynomial::x_pow_minus_one(n as usize);
    for d in (1..n).filter(|d| n % d == 0) {
        p = p
            .div_exact_monic(&cyclotomic(d))
            .expect("Φ_d divides x^n - 1");
    }
    cyclotomic_cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Indices `n` with `φ(n) <= degree`, ascending.
pub fn cyclotomic_indices_up_to_degree(degree: usize) -> Vec<u64> {
    let bound = 2 * (degree as u64).pow(2).max(1);
    (1..=bound.max(2))
        .filter(|&n| totient(n) as usize <= degree)
        .collect()
}

/// Divides out every cyclotomic factor of a monic polynomial.
/// Returns `(n, multiplicity)` pairs in ascending `n` and the remainder.
pub fn strip_cyclotomic(p: &IntPolynomial) -> Result<(Vec<(u64, u32)>, IntPolynomial)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for n in cyclotomic_indices_up_to_degree(p.degree()) {
        if totient(n) as usize > rest.degree() {
            continue;
        }
        let phi = cyclotomic(n);
        let mut mult = 0;
        while let Some(q) = rest.div_exact_monic(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((n, mult));
        }
    }
    Ok((factors, rest))
}

/// `T` with `x^-m P(x) = T(x + 1/x)` for a palindromic `P` of degree `2m`.
pub fn trace_polynomial(p: &IntPolynomial) -> IntPolynomial {
    let d = p.degree();
    assert!(d % 2 == 0 && p.is_palindromic(), "trace polynomial needs an even palindrome");
    let m = d / 2;
    let c = p.coeffs();
    // D_0 = 2, D_1 = y, D_{k+1} = y D_k - D_{k-1}
    let y = IntPolynomial::from_i64(&[0, 1]);
    let mut prev = IntPolynomial::from_i64(&[2]);
    let mut cur = y.clone();
    let mut t = IntPolynomial::new(vec![c[m].clone()]);
    for k in 1..=m {
        let term = IntPolynomial::new(cur.coeffs().iter().map(|x| x * &c[m + k]).collect());
        t = add(&t, &term);
        let next = sub(&y.mul(&cur), &prev);
        prev = cur;
        cur = next;
    }
    t
}

fn add(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let n = a.coeffs().len().max(b.coeffs().len());
    let get = |p: &IntPolynomial, i: usize| p.coeffs().get(i).cloned().unwrap_or_default();
    IntPolynomial::new((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

fn sub(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let neg = IntPolynomial::new(b.coeffs().iter().map(|c| -c).collect());
    add(a, &neg)
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Salem test by root location. A monic palindrome with no cyclotomic factor
/// whose other roots all sit on the unit circle is irreducible by Kronecker,
/// so no factorisation is attempted.
pub fn is_salem(p: &IntPolynomial) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = p.degree();
    if d < 2 || d % 2 == 1 || !p.is_palindromic() {
        return Ok(false);
    }
    if p.eval(&BigInt::one()).is_zero() || p.eval(&BigInt::from(-1)).is_zero() {
        return Ok(false);
    }
    match SturmChain::new(p) {
        Ok(_) => {}
        Err(Error::NotSquarefree) => return Ok(false),
        Err(e) => return Err(e),
    }
    let (factors, _) = strip_cyclotomic(p)?;
    if !factors.is_empty() {
        return Ok(false);
    }
    let m = d / 2;
    let t = trace_polynomial(p);
    let ts = SturmChain::new(&t)?;
    let bound = root_bound(&t) + q(1);
    let inside = ts.count(&q(-2), &q(2))?;
    let above = ts.count(&q(2), &bound)?;
    let below = ts.count(&-bound, &q(-2))?;
    Ok(inside == m - 1 && above == 1 && below == 0)
}

/// Cyclotomic part, optional Salem factor and a radius enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalemDecomposition {
    pub cyclotomic_factors: Vec<(u64, u32)>,
    pub salem_factor: Option<IntPolynomial>,
    pub salem_degree: usize,
    /// `[1, 1]` when the entropy is zero.
    pub spectral_radius: (Q, Q),
    pub entropy_is_zero: bool,
}

impl SalemDecomposition {
    /// Product of all factors, which equals the decomposed polynomial.
    pub fn product(&self) -> IntPolynomial {
        let mut p = self
            .salem_factor
            .clone()
            .unwrap_or_else(IntPolynomial::one);
        for &(n, mult) in &self.cyclotomic_factors {
            p = p.mul(&cyclotomic(n).pow(mult));
        }
        p
    }
}

/// Default radius enclosure width, `2^-40`.
pub fn default_radius_width() -> Q {
    Q::new(BigInt::one(), BigInt::one() << 40)
}

pub fn salem_decomposition(p: &IntPolynomial) -> Result<SalemDecomposition> {
    salem_decomposition_with_width(p, &default_radius_width())
}

pub fn salem_decomposition_with_width(p: &IntPolynomial, width: &Q) -> Result<SalemDecomposition> {
    if !width.is_positive() {
        return Err(Error::BadWidth);
    }
    let (factors, rest) = strip_cyclotomic(p)?;
    if rest.is_one() {
        return Ok(SalemDecomposition {
            cyclotomic_factors: factors,
            salem_factor: None,
            salem_degree: 0,
            spectral_radius: (Q::one(), Q::one()),
            entropy_is_zero: true,
        });
    }
    if !is_salem(&rest)? {
        return Err(Error::NotSpectrallySalem(rest.to_string()));
    }
    let radius = salem_radius(&rest, width);
    Ok(SalemDecomposition {
        cyclotomic_factors: factors,
        salem_degree: rest.degree(),
        salem_factor: Some(rest),
        spectral_radius: radius,
        entropy_is_zero: false,
    })
}

/// Encloses the unique root `> 1` of a Salem polynomial in `[lo, hi]` with
/// `1 < lo`, `hi - lo <= width`.
pub fn salem_radius(s: &IntPolynomial, width: &Q) -> (Q, Q) {
    let mut lo = Q::one();
    let mut hi = Q::one() + q(2) * Q::from_integer(s.max_abs_coeff());
    let sign_hi = s.eval_q(&hi).is_positive();
    let half = Q::new(1.into(), 2.into());
    while &hi - &lo > *width || lo <= Q::one() {
        let mid = (&lo + &hi) * &half;
        let v = s.eval_q(&mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.is_positive() == sign_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Interval of width at most `width` containing the entropy `ln r`.
pub fn entropy_interval(d: &SalemDecomposition, width: &Q) -> Result<(Q, Q)> {
    if !width.is_positive() {
        return Err(Error::BadWidth);
    }
    let Some(s) = &d.salem_factor else {
        return Ok((Q::zero(), Q::zero()));
    };
    // ln is 1-Lipschitz above 1: half the budget on the radius, a quarter per endpoint.
    let half = width / q(2);
    let quarter = width / q(4);
    let (lo, hi) = if &d.spectral_radius.1 - &d.spectral_radius.0 <= half {
        d.spectral_radius.clone()
    } else {
        salem_radius(s, &half)
    };
    let (a, _) = ln_bounds(&lo, &quarter);
    let (_, b) = ln_bounds(&hi, &quarter);
    Ok((a, b))
}

/// Decimal rendering of a rational with `digits` fractional digits (truncated).
pub fn to_decimal(x: &Q, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let neg = x.is_negative();
    let n = (x.abs() * Q::from_integer(scale.clone())).floor().to_integer();
    let int = &n / &scale;
    let frac = (&n % &scale).to_string();
    let pad = "0".repeat(digits as usize - frac.len());
    format!("{}{}.{}{}", if neg { "-" } else { "" }, int, pad, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lehmer() -> IntPolynomial {
        IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    fn qd(num: i64, den: i64) -> Q {
        Q::new(num.into(), den.into())
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        for n in 1..60 {
            assert_eq!(cyclotomic(n).degree() as u64, totient(n));
        }
    }

    #[test]
    fn strip_examples() {
        let s = IntPolynomial::from_i64(&[1, -3, 1]);
        let p = cyclotomic(1).pow(2).mul(&s);
        assert_eq!(strip_cyclotomic(&p).unwrap(), (vec![(1, 2)], s.clone()));
        let p = cyclotomic(1).mul(&cyclotomic(2)).mul(&cyclotomic(4));
        assert_eq!(
            strip_cyclotomic(&p).unwrap(),
            (vec![(1, 1), (2, 1), (4, 1)], IntPolynomial::one())
        );
        assert_eq!(strip_cyclotomic(&s).unwrap(), (vec![], s));
    }

    #[test]
    fn trace_polynomial_of_lehmer() {
        let t = trace_polynomial(&lehmer());
        assert_eq!(t.degree(), 5);
        let ts = SturmChain::new(&t).unwrap();
        assert_eq!(ts.count(&q(-2), &q(2)).unwrap(), 4);
        assert_eq!(ts.count(&q(2), &q(100)).unwrap(), 1);
        // x^2 - 3x + 1 -> y - 3
        assert_eq!(trace_polynomial(&IntPolynomial::from_i64(&[1, -3, 1])), IntPolynomial::from_i64(&[-3, 1]));
    }

    #[test]
    fn recognizer() {
        assert!(is_salem(&IntPolynomial::from_i64(&[1, -3, 1])).unwrap());
        assert!(!is_salem(&IntPolynomial::from_i64(&[1, 1, 1])).unwrap());
        assert!(is_salem(&lehmer()).unwrap());
        // two real pairs: (x^2-3x+1)(x^2-4x+1)
        let two = IntPolynomial::from_i64(&[1, -3, 1]).mul(&IntPolynomial::from_i64(&[1, -4, 1]));
        assert!(!is_salem(&two).unwrap());
        assert!(matches!(is_salem(&IntPolynomial::from_i64(&[1, 2])), Err(Error::NotMonic)));
        for n in cyclotomic_indices_up_to_degree(22) {
            assert!(!is_salem(&cyclotomic(n)).unwrap(), "Φ_{n}");
        }
    }

    #[test]
    fn decompositions() {
        let id = salem_decomposition(&cyclotomic(1).pow(2)).unwrap();
        assert!(id.entropy_is_zero);
        assert_eq!(id.cyclotomic_factors, vec![(1, 2)]);
        assert_eq!(entropy_interval(&id, &qd(1, 1000)).unwrap(), (Q::zero(), Q::zero()));

        let p = cyclotomic(1).pow(2).mul(&IntPolynomial::from_i64(&[1, -3, 1]));
        let d = salem_decomposition(&p).unwrap();
        assert_eq!(d.salem_degree, 2);
        assert_eq!(d.product(), p);
        let (lo, hi) = &d.spectral_radius;
        assert!(lo < &qd(2618034, 1000000) && hi > &qd(2618033, 1000000));

        assert!(matches!(
            salem_decomposition(&IntPolynomial::from_i64(&[-2, 0, 1])),
            Err(Error::NotSpectrallySalem(_))
        ));
    }

    #[test]
    fn entropies() {
        let w = qd(1, 1_000_000);
        let d = salem_decomposition(&lehmer()).unwrap();
        let (lo, hi) = entropy_interval(&d, &w).unwrap();
        assert!(&hi - &lo <= w);
        assert!(lo <= qd(1623576120, 10_000_000_000) && hi >= qd(1623576120, 10_000_000_000));
        let d = salem_decomposition(&IntPolynomial::from_i64(&[1, -3, 1])).unwrap();
        let (lo, hi) = entropy_interval(&d, &w).unwrap();
        assert!(lo <= qd(9624236501, 10_000_000_000) && hi >= qd(9624236501, 10_000_000_000));
        assert!(matches!(entropy_interval(&d, &Q::zero()), Err(Error::BadWidth)));
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&qd(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&qd(-5, 2), 2), "-2.50");
    }
}
