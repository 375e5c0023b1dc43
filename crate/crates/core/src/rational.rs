//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`: always reduced, denominator
//! positive, sign on the numerator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/4"` or a finite decimal like `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Validation(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let digits = format!("{int_digits}{frac}");
        let n: BigInt = if digits.is_empty() {
            return Err(bad());
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// -1, 0 or 1.
pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The fraction with the smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !lo.is_negative() {
        simplest_positive(lo, hi)
    } else {
        -simplest_positive(&-hi, &-lo)
    }
}

// 0 <= lo < hi, open interval; continued-fraction descent.
fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    let candidate = &fl + Rational::one();
    if &candidate < hi {
        return candidate;
    }
    // lo and hi share the integer part (or hi is exactly fl + 1).
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    if lo_frac.is_zero() {
        // interval (fl, fl + hi_frac): pick fl + 1/k with the smallest k
        let k = (Rational::one() / &hi_frac).floor() + Rational::one();
        return fl + Rational::one() / k;
    }
    let inner = simplest_positive(&(Rational::one() / hi_frac), &(Rational::one() / lo_frac));
    fl + Rational::one() / inner
}

pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-1/4").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("4/-8").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lowest_terms() {
        let q = ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(fmt_rational(&q), "-3/2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(2, -1), BigInt::zero());
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&ratio(31, 10), &ratio(41, 10)), rat(4));
        assert_eq!(simplest_between(&ratio(1, 3), &ratio(2, 5)), ratio(3, 8));
        assert_eq!(simplest_between(&ratio(-7, 2), &ratio(-3, 1)), ratio(-10, 3));
        assert_eq!(simplest_between(&ratio(-1, 2), &ratio(1, 3)), rat(0));
        assert_eq!(simplest_between(&rat(3), &ratio(7, 2)), ratio(10, 3));
    }

    #[test]
    fn simplest_rational_brute_force() {
        // Oracle: scan denominators upward.
        let cases = [
            (ratio(2, 7), ratio(3, 10)),
            (ratio(5, 3), ratio(12, 7)),
            (rat(0), ratio(1, 9)),
            (ratio(-9, 4), ratio(-11, 5)),
        ];
        for (lo, hi) in cases {
            let mut expected = None;
            'outer: for d in 1i64..200 {
                let start = (&lo * rat(d)).floor().to_integer();
                let mut n = start;
                loop {
                    let q = Rational::new(n.clone(), BigInt::from(d));
                    if q >= hi {
                        break;
                    }
                    if q > lo {
                        expected = Some(q);
                        break 'outer;
                    }
                    n += 1;
                }
            }
            assert_eq!(simplest_between(&lo, &hi), expected.unwrap());
        }
    }
}
