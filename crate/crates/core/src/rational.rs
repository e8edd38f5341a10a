//! Exact rational helpers: parsing from the file formats and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{EdiError, Result};

/// Probabilities, weights and normalizers are all exact.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`]. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.35` (converted
/// exactly, so `"0.3"` is `3/10`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || EdiError::InvalidRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(num, den);
    Ok(if neg { -value } else { value })
}

/// Exact sum of many rationals with unrelated denominators. Pairs are
/// combined in a balanced tree without intermediate reduction, so the cost
/// stays close to one multiplication of the final operands.
pub fn sum_balanced(values: &[&Rational]) -> Rational {
    fn raw(values: &[&Rational]) -> (BigInt, BigInt) {
        match values {
            [] => (BigInt::zero(), BigInt::one()),
            [x] => (x.numer().clone(), x.denom().clone()),
            _ => {
                let (a, b) = values.split_at(values.len() / 2);
                let (n1, d1) = raw(a);
                let (n2, d2) = raw(b);
                if d1 == d2 {
                    (n1 + n2, d1)
                } else {
                    (n1 * &d2 + n2 * &d1, d1 * d2)
                }
            }
        }
    }
    let (n, d) = raw(values);
    Rational::new(n, d)
}

/// Canonical machine-readable rendering: `p/q`, or `p` for integers.
pub fn to_fraction_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Positional decimal rendering rounded (half away from zero) to `sig`
/// significant digits, trailing zeros trimmed.
pub fn to_decimal_string(value: &Rational, sig: usize) -> String {
    assert!(sig > 0, "need at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let num = value.numer().abs();
    let den = value.denom().clone();
    let ten = BigInt::from(10);
    let lower = num_traits::pow(ten.clone(), sig - 1);
    let upper = &lower * &ten;

    // scaled(k) = floor(num * 10^k / den)
    let scaled = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (&num * num_traits::pow(ten.clone(), k as usize), den.clone())
        } else {
            (num.clone(), &den * num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    let digits = |v: &BigInt| v.to_string().len() as i64;
    let mut k = sig as i64 - 1 - (digits(&num) - digits(&den));
    loop {
        let (n, d) = scaled(k);
        let q = n.div_floor(&d);
        if q >= upper {
            k -= 1;
        } else if q < lower {
            k += 1;
        } else {
            break;
        }
    }
    let (n, d) = scaled(k);
    let mut m = (BigInt::from(2) * n + &d).div_floor(&(BigInt::from(2) * d));
    if m == upper {
        m = lower.clone();
        k -= 1;
    }
    let mut body = m.to_string();
    if k <= 0 {
        body.push_str(&"0".repeat((-k) as usize));
        return format!("{sign}{body}");
    }
    let k = k as usize;
    if body.len() <= k {
        body = format!("{}{}", "0".repeat(k - body.len() + 1), body);
    }
    let split = body.len() - k;
    let (int_part, frac_part) = body.split_at(split);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_sum_matches_fold() {
        let xs: Vec<Rational> = (1..40).map(|k| ratio(k, 7 * k + 3)).collect();
        let refs: Vec<&Rational> = xs.iter().collect();
        assert_eq!(sum_balanced(&refs), xs.iter().sum::<Rational>());
        assert_eq!(sum_balanced(&[]), int(0));
        assert_eq!(sum_balanced(&[&ratio(1, 4), &ratio(1, 4)]), ratio(1, 2));
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/10").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational(".25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("0.0001").unwrap(), ratio(1, 10000));
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("4/8").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "0.3.1", "1e-3", "/", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&ratio(23, 50), 12), "0.46");
        assert_eq!(to_decimal_string(&ratio(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal_string(&ratio(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal_string(&ratio(43, 96), 2), "0.45");
        assert_eq!(to_decimal_string(&ratio(53, 96), 2), "0.55");
        assert_eq!(to_decimal_string(&int(0), 12), "0");
        assert_eq!(to_decimal_string(&int(1), 12), "1");
        assert_eq!(to_decimal_string(&int(1200), 2), "1200");
        assert_eq!(to_decimal_string(&ratio(1, 30000), 3), "0.0000333");
        assert_eq!(to_decimal_string(&ratio(-5, 4), 12), "-1.25");
        assert_eq!(to_decimal_string(&ratio(999, 1000), 2), "1");
        assert_eq!(to_decimal_string(&ratio(1, 1_000_000_000_000_000), 3), "0.000000000000001");
    }
}
