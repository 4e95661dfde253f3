//! Exact rational coefficients.
//!
//! All arithmetic in this crate happens over arbitrary-precision rationals so
//! that "equals zero" is decidable and every identity check is exact. `Rat`
//! values are always in lowest terms with a positive denominator; the backing
//! type maintains that on every operation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Format as a decimal-free exact string: `p` when the denominator is 1,
/// `p/q` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` with optional leading sign. Rejects anything else
/// (floats in particular).
pub fn rat_from_str(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError(s.to_string()));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| RatParseError(s.to_string()))?;
    let den: BigInt = den_str
        .trim()
        .parse()
        .map_err(|_| RatParseError(s.to_string()))?;
    if den.is_zero() {
        return Err(RatParseError(s.to_string()));
    }
    Ok(Rat::new(num, den))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct RatParseError(pub String);

/// α! for a multi-index α = (α₁, …, αₙ), as a rational.
pub fn multi_factorial(alpha: &[u32]) -> Rat {
    let mut acc = BigInt::one();
    for &a in alpha {
        for i in 2..=a {
            acc *= BigInt::from(i);
        }
    }
    Rat::from_integer(acc)
}

/// Scale a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. Used to present fitted relations with small integer
/// coefficients.
pub fn primitive_integer_scale(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    let mut den_lcm = BigInt::one();
    for r in v {
        den_lcm = den_lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|r| r.numer() * (&den_lcm / r.denom()))
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if let Some(first) = ints.iter().find(|i| !i.is_zero()) {
        if first.is_negative() {
            g = -g;
        }
    }
    ints.into_iter()
        .map(|i| Rat::from_integer(i / &g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_strings() {
        for s in ["0", "744", "-1/2", "196884", "3/4"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(rat_from_str("2/4").unwrap(), rat(1, 2));
        assert_eq!(rat_from_str("3/-6").unwrap(), rat(-1, 2));
        assert_eq!(rat_to_string(&rat_from_str("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_junk() {
        assert!(rat_from_str("1.5").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(multi_factorial(&[3]), rat_int(6));
        assert_eq!(multi_factorial(&[2, 3]), rat_int(12));
        assert_eq!(multi_factorial(&[]), rat_int(1));
    }

    #[test]
    fn primitive_scale() {
        let v = vec![rat(-1, 2), rat(1, 4), rat_int(0)];
        assert_eq!(
            primitive_integer_scale(&v),
            vec![rat_int(2), rat_int(-1), rat_int(0)]
        );
    }
}
