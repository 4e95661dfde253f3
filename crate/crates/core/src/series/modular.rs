//! q-expansions of the level-one modular objects: E₄, E₆, Δ, and the
//! elliptic modular function j, all over exact rationals in the variable `q`.
//!
//! Normalizations are the standard rational ones: E₄ = 1 + 240 Σ σ₃(m) qᵐ,
//! E₆ = 1 − 504 Σ σ₅(m) qᵐ, Δ = (E₄³ − E₆²)/1728, j = E₄³/Δ.

use num_bigint::BigInt;
use num_traits::One;

use super::{SeriesError, TruncatedSeries};
use crate::rat::{rat_int, Rat};

/// Variable tag used by all q-expansions.
pub const Q: &str = "q";

/// σ_k(m) for m = 0..precision by a divisor sieve; index 0 is unused.
fn sigma_table(k: u32, precision: i64) -> Vec<BigInt> {
    let n = precision.max(0) as usize;
    let mut table = vec![BigInt::default(); n];
    for d in 1..n {
        let dk = BigInt::from(d).pow(k);
        let mut m = d;
        while m < n {
            table[m] += &dk;
            m += d;
        }
    }
    table
}

/// Eisenstein series of weight 4 or 6 to the requested precision.
pub fn eisenstein(weight: u32, precision: i64) -> Result<TruncatedSeries, SeriesError> {
    let (k, scale) = match weight {
        4 => (3, rat_int(240)),
        6 => (5, rat_int(-504)),
        other => {
            return Err(SeriesError::InvalidData(format!(
                "Eisenstein weight must be 4 or 6, got {other}"
            )))
        }
    };
    if precision < 1 {
        return Err(SeriesError::PrecisionDeficit {
            required: 1,
            available: precision,
        });
    }
    let sigma = sigma_table(k, precision);
    let mut coeffs = vec![Rat::one()];
    for s in sigma.iter().skip(1) {
        coeffs.push(&scale * Rat::from_integer(s.clone()));
    }
    Ok(TruncatedSeries::from_coeffs(Q, 0, coeffs))
}

/// The discriminant cusp form Δ = (E₄³ − E₆²)/1728; valuation 1, leading 1.
pub fn delta(precision: i64) -> Result<TruncatedSeries, SeriesError> {
    let e4 = eisenstein(4, precision)?;
    let e6 = eisenstein(6, precision)?;
    let num = e4.pow(3)?.sub(&e6.pow(2)?)?;
    Ok(num.scale(&Rat::new(BigInt::one(), BigInt::from(1728))))
}

/// The j-function q-expansion: valuation −1, leading coefficient 1, and
/// exactly `precision` stored coefficients (exponents −1 .. precision−2).
pub fn j_series(precision: i64) -> Result<TruncatedSeries, SeriesError> {
    if precision < 1 {
        return Err(SeriesError::PrecisionDeficit {
            required: 1,
            available: precision,
        });
    }
    // dividing by Δ (valuation 1) costs two orders of precision
    let internal = precision + 1;
    let e4 = eisenstein(4, internal)?;
    let d = delta(internal)?;
    e4.pow(3)?.div(&d)
}
