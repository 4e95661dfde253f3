//! Laurent expansion of the Weierstrass ℘-function for y² = 4x³ − g₂x − g₃.
//!
//! ℘(z) = z⁻² + Σ_{m≥2} c_m z^{2m−2} with c₂ = g₂/20, c₃ = g₃/28 and the
//! quadratic recurrence c_m = 3/((2m+1)(m−3)) · Σ_{h=2}^{m−2} c_h c_{m−h}.

use num_traits::Zero;

use super::{SeriesError, TruncatedSeries};
use crate::rat::{rat_int, Rat};

/// Variable tag used by the ℘ expansions.
pub const Z: &str = "z";

/// g₂³ − 27 g₃².
pub fn discriminant(g2: &Rat, g3: &Rat) -> Rat {
    g2 * g2 * g2 - rat_int(27) * g3 * g3
}

/// ℘(z) to the requested precision; errors on a singular (g₂, g₃).
pub fn weierstrass_p(g2: &Rat, g3: &Rat, precision: i64) -> Result<TruncatedSeries, SeriesError> {
    if discriminant(g2, g3).is_zero() {
        return Err(SeriesError::InvalidData(format!(
            "singular Weierstrass parameters: g2^3 - 27*g3^2 = 0 (g2 = {g2}, g3 = {g3})"
        )));
    }
    if precision <= -2 {
        return Err(SeriesError::PrecisionDeficit {
            required: -1,
            available: precision,
        });
    }
    // c[m] carries the z^{2m-2} coefficient; climb until 2m-2 >= precision
    let mut c: Vec<Rat> = vec![Rat::zero(), Rat::zero(), g2 / rat_int(20), g3 / rat_int(28)];
    let mut m = 4;
    while 2 * m - 2 < precision {
        let mut s = Rat::zero();
        for h in 2..=(m - 2) {
            s += &c[h as usize] * &c[(m - h) as usize];
        }
        let factor = rat_int(3) / (rat_int(2 * m + 1) * rat_int(m - 3));
        c.push(factor * s);
        m += 1;
    }
    let len = (precision + 2) as usize;
    let mut coeffs = vec![Rat::zero(); len];
    coeffs[0] = Rat::from_integer(1.into());
    for (idx, cm) in c.iter().enumerate().skip(2) {
        let e = 2 * idx as i64 - 2;
        if e < precision {
            coeffs[(e + 2) as usize] = cm.clone();
        }
    }
    Ok(TruncatedSeries::from_coeffs(Z, -2, coeffs))
}

/// ℘′(z) = d℘/dz.
pub fn weierstrass_p_prime(p: &TruncatedSeries) -> TruncatedSeries {
    p.derive()
}

/// The curve residual (℘′)² − 4℘³ + g₂℘ + g₃, which must vanish to precision.
pub fn curve_residual(
    g2: &Rat,
    g3: &Rat,
    x: &TruncatedSeries,
    y: &TruncatedSeries,
) -> Result<TruncatedSeries, SeriesError> {
    let y2 = y.pow(2)?;
    let x3 = x.pow(3)?.scale(&rat_int(4));
    y2.sub(&x3)?
        .add(&x.scale(g2))?
        .add(&TruncatedSeries::constant(
            x.var(),
            g3.clone(),
            y2.precision(),
        ))
}
