//! The Schwarzian derivative S(f) = (f″/f′)′ − ½(f″/f′)².
//!
//! Its kernel on series germs is exactly the fractional linear maps, and it
//! satisfies the cocycle S(f∘g) = (S(f)∘g)·(g′)² + S(g). The derivation can
//! be the ordinary d/dq or θ = q·d/dq; the θ form is what homogeneous
//! q-expansion identities use.

use crate::rat::Rat;
use crate::series::{SeriesError, TruncatedSeries};

/// Which derivation the Schwarzian is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchwarzianMode {
    /// d/dq.
    Ordinary,
    /// θ = q·d/dq.
    Theta,
}

fn apply_mode(f: &TruncatedSeries, mode: SchwarzianMode) -> TruncatedSeries {
    match mode {
        SchwarzianMode::Ordinary => f.derive(),
        SchwarzianMode::Theta => f.theta(),
    }
}

/// Schwarzian derivative of a series germ; errors when the derivative is not
/// invertible ("critical germ").
pub fn schwarzian(
    f: &TruncatedSeries,
    mode: SchwarzianMode,
) -> Result<TruncatedSeries, SeriesError> {
    let fp = apply_mode(f, mode);
    if fp.is_zero() {
        return Err(SeriesError::CriticalGerm);
    }
    let w = apply_mode(&fp, mode).div(&fp)?;
    let half_w2 = w.pow(2)?.scale(&Rat::new(1.into(), 2.into()));
    apply_mode(&w, mode).sub(&half_w2)
}
