//! Truncated exact-arithmetic series.
//!
//! One-variable Laurent/Taylor series with tracked precision over exact
//! rationals. A value represents Σ_{e=v}^{N-1} c_e q^e + O(q^N): `valuation`
//! is v, `precision` is N, and the coefficient slice covers exponents v..N.
//! Precision tracking is conservative: add keeps the minimum precision, a
//! product of precisions N₁, N₂ at valuations v₁, v₂ is good to
//! min(N₁+v₂, N₂+v₁), and inversion of a series of valuation v costs 2v.
//!
//! Submodules build the named expansions (Eisenstein series, the elliptic
//! modular function, the Weierstrass ℘-series) and the exact linear-algebra
//! relation fitter.

pub mod fit;
pub mod modular;
pub mod multi;
pub mod weierstrass;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rat::{rat_from_str, rat_to_string, Rat};
use crate::ring::DiffRing;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("variable mismatch: `{0}` vs `{1}`")]
    VariableMismatch(String, String),
    #[error("cannot invert the zero series")]
    ZeroInvert,
    #[error("composition requires inner series of valuation >= 1 (got {0})")]
    ComposeValuation(i64),
    #[error("series precision deficit: required {required}, available {available}")]
    PrecisionDeficit { required: i64, available: i64 },
    #[error("critical germ: derivative is the zero series to precision")]
    CriticalGerm,
    #[error("series is not a unit to precision")]
    NonUnit,
    #[error("invalid series data: {0}")]
    InvalidData(String),
}

/// A truncated Laurent series Σ_{e=v}^{N-1} c_e q^e + O(q^N).
///
/// Canonical form: the leading stored coefficient is nonzero, except for the
/// zero series which stores no coefficients and has `valuation == precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    var: String,
    valuation: i64,
    coeffs: Vec<Rat>,
    precision: i64,
}

impl TruncatedSeries {
    // ---- Constructors ----

    /// The zero series known to O(q^precision).
    pub fn zero(var: &str, precision: i64) -> Self {
        TruncatedSeries {
            var: var.to_string(),
            valuation: precision,
            coeffs: vec![],
            precision,
        }
    }

    /// A constant series.
    pub fn constant(var: &str, c: Rat, precision: i64) -> Self {
        Self::monomial(var, c, 0, precision)
    }

    /// c · q^e, known to O(q^precision).
    pub fn monomial(var: &str, c: Rat, e: i64, precision: i64) -> Self {
        if c.is_zero() || e >= precision {
            return Self::zero(var, precision);
        }
        let len = (precision - e) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        coeffs[0] = c;
        TruncatedSeries {
            var: var.to_string(),
            valuation: e,
            coeffs,
            precision,
        }
    }

    /// The identity series q, known to O(q^precision).
    pub fn identity(var: &str, precision: i64) -> Self {
        Self::monomial(var, Rat::one(), 1, precision)
    }

    /// Build from coefficients starting at exponent `valuation`; the precision
    /// is `valuation + coeffs.len()`.
    pub fn from_coeffs(var: &str, valuation: i64, coeffs: Vec<Rat>) -> Self {
        let precision = valuation + coeffs.len() as i64;
        TruncatedSeries {
            var: var.to_string(),
            valuation,
            coeffs,
            precision,
        }
        .normalized()
    }

    /// Σ_{m=0}^{N-1} q^m / m!.
    pub fn exp(var: &str, precision: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut c = Rat::one();
        for m in 0..precision.max(0) {
            if m > 0 {
                c /= Rat::from_integer(m.into());
            }
            coeffs.push(c.clone());
        }
        Self::from_coeffs(var, 0, coeffs)
    }

    fn normalized(mut self) -> Self {
        let mut lead = 0;
        while lead < self.coeffs.len() && self.coeffs[lead].is_zero() {
            lead += 1;
        }
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.valuation = self.precision;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
        self
    }

    // ---- Accessors ----

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^e: `Some(c)` when e is below the precision horizon,
    /// `None` when the coefficient is unknown.
    pub fn coeff(&self, e: i64) -> Option<Rat> {
        if e >= self.precision {
            return None;
        }
        if e < self.valuation {
            return Some(Rat::zero());
        }
        Some(self.coeffs[(e - self.valuation) as usize].clone())
    }

    /// Largest nonzero coefficient in absolute value, if any.
    pub fn max_abs_coeff(&self) -> Option<Rat> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.abs())
            .max()
    }

    fn check_var(&self, other: &TruncatedSeries) -> Result<(), SeriesError> {
        if self.var != other.var {
            Err(SeriesError::VariableMismatch(
                self.var.clone(),
                other.var.clone(),
            ))
        } else {
            Ok(())
        }
    }

    // ---- Arithmetic ----

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.check_var(other)?;
        let precision = self.precision.min(other.precision);
        let valuation = self.valuation.min(other.valuation).min(precision);
        let len = (precision - valuation).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for series in [self, other] {
            for (i, c) in series.coeffs.iter().enumerate() {
                let e = series.valuation + i as i64;
                if e < precision {
                    coeffs[(e - valuation) as usize] += c;
                }
            }
        }
        Ok(TruncatedSeries {
            var: self.var.clone(),
            valuation,
            coeffs,
            precision,
        }
        .normalized())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> TruncatedSeries {
        if c.is_zero() {
            return TruncatedSeries::zero(&self.var, self.precision);
        }
        TruncatedSeries {
            var: self.var.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            precision: self.precision,
        }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            precision: self.precision + k,
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.check_var(other)?;
        let precision = (self.precision + other.valuation).min(other.precision + self.valuation);
        if self.is_zero() || other.is_zero() {
            return Ok(TruncatedSeries::zero(&self.var, precision));
        }
        let valuation = self.valuation + other.valuation;
        let len = (precision - valuation).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries {
            var: self.var.clone(),
            valuation,
            coeffs,
            precision,
        }
        .normalized())
    }

    /// Multiplicative inverse. Requires a nonzero leading coefficient; the
    /// result has valuation −v and precision N − 2v.
    pub fn invert(&self) -> Result<TruncatedSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroInvert);
        }
        let v = self.valuation;
        let n = (self.precision - v) as usize;
        let a0 = &self.coeffs[0];
        let mut inv = vec![Rat::zero(); n];
        inv[0] = Rat::one() / a0;
        for k in 1..n {
            let mut s = Rat::zero();
            for i in 1..=k {
                let ai = &self.coeffs[i];
                if !ai.is_zero() && !inv[k - i].is_zero() {
                    s += ai * &inv[k - i];
                }
            }
            inv[k] = -s / a0;
        }
        Ok(TruncatedSeries {
            var: self.var.clone(),
            valuation: -v,
            coeffs: inv,
            precision: self.precision - 2 * v,
        }
        .normalized())
    }

    pub fn div(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.mul(&other.invert()?)
    }

    /// Integer power; negative exponents go through `invert`.
    pub fn pow(&self, e: i64) -> Result<TruncatedSeries, SeriesError> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        if e == 0 {
            return Ok(TruncatedSeries::constant(
                &self.var,
                Rat::one(),
                self.precision - self.valuation,
            ));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// d/dq.
    pub fn derive(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.valuation + i as i64;
            coeffs.push(c * Rat::from_integer(e.into()));
        }
        TruncatedSeries {
            var: self.var.clone(),
            valuation: self.valuation - 1,
            coeffs,
            precision: self.precision - 1,
        }
        .normalized()
    }

    /// θ = q·d/dq; precision is preserved.
    pub fn theta(&self) -> TruncatedSeries {
        self.derive().shift(1).truncate_to(self.precision)
    }

    /// Restrict to a (smaller) precision horizon.
    pub fn truncate_to(&self, precision: i64) -> TruncatedSeries {
        let precision = precision.min(self.precision);
        if precision <= self.valuation {
            return TruncatedSeries::zero(&self.var, precision);
        }
        let len = (precision - self.valuation) as usize;
        TruncatedSeries {
            var: self.var.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs[..len].to_vec(),
            precision,
        }
        .normalized()
    }

    /// Equality of all coefficients up to a common precision horizon, which
    /// must be available on both sides.
    pub fn eq_to_precision(&self, other: &TruncatedSeries, precision: i64) -> bool {
        self.precision >= precision
            && other.precision >= precision
            && self.truncate_to(precision) == other.truncate_to(precision)
    }

    /// Composition f ∘ g; requires val(g) ≥ 1. The result is good to
    /// min of the tracked arithmetic precision and val(g)·prec(f).
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let w = if inner.is_zero() {
            // the zero series composes like q^precision
            inner.precision
        } else {
            inner.valuation
        };
        if w < 1 {
            return Err(SeriesError::ComposeValuation(w));
        }
        if self.precision < 0 {
            return Err(SeriesError::PrecisionDeficit {
                required: 0,
                available: self.precision,
            });
        }
        let cap = w * self.precision;
        if self.is_zero() {
            return Ok(TruncatedSeries::zero(&inner.var, cap));
        }
        // Horner on the Taylor part f / q^v, then multiply the valuation back.
        let taylor_len = (self.precision - self.valuation) as usize;
        let horner_cap = w * taylor_len as i64 + 2 * w * self.valuation.abs() + 8;
        let mut acc = TruncatedSeries::zero(&inner.var, horner_cap);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?;
            acc = acc.add(&TruncatedSeries::constant(&inner.var, c.clone(), horner_cap))?;
        }
        acc = acc.truncate_to(w * taylor_len as i64);
        let out = if self.valuation == 0 {
            acc
        } else {
            acc.mul(&inner.pow(self.valuation)?)?
        };
        Ok(out.truncate_to(cap))
    }

    // ---- JSON ----

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            var: self.var.clone(),
            valuation: self.valuation,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<TruncatedSeries, SeriesError> {
        let coeffs: Vec<Rat> = json
            .coeffs
            .iter()
            .map(|s| rat_from_str(s).map_err(|e| SeriesError::InvalidData(e.to_string())))
            .collect::<Result<_, _>>()?;
        if json.valuation + coeffs.len() as i64 != json.precision {
            return Err(SeriesError::InvalidData(format!(
                "coefficient count {} does not span valuation {} to precision {}",
                coeffs.len(),
                json.valuation,
                json.precision
            )));
        }
        Ok(TruncatedSeries {
            var: json.var.clone(),
            valuation: json.valuation,
            coeffs,
            precision: json.precision,
        }
        .normalized())
    }
}

/// Wire form of a series: exact decimal-free rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub var: String,
    pub valuation: i64,
    pub precision: i64,
    pub coeffs: Vec<String>,
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + i as i64;
            let neg = c < &Rat::zero();
            let abs = if neg { -c } else { c.clone() };
            if wrote {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let show_coeff = !abs.is_one() || e == 0;
            if show_coeff {
                write!(f, "{}", rat_to_string(&abs))?;
            }
            match e {
                0 => {}
                1 => write!(f, "{}{}", if show_coeff { "*" } else { "" }, self.var)?,
                _ => write!(f, "{}{}^{}", if show_coeff { "*" } else { "" }, self.var, e)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.precision)
    }
}

/// Ring object for univariate series under d/d(var); constants materialize at
/// the ring's ambient precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesRing {
    pub var: String,
    pub precision: i64,
}

impl SeriesRing {
    pub fn new(var: &str, precision: i64) -> Self {
        SeriesRing {
            var: var.to_string(),
            precision,
        }
    }

    /// The coordinate series q.
    pub fn q(&self) -> TruncatedSeries {
        TruncatedSeries::identity(&self.var, self.precision)
    }
}

impl DiffRing for SeriesRing {
    type Elem = TruncatedSeries;

    fn derivations(&self) -> usize {
        1
    }

    fn zero(&self) -> TruncatedSeries {
        TruncatedSeries::zero(&self.var, self.precision)
    }

    fn one(&self) -> TruncatedSeries {
        TruncatedSeries::constant(&self.var, Rat::one(), self.precision)
    }

    fn from_rat(&self, c: &Rat) -> TruncatedSeries {
        TruncatedSeries::constant(&self.var, c.clone(), self.precision)
    }

    fn add(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a.add(b).expect("ring variable fixed by the ring object")
    }

    fn neg(&self, a: &TruncatedSeries) -> TruncatedSeries {
        a.neg()
    }

    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a.mul(b).expect("ring variable fixed by the ring object")
    }

    fn derive(&self, a: &TruncatedSeries, _i: usize) -> TruncatedSeries {
        a.derive()
    }

    fn is_zero(&self, a: &TruncatedSeries) -> bool {
        a.is_zero()
    }

    fn try_invert(&self, a: &TruncatedSeries) -> Option<TruncatedSeries> {
        a.invert().ok()
    }
}

#[cfg(test)]
mod tests;
