//! The generalized logarithmic derivative of the j-covering and the modular
//! Hecke relations, both obtained by fit-then-verify.
//!
//! The operator has the shape χ(x) = S_θ(x) + R(x)·(θx)² in the θ = q·d/dq
//! coordinate; the rational function R = P/Q (degrees ≤ 6) is never
//! transcribed from tables but fitted as the null space of an exact linear
//! system built from the j-expansion, then reduced to lowest terms. Fibers of
//! χ are closed under the modular correspondences: χ annihilates j(q^N)
//! without refitting.

use num_traits::{One, Zero};

use super::schwarzian::{schwarzian, SchwarzianMode};
use crate::diffpoly::DiffPoly;
use crate::rat::{primitive_integer_scale, rat_to_string, Rat};
use crate::series::fit::{eval_relation, fit_algebraic_relation, rational_nullspace};
use crate::series::modular::{j_series, Q};
use crate::series::{SeriesError, TruncatedSeries};

// ---- dense univariate polynomial helpers over Rat ----

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_is_zero(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Remainder of a by b (b nonzero), standard long division.
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &f;
            r[shift + i] -= t;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![Rat::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        q[shift] = f.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &f;
            r[shift + i] -= t;
        }
        r = poly_trim(r);
    }
    debug_assert!(poly_is_zero(&r), "inexact polynomial division");
    q
}

/// Monic gcd by the Euclidean algorithm.
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

/// Evaluate a polynomial at a series argument by Horner.
fn poly_at_series(p: &[Rat], x: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    // generous scratch precision so the constants never cap the result
    let scratch = x.precision() + x.precision().abs() + 16;
    let mut acc = TruncatedSeries::zero(x.var(), scratch);
    for c in p.iter().rev() {
        acc = acc.mul(x)?;
        acc = acc.add(&TruncatedSeries::constant(x.var(), c.clone(), scratch))?;
    }
    Ok(acc)
}

/// The fitted operator χ(x) = S_θ(x) + (P/Q)(x)·(θx)².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JOperator {
    /// Numerator coefficients of R, ascending degree.
    pub num: Vec<Rat>,
    /// Denominator coefficients of R, ascending degree.
    pub den: Vec<Rat>,
}

impl JOperator {
    /// Fit R from the j-expansion at the given working precision: solve
    /// Σ pᵢ jⁱ·(θj)² + Σ qᵢ jⁱ·S_θ(j) ≡ 0 with deg P, deg Q ≤ 6 by an exact
    /// null-space computation, then reduce P/Q to lowest terms.
    pub fn fit(precision: i64) -> Result<JOperator, SeriesError> {
        const DEG: usize = 6;
        let required = 2 * (DEG as i64 + 1) + 10;
        if precision < required {
            return Err(SeriesError::PrecisionDeficit {
                required,
                available: precision,
            });
        }
        let j = j_series(precision)?;
        let tj2 = j.theta().pow(2)?;
        let s = schwarzian(&j, SchwarzianMode::Theta)?;
        let mut cols: Vec<TruncatedSeries> = Vec::with_capacity(2 * (DEG + 1));
        let mut jpow = TruncatedSeries::constant(Q, Rat::one(), j.precision() - j.valuation());
        let mut jpowers = Vec::with_capacity(DEG + 1);
        for _ in 0..=DEG {
            jpowers.push(jpow.clone());
            jpow = jpow.mul(&j)?;
        }
        for jp in &jpowers {
            cols.push(jp.mul(&tj2)?);
        }
        for jp in &jpowers {
            cols.push(jp.mul(&s)?);
        }
        let lo = cols.iter().map(|c| c.valuation()).min().unwrap();
        let hi = cols.iter().map(|c| c.precision()).min().unwrap();
        if hi - lo < cols.len() as i64 + 2 {
            return Err(SeriesError::PrecisionDeficit {
                required: lo + cols.len() as i64 + 2,
                available: hi,
            });
        }
        let mut matrix = Vec::new();
        for e in lo..hi {
            matrix.push(
                cols.iter()
                    .map(|c| c.coeff(e).unwrap_or_else(Rat::zero))
                    .collect::<Vec<_>>(),
            );
        }
        let basis = rational_nullspace(&matrix, cols.len());
        let v = basis.first().ok_or_else(|| {
            SeriesError::InvalidData("no rational operator of the expected shape".to_string())
        })?;
        let num = poly_trim(v[..=DEG].to_vec());
        let den = poly_trim(v[DEG + 1..].to_vec());
        if poly_is_zero(&den) || poly_is_zero(&num) {
            return Err(SeriesError::InvalidData(
                "degenerate fitted operator".to_string(),
            ));
        }
        let g = poly_gcd(&num, &den);
        let num = poly_div_exact(&num, &g);
        let den = poly_div_exact(&den, &g);
        // canonical scaling: primitive integer vector across both polynomials
        let mut joint = num.clone();
        joint.extend(den.iter().cloned());
        let joint = primitive_integer_scale(&joint);
        let (num, den) = joint.split_at(num.len());
        Ok(JOperator {
            num: num.to_vec(),
            den: poly_trim(den.to_vec()),
        })
    }

    /// Apply χ to a series germ with invertible θ-derivative.
    pub fn apply(&self, x: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let tx = x.theta();
        if tx.is_zero() {
            return Err(SeriesError::CriticalGerm);
        }
        let s = schwarzian(x, SchwarzianMode::Theta)?;
        let r = poly_at_series(&self.num, x)?.div(&poly_at_series(&self.den, x)?)?;
        s.add(&r.mul(&tx.pow(2)?)?)
    }

    /// R as human-readable strings (ascending degree).
    pub fn r_strings(&self) -> (Vec<String>, Vec<String>) {
        (
            self.num.iter().map(rat_to_string).collect(),
            self.den.iter().map(rat_to_string).collect(),
        )
    }
}

/// A fitted modular relation between j(q) and j(q^N) with its verification
/// data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeRelation {
    pub n: u32,
    /// Polynomial in two order-0 variables: x ↦ j(q), y ↦ j(q^N).
    pub relation: DiffPoly,
    /// The relation re-evaluated on samples at doubled precision vanishes to
    /// this precision.
    pub residual_precision: i64,
    /// Whether the relation is literally symmetric under swapping variables.
    pub symmetric: bool,
}

/// j(q^n) from a given j-expansion.
pub fn j_of_qn(j: &TruncatedSeries, n: u32) -> Result<TruncatedSeries, SeriesError> {
    let inner = TruncatedSeries::monomial(
        Q,
        Rat::one(),
        n as i64,
        n as i64 * (j.precision() + 4),
    );
    j.compose(&inner)
}

fn swap_two_vars(p: &DiffPoly) -> DiffPoly {
    use crate::diffpoly::{Ctx, JetVar, Monomial, MultiIndex};
    DiffPoly::from_terms(
        Ctx::new(2, 0),
        p.terms().map(|(m, c)| {
            let factors = m
                .factors()
                .iter()
                .map(|(v, e)| {
                    (
                        JetVar {
                            base: 1 - v.base,
                            index: MultiIndex::zero(0),
                        },
                        *e,
                    )
                })
                .collect();
            (Monomial::from_factors(factors), c.clone())
        }),
    )
}

/// Fit the modular relation for N ∈ {1, 2, 3} at the given precision and
/// verify it at doubled precision.
///
/// N = 2, 3 use the stated bidegree (N+1, N+1); the degenerate N = 1 case is
/// the identity correspondence, fitted at bidegree (1, 1).
pub fn hecke_relation(n: u32, precision: i64) -> Result<HeckeRelation, SeriesError> {
    if !(1..=3).contains(&n) {
        return Err(SeriesError::InvalidData(format!(
            "modular relation fitting supports N in 1..=3, got {n}"
        )));
    }
    let bound = if n == 1 { 1 } else { n + 1 };
    let bounds = [bound, bound];
    let n_monomials = ((bound + 1) * (bound + 1)) as i64;
    if precision < n_monomials + 4 {
        return Err(SeriesError::PrecisionDeficit {
            required: n_monomials + 4,
            available: precision,
        });
    }
    let j = j_series(precision)?;
    let jn = j_of_qn(&j, n)?;
    let relations = fit_algebraic_relation(&[vec![j, jn]], &bounds)?;
    let relation = relations.first().cloned().ok_or_else(|| {
        SeriesError::InvalidData(format!("no modular relation found for N = {n}"))
    })?;
    // verify on fresh samples at doubled precision
    let j2 = j_series(2 * precision)?;
    let jn2 = j_of_qn(&j2, n)?;
    let residual = eval_relation(&relation, &[j2, jn2])?;
    if !residual.is_zero() {
        return Err(SeriesError::InvalidData(format!(
            "fitted relation for N = {n} fails verification at doubled precision"
        )));
    }
    let symmetric = swap_two_vars(&relation) == relation;
    Ok(HeckeRelation {
        n,
        relation,
        residual_precision: residual.precision(),
        symmetric,
    })
}
