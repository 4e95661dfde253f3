//! Algebraic-relation fitting by exact rational linear algebra.
//!
//! Given sample tuples of series, build the evaluation matrix whose columns
//! are the monomials under per-coordinate degree bounds and whose rows are
//! series coefficients, then return the null space as polynomial relations.
//! No rounding happens anywhere; a fitted relation vanishes on the samples to
//! the working precision by construction and can be re-verified at higher
//! precision by the caller.

use num_traits::{One, Zero};

use super::{SeriesError, TruncatedSeries};
use crate::diffpoly::{Ctx, DiffPoly, JetVar, Monomial, MultiIndex};
use crate::rat::{primitive_integer_scale, Rat};

/// Basis of the right null space of `matrix` (row-major, `cols` columns),
/// via exact Gauss-Jordan elimination. Deterministic: first nonzero pivot.
pub fn rational_nullspace(matrix: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = matrix.to_vec();
    let rows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = Rat::one() / &m[r][c];
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exponent tuples (e_0, …, e_{d-1}) with e_i ≤ bounds[i], first coordinate
/// varying fastest. Column order of the evaluation matrix.
pub fn monomial_exponents(bounds: &[u32]) -> Vec<Vec<u32>> {
    let total: usize = bounds.iter().map(|&b| b as usize + 1).product();
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut e = Vec::with_capacity(bounds.len());
        for &b in bounds {
            let base = b as usize + 1;
            e.push((idx % base) as u32);
            idx /= base;
        }
        out.push(e);
    }
    out
}

/// Turn a coefficient vector over `monomial_exponents(bounds)` into a plain
/// polynomial in d order-0 variables.
pub fn relation_poly(bounds: &[u32], coeffs: &[Rat]) -> DiffPoly {
    let ctx = Ctx::new(bounds.len(), 0);
    let exps = monomial_exponents(bounds);
    DiffPoly::from_terms(
        ctx,
        exps.iter().zip(coeffs).map(|(e, c)| {
            let factors: Vec<(JetVar, u32)> = e
                .iter()
                .enumerate()
                .map(|(k, &ek)| {
                    (
                        JetVar {
                            base: k,
                            index: MultiIndex::zero(0),
                        },
                        ek,
                    )
                })
                .collect();
            (Monomial::from_factors(factors), c.clone())
        }),
    )
}

/// Fit polynomial relations vanishing on every sample tuple.
///
/// Every series in a tuple must share a variable tag and carry precision at
/// least the monomial count under `bounds` (solvability heuristic; a
/// `PrecisionDeficit` reports the shortfall). Returns a basis of the null
/// space of the evaluation matrix as primitive-integer polynomials.
pub fn fit_algebraic_relation(
    samples: &[Vec<TruncatedSeries>],
    bounds: &[u32],
) -> Result<Vec<DiffPoly>, SeriesError> {
    let exps = monomial_exponents(bounds);
    let n_monomials = exps.len() as i64;
    let mut matrix: Vec<Vec<Rat>> = Vec::new();
    for tuple in samples {
        if tuple.len() != bounds.len() {
            return Err(SeriesError::InvalidData(format!(
                "sample arity {} does not match {} degree bounds",
                tuple.len(),
                bounds.len()
            )));
        }
        for s in tuple {
            s.check_var(&tuple[0])?;
            if s.precision() < n_monomials {
                return Err(SeriesError::PrecisionDeficit {
                    required: n_monomials,
                    available: s.precision(),
                });
            }
        }
        // power tables per coordinate
        let powers: Vec<Vec<TruncatedSeries>> = tuple
            .iter()
            .zip(bounds)
            .map(|(s, &b)| {
                let mut col = Vec::with_capacity(b as usize + 1);
                for e in 0..=b {
                    col.push(s.pow(e as i64)?);
                }
                Ok::<_, SeriesError>(col)
            })
            .collect::<Result<_, _>>()?;
        let mono_series: Vec<TruncatedSeries> = exps
            .iter()
            .map(|e| {
                let mut acc = powers[0][e[0] as usize].clone();
                for (i, &ei) in e.iter().enumerate().skip(1) {
                    acc = acc.mul(&powers[i][ei as usize])?;
                }
                Ok::<_, SeriesError>(acc)
            })
            .collect::<Result<_, _>>()?;
        let lo = mono_series.iter().map(|s| s.valuation()).min().unwrap();
        let hi = mono_series.iter().map(|s| s.precision()).min().unwrap();
        if hi <= lo {
            return Err(SeriesError::PrecisionDeficit {
                required: lo + 1,
                available: hi,
            });
        }
        for e in lo..hi {
            matrix.push(
                mono_series
                    .iter()
                    .map(|s| s.coeff(e).unwrap_or_else(Rat::zero))
                    .collect(),
            );
        }
    }
    let basis = rational_nullspace(&matrix, exps.len());
    Ok(basis
        .iter()
        .map(|v| relation_poly(bounds, &primitive_integer_scale(v)))
        .collect())
}

/// Evaluate a fitted relation on a sample tuple (order-0 polynomial at series
/// arguments); used to re-verify relations at higher precision.
pub fn eval_relation(
    relation: &DiffPoly,
    tuple: &[TruncatedSeries],
) -> Result<TruncatedSeries, SeriesError> {
    use crate::series::SeriesRing;
    let var = tuple
        .first()
        .map(|s| s.var().to_string())
        .unwrap_or_else(|| "q".to_string());
    let precision = tuple.iter().map(|s| s.precision()).min().unwrap_or(0);
    let ring = SeriesRing::new(&var, precision);
    let images: std::collections::BTreeMap<usize, TruncatedSeries> = tuple
        .iter()
        .cloned()
        .enumerate()
        .collect();
    relation
        .eval_order0(&ring, &images)
        .map_err(|e| SeriesError::InvalidData(e.to_string()))
}
