//! Constant fractional linear transformations and the orbit decision.
//!
//! `same_pgl2_orbit` decides whether two series germs lie in one orbit of the
//! constant Möbius group by solving the linear system
//! b·(c·a + d) = a_entry·a + b_entry exactly and looking for a nondegenerate
//! constant solution; on success it returns a witness matrix. The decision
//! agrees with equality of Schwarzian derivatives.

use num_traits::{One, Zero};

use super::GroupError;
use crate::rat::{rat_to_string, Rat};
use crate::series::fit::rational_nullspace;
use crate::series::{SeriesError, TruncatedSeries};

/// A constant 2×2 matrix (a b; c d) with ad − bc ≠ 0 acting by
/// f ↦ (a·f + b)/(c·f + d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTransform {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl MobiusTransform {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, GroupError> {
        let m = MobiusTransform { a, b, c, d };
        if m.det().is_zero() {
            return Err(GroupError::DegenerateMatrix);
        }
        Ok(m)
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    fn entries(&self) -> [&Rat; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Scale so the first nonzero entry is 1.
    pub fn normalize_projective(&self) -> MobiusTransform {
        let pivot = self
            .entries()
            .into_iter()
            .find(|e| !e.is_zero())
            .cloned()
            .unwrap_or_else(Rat::one);
        MobiusTransform {
            a: &self.a / &pivot,
            b: &self.b / &pivot,
            c: &self.c / &pivot,
            d: &self.d / &pivot,
        }
    }

    pub fn projectively_equal(&self, other: &MobiusTransform) -> bool {
        self.normalize_projective() == other.normalize_projective()
    }

    /// (a·f + b)/(c·f + d) on a series germ.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        let var = f.var();
        let num = f
            .scale(&self.a)
            .add(&TruncatedSeries::constant(var, self.b.clone(), f.precision()))?;
        let den = f
            .scale(&self.c)
            .add(&TruncatedSeries::constant(var, self.d.clone(), f.precision()))?;
        num.div(&den)
    }

    /// Entries as normalized rational strings, row-major.
    pub fn entry_strings(&self) -> [String; 4] {
        let n = self.normalize_projective();
        [
            rat_to_string(&n.a),
            rat_to_string(&n.b),
            rat_to_string(&n.c),
            rat_to_string(&n.d),
        ]
    }
}

/// Outcome of the orbit decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecision {
    pub same_orbit: bool,
    pub witness: Option<MobiusTransform>,
}

fn is_constant_series(s: &TruncatedSeries) -> bool {
    s.is_zero()
        || (s.valuation() == 0
            && (1..s.precision()).all(|e| s.coeff(e).map_or(true, |c| c.is_zero())))
}

/// Decide whether `a` and `b` lie in one constant-Möbius orbit at jet order
/// `m`, returning a witness on success.
///
/// Requires both series nonconstant with equal variable tags and precision at
/// least 2m + 8.
pub fn same_pgl2_orbit(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    order: u32,
) -> Result<OrbitDecision, SeriesError> {
    if a.var() != b.var() {
        return Err(SeriesError::VariableMismatch(
            a.var().to_string(),
            b.var().to_string(),
        ));
    }
    if is_constant_series(a) || is_constant_series(b) {
        return Err(SeriesError::InvalidData(
            "orbit decision requires nonconstant series".to_string(),
        ));
    }
    let floor = 2 * order as i64 + 8;
    let available = a.precision().min(b.precision());
    if available < floor {
        return Err(SeriesError::PrecisionDeficit {
            required: floor,
            available,
        });
    }
    // Solve A·a + B − b·(C·a + D) = 0 for constants (A, B, C, D): columns of
    // the linear system are a, 1, −a·b, −b.
    let ab = a.mul(b)?;
    let one = TruncatedSeries::constant(a.var(), Rat::one(), available);
    let cols = [a.clone(), one, ab.neg(), b.neg()];
    let lo = cols.iter().map(|s| s.valuation()).min().unwrap();
    let hi = cols.iter().map(|s| s.precision()).min().unwrap();
    let mut matrix = Vec::new();
    for e in lo..hi {
        matrix.push(
            cols.iter()
                .map(|s| s.coeff(e).unwrap_or_else(Rat::zero))
                .collect::<Vec<_>>(),
        );
    }
    let basis = rational_nullspace(&matrix, 4);
    // A solution is a genuine witness only when nondegenerate. det is a
    // quadratic form, so it vanishes on the whole solution space iff it
    // vanishes on every basis vector and every pairwise sum.
    let det = |v: &[Rat]| -> Rat { &v[0] * &v[3] - &v[1] * &v[2] };
    let mut witness_vec: Option<Vec<Rat>> = None;
    'outer: for (i, v) in basis.iter().enumerate() {
        if !det(v).is_zero() {
            witness_vec = Some(v.clone());
            break;
        }
        for w in basis.iter().skip(i + 1) {
            let sum: Vec<Rat> = v.iter().zip(w).map(|(x, y)| x + y).collect();
            if !det(&sum).is_zero() {
                witness_vec = Some(sum);
                break 'outer;
            }
        }
    }
    match witness_vec {
        None => Ok(OrbitDecision {
            same_orbit: false,
            witness: None,
        }),
        Some(v) => {
            let m = MobiusTransform {
                a: v[0].clone(),
                b: v[1].clone(),
                c: v[2].clone(),
                d: v[3].clone(),
            }
            .normalize_projective();
            Ok(OrbitDecision {
                same_orbit: true,
                witness: Some(m),
            })
        }
    }
}
