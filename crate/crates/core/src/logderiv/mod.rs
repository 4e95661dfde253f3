//! Logarithmic derivatives for commutative algebraic groups.
//!
//! A group is a product of additive, multiplicative, and Weierstrass elliptic
//! factors. The logarithmic derivative splits per factor through the
//! invariant differential: ∂ᵢa on the additive group, ∂ᵢf/f on the
//! multiplicative group, and ∂ᵢx/y (from dx/y) on an elliptic factor. It is
//! additive for the group law and kills exactly the constant points.

pub mod jcover;
pub mod mobius;
pub mod schwarzian;

use num_traits::Zero;

use crate::rat::{rat_int, Rat};
use crate::ring::DiffRing;
use crate::series::weierstrass::discriminant;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("singular elliptic factor: g2^3 - 27*g3^2 = 0")]
    SingularFactor,
    #[error("point has {found} factors, group has {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("factor {0}: point kind does not match the group factor")]
    FactorKind(usize),
    #[error("multiplicative coordinate is not a unit to precision")]
    NonUnit,
    #[error("non-generic elliptic point: identity or y = 0 to precision")]
    NonGenericElliptic,
    #[error("elliptic point does not satisfy the curve equation to precision")]
    NotOnCurve,
    #[error("chord construction needs an invertible coordinate difference")]
    NonInvertibleDifference,
    #[error("elliptic addition is ambiguous to precision (equal x, unrelated y)")]
    AmbiguousAddition,
    #[error("degenerate 2x2 matrix: determinant is zero")]
    DegenerateMatrix,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// One factor of a commutative group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupFactor {
    /// The additive group.
    Ga,
    /// The multiplicative group.
    Gm,
    /// y² = 4x³ − g₂x − g₃ in Weierstrass form.
    Elliptic { g2: Rat, g3: Rat },
}

/// A finite product of group factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<GroupFactor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<GroupFactor>) -> Result<Self, GroupError> {
        for f in &factors {
            if let GroupFactor::Elliptic { g2, g3 } = f {
                if discriminant(g2, g3).is_zero() {
                    return Err(GroupError::SingularFactor);
                }
            }
        }
        Ok(GroupSpec { factors })
    }
}

/// A point of an elliptic factor: affine coordinates or the identity marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EllipticPoint<E> {
    Affine { x: E, y: E },
    Identity,
}

impl<E: Clone> EllipticPoint<E> {
    /// −(x, y) = (x, −y).
    pub fn neg<R: DiffRing<Elem = E>>(&self, ring: &R) -> EllipticPoint<E> {
        match self {
            EllipticPoint::Identity => EllipticPoint::Identity,
            EllipticPoint::Affine { x, y } => EllipticPoint::Affine {
                x: x.clone(),
                y: ring.neg(y),
            },
        }
    }
}

/// A point of one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorPoint<E> {
    Ga(E),
    Gm(E),
    Elliptic(EllipticPoint<E>),
}

/// A point of the product group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPoint<E> {
    pub factors: Vec<FactorPoint<E>>,
}

fn check_shape<E>(spec: &GroupSpec, p: &GroupPoint<E>) -> Result<(), GroupError> {
    if spec.factors.len() != p.factors.len() {
        return Err(GroupError::ShapeMismatch {
            expected: spec.factors.len(),
            found: p.factors.len(),
        });
    }
    Ok(())
}

/// y² − (4x³ − g₂x − g₃) in the carrier ring.
pub fn elliptic_residual<R: DiffRing>(
    ring: &R,
    g2: &Rat,
    g3: &Rat,
    x: &R::Elem,
    y: &R::Elem,
) -> R::Elem {
    let y2 = ring.mul(y, y);
    let x3 = ring.scale(&rat_int(4), &ring.pow(x, 3));
    let rhs = ring.sub(
        &ring.sub(&x3, &ring.scale(g2, x)),
        &ring.from_rat(g3),
    );
    ring.sub(&y2, &rhs)
}

fn check_on_curve<R: DiffRing>(
    ring: &R,
    g2: &Rat,
    g3: &Rat,
    p: &EllipticPoint<R::Elem>,
) -> Result<(), GroupError> {
    if let EllipticPoint::Affine { x, y } = p {
        if !ring.is_zero(&elliptic_residual(ring, g2, g3, x, y)) {
            return Err(GroupError::NotOnCurve);
        }
    }
    Ok(())
}

/// Validate group-point invariants: unit Gm coordinates, elliptic points on
/// their curves, matching factor kinds.
pub fn validate_point<R: DiffRing>(
    ring: &R,
    spec: &GroupSpec,
    p: &GroupPoint<R::Elem>,
) -> Result<(), GroupError> {
    check_shape(spec, p)?;
    for (i, (f, fp)) in spec.factors.iter().zip(&p.factors).enumerate() {
        match (f, fp) {
            (GroupFactor::Ga, FactorPoint::Ga(_)) => {}
            (GroupFactor::Gm, FactorPoint::Gm(u)) => {
                if ring.try_invert(u).is_none() {
                    return Err(GroupError::NonUnit);
                }
            }
            (GroupFactor::Elliptic { g2, g3 }, FactorPoint::Elliptic(ep)) => {
                check_on_curve(ring, g2, g3, ep)?;
            }
            _ => return Err(GroupError::FactorKind(i)),
        }
    }
    Ok(())
}

/// The Kolchin logarithmic derivative: one tangent tuple per derivation,
/// one coordinate per factor.
pub fn log_deriv<R: DiffRing>(
    ring: &R,
    spec: &GroupSpec,
    p: &GroupPoint<R::Elem>,
) -> Result<Vec<Vec<R::Elem>>, GroupError> {
    validate_point(ring, spec, p)?;
    let n = ring.derivations();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut tangent = Vec::with_capacity(spec.factors.len());
        for fp in &p.factors {
            let coord = match fp {
                FactorPoint::Ga(a) => ring.derive(a, i),
                FactorPoint::Gm(f) => {
                    let inv = ring.try_invert(f).ok_or(GroupError::NonUnit)?;
                    ring.mul(&ring.derive(f, i), &inv)
                }
                FactorPoint::Elliptic(EllipticPoint::Identity) => {
                    return Err(GroupError::NonGenericElliptic)
                }
                FactorPoint::Elliptic(EllipticPoint::Affine { x, y }) => {
                    let inv = ring
                        .try_invert(y)
                        .ok_or(GroupError::NonGenericElliptic)?;
                    ring.mul(&ring.derive(x, i), &inv)
                }
            };
            tangent.push(coord);
        }
        out.push(tangent);
    }
    Ok(out)
}

/// Chord-tangent addition on y² = 4x³ − g₂x − g₃.
///
/// Doubling a 2-torsion point (y = 0) and adding opposite points both return
/// the identity marker.
pub fn elliptic_add<R: DiffRing>(
    ring: &R,
    g2: &Rat,
    g3: &Rat,
    p: &EllipticPoint<R::Elem>,
    q: &EllipticPoint<R::Elem>,
) -> Result<EllipticPoint<R::Elem>, GroupError> {
    check_on_curve(ring, g2, g3, p)?;
    check_on_curve(ring, g2, g3, q)?;
    let (xp, yp) = match p {
        EllipticPoint::Identity => return Ok(q.clone()),
        EllipticPoint::Affine { x, y } => (x, y),
    };
    let (xq, yq) = match q {
        EllipticPoint::Identity => return Ok(p.clone()),
        EllipticPoint::Affine { x, y } => (x, y),
    };
    let dx = ring.sub(xq, xp);
    let lambda = if ring.is_zero(&dx) {
        if ring.is_zero(&ring.add(yp, yq)) {
            // opposite points, including a doubled 2-torsion point
            return Ok(EllipticPoint::Identity);
        }
        if !ring.is_zero(&ring.sub(yp, yq)) {
            return Err(GroupError::AmbiguousAddition);
        }
        // tangent: λ = (12x² − g₂) / (2y)
        let num = ring.sub(
            &ring.scale(&rat_int(12), &ring.mul(xp, xp)),
            &ring.from_rat(g2),
        );
        let den = ring
            .try_invert(&ring.scale(&rat_int(2), yp))
            .ok_or(GroupError::NonGenericElliptic)?;
        ring.mul(&num, &den)
    } else {
        let inv = ring
            .try_invert(&dx)
            .ok_or(GroupError::NonInvertibleDifference)?;
        ring.mul(&ring.sub(yq, yp), &inv)
    };
    // x_r = λ²/4 − x_p − x_q, y_r = λ(x_p − x_r) − y_p
    let xr = ring.sub(
        &ring.sub(&ring.scale(&Rat::new(1.into(), 4.into()), &ring.mul(&lambda, &lambda)), xp),
        xq,
    );
    let yr = ring.sub(&ring.mul(&lambda, &ring.sub(xp, &xr)), yp);
    Ok(EllipticPoint::Affine { x: xr, y: yr })
}

/// The product group law, factor by factor.
pub fn group_add<R: DiffRing>(
    ring: &R,
    spec: &GroupSpec,
    p: &GroupPoint<R::Elem>,
    q: &GroupPoint<R::Elem>,
) -> Result<GroupPoint<R::Elem>, GroupError> {
    check_shape(spec, p)?;
    check_shape(spec, q)?;
    let mut factors = Vec::with_capacity(spec.factors.len());
    for (i, ((f, fp), fq)) in spec.factors.iter().zip(&p.factors).zip(&q.factors).enumerate() {
        let sum = match (f, fp, fq) {
            (GroupFactor::Ga, FactorPoint::Ga(a), FactorPoint::Ga(b)) => {
                FactorPoint::Ga(ring.add(a, b))
            }
            (GroupFactor::Gm, FactorPoint::Gm(a), FactorPoint::Gm(b)) => {
                FactorPoint::Gm(ring.mul(a, b))
            }
            (GroupFactor::Elliptic { g2, g3 }, FactorPoint::Elliptic(a), FactorPoint::Elliptic(b)) => {
                FactorPoint::Elliptic(elliptic_add(ring, g2, g3, a, b)?)
            }
            _ => return Err(GroupError::FactorKind(i)),
        };
        factors.push(sum);
    }
    Ok(GroupPoint { factors })
}
