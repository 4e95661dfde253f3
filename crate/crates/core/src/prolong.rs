//! Arc spaces of affine varieties and the prolongation point map.
//!
//! `arc_space` presents the functor of points of the truncated-ring expansion
//! R[ε₁,…,εₙ]/(ε)^{m+1} applied to an affine variety: substitute
//! x_k ↦ Σ_{|α|≤m} x_{k,α} ε^α into each generator and read off ε^α
//! coefficients as equations in the flattened jet variables. `nabla` sends a
//! point with coordinates in a differential ring to its jet point, assigning
//! x_{k,α} the value ∂^α(a_k)/α! — with that divided-power normalization the
//! expansion map is a ring homomorphism, so jet points of points on the
//! variety satisfy the arc equations on the nose.

use std::collections::BTreeMap;

use crate::diffpoly::{binomial, multi_indices, Ctx, DiffPoly, DiffPolyError, JetVar, Monomial, MultiIndex};
use crate::rat::Rat;
use crate::ring::DiffRing;
use crate::series::fit::fit_algebraic_relation;
use crate::series::{SeriesError, SeriesRing, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProlongError {
    #[error("generator must contain only order-0 jet variables")]
    NotOrderZero,
    #[error("generator lives in a ring with {found} variables, variety is in {expected}-space")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("coordinate {0} is not a constant (some derivation does not kill it)")]
    NonConstantCoordinate(usize),
    #[error("cannot project a jet point of order {from} to larger order {to}")]
    ProjectionOrder { from: u32, to: u32 },
    #[error("jet point shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Poly(#[from] DiffPolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// An affine variety: ambient dimension and order-0 generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineVariety {
    ambient: usize,
    generators: Vec<DiffPoly>,
}

impl AffineVariety {
    /// Generators may come from any ring context as long as every jet
    /// variable has order 0; they are re-encoded into the derivation-free
    /// context `Ctx::new(ambient, 0)`.
    pub fn new(ambient: usize, generators: Vec<DiffPoly>) -> Result<Self, ProlongError> {
        let ctx = Ctx::new(ambient, 0);
        let gens = generators
            .iter()
            .map(|g| {
                if !g.is_order_zero() {
                    return Err(ProlongError::NotOrderZero);
                }
                if g.ctx().vars > ambient {
                    return Err(ProlongError::AmbientMismatch {
                        expected: ambient,
                        found: g.ctx().vars,
                    });
                }
                Ok(recontext_order0(g, ctx))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AffineVariety {
            ambient,
            generators: gens,
        })
    }

    /// The full ambient space (no equations).
    pub fn affine_space(ambient: usize) -> Self {
        AffineVariety {
            ambient,
            generators: vec![],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[DiffPoly] {
        &self.generators
    }

    /// Product variety: equations of both factors in disjoint variables.
    pub fn product(&self, other: &AffineVariety) -> AffineVariety {
        let ambient = self.ambient + other.ambient;
        let ctx = Ctx::new(ambient, 0);
        let mut generators: Vec<DiffPoly> = self
            .generators
            .iter()
            .map(|g| recontext_order0(g, ctx))
            .collect();
        generators.extend(other.generators.iter().map(|g| {
            shift_vars_order0(g, ctx, self.ambient)
        }));
        AffineVariety {
            ambient,
            generators,
        }
    }
}

/// Rebuild an order-0 polynomial in another order-0 context.
fn recontext_order0(p: &DiffPoly, ctx: Ctx) -> DiffPoly {
    shift_vars_order0(p, ctx, 0)
}

fn shift_vars_order0(p: &DiffPoly, ctx: Ctx, offset: usize) -> DiffPoly {
    DiffPoly::from_terms(
        ctx,
        p.terms().map(|(m, c)| {
            let factors = m
                .factors()
                .iter()
                .map(|(v, e)| {
                    (
                        JetVar {
                            base: v.base + offset,
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

/// Flattening of the jet coordinates x_{k,α}, |α| ≤ m, ordered by
/// (|α|, α, k). Projection to a lower order is a prefix of this list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetCoords {
    pub ambient: usize,
    pub order: u32,
    pub derivations: usize,
    list: Vec<(usize, MultiIndex)>,
}

impl JetCoords {
    pub fn new(ambient: usize, order: u32, derivations: usize) -> Self {
        let mut list = Vec::new();
        for alpha in multi_indices(derivations, order) {
            for base in 0..ambient {
                list.push((base, alpha.clone()));
            }
        }
        JetCoords {
            ambient,
            order,
            derivations,
            list,
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, MultiIndex)> {
        self.list.iter()
    }

    pub fn flat_index(&self, base: usize, alpha: &MultiIndex) -> Option<usize> {
        self.list
            .iter()
            .position(|(b, a)| *b == base && a == alpha)
    }

    /// Coordinate label, e.g. `x0,(1,0)`.
    pub fn label(&self, i: usize) -> String {
        let (base, alpha) = &self.list[i];
        format!("x{base},{alpha}")
    }

    /// Expected coordinate count k·C(m+n, n).
    pub fn expected_len(ambient: usize, order: u32, derivations: usize) -> u64 {
        ambient as u64 * binomial(order as u64 + derivations as u64, derivations as u64)
    }
}

/// Defining data of an arc space: jet coordinates plus equations in the
/// flattened order-0 ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpacePresentation {
    pub source: AffineVariety,
    pub order: u32,
    pub derivations: usize,
    pub coords: JetCoords,
    pub equations: Vec<DiffPoly>,
}

/// Truncated polynomial in ε₁..εₙ with polynomial coefficients; the carrier
/// of the expansion x_k ↦ Σ x_{k,α} ε^α mod (ε)^{m+1}.
struct EpsRing {
    order: u32,
    derivations: usize,
    flat_ctx: Ctx,
}

type EpsElem = BTreeMap<MultiIndex, DiffPoly>;

impl DiffRing for EpsRing {
    type Elem = EpsElem;

    fn derivations(&self) -> usize {
        0
    }

    fn zero(&self) -> EpsElem {
        BTreeMap::new()
    }

    fn one(&self) -> EpsElem {
        let mut m = BTreeMap::new();
        m.insert(
            MultiIndex::zero(self.derivations),
            DiffPoly::one(self.flat_ctx),
        );
        m
    }

    fn from_rat(&self, c: &Rat) -> EpsElem {
        let mut m = BTreeMap::new();
        let p = DiffPoly::constant(self.flat_ctx, c.clone());
        if !p.is_zero() {
            m.insert(MultiIndex::zero(self.derivations), p);
        }
        m
    }

    fn add(&self, a: &EpsElem, b: &EpsElem) -> EpsElem {
        let mut out = a.clone();
        for (alpha, p) in b {
            let entry = out
                .entry(alpha.clone())
                .or_insert_with(|| DiffPoly::zero(self.flat_ctx));
            *entry = entry.add(p).expect("same flat ctx");
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn neg(&self, a: &EpsElem) -> EpsElem {
        a.iter().map(|(alpha, p)| (alpha.clone(), p.neg())).collect()
    }

    fn mul(&self, a: &EpsElem, b: &EpsElem) -> EpsElem {
        let mut out: EpsElem = BTreeMap::new();
        for (al, p) in a {
            for (be, q) in b {
                let sum = MultiIndex(al.0.iter().zip(&be.0).map(|(x, y)| x + y).collect());
                if sum.order() > self.order {
                    continue;
                }
                let prod = p.mul(q).expect("same flat ctx");
                let entry = out
                    .entry(sum)
                    .or_insert_with(|| DiffPoly::zero(self.flat_ctx));
                *entry = entry.add(&prod).expect("same flat ctx");
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn derive(&self, _a: &EpsElem, _i: usize) -> EpsElem {
        unreachable!("the expansion ring carries no derivations")
    }

    fn is_zero(&self, a: &EpsElem) -> bool {
        a.is_empty()
    }

    fn try_invert(&self, _a: &EpsElem) -> Option<EpsElem> {
        None
    }
}

/// Present the arc space of `variety` at order `m` with `n` derivations.
pub fn arc_space(variety: &AffineVariety, m: u32, n: usize) -> ArcSpacePresentation {
    let coords = JetCoords::new(variety.ambient, m, n);
    let flat_ctx = Ctx::new(coords.len(), 0);
    let ring = EpsRing {
        order: m,
        derivations: n,
        flat_ctx,
    };
    // x_k ↦ Σ_{|α|≤m} x_{k,α} ε^α
    let mut images: BTreeMap<usize, EpsElem> = BTreeMap::new();
    for k in 0..variety.ambient {
        let mut elem: EpsElem = BTreeMap::new();
        for alpha in multi_indices(n, m) {
            let flat = coords.flat_index(k, &alpha).expect("coordinate enumerated");
            let var = DiffPoly::var(flat_ctx, flat).expect("flat index in range");
            elem.insert(alpha, var);
        }
        images.insert(k, elem);
    }
    let alphas = multi_indices(n, m);
    let mut equations = Vec::with_capacity(variety.generators.len() * alphas.len());
    for gen in &variety.generators {
        let expanded = gen
            .eval_order0(&ring, &images)
            .expect("generators are order-0 with full image set");
        for alpha in &alphas {
            equations.push(
                expanded
                    .get(alpha)
                    .cloned()
                    .unwrap_or_else(|| DiffPoly::zero(flat_ctx)),
            );
        }
    }
    ArcSpacePresentation {
        source: variety.clone(),
        order: m,
        derivations: n,
        coords,
        equations,
    }
}

/// A point of an arc space: one value per flattened jet coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoint<E> {
    pub ambient: usize,
    pub order: u32,
    pub derivations: usize,
    pub values: Vec<E>,
}

impl<E: Clone> JetPoint<E> {
    pub fn coords(&self) -> JetCoords {
        JetCoords::new(self.ambient, self.order, self.derivations)
    }

    pub fn value(&self, base: usize, alpha: &MultiIndex) -> Option<&E> {
        let idx = self.coords().flat_index(base, alpha)?;
        self.values.get(idx)
    }
}

/// The prolongation point map: jet coordinate x_{k,α} takes the value
/// ∂^α(a_k)/α!. At order 0 this is the point itself.
pub fn nabla<R: DiffRing>(
    ring: &R,
    coords: &[R::Elem],
    order: u32,
) -> Result<JetPoint<R::Elem>, ProlongError> {
    let n = ring.derivations();
    let jc = JetCoords::new(coords.len(), order, n);
    let mut values = Vec::with_capacity(jc.len());
    for (base, alpha) in jc.iter() {
        let d = ring.derive_multi(&coords[*base], &alpha.0);
        let factorial = alpha.factorial();
        values.push(ring.scale(&(Rat::from_integer(1.into()) / factorial), &d));
    }
    Ok(JetPoint {
        ambient: coords.len(),
        order,
        derivations: n,
        values,
    })
}

/// Projection dropping jet coordinates of order above `target`.
pub fn project<E: Clone>(point: &JetPoint<E>, target: u32) -> Result<JetPoint<E>, ProlongError> {
    if target > point.order {
        return Err(ProlongError::ProjectionOrder {
            from: point.order,
            to: target,
        });
    }
    let keep = JetCoords::expected_len(point.ambient, target, point.derivations) as usize;
    if point.values.len() < keep {
        return Err(ProlongError::ShapeMismatch(format!(
            "jet point stores {} values, projection needs {}",
            point.values.len(),
            keep
        )));
    }
    Ok(JetPoint {
        ambient: point.ambient,
        order: target,
        derivations: point.derivations,
        values: point.values[..keep].to_vec(),
    })
}

/// The zero section: constants get zero in every higher jet coordinate.
/// Errors when some coordinate is not killed by every derivation.
pub fn zero_section<R: DiffRing>(
    ring: &R,
    coords: &[R::Elem],
    order: u32,
) -> Result<JetPoint<R::Elem>, ProlongError> {
    for (i, c) in coords.iter().enumerate() {
        if !ring.is_constant(c) {
            return Err(ProlongError::NonConstantCoordinate(i));
        }
    }
    let n = ring.derivations();
    let jc = JetCoords::new(coords.len(), order, n);
    let values = jc
        .iter()
        .map(|(base, alpha)| {
            if alpha.order() == 0 {
                coords[*base].clone()
            } else {
                ring.zero()
            }
        })
        .collect();
    Ok(JetPoint {
        ambient: coords.len(),
        order,
        derivations: n,
        values,
    })
}

impl ArcSpacePresentation {
    /// Evaluate every equation at a jet point; the residuals must all vanish
    /// for points obtained by prolonging points of the variety.
    pub fn residuals_at<R: DiffRing>(
        &self,
        ring: &R,
        point: &JetPoint<R::Elem>,
    ) -> Result<Vec<R::Elem>, ProlongError> {
        if point.values.len() != self.coords.len() {
            return Err(ProlongError::ShapeMismatch(format!(
                "jet point stores {} values, arc space has {} coordinates",
                point.values.len(),
                self.coords.len()
            )));
        }
        let images: BTreeMap<usize, R::Elem> = point.values.iter().cloned().enumerate().collect();
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            out.push(eq.eval_order0(ring, &images)?);
        }
        Ok(out)
    }

    pub fn satisfied_by<R: DiffRing>(
        &self,
        ring: &R,
        point: &JetPoint<R::Elem>,
    ) -> Result<bool, ProlongError> {
        Ok(self
            .residuals_at(ring, point)?
            .iter()
            .all(|r| ring.is_zero(r)))
    }
}

/// Desk-scale Kolchin-closure computation: prolong every series point to the
/// requested order and fit polynomial relations on the jet coordinates.
///
/// The returned relations live in the flattened arc-space coordinates
/// (`JetCoords::new(k, order, 1)` with the same labeling as `arc_space`).
pub fn kolchin_closure_fit(
    points: &[Vec<TruncatedSeries>],
    order: u32,
    bounds: &[u32],
) -> Result<Vec<DiffPoly>, ProlongError> {
    if points.is_empty() {
        return Ok(vec![]);
    }
    let mut samples = Vec::with_capacity(points.len());
    for coords in points {
        if coords.is_empty() {
            return Err(ProlongError::CoordinateCount {
                expected: 1,
                found: 0,
            });
        }
        let var = coords[0].var().to_string();
        let precision = coords.iter().map(|s| s.precision()).min().unwrap();
        let ring = SeriesRing::new(&var, precision);
        let jp = nabla(&ring, coords, order)?;
        samples.push(jp.values);
    }
    Ok(fit_algebraic_relation(&samples, bounds)?)
}
