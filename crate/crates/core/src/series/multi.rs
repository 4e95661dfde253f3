//! Multivariate Taylor series truncated by total degree.
//!
//! A value holds terms of total degree < `degree` over exact rationals and
//! supports the n commuting partial derivations ∂/∂t_i. This is the carrier
//! for points with several independent domain coordinates (partial
//! differential structure) and for two-variable identity checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diffpoly::MultiIndex;
use crate::rat::Rat;
use crate::ring::DiffRing;
use crate::series::{SeriesError, TruncatedSeries};

/// Σ_{|α| < D} c_α t^α with the total-degree horizon D tracked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTaylorSeries {
    vars: Vec<String>,
    degree: i64,
    terms: BTreeMap<MultiIndex, Rat>,
}

impl MultiTaylorSeries {
    pub fn zero(vars: &[&str], degree: i64) -> Self {
        MultiTaylorSeries {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rat, degree: i64) -> Self {
        let mut s = Self::zero(vars, degree);
        s.set_coeff(MultiIndex::zero(s.vars.len()), c);
        s
    }

    /// The coordinate t_i.
    pub fn coordinate(vars: &[&str], i: usize, degree: i64) -> Self {
        let mut s = Self::zero(vars, degree);
        let alpha = MultiIndex::zero(s.vars.len()).bump(i);
        s.set_coeff(alpha, Rat::one());
        s
    }

    fn set_coeff(&mut self, alpha: MultiIndex, c: Rat) {
        if c.is_zero() || alpha.order() as i64 >= self.degree {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, c);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rat {
        self.terms.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    /// Smallest total degree of a nonzero term; the horizon when zero.
    pub fn min_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|a| a.order() as i64)
            .min()
            .unwrap_or(self.degree)
    }

    fn check_vars(&self, other: &MultiTaylorSeries) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch(
                self.vars.join(","),
                other.vars.join(","),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiTaylorSeries) -> Result<MultiTaylorSeries, SeriesError> {
        self.check_vars(other)?;
        let degree = self.degree.min(other.degree);
        let mut out = MultiTaylorSeries {
            vars: self.vars.clone(),
            degree,
            terms: BTreeMap::new(),
        };
        for (a, c) in self.terms.iter().chain(other.terms.iter()) {
            if (a.order() as i64) < degree {
                let cur = out.coeff(a) + c;
                out.set_coeff(a.clone(), cur);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiTaylorSeries {
        MultiTaylorSeries {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiTaylorSeries) -> Result<MultiTaylorSeries, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MultiTaylorSeries {
        if c.is_zero() {
            return MultiTaylorSeries::zero_like(self);
        }
        MultiTaylorSeries {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    fn zero_like(other: &MultiTaylorSeries) -> MultiTaylorSeries {
        MultiTaylorSeries {
            vars: other.vars.clone(),
            degree: other.degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn mul(&self, other: &MultiTaylorSeries) -> Result<MultiTaylorSeries, SeriesError> {
        self.check_vars(other)?;
        let degree = (self.degree + other.min_degree()).min(other.degree + self.min_degree());
        let mut out = MultiTaylorSeries {
            vars: self.vars.clone(),
            degree,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let sum = MultiIndex(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                if (sum.order() as i64) < degree {
                    let cur = out.coeff(&sum) + ca * cb;
                    out.set_coeff(sum, cur);
                }
            }
        }
        Ok(out)
    }

    /// ∂/∂t_i; lowers the degree horizon by one.
    pub fn derive(&self, i: usize) -> MultiTaylorSeries {
        let mut out = MultiTaylorSeries {
            vars: self.vars.clone(),
            degree: self.degree - 1,
            terms: BTreeMap::new(),
        };
        for (a, c) in &self.terms {
            if a.0[i] == 0 {
                continue;
            }
            let mut lower = a.clone();
            lower.0[i] -= 1;
            out.set_coeff(lower, c * Rat::from_integer(a.0[i].into()));
        }
        out
    }

    /// Inverse of a unit (nonzero constant term), by the geometric series.
    pub fn invert(&self) -> Result<MultiTaylorSeries, SeriesError> {
        let c0 = self.coeff(&MultiIndex::zero(self.vars.len()));
        if c0.is_zero() {
            return Err(SeriesError::NonUnit);
        }
        let one = MultiTaylorSeries::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rat::one(),
            self.degree,
        );
        // self = c0 (1 + u) with u of positive min degree, so
        // self^{-1} = c0^{-1} Σ (-u)^k
        let u = self.scale(&(Rat::one() / &c0)).sub(&one)?;
        let mut acc = one.clone();
        let mut upow = one;
        for _ in 0..self.degree.max(0) {
            upow = upow.mul(&u)?.neg();
            if upow.min_degree() >= self.degree {
                break;
            }
            acc = acc.add(&upow)?;
        }
        Ok(acc.scale(&(Rat::one() / &c0)).truncate_to(self.degree))
    }

    /// Truncate to a (smaller) total-degree horizon.
    pub fn truncate_to(&self, degree: i64) -> MultiTaylorSeries {
        let degree = degree.min(self.degree);
        let mut out = MultiTaylorSeries {
            vars: self.vars.clone(),
            degree,
            terms: BTreeMap::new(),
        };
        for (a, c) in &self.terms {
            if (a.order() as i64) < degree {
                out.terms.insert(a.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluate a univariate Taylor series at a multivariate image of positive
    /// minimal degree (substitution q ↦ image).
    pub fn from_univariate(
        f: &TruncatedSeries,
        image: &MultiTaylorSeries,
    ) -> Result<MultiTaylorSeries, SeriesError> {
        let w = image.min_degree();
        if w < 1 {
            return Err(SeriesError::ComposeValuation(w));
        }
        if f.valuation() < 0 {
            return Err(SeriesError::InvalidData(
                "univariate substitution requires a Taylor series".to_string(),
            ));
        }
        let cap = (w * f.precision()).min(image.degree);
        let vars: Vec<&str> = image.vars.iter().map(|s| s.as_str()).collect();
        let mut acc = MultiTaylorSeries::zero(&vars, image.degree);
        for e in (0..f.precision()).rev() {
            let c = f.coeff(e).unwrap_or_else(Rat::zero);
            acc = acc.mul(image)?;
            acc = acc.add(&MultiTaylorSeries::constant(&vars, c, image.degree))?;
        }
        Ok(acc.truncate_to(cap))
    }
}

/// Ring object: n-variable Taylor ring under the partial derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTaylorRing {
    pub vars: Vec<String>,
    pub degree: i64,
}

impl MultiTaylorRing {
    pub fn new(vars: &[&str], degree: i64) -> Self {
        MultiTaylorRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            degree,
        }
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn coordinate(&self, i: usize) -> MultiTaylorSeries {
        MultiTaylorSeries::coordinate(&self.var_refs(), i, self.degree)
    }
}

impl DiffRing for MultiTaylorRing {
    type Elem = MultiTaylorSeries;

    fn derivations(&self) -> usize {
        self.vars.len()
    }

    fn zero(&self) -> MultiTaylorSeries {
        MultiTaylorSeries::zero(&self.var_refs(), self.degree)
    }

    fn one(&self) -> MultiTaylorSeries {
        MultiTaylorSeries::constant(&self.var_refs(), Rat::one(), self.degree)
    }

    fn from_rat(&self, c: &Rat) -> MultiTaylorSeries {
        MultiTaylorSeries::constant(&self.var_refs(), c.clone(), self.degree)
    }

    fn add(&self, a: &MultiTaylorSeries, b: &MultiTaylorSeries) -> MultiTaylorSeries {
        a.add(b).expect("ring variables fixed by the ring object")
    }

    fn neg(&self, a: &MultiTaylorSeries) -> MultiTaylorSeries {
        a.neg()
    }

    fn mul(&self, a: &MultiTaylorSeries, b: &MultiTaylorSeries) -> MultiTaylorSeries {
        a.mul(b).expect("ring variables fixed by the ring object")
    }

    fn derive(&self, a: &MultiTaylorSeries, i: usize) -> MultiTaylorSeries {
        a.derive(i)
    }

    fn is_zero(&self, a: &MultiTaylorSeries) -> bool {
        a.is_zero()
    }

    fn try_invert(&self, a: &MultiTaylorSeries) -> Option<MultiTaylorSeries> {
        a.invert().ok()
    }
}
