//! Differential polynomial ring over exact rationals.
//!
//! The ring has `vars` base variables `x0..x{vars-1}` and `ders` commuting
//! formal derivations. Elements are polynomials in the jet variables
//! ∂^α x_k with rational coefficients, stored in canonical form: a sorted
//! term map with no zero coefficients, so structural equality coincides with
//! ring equality.

mod parse;

pub use parse::PolyParseError;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rat::{multi_factorial, rat_to_string, Rat};
use crate::ring::DiffRing;
use num_traits::Zero;

/// A derivation multi-index α = (α₁, …, αₙ); `order` is |α| = Σ αᵢ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// α + e_i.
    pub fn bump(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// α! as a rational.
    pub fn factorial(&self) -> Rat {
        multi_factorial(&self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `n` with |α| ≤ `max_order`, in graded
/// lexicographic order (total order ascending, then lex ascending).
pub fn multi_indices(n: usize, max_order: u32) -> Vec<MultiIndex> {
    fn fill(n: usize, order: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n {
            if order == 0 {
                out.push(MultiIndex(prefix.clone()));
            }
            return;
        }
        let remaining = n - prefix.len();
        for v in 0..=order {
            if remaining == 1 && v != order {
                continue;
            }
            prefix.push(v);
            fill(n, order - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for order in 0..=max_order {
        let mut sorted = Vec::new();
        fill(n, order, &mut Vec::new(), &mut sorted);
        sorted.sort();
        out.extend(sorted);
    }
    out
}

/// Binomial coefficient C(n, k) as u64; the jet-variable count of one base
/// variable at order m in n derivations is C(m+n, n).
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A jet variable ∂^α x_k. Ordered by (|α|, α, k) so that canonical forms and
/// jet-coordinate flattenings agree everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetVar {
    pub base: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn order(&self) -> u32 {
        self.index.order()
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.index.order(), &self.index.0, self.base).cmp(&(
            other.index.order(),
            &other.index.0,
            other.base,
        ))
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.index.0.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "d{} ", i + 1)?,
                _ => write!(f, "d{}^{} ", i + 1, e)?,
            }
        }
        write!(f, "x{}", self.base)
    }
}

/// A power product of jet variables: sorted factors with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: vec![] }
    }

    pub fn var(v: JetVar) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Monomial::from_factors(factors)
    }
}

impl Ord for Monomial {
    // Graded lexicographic: total degree first, then the exponent vector read
    // along the JetVar order (a present variable beats an absent one).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ring context: base variable count and derivation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub vars: usize,
    pub ders: usize,
}

impl Ctx {
    pub fn new(vars: usize, ders: usize) -> Self {
        Ctx { vars, ders }
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x0..x{}; {} derivations]", self.vars.max(1) - 1, self.ders)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffPolyError {
    #[error("ring context mismatch: {0} vs {1}")]
    CtxMismatch(Ctx, Ctx),
    #[error("derivation index {index} out of range for {ctx}")]
    DerivationIndex { index: usize, ctx: Ctx },
    #[error("variable index {index} out of range for {ctx}")]
    VariableIndex { index: usize, ctx: Ctx },
    #[error("no image supplied for variable x{0}")]
    MissingImage(usize),
    #[error("derivation count mismatch: ring has {ring}, target has {target}")]
    DerivationCount { ring: usize, target: usize },
    #[error("polynomial has a jet variable of positive order where an order-0 polynomial is required")]
    NotOrderZero,
    #[error(transparent)]
    Parse(#[from] PolyParseError),
}

/// A differential polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPoly {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPoly {
    // ---- Constructors ----

    pub fn zero(ctx: Ctx) -> Self {
        DiffPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::constant(ctx, Rat::from_integer(1.into()))
    }

    pub fn constant(ctx: Ctx, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { ctx, terms }
    }

    /// The base variable x_k.
    pub fn var(ctx: Ctx, k: usize) -> Result<Self, DiffPolyError> {
        Self::jet_var(ctx, k, MultiIndex::zero(ctx.ders))
    }

    /// The jet variable ∂^α x_k.
    pub fn jet_var(ctx: Ctx, k: usize, alpha: MultiIndex) -> Result<Self, DiffPolyError> {
        if k >= ctx.vars {
            return Err(DiffPolyError::VariableIndex { index: k, ctx });
        }
        if alpha.len() != ctx.ders {
            return Err(DiffPolyError::DerivationCount {
                ring: ctx.ders,
                target: alpha.len(),
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial::var(JetVar {
                base: k,
                index: alpha,
            }),
            Rat::from_integer(1.into()),
        );
        Ok(DiffPoly { ctx, terms })
    }

    pub fn from_terms(
        ctx: Ctx,
        terms: impl IntoIterator<Item = (Monomial, Rat)>,
    ) -> Self {
        let mut p = DiffPoly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    // ---- Accessors ----

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest |α| over all jet variables occurring in the polynomial.
    pub fn max_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.order()))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// True when every jet variable has derivative index zero.
    pub fn is_order_zero(&self) -> bool {
        self.max_order() == 0
    }

    /// Base variables that occur in the polynomial.
    pub fn base_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.base))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    fn check_ctx(&self, other: &DiffPoly) -> Result<(), DiffPolyError> {
        if self.ctx != other.ctx {
            Err(DiffPolyError::CtxMismatch(self.ctx, other.ctx))
        } else {
            Ok(())
        }
    }

    // ---- Ring arithmetic ----

    pub fn add(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.check_ctx(other)?;
        let mut out = DiffPoly::zero(self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(self.ctx);
        }
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one(self.ctx);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ctx");
        }
        acc
    }

    // ---- Differentiation ----

    /// Formal derivation ∂_i: Leibniz on monomials, ∂_i(∂^α x_k) = ∂^{α+e_i} x_k.
    pub fn differentiate(&self, i: usize) -> Result<DiffPoly, DiffPolyError> {
        if i >= self.ctx.ders {
            return Err(DiffPolyError::DerivationIndex {
                index: i,
                ctx: self.ctx,
            });
        }
        let mut out = DiffPoly::zero(self.ctx);
        for (m, c) in &self.terms {
            for (pos, (v, e)) in m.factors().iter().enumerate() {
                // d(v^e)/∂_i = e v^{e-1} (∂_i v), times the other factors
                let mut factors = m.factors().to_vec();
                factors[pos].1 -= 1;
                factors.push((
                    JetVar {
                        base: v.base,
                        index: v.index.bump(i),
                    },
                    1,
                ));
                out.add_term(
                    Monomial::from_factors(factors),
                    c * Rat::from_integer((*e).into()),
                );
            }
        }
        Ok(out)
    }

    // ---- Homomorphisms ----

    /// The differential-ring homomorphism sending x_k to `images[k]`.
    ///
    /// The image of ∂^α x_k is ∂^α (in the target) of the image of x_k; the
    /// target must carry the same number of derivations.
    pub fn substitute<R: DiffRing>(
        &self,
        target: &R,
        images: &BTreeMap<usize, R::Elem>,
    ) -> Result<R::Elem, DiffPolyError> {
        if target.derivations() != self.ctx.ders {
            return Err(DiffPolyError::DerivationCount {
                ring: self.ctx.ders,
                target: target.derivations(),
            });
        }
        self.apply_hom(target, images)
    }

    /// Plain ring-homomorphism evaluation for order-0 polynomials; the target
    /// may have any derivation count since no derivations are transported.
    pub fn eval_order0<R: DiffRing>(
        &self,
        target: &R,
        images: &BTreeMap<usize, R::Elem>,
    ) -> Result<R::Elem, DiffPolyError> {
        if !self.is_order_zero() {
            return Err(DiffPolyError::NotOrderZero);
        }
        self.apply_hom(target, images)
    }

    fn apply_hom<R: DiffRing>(
        &self,
        target: &R,
        images: &BTreeMap<usize, R::Elem>,
    ) -> Result<R::Elem, DiffPolyError> {
        for k in self.base_vars() {
            if !images.contains_key(&k) {
                return Err(DiffPolyError::MissingImage(k));
            }
        }
        // Collect every jet variable that occurs, close the set downward under
        // index lowering, then fill in ∂^α(images[k]) in ascending order so
        // each value is one derivation away from an already-computed one.
        let mut needed: BTreeSet<JetVar> = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                let mut cur = v.clone();
                loop {
                    if !needed.insert(cur.clone()) {
                        break;
                    }
                    match cur.index.0.iter().rposition(|&e| e > 0) {
                        None => break,
                        Some(i) => cur.index.0[i] -= 1,
                    }
                }
            }
        }
        let mut jet_images: BTreeMap<JetVar, R::Elem> = BTreeMap::new();
        for v in &needed {
            let val = match v.index.0.iter().rposition(|&e| e > 0) {
                None => images[&v.base].clone(),
                Some(i) => {
                    let mut lower = v.clone();
                    lower.index.0[i] -= 1;
                    target.derive(&jet_images[&lower], i)
                }
            };
            jet_images.insert(v.clone(), val);
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.from_rat(c);
            for (v, e) in m.factors() {
                term = target.mul(&term, &target.pow(&jet_images[v], *e));
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    // ---- Text format ----

    /// Parse the polynomial grammar: variables `x0..`, derivative prefixes
    /// `d1^2 d2 x0`, rational literals `p/q`, operators `+ - * ^`, parens.
    pub fn parse(ctx: Ctx, input: &str) -> Result<DiffPoly, DiffPolyError> {
        Ok(parse::parse_poly(ctx, input)?)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending monomial order, leading term first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = abs == Rat::from_integer(1.into());
            if m.is_one() {
                write!(f, "{}", rat_to_string(&abs))?;
            } else {
                if !coeff_is_one {
                    write!(f, "{}*", rat_to_string(&abs))?;
                }
                for (j, (v, e)) in m.factors().iter().enumerate() {
                    if j > 0 {
                        write!(f, "*")?;
                    }
                    if *e == 1 {
                        write!(f, "{v}")?;
                    } else if v.order() == 0 {
                        write!(f, "{v}^{e}")?;
                    } else {
                        write!(f, "({v})^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `DiffRing` instance: the ring object is just the context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffPolyRing(pub Ctx);

impl DiffRing for DiffPolyRing {
    type Elem = DiffPoly;

    fn derivations(&self) -> usize {
        self.0.ders
    }

    fn zero(&self) -> DiffPoly {
        DiffPoly::zero(self.0)
    }

    fn one(&self) -> DiffPoly {
        DiffPoly::one(self.0)
    }

    fn from_rat(&self, c: &Rat) -> DiffPoly {
        DiffPoly::constant(self.0, c.clone())
    }

    fn add(&self, a: &DiffPoly, b: &DiffPoly) -> DiffPoly {
        a.add(b).expect("ring context fixed by the ring object")
    }

    fn neg(&self, a: &DiffPoly) -> DiffPoly {
        a.neg()
    }

    fn mul(&self, a: &DiffPoly, b: &DiffPoly) -> DiffPoly {
        a.mul(b).expect("ring context fixed by the ring object")
    }

    fn derive(&self, a: &DiffPoly, i: usize) -> DiffPoly {
        a.differentiate(i).expect("index fixed by the ring object")
    }

    fn is_zero(&self, a: &DiffPoly) -> bool {
        a.is_zero()
    }

    fn try_invert(&self, a: &DiffPoly) -> Option<DiffPoly> {
        // only nonzero constants are units
        if a.is_constant() && !a.is_zero() {
            let c = a.coeff(&Monomial::one());
            Some(DiffPoly::constant(self.0, Rat::from_integer(1.into()) / c))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests;
