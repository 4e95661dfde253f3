//! Ring-object trait for the targets of differential-ring homomorphisms.
//!
//! Substitution out of a jet-polynomial ring, the prolongation point map, and
//! the group logarithmic derivatives are all generic over a carrier ring with
//! finitely many commuting derivations. Each implementor is a lightweight
//! "ring object" describing the ambient structure (variable tags, derivation
//! count, working precision); elements are owned values.

use crate::rat::Rat;

/// A commutative ring with `derivations()` commuting derivations, exposed as
/// a ring object over owned elements.
pub trait DiffRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    /// Number of distinguished commuting derivations.
    fn derivations(&self) -> usize;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;

    /// Embed an exact rational constant.
    fn from_rat(&self, c: &Rat) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Apply derivation `i` (0-based, `i < derivations()`).
    fn derive(&self, a: &Self::Elem, i: usize) -> Self::Elem;

    /// Zero test, exact within whatever precision the element tracks.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse when `a` is a unit of the carrier.
    fn try_invert(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn scale(&self, c: &Rat, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_rat(c), a)
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Iterated derivation ∂^α for a multi-index α.
    fn derive_multi(&self, a: &Self::Elem, alpha: &[u32]) -> Self::Elem {
        let mut acc = a.clone();
        for (i, &e) in alpha.iter().enumerate() {
            for _ in 0..e {
                acc = self.derive(&acc, i);
            }
        }
        acc
    }

    /// True when the element is killed by every derivation.
    fn is_constant(&self, a: &Self::Elem) -> bool {
        (0..self.derivations()).all(|i| self.is_zero(&self.derive(a, i)))
    }
}
