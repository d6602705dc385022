//! Coefficient-ring contract shared by the group-ring layer.
//!
//! A ring object holds the modulus/profile data; elements are plain
//! values. This keeps scalars small and lets the group ring stay
//! generic over Z/p^a, its quadratic extensions, the ramified
//! extension, and cyclotomic quotients.

pub trait CoeffRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Equality at the shared certified precision.
    fn elem_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}
