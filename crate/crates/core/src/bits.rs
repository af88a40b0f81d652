//! A fixed-width bitset over at most 128 points.
//!
//! Every carrier in this crate (poset elements, quotients, points of an
//! orthogonality space) is densely indexed, so subsets are single `u128`
//! words. The derived `Ord` is the numeric value with point 0 as the least
//! significant bit; it is a linear extension of inclusion and is the
//! iteration order used for every enumeration and witness.

use std::fmt;

/// Maximum number of points a [`Bits`] can hold.
pub const CAPACITY: usize = 128;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits(pub u128);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Bits {
        debug_assert!(n <= CAPACITY);
        if n == CAPACITY {
            Bits(u128::MAX)
        } else {
            Bits((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Bits {
        Bits(1u128 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Bits {
        it.into_iter().fold(Bits::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Bits {
        Bits(self.0 | 1u128 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Bits {
        Bits(self.0 & !(1u128 << i))
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: Bits) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn and(self, other: Bits) -> Bits {
        Bits(self.0 & other.0)
    }

    #[inline]
    pub fn or(self, other: Bits) -> Bits {
        Bits(self.0 | other.0)
    }

    #[inline]
    pub fn minus(self, other: Bits) -> Bits {
        Bits(self.0 & !other.0)
    }

    #[inline]
    pub fn xor(self, other: Bits) -> Bits {
        Bits(self.0 ^ other.0)
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Bits::from_indices(iter)
    }
}

impl IntoIterator for Bits {
    type Item = usize;
    type IntoIter = BitsIter;

    fn into_iter(self) -> BitsIter {
        self.iter()
    }
}

impl serde::Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Ascending iterator over the members of a [`Bits`].
pub struct BitsIter(u128);

impl Iterator for BitsIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for BitsIter {}

/// The smallest family containing `top` and every generator that is closed
/// under pairwise intersection, sorted in bitset order.
pub fn intersection_closure<I: IntoIterator<Item = Bits>>(top: Bits, generators: I) -> Vec<Bits> {
    let mut family = std::collections::HashSet::new();
    family.insert(top);
    let mut members = vec![top];
    for g in generators {
        if family.contains(&g) {
            continue;
        }
        let fresh: Vec<Bits> = members
            .iter()
            .map(|f| f.and(g))
            .filter(|m| !family.contains(m))
            .collect();
        for m in fresh {
            if family.insert(m) {
                members.push(m);
            }
        }
    }
    members.sort_unstable();
    members
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(Bits::full(0), Bits::EMPTY);
        assert_eq!(Bits::full(3).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(Bits::full(128).len(), 128);
    }

    #[test]
    fn set_ops() {
        let a = Bits::from_indices([0, 2, 5]);
        let b = Bits::from_indices([2, 3]);
        assert_eq!(a.and(b), Bits::singleton(2));
        assert_eq!(a.or(b).len(), 4);
        assert_eq!(a.minus(b), Bits::from_indices([0, 5]));
        assert!(Bits::singleton(2).is_subset(a));
        assert!(!b.is_subset(a));
        assert_eq!(a.first(), Some(0));
        assert_eq!(Bits::EMPTY.first(), None);
        assert_eq!(a.without(0).with(127).iter().last(), Some(127));
    }

    #[test]
    fn intersection_closure_of_rows() {
        let fam = intersection_closure(Bits::full(3), [Bits::from_indices([0, 1]), Bits::from_indices([1, 2])]);
        assert_eq!(
            fam,
            vec![Bits::from_indices([1]), Bits::from_indices([0, 1]), Bits::from_indices([1, 2]), Bits::full(3)]
        );
    }

    #[test]
    fn order_extends_inclusion() {
        let a = Bits::from_indices([1]);
        let b = Bits::from_indices([1, 3]);
        assert!(a < b);
        assert!(Bits::from_indices([1]) < Bits::from_indices([2]));
    }
}
