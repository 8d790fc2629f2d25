//! Menus as bitmasks over a period's alphabet.
//!
//! Bit `i` stands for the `i`-th label of the (sorted) alphabet. All subset
//! and superset walks run in ascending bit order, which fixes every
//! iteration order in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of one period's alphabet. The empty menu is representable
/// because Block-Marschak indices use `A = ∅`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Menu(u32);

impl Menu {
    pub const EMPTY: Menu = Menu(0);

    pub const fn from_bits(bits: u32) -> Self {
        Menu(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The whole alphabet of `size` items.
    pub const fn full(size: usize) -> Self {
        Menu(((1u64 << size) - 1) as u32)
    }

    pub const fn singleton(item: usize) -> Self {
        Menu(1 << item)
    }

    pub fn from_items(items: impl IntoIterator<Item = usize>) -> Self {
        Menu(items.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub const fn contains(self, item: usize) -> bool {
        self.0 & (1 << item) != 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn with(self, item: usize) -> Self {
        Menu(self.0 | (1 << item))
    }

    pub const fn without(self, item: usize) -> Self {
        Menu(self.0 & !(1 << item))
    }

    pub const fn union(self, other: Menu) -> Self {
        Menu(self.0 | other.0)
    }

    pub const fn difference(self, other: Menu) -> Self {
        Menu(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Menu) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside an alphabet of `size` items.
    pub const fn complement(self, size: usize) -> Self {
        Menu(Menu::full(size).0 & !self.0)
    }

    /// Whether every member is an index below `size`.
    pub const fn fits(self, size: usize) -> bool {
        self.is_subset(Menu::full(size))
    }

    /// Members in ascending index order.
    pub fn items(self) -> Items {
        Items(self.0)
    }

    /// Every subset of `self`, ascending by bit pattern, starting with `∅`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Every superset of `self` inside an alphabet of `size` items.
    pub fn supersets(self, size: usize) -> impl Iterator<Item = Menu> {
        let base = self;
        self.complement(size).subsets().map(move |extra| base.union(extra))
    }

    /// All nonempty menus of an alphabet of `size` items.
    pub fn nonempty(size: usize) -> impl Iterator<Item = Menu> {
        (1..(1u32 << size)).map(Menu)
    }
}

impl fmt::Display for Menu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, item) in self.items().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{item}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug)]
pub struct Items(u32);

impl Iterator for Items {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let item = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Items {}

#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Menu;

    fn next(&mut self) -> Option<Menu> {
        let current = self.next?;
        let successor = current.wrapping_sub(self.mask) & self.mask;
        self.next = (successor != 0).then_some(successor);
        Some(Menu(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_power_set_in_order() {
        let menu = Menu::from_items([0, 2, 3]);
        let subs: Vec<u32> = menu.subsets().map(Menu::bits).collect();
        assert_eq!(subs, vec![0, 1, 4, 5, 8, 9, 12, 13]);
        assert_eq!(Menu::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn supersets_stay_inside_alphabet() {
        let sups: Vec<Menu> = Menu::singleton(1).supersets(3).collect();
        assert_eq!(sups.len(), 4);
        assert!(sups.iter().all(|m| m.contains(1) && m.fits(3)));
        assert_eq!(Menu::full(3).supersets(3).count(), 1);
    }

    #[test]
    fn set_algebra() {
        let a = Menu::from_items([0, 1]);
        assert_eq!(a.complement(3), Menu::singleton(2));
        assert_eq!(a.without(0), Menu::singleton(1));
        assert!(Menu::singleton(0).is_subset(a));
        assert_eq!(a.items().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(Menu::nonempty(3).count(), 7);
        assert_eq!(a.to_string(), "{0,1}");
    }
}
