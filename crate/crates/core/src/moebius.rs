//! Möbius functions of subset lattices and their finite products.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::rational::Rational;

/// `m(A, B)` on a subset lattice: `(-1)^(|B|-|A|)` when `A ⊆ B`, else 0.
pub fn moebius_subset(a: Menu, b: Menu) -> i32 {
    if !a.is_subset(b) {
        return 0;
    }
    if (b.len() - a.len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Product of componentwise subset-lattice Möbius values.
pub fn moebius_product(pairs: &[(Menu, Menu)]) -> i32 {
    pairs.iter().map(|&(a, b)| moebius_subset(a, b)).product()
}

/// The lattice `2^X` for an alphabet of `size` items.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetLattice {
    size: usize,
}

impl SubsetLattice {
    pub fn new(size: usize) -> Self {
        SubsetLattice { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        1 << self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, menu: Menu) -> bool {
        menu.fits(self.size)
    }

    pub fn moebius(&self, a: Menu, b: Menu) -> Result<i32> {
        for m in [a, b] {
            if !self.contains(m) {
                return Err(Error::AlphabetMismatch(format!(
                    "menu {m} is not a subset of a {}-item alphabet",
                    self.size
                )));
            }
        }
        Ok(moebius_subset(a, b))
    }

    pub fn elements(&self) -> impl Iterator<Item = Menu> {
        Menu::full(self.size).subsets()
    }
}

/// Componentwise-ordered product of subset lattices. Functions on it are
/// dense vectors indexed by the mixed-radix code of the menus' bit patterns,
/// first component most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoset {
    components: Vec<SubsetLattice>,
}

impl ProductPoset {
    pub fn new(sizes: &[usize]) -> Self {
        ProductPoset {
            components: sizes.iter().map(|&k| SubsetLattice::new(k)).collect(),
        }
    }

    pub fn components(&self) -> &[SubsetLattice] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(SubsetLattice::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn code(&self, element: &[Menu]) -> usize {
        element
            .iter()
            .zip(&self.components)
            .fold(0, |acc, (m, l)| acc * l.len() + m.bits() as usize)
    }

    pub fn element(&self, mut code: usize) -> Vec<Menu> {
        let mut out = vec![Menu::EMPTY; self.components.len()];
        for (t, l) in self.components.iter().enumerate().rev() {
            out[t] = Menu::from_bits((code % l.len()) as u32);
            code /= l.len();
        }
        out
    }

    fn check(&self, element: &[Menu]) -> Result<()> {
        if element.len() != self.components.len() || element.iter().zip(&self.components).any(|(m, l)| !l.contains(*m))
        {
            return Err(Error::AlphabetMismatch(format!(
                "{element:?} is not an element of the product poset"
            )));
        }
        Ok(())
    }

    pub fn moebius(&self, a: &[Menu], b: &[Menu]) -> Result<i32> {
        self.check(a)?;
        self.check(b)?;
        let pairs: Vec<(Menu, Menu)> = a.iter().copied().zip(b.iter().copied()).collect();
        Ok(moebius_product(&pairs))
    }

    /// Every `b ≥ a`, in ascending code order.
    pub fn above(&self, a: &[Menu]) -> Vec<Vec<Menu>> {
        let mut out = vec![Vec::with_capacity(a.len())];
        for (m, l) in a.iter().zip(&self.components) {
            let sups: Vec<Menu> = m.supersets(l.size()).collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    sups.iter().map(move |s| {
                        let mut next = prefix.clone();
                        next.push(*s);
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// `F(a) = Σ_{b ≥ a} f(b)` for every element, one component at a time.
    pub fn accumulate(&self, f: &[Rational]) -> Vec<Rational> {
        self.transform(f, false)
    }

    /// Inverse of [`ProductPoset::accumulate`] on the whole poset.
    pub fn invert(&self, big_f: &[Rational]) -> Vec<Rational> {
        self.transform(big_f, true)
    }

    fn transform(&self, input: &[Rational], subtract: bool) -> Vec<Rational> {
        assert_eq!(input.len(), self.len(), "function must cover the poset");
        let mut values = input.to_vec();
        let mut stride = self.len();
        for l in &self.components {
            stride /= l.len();
            for bit in 0..l.size() {
                let step = (1usize << bit) * stride;
                for code in 0..values.len() {
                    let digit = (code / stride) % l.len();
                    if digit & (1 << bit) == 0 {
                        let upper = values[code + step].clone();
                        if subtract {
                            values[code] -= upper;
                        } else {
                            values[code] += upper;
                        }
                    }
                }
            }
        }
        values
    }
}

/// `f(at) = Σ_{b ≥ at} m(at, b) F(b)`, with `F` given densely over `poset`.
pub fn moebius_invert(poset: &ProductPoset, big_f: &[Rational], at: &[Menu]) -> Result<Rational> {
    poset.check(at)?;
    let mut total = Rational::zero();
    for b in poset.above(at) {
        let value = &big_f[poset.code(&b)];
        match poset.moebius(at, &b)? {
            1 => total += value,
            -1 => total -= value,
            _ => {}
        }
    }
    Ok(total)
}
