//! Strict linear orders, preference profiles and their enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::menu::Menu;

/// A strict linear order on one period's alphabet, stored best-first as
/// item indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Preference(Vec<usize>);

impl Preference {
    pub fn new(order: Vec<usize>, size: usize) -> Result<Self> {
        let mut seen = Menu::EMPTY;
        for &item in &order {
            if item >= size || seen.contains(item) {
                return Err(Error::IndexInvalid(format!(
                    "{order:?} is not a permutation of {size} items"
                )));
            }
            seen = seen.with(item);
        }
        if order.len() != size {
            return Err(Error::IndexInvalid(format!(
                "{order:?} is not a permutation of {size} items"
            )));
        }
        Ok(Preference(order))
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let order = text
            .split('>')
            .map(|label| alphabet.index(label))
            .collect::<Result<Vec<_>>>()?;
        Preference::new(order, alphabet.len())
            .map_err(|_| Error::AlphabetMismatch(format!("{text:?} does not rank every item of {alphabet}")))
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The best item of `menu` under this order.
    pub fn top_in(&self, menu: Menu) -> Option<usize> {
        self.0.iter().copied().find(|&i| menu.contains(i))
    }

    /// Membership in the choice event `C(x, A)`: `x` beats the rest of `A`.
    pub fn chooses(&self, item: usize, menu: Menu) -> bool {
        menu.contains(item) && self.top_in(menu) == Some(item)
    }

    pub fn starts_with(&self, prefix: &[usize]) -> bool {
        self.0.starts_with(prefix)
    }

    /// Membership in the upper edge of `(x, A)`: the first `|A|` items are
    /// exactly `A` and `x` comes next.
    pub fn in_edge(&self, item: usize, above: Menu) -> bool {
        let k = above.len();
        k < self.0.len() && Menu::from_items(self.0[..k].iter().copied()) == above && self.0[k] == item
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let labels: Vec<&str> = self.0.iter().map(|&i| alphabet.label(i)).collect();
        labels.join(">")
    }
}

/// One order per period.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrefProfile(pub Vec<Preference>);

impl PrefProfile {
    pub fn periods(&self) -> usize {
        self.0.len()
    }

    pub fn period(&self, t: usize) -> &Preference {
        &self.0[t]
    }

    /// Canonical key: best-first labels per period, periods joined by `|`.
    pub fn key(&self, alphabets: &[Alphabet]) -> String {
        let parts: Vec<String> = self.0.iter().zip(alphabets).map(|(p, x)| p.display(x)).collect();
        parts.join("|")
    }

    pub fn parse(key: &str, alphabets: &[Alphabet]) -> Result<Self> {
        let parts: Vec<&str> = key.split('|').collect();
        if parts.len() != alphabets.len() {
            return Err(Error::AlphabetMismatch(format!(
                "profile {key:?} has {} periods, expected {}",
                parts.len(),
                alphabets.len()
            )));
        }
        parts
            .iter()
            .zip(alphabets)
            .map(|(part, x)| Preference::parse(part, x))
            .collect::<Result<Vec<_>>>()
            .map(PrefProfile)
    }
}

impl fmt::Display for PrefProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, p) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, "|")?;
            }
            let items: Vec<String> = p.items().iter().map(|i| i.to_string()).collect();
            write!(f, "{}", items.join(">"))?;
        }
        Ok(())
    }
}

/// All ordered selections of `k` distinct items of `menu`, lexicographic in
/// item index. `k = 0` yields the single empty sequence.
pub fn enumerate_sequences(menu: Menu, k: usize) -> Result<Vec<Vec<usize>>> {
    if k > menu.len() {
        return Err(Error::IndexInvalid(format!(
            "cannot select {k} distinct items from a menu of {}",
            menu.len()
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    extend_sequences(menu, k, &mut current, &mut out);
    Ok(out)
}

fn extend_sequences(free: Menu, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for item in free.items() {
        current.push(item);
        extend_sequences(free.without(item), k, current, out);
        current.pop();
    }
}

/// Permutations of `menu` (`π(A)` in set notation).
pub fn permutations(menu: Menu) -> Vec<Vec<usize>> {
    enumerate_sequences(menu, menu.len()).expect("full-length selection is always in range")
}

/// All orders on `size` items, lexicographic.
pub fn enumerate_preferences(size: usize) -> Vec<Preference> {
    permutations(Menu::full(size)).into_iter().map(Preference).collect()
}

/// All `∏ |X_t|!` profiles, period 1 most significant.
pub fn enumerate_profiles(alphabets: &[Alphabet]) -> Vec<PrefProfile> {
    let space = ProfileSpace::new(alphabets.iter().map(Alphabet::len).collect());
    (0..space.len()).map(|i| space.profile(i)).collect()
}

/// Dense indexing of profiles: the index of a profile is its position in
/// [`enumerate_profiles`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSpace {
    sizes: Vec<usize>,
    counts: Vec<usize>,
    len: usize,
}

impl ProfileSpace {
    pub fn new(sizes: Vec<usize>) -> Self {
        let counts: Vec<usize> = sizes.iter().map(|&k| factorial(k)).collect();
        let len = counts.iter().product();
        ProfileSpace { sizes, counts, len }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, profile: &PrefProfile) -> usize {
        profile
            .0
            .iter()
            .zip(&self.counts)
            .fold(0, |acc, (p, &count)| acc * count + permutation_rank(p.items()))
    }

    pub fn profile(&self, mut index: usize) -> PrefProfile {
        let mut prefs = Vec::with_capacity(self.sizes.len());
        for t in (0..self.sizes.len()).rev() {
            let rank = index % self.counts[t];
            index /= self.counts[t];
            prefs.push(Preference(permutation_unrank(rank, self.sizes[t])));
        }
        prefs.reverse();
        PrefProfile(prefs)
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn permutation_rank(perm: &[usize]) -> usize {
    let k = perm.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank += smaller_after * factorial(k - 1 - i);
    }
    rank
}

fn permutation_unrank(mut rank: usize, k: usize) -> Vec<usize> {
    let mut free: Vec<usize> = (0..k).collect();
    let mut perm = Vec::with_capacity(k);
    for i in 0..k {
        let f = factorial(k - 1 - i);
        perm.push(free.remove(rank / f));
        rank %= f;
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(labels: &[&str]) -> Alphabet {
        Alphabet::new(labels).unwrap()
    }

    #[test]
    fn sequences_of_small_menus() {
        assert_eq!(permutations(Menu::from_items([0, 1])), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(enumerate_sequences(Menu::full(3), 2).unwrap().len(), 6);
        assert_eq!(permutations(Menu::EMPTY), vec![Vec::<usize>::new()]);
        assert_eq!(
            enumerate_sequences(Menu::full(3), 0).unwrap(),
            vec![Vec::<usize>::new()]
        );
        assert!(matches!(
            enumerate_sequences(Menu::full(2), 3),
            Err(Error::IndexInvalid(_))
        ));
    }

    #[test]
    fn profile_counts() {
        assert_eq!(enumerate_profiles(&[x(&["a", "b"]), x(&["d", "e"])]).len(), 4);
        assert_eq!(
            enumerate_profiles(&[x(&["a", "b", "c"]), x(&["d", "e", "f"])]).len(),
            36
        );
        assert_eq!(enumerate_profiles(&[x(&["a", "b", "c"])]).len(), 6);
    }

    #[test]
    fn profile_space_round_trips() {
        let space = ProfileSpace::new(vec![3, 2, 4]);
        assert_eq!(space.len(), 6 * 2 * 24);
        let all = enumerate_profiles(&[x(&["a", "b", "c"]), x(&["d", "e"]), x(&["f", "g", "h", "i"])]);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(space.index(p), i);
            assert_eq!(&space.profile(i), p);
        }
    }

    #[test]
    fn order_queries() {
        let p = Preference::new(vec![2, 0, 1], 3).unwrap();
        assert_eq!(p.top_in(Menu::from_items([0, 1])), Some(0));
        assert!(p.chooses(2, Menu::full(3)));
        assert!(!p.chooses(0, Menu::full(3)));
        assert!(p.in_edge(0, Menu::singleton(2)));
        assert!(!p.in_edge(1, Menu::singleton(2)));
        assert!(p.in_edge(2, Menu::EMPTY));
        assert!(Preference::new(vec![0, 0, 1], 3).is_err());
        assert!(Preference::new(vec![0, 1], 3).is_err());
    }

    #[test]
    fn keys_round_trip() {
        let xs = [x(&["a", "b"]), x(&["d", "e"])];
        let p = PrefProfile::parse("b>a|d>e", &xs).unwrap();
        assert_eq!(p.key(&xs), "b>a|d>e");
        assert!(PrefProfile::parse("b>a", &xs).is_err());
        assert!(PrefProfile::parse("b|d>e", &xs).is_err());
    }
}
