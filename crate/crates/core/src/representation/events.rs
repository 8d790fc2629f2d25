use num_traits::Zero;

use crate::blockmarschak::BmIndex;
use crate::dataset::{Choice, Shape};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::order::{enumerate_preferences, factorial, permutations, PrefProfile, Preference};
use crate::rational::Rational;

use super::measure::Measure;

/// Orders on `size` items that rank `x` above the rest of `menu`.
pub fn choice_event(x: usize, menu: Menu, size: usize) -> Result<Vec<Preference>> {
    if !menu.fits(size) || !menu.contains(x) {
        return Err(Error::IndexInvalid(format!("item {x} is not in menu {menu}")));
    }
    Ok(enumerate_preferences(size)
        .into_iter()
        .filter(|p| p.chooses(x, menu))
        .collect())
}

/// Profiles ranking, in every period, `A_t` above `x_t` above the rest.
pub fn upper_edge_set(idx: &BmIndex, sizes: &[usize]) -> Result<Vec<PrefProfile>> {
    let idx = BmIndex::new(idx.steps().to_vec(), sizes)?;
    let mut out: Vec<Vec<Preference>> = vec![Vec::new()];
    for (&(x, above), &k) in idx.steps().iter().zip(sizes) {
        let below = above.with(x).complement(k);
        let mut orders = Vec::new();
        for head in permutations(above) {
            for tail in permutations(below) {
                let mut order = head.clone();
                order.push(x);
                order.extend(&tail);
                orders.push(Preference::new(order, k).expect("edge order is a permutation"));
            }
        }
        out = out
            .into_iter()
            .flat_map(|prefix| {
                orders.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect();
    }
    let mut profiles: Vec<PrefProfile> = out.into_iter().map(PrefProfile).collect();
    profiles.sort();
    Ok(profiles)
}

/// `|E(x, A)| = ∏ |A_t|! (|X_t| - |A_t| - 1)!`.
pub fn edge_set_size(idx: &BmIndex, sizes: &[usize]) -> usize {
    idx.steps()
        .iter()
        .zip(sizes)
        .map(|(&(_, a), &k)| factorial(a.len()) * factorial(k - a.len() - 1))
        .product()
}

/// The orders of one period that begin with a fixed sequence of distinct items.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder {
    pub period: usize,
    pub items: Vec<usize>,
}

impl Cylinder {
    pub fn new(period: usize, items: Vec<usize>, size: usize) -> Result<Self> {
        let set = Menu::from_items(items.iter().copied());
        if items.is_empty() || items.len() > size || set.len() != items.len() || !set.fits(size) {
            return Err(Error::IndexInvalid(format!(
                "{items:?} is not a nonempty distinct sequence of {size} items"
            )));
        }
        Ok(Cylinder { period, items })
    }

    pub fn contains(&self, order: &Preference) -> bool {
        order.starts_with(&self.items)
    }

    pub fn set(&self) -> Menu {
        Menu::from_items(self.items.iter().copied())
    }

    /// Shortest sequence naming the same set of orders: fixing all but one
    /// item already fixes the last.
    pub fn canonical(&self, size: usize) -> Cylinder {
        Cylinder {
            period: self.period,
            items: canonical_prefix(&self.items, size).to_vec(),
        }
    }
}

/// Longest sequence length kept by [`Cylinder::canonical`].
pub fn canonical_len(size: usize) -> usize {
    size.saturating_sub(1).max(1)
}

pub fn canonical_prefix(items: &[usize], size: usize) -> &[usize] {
    &items[..items.len().min(canonical_len(size))]
}

/// `μ(E(x, A))` for every valid index, dense in the [`BmIndex::all`] order.
/// Each order of `k` items lies in exactly `k` one-period edges, so every
/// profile is visited once.
pub fn edge_masses(mu: &Measure) -> Vec<Rational> {
    let sizes = mu.sizes().to_vec();
    let slots = EdgeSlots::new(&sizes);
    let mut out = vec![Rational::zero(); slots.len()];
    let mut pos = vec![0usize; sizes.len()];
    for (profile, mass) in mu.iter() {
        if mass.is_zero() {
            continue;
        }
        pos.iter_mut().for_each(|p| *p = 0);
        loop {
            let steps: Vec<(usize, Menu)> = profile
                .0
                .iter()
                .zip(&pos)
                .map(|(p, &j)| {
                    let items = p.items();
                    (items[j], Menu::from_items(items[..j].iter().copied()))
                })
                .collect();
            out[slots.slot(&steps)] += mass;
            if !bump(&mut pos, &sizes) {
                break;
            }
        }
    }
    out
}

fn bump(pos: &mut [usize], sizes: &[usize]) -> bool {
    for t in (0..pos.len()).rev() {
        pos[t] += 1;
        if pos[t] < sizes[t] {
            return true;
        }
        pos[t] = 0;
    }
    false
}

/// Position of an index in [`BmIndex::all`].
pub(crate) struct EdgeSlots {
    sizes: Vec<usize>,
    per_period: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl EdgeSlots {
    pub(crate) fn new(sizes: &[usize]) -> Self {
        let mut per_period = Vec::new();
        let mut counts = Vec::new();
        for &k in sizes {
            let pairs = crate::blockmarschak::period_indices(k);
            let mut lookup = vec![usize::MAX; (1usize << k) * k];
            for (i, &(x, a)) in pairs.iter().enumerate() {
                lookup[a.bits() as usize * k + x] = i;
            }
            counts.push(pairs.len());
            per_period.push(lookup);
        }
        EdgeSlots {
            sizes: sizes.to_vec(),
            per_period,
            counts,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub(crate) fn slot(&self, steps: &[(usize, Menu)]) -> usize {
        steps.iter().enumerate().fold(0, |acc, (t, &(x, a))| {
            acc * self.counts[t] + self.per_period[t][a.bits() as usize * self.sizes[t] + x]
        })
    }
}

/// `μ(C(h))` for every choice history `h` with `len` steps, dense over
/// history codes (codes that are not histories stay 0).
pub fn history_masses(mu: &Measure, len: usize) -> Vec<Rational> {
    let marginal = mu.marginal(len);
    let shape = Shape::new(marginal.sizes().to_vec());
    let orders: Vec<Vec<Preference>> = marginal.sizes().iter().map(|&k| enumerate_preferences(k)).collect();
    masses_from(&shape, &orders, 0, marginal.atoms())
}

fn masses_from(shape: &Shape, orders: &[Vec<Preference>], t: usize, weights: &[Rational]) -> Vec<Rational> {
    let n = shape.periods();
    if t == n {
        return vec![weights[0].clone()];
    }
    let suffix_space: usize = (t + 1..n).map(|s| shape.radix(s)).product();
    let mut out = vec![Rational::zero(); shape.radix(t) * suffix_space];
    let block = weights.len() / orders[t].len();
    let k = shape.sizes()[t];
    for (order, chunk) in orders[t].iter().zip(weights.chunks(block)) {
        if chunk.iter().all(Zero::is_zero) {
            continue;
        }
        let sub = masses_from(shape, orders, t + 1, chunk);
        for menu in Menu::nonempty(k) {
            let x = order.top_in(menu).expect("nonempty menu");
            let base = shape.choice_code(t, Choice::new(menu, x)) * suffix_space;
            for (i, v) in sub.iter().enumerate() {
                if !v.is_zero() {
                    out[base + i] += v;
                }
            }
        }
    }
    out
}
