//! Ground-truth measures, the datasets they induce, and perturbed datasets
//! for negative tests.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with a 64-bit seed. Trial
//! `i` of a sweep uses the substream seed `seed ^ i`, so trials can run in
//! any order or on any number of threads.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::dataset::{
    history_key, validate_dataset, validate_dataset_with, Choice, ChoiceDataset, FillRule, RawDataset, MAX_INDEX_SPACE,
    MAX_MULTI_PERIOD_ITEMS, MAX_TWO_PERIOD_ITEMS,
};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::order::ProfileSpace;
use crate::rational::{rat, Rational};
use crate::representation::{history_masses, Measure};

/// Exclusive upper bound of the integer weights drawn for atoms.
const WEIGHT_BOUND: u64 = 1 << 32;

/// Exclusive upper bound of the integer weights drawn for choice
/// distributions by [`sample_dataset`].
const CHOICE_WEIGHT_BOUND: u64 = 64;

const SIGNED_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Target fraction of atoms forced to zero, in `[0, 1)`.
    pub sparsity: Rational,
    /// Mass moved by [`perturb_dataset`].
    pub epsilon: Rational,
}

impl GenConfig {
    pub fn new(sizes: Vec<usize>, seed: u64) -> Self {
        GenConfig {
            sizes,
            seed,
            sparsity: Rational::zero(),
            epsilon: rat(1, 8),
        }
    }

    pub fn with_sparsity(mut self, sparsity: Rational) -> Self {
        self.sparsity = sparsity;
        self
    }

    pub fn with_epsilon(mut self, epsilon: Rational) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn periods(&self) -> usize {
        self.sizes.len()
    }

    /// The same configuration on the substream of trial `trial`.
    pub fn trial(&self, trial: u64) -> Self {
        GenConfig {
            seed: self.seed ^ trial,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "alphabet sizes {:?} must be nonempty and positive",
                self.sizes
            )));
        }
        let cap = if self.periods() <= 2 {
            MAX_TWO_PERIOD_ITEMS
        } else {
            MAX_MULTI_PERIOD_ITEMS
        };
        if let Some(&k) = self.sizes.iter().find(|&&k| k > cap) {
            return Err(Error::SizeLimit(format!(
                "{k} items in a period; {}-period data allows at most {cap}",
                self.periods()
            )));
        }
        let space = ProfileSpace::new(self.sizes.clone()).len();
        if space > MAX_INDEX_SPACE {
            return Err(Error::SizeLimit(format!(
                "{space} preference profiles (max {MAX_INDEX_SPACE})"
            )));
        }
        if self.sparsity.is_negative() || self.sparsity >= Rational::one() {
            return Err(Error::InvalidConfig(format!(
                "sparsity {} is outside [0, 1)",
                self.sparsity
            )));
        }
        if self.epsilon.is_negative() {
            return Err(Error::InvalidConfig(format!("negative perturbation {}", self.epsilon)));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels `a, b, c, ...` running on across periods, so that no label is
/// shared between periods.
pub fn default_alphabets(sizes: &[usize]) -> Vec<Alphabet> {
    let mut next = b'a';
    sizes
        .iter()
        .map(|&k| {
            let labels: Vec<String> = (0..k)
                .map(|_| {
                    let c = next as char;
                    next += 1;
                    c.to_string()
                })
                .collect();
            Alphabet::new(labels).expect("distinct single-letter labels")
        })
        .collect()
}

/// True with probability `p` (exact comparison against a 64-bit draw).
fn coin(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    if p.is_zero() {
        return false;
    }
    let draw = BigInt::from(rng.random::<u64>());
    draw * p.denom() < p.numer() * (BigInt::one() << 64)
}

fn normalize(weights: Vec<u64>) -> Vec<Rational> {
    let total: BigInt = weights.iter().map(|&w| BigInt::from(w)).sum();
    weights
        .into_iter()
        .map(|w| Rational::new(BigInt::from(w), total.clone()))
        .collect()
}

/// A random probability measure over the profiles of `cfg.sizes`.
pub fn sample_measure(cfg: &GenConfig) -> Result<Measure> {
    cfg.validate()?;
    let mut rng = rng(cfg.seed);
    let alphabets = default_alphabets(&cfg.sizes);
    let count = ProfileSpace::new(cfg.sizes.clone()).len();
    let mut weights: Vec<u64> = (0..count)
        .map(|_| {
            let zero = coin(&mut rng, &cfg.sparsity);
            let w = rng.random_range(1..WEIGHT_BOUND);
            if zero {
                0
            } else {
                w
            }
        })
        .collect();
    if weights.iter().all(|&w| w == 0) {
        let keep = rng.random_range(0..count);
        weights[keep] = 1;
    }
    Measure::new(alphabets, normalize(weights))
}

/// Label-level tables of the data a (possibly signed) weighting induces,
/// for every history of positive or negative mass.
fn induced_raw(mu: &Measure) -> RawDataset {
    let xs = mu.alphabets();
    let labels: Vec<Vec<&str>> = xs
        .iter()
        .map(|x| x.labels().iter().map(String::as_str).collect())
        .collect();
    let refs: Vec<&[&str]> = labels.iter().map(Vec::as_slice).collect();
    let mut raw = RawDataset::new(&refs);
    let shape = crate::dataset::Shape::new(mu.sizes().to_vec());
    let mut previous: Vec<Rational> = vec![Rational::one()];
    for t in 0..mu.periods() {
        let masses = history_masses(mu, t + 1);
        for (code, history) in shape.histories(t) {
            let condition = &previous[code];
            if condition.is_zero() {
                continue;
            }
            let hkey = history_key(xs, &history);
            for menu in Menu::nonempty(xs[t].len()) {
                let dist: Vec<(&str, Rational)> = menu
                    .items()
                    .map(|x| {
                        let joint = &masses[shape.extend_code(code, t, Choice::new(menu, x))];
                        (xs[t].label(x), joint / condition)
                    })
                    .collect();
                raw.set(t, &hkey, &xs[t].menu_key(menu), &dist);
            }
        }
        previous = masses;
    }
    raw
}

/// The dataset `mu` generates: choice probabilities are event masses, and
/// conditionals are taken at every history of positive mass.
pub fn induce_dataset(mu: &Measure) -> Result<ChoiceDataset> {
    if !mu.is_probability() {
        return Err(Error::InvalidMeasure(
            "only a probability measure induces a dataset".into(),
        ));
    }
    Ok(validate_dataset(&induced_raw(mu))?.0)
}

/// The dataset a signed weighting induces, when all the resulting choice
/// probabilities happen to be valid. Marginal consistency holds by
/// construction, while Block-Marschak sums may be negative.
pub fn induce_signed(mu: &Measure) -> Result<ChoiceDataset> {
    if !mu.total().is_one() {
        return Err(Error::InvalidMeasure(format!("weights sum to {}", mu.total())));
    }
    Ok(validate_dataset(&induced_raw(mu))?.0)
}

/// One entry of a dataset: the distribution on `menu` after `history` in
/// period `period` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryRef {
    pub period: usize,
    pub history: Vec<Choice>,
    pub menu: Menu,
}

/// Moves `epsilon` of probability from `from` to `to` in one distribution.
/// Tables of histories that become observable keep their fill.
pub fn perturb_entry(
    data: &ChoiceDataset,
    entry: &EntryRef,
    from: usize,
    to: usize,
    epsilon: &Rational,
) -> Result<ChoiceDataset> {
    let t = entry.period;
    if t >= data.periods() || entry.history.len() != t || !data.is_observable(&entry.history) {
        return Err(Error::PerturbationInfeasible(format!(
            "period {} history {} is not an observable entry",
            t + 1,
            data.history_key(&entry.history)
        )));
    }
    if !entry.menu.contains(from) || !entry.menu.contains(to) || from == to {
        return Err(Error::PerturbationInfeasible(format!(
            "items {from} and {to} are not two items of menu {}",
            entry.menu
        )));
    }
    let table = data.table(t, &entry.history).expect("observable entry");
    if table.get(entry.menu, from) < epsilon {
        return Err(Error::PerturbationInfeasible(format!(
            "item {} carries less than {epsilon}",
            data.alphabet(t).label(from)
        )));
    }
    let x = data.alphabet(t);
    let dist: Vec<(&str, Rational)> = table
        .distribution(entry.menu)
        .map(|(i, p)| {
            let p = if i == from {
                p - epsilon
            } else if i == to {
                p + epsilon
            } else {
                p.clone()
            };
            (x.label(i), p)
        })
        .collect();
    let mut raw = data.to_raw_with_fill();
    raw.set(t, &data.history_key(&entry.history), &x.menu_key(entry.menu), &dist);
    Ok(validate_dataset_with(&raw, FillRule::Uniform)?.0)
}

/// Every `(entry, from, to)` that can give up `epsilon`, in a fixed order.
fn perturbation_targets(data: &ChoiceDataset, epsilon: &Rational) -> Vec<(EntryRef, usize, usize)> {
    let mut out = Vec::new();
    for t in 0..data.periods() {
        for history in data.observable_histories(t) {
            let table = data.table(t, &history).expect("observable history");
            for menu in Menu::nonempty(data.sizes()[t]).filter(|m| m.len() >= 2) {
                for from in menu.items() {
                    if table.get(menu, from) < epsilon {
                        continue;
                    }
                    for to in menu.items().filter(|&to| to != from) {
                        let entry = EntryRef {
                            period: t,
                            history: history.clone(),
                            menu,
                        };
                        out.push((entry, from, to));
                    }
                }
            }
        }
    }
    out
}

/// Moves `cfg.epsilon` between two items of one distribution chosen from
/// `cfg.seed`. `epsilon = 0` returns the data unchanged.
pub fn perturb_dataset(data: &ChoiceDataset, cfg: &GenConfig) -> Result<ChoiceDataset> {
    if cfg.epsilon.is_zero() {
        return Ok(data.clone());
    }
    if cfg.epsilon.is_negative() {
        return Err(Error::InvalidConfig(format!("negative perturbation {}", cfg.epsilon)));
    }
    let targets = perturbation_targets(data, &cfg.epsilon);
    if targets.is_empty() {
        return Err(Error::PerturbationInfeasible(format!(
            "no entry carries {} on an item of a menu with two or more items",
            cfg.epsilon
        )));
    }
    let mut rng = rng(cfg.seed);
    let (entry, from, to) = &targets[rng.random_range(0..targets.len())];
    perturb_entry(data, entry, *from, *to, &cfg.epsilon)
}

/// A random valid dataset with no structure beyond validity: each
/// distribution gets independent integer weights, some forced to zero.
pub fn sample_dataset(cfg: &GenConfig) -> Result<ChoiceDataset> {
    cfg.validate()?;
    let mut rng = rng(cfg.seed);
    let xs = default_alphabets(&cfg.sizes);
    let labels: Vec<Vec<&str>> = xs
        .iter()
        .map(|x| x.labels().iter().map(String::as_str).collect())
        .collect();
    let refs: Vec<&[&str]> = labels.iter().map(Vec::as_slice).collect();
    let mut raw = RawDataset::new(&refs);
    let shape = crate::dataset::Shape::new(cfg.sizes.clone());
    for (t, x) in xs.iter().enumerate() {
        for (_, history) in shape.histories(t) {
            let hkey = history_key(&xs, &history);
            for menu in Menu::nonempty(x.len()) {
                let items: Vec<usize> = menu.items().collect();
                let mut weights: Vec<u64> = items
                    .iter()
                    .map(|_| {
                        let zero = coin(&mut rng, &cfg.sparsity);
                        let w = rng.random_range(1..CHOICE_WEIGHT_BOUND);
                        if zero {
                            0
                        } else {
                            w
                        }
                    })
                    .collect();
                if weights.iter().all(|&w| w == 0) {
                    let keep = rng.random_range(0..weights.len());
                    weights[keep] = 1;
                }
                let dist: Vec<(&str, Rational)> = items
                    .iter()
                    .zip(normalize(weights))
                    .map(|(&i, p)| (x.label(i), p))
                    .collect();
                raw.set(t, &hkey, &x.menu_key(menu), &dist);
            }
        }
    }
    Ok(validate_dataset(&raw)?.0)
}

/// A dataset satisfying marginal consistency that may or may not satisfy
/// joint Block-Marschak nonnegativity.
///
/// Draws a full-support measure, then with probability one half moves mass
/// from one atom to another until the first is slightly negative. The
/// signed weighting still induces valid choice probabilities as long as no
/// choice event ends up with negative mass; draws violating that are retried
/// a bounded number of times before falling back to the measure itself.
pub fn sample_consistent_dataset(cfg: &GenConfig) -> Result<ChoiceDataset> {
    let base = GenConfig {
        sparsity: Rational::zero(),
        ..cfg.clone()
    };
    let mu = sample_measure(&base)?;
    let mut rng = rng(cfg.seed.rotate_left(32));
    if mu.atoms().len() < 2 || rng.random_bool(0.5) {
        return induce_dataset(&mu);
    }
    for _ in 0..SIGNED_ATTEMPTS {
        let count = mu.atoms().len();
        let loser = rng.random_range(0..count);
        let gainer = (loser + 1 + rng.random_range(0..count - 1)) % count;
        let overshoot = rat(rng.random_range(1..=16), 64) * &mu.atoms()[loser];
        let mut atoms = mu.atoms().to_vec();
        let moved = &atoms[loser] + &overshoot;
        atoms[loser] -= &moved;
        atoms[gainer] += &moved;
        let signed = Measure::candidate(mu.alphabets().to_vec(), atoms)?;
        match induce_signed(&signed) {
            Ok(data) => return Ok(data),
            Err(Error::DistributionInvalid(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    induce_dataset(&mu)
}
