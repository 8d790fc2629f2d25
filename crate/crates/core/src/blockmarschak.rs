//! Static, joint and n-period Block-Marschak sums, and the summation
//! identities they satisfy.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::dataset::{Choice, ChoiceDataset, ChoiceTable};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::moebius::{moebius_subset, ProductPoset};
use crate::rational::Rational;

/// Per period, an item `x_t` and a menu `A_t` with `x_t ∉ A_t`. `A_t` is the
/// set ranked above `x_t` in the matching upper edge set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BmIndex {
    steps: Vec<(usize, Menu)>,
}

impl BmIndex {
    pub fn new(steps: Vec<(usize, Menu)>, sizes: &[usize]) -> Result<Self> {
        if steps.len() != sizes.len() {
            return Err(Error::IndexInvalid(format!(
                "index has {} periods, data has {}",
                steps.len(),
                sizes.len()
            )));
        }
        for (t, (&(x, a), &k)) in steps.iter().zip(sizes).enumerate() {
            if x >= k || !a.fits(k) || a.contains(x) {
                return Err(Error::IndexInvalid(format!(
                    "period {}: item {x} must lie outside {a} within {k} items",
                    t + 1
                )));
            }
        }
        Ok(BmIndex { steps })
    }

    pub(crate) fn new_unchecked(steps: Vec<(usize, Menu)>) -> Self {
        BmIndex { steps }
    }

    /// Two-period shorthand.
    pub fn pair(x1: usize, a1: Menu, x2: usize, a2: Menu, sizes: &[usize]) -> Result<Self> {
        BmIndex::new(vec![(x1, a1), (x2, a2)], sizes)
    }

    pub fn periods(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[(usize, Menu)] {
        &self.steps
    }

    pub fn item(&self, t: usize) -> usize {
        self.steps[t].0
    }

    pub fn above(&self, t: usize) -> Menu {
        self.steps[t].1
    }

    /// Every valid index for the given alphabet sizes, in canonical order
    /// (period 1 slowest; within a period by `A` bits, then `x`).
    pub fn all(sizes: &[usize]) -> Vec<BmIndex> {
        let per_period: Vec<Vec<(usize, Menu)>> = sizes.iter().map(|&k| period_indices(k)).collect();
        let mut out = vec![Vec::new()];
        for choices in &per_period {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<(usize, Menu)>| {
                    choices.iter().map(move |&c| {
                        let mut next = prefix.clone();
                        next.push(c);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(|steps| BmIndex { steps }).collect()
    }

    pub fn display(&self, alphabets: &[Alphabet]) -> String {
        let parts: Vec<String> = self
            .steps
            .iter()
            .zip(alphabets)
            .map(|(&(x, a), alpha)| format!("{},{}", alpha.label(x), alpha.show_menu(a)))
            .collect();
        format!("({})", parts.join("; "))
    }
}

impl fmt::Display for BmIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|(x, a)| format!("{x},{a}")).collect();
        write!(f, "({})", parts.join("; "))
    }
}

/// Valid `(x, A)` pairs for one period: `A ⊊ X`, `x ∉ A`.
pub fn period_indices(size: usize) -> Vec<(usize, Menu)> {
    let full = Menu::full(size);
    full.subsets()
        .filter(|&a| a != full)
        .flat_map(|a| a.complement(size).items().map(move |x| (x, a)))
        .collect()
}

/// `M_{x,A} = Σ_{B ⊇ A^C} (-1)^{|B \ A^C|} ρ(x, B)`.
pub fn bm_static(rho: &ChoiceTable, x: usize, a: Menu) -> Result<Rational> {
    let k = rho.size();
    if x >= k || a.contains(x) || !a.fits(k) {
        return Err(Error::IndexInvalid(format!(
            "item {x} must lie outside {a} within {k} items"
        )));
    }
    let base = a.complement(k);
    let mut total = Rational::zero();
    for b in base.supersets(k) {
        let term = rho.get(b, x);
        if moebius_subset(base, b) > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// `j(x, B) = ρ1(x1, B1) ∏ ρt(xt, Bt | history)`; zero as soon as a prefix
/// probability vanishes.
pub fn joint_likelihood(data: &ChoiceDataset, x: &[usize], b: &[Menu]) -> Result<Rational> {
    let n = data.periods();
    if x.len() != n || b.len() != n {
        return Err(Error::IndexInvalid(format!(
            "likelihood needs {n} periods, got {} items and {} menus",
            x.len(),
            b.len()
        )));
    }
    for t in 0..n {
        let k = data.sizes()[t];
        if x[t] >= k || !b[t].fits(k) || !b[t].contains(x[t]) {
            return Err(Error::IndexInvalid(format!(
                "period {}: item {} not in menu {}",
                t + 1,
                x[t],
                b[t]
            )));
        }
    }
    Ok(likelihood(data, x, b))
}

fn likelihood(data: &ChoiceDataset, x: &[usize], b: &[Menu]) -> Rational {
    let shape = data.shape();
    let mut code = 0;
    let mut product = Rational::one();
    for t in 0..x.len() {
        let p = data.table_at(t, code).get(b[t], x[t]);
        if p.is_zero() {
            return Rational::zero();
        }
        product *= p;
        code = shape.extend_code(code, t, Choice::new(b[t], x[t]));
    }
    product
}

fn check_index(data: &ChoiceDataset, idx: &BmIndex) -> Result<()> {
    BmIndex::new(idx.steps.clone(), data.sizes()).map(|_| ())
}

/// The two-period joint sum as the explicit double alternating sum.
pub fn bm_joint(data: &ChoiceDataset, idx: &BmIndex) -> Result<Rational> {
    if data.periods() != 2 {
        return Err(Error::IndexInvalid(format!(
            "joint sum needs two periods, data has {}",
            data.periods()
        )));
    }
    check_index(data, idx)?;
    let (k1, k2) = (data.sizes()[0], data.sizes()[1]);
    let (x1, a1) = idx.steps[0];
    let (x2, a2) = idx.steps[1];
    let (c1, c2) = (a1.complement(k1), a2.complement(k2));
    let rho1 = data.rho1();
    let mut total = Rational::zero();
    for b2 in c2.supersets(k2) {
        for b1 in c1.supersets(k1) {
            let p1 = rho1.get(b1, x1);
            if p1.is_zero() {
                continue;
            }
            let h = data.shape().history_code(&[Choice::new(b1, x1)]);
            let term = data.table_at(1, h).get(b2, x2) * p1;
            if moebius_subset(c1, b1) * moebius_subset(c2, b2) > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total)
}

/// `M_{(x,A)} = Σ_{B ≥ A^C} (-1)^{Σ|B_t \ A_t^C|} j(x, B)` for any number of periods.
pub fn bm_n(data: &ChoiceDataset, idx: &BmIndex) -> Result<Rational> {
    check_index(data, idx)?;
    let mut total = Rational::zero();
    bm_walk(data, idx, 0, 0, &Rational::one(), true, &mut total);
    Ok(total)
}

fn bm_walk(
    data: &ChoiceDataset,
    idx: &BmIndex,
    t: usize,
    code: usize,
    prefix: &Rational,
    positive: bool,
    total: &mut Rational,
) {
    if t == idx.periods() {
        if positive {
            *total += prefix;
        } else {
            *total -= prefix;
        }
        return;
    }
    let k = data.sizes()[t];
    let (x, a) = idx.steps[t];
    let base = a.complement(k);
    let table = data.table_at(t, code);
    for b in base.supersets(k) {
        let p = table.get(b, x);
        if p.is_zero() {
            continue;
        }
        let sign = (moebius_subset(base, b) > 0) == positive;
        let next = data.shape().extend_code(code, t, Choice::new(b, x));
        bm_walk(data, idx, t + 1, next, &(prefix * p), sign, total);
    }
}

/// Every Block-Marschak sum of a dataset, computed by Möbius inversion of
/// the joint likelihood over the product of subset lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmTable {
    sizes: Vec<usize>,
    poset: ProductPoset,
    /// `values[x_code * poset.len() + code(A)]`; entries with some `x_t ∈ A_t` are unused.
    values: Vec<Rational>,
}

impl BmTable {
    pub fn build(data: &ChoiceDataset) -> Self {
        let sizes = data.sizes().to_vec();
        let poset = ProductPoset::new(&sizes);
        let x_space: usize = sizes.iter().product();
        let mut values = Vec::with_capacity(x_space * poset.len());
        let mut x = vec![0; sizes.len()];
        for x_code in 0..x_space {
            decode_items(&sizes, x_code, &mut x);
            let f: Vec<Rational> = (0..poset.len())
                .map(|code| {
                    let b = poset.element(code);
                    if b.iter().zip(&x).all(|(m, &i)| m.contains(i)) {
                        likelihood(data, &x, &b)
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let inverted = poset.invert(&f);
            // M_{x,A} is the inversion evaluated at A^C; store it under A.
            let mut by_above = vec![Rational::zero(); poset.len()];
            for (code, value) in inverted.into_iter().enumerate() {
                let complement: Vec<Menu> = poset
                    .element(code)
                    .iter()
                    .zip(&sizes)
                    .map(|(m, &k)| m.complement(k))
                    .collect();
                by_above[poset.code(&complement)] = value;
            }
            values.extend(by_above);
        }
        BmTable { sizes, poset, values }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn slot(&self, idx: &BmIndex) -> usize {
        let x_code = idx
            .steps
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&(x, _), &k)| acc * k + x);
        let above: Vec<Menu> = idx.steps.iter().map(|&(_, a)| a).collect();
        x_code * self.poset.len() + self.poset.code(&above)
    }

    /// The sum at a valid index. Panics for indices of another shape.
    pub fn get(&self, idx: &BmIndex) -> &Rational {
        assert_eq!(idx.periods(), self.sizes.len(), "index shape");
        &self.values[self.slot(idx)]
    }

    /// Two-period lookup by components.
    pub fn pair(&self, x1: usize, a1: Menu, x2: usize, a2: Menu) -> &Rational {
        self.get(&BmIndex::new_unchecked(vec![(x1, a1), (x2, a2)]))
    }

    /// `(index, value)` over every valid index in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (BmIndex, &Rational)> {
        BmIndex::all(&self.sizes).into_iter().map(move |idx| {
            let slot = self.slot(&idx);
            (idx, &self.values[slot])
        })
    }
}

fn decode_items(sizes: &[usize], mut code: usize, out: &mut [usize]) {
    for t in (0..sizes.len()).rev() {
        out[t] = code % sizes[t];
        code /= sizes[t];
    }
}

/// The summation identities satisfied by joint sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Identity {
    /// Conditional choice probability as a sum of joint sums over subsets.
    #[serde(rename = "prop1")]
    Likelihood,
    /// Period-2 exchange: moving one item of `A2` in front of `x2`.
    #[serde(rename = "prop2")]
    SecondExchange,
    /// Period-1 exchange; needs marginal consistency.
    #[serde(rename = "claim1")]
    FirstExchange,
    /// Both exchanges chained; needs marginal consistency.
    #[serde(rename = "corner")]
    DoubleExchange,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::Likelihood,
        Identity::SecondExchange,
        Identity::FirstExchange,
        Identity::DoubleExchange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Likelihood => "prop1",
            Identity::SecondExchange => "prop2",
            Identity::FirstExchange => "claim1",
            Identity::DoubleExchange => "corner",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == text)
            .ok_or_else(|| Error::Parse(format!("unknown identity {text:?}")))
    }

    pub fn needs_marginal_consistency(self) -> bool {
        matches!(self, Identity::FirstExchange | Identity::DoubleExchange)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Instantiates `which` at every admissible index of a two-period dataset.
pub fn check_identities(data: &ChoiceDataset, which: Identity) -> Result<IdentityReport> {
    if data.periods() != 2 {
        return Err(Error::IndexInvalid(format!(
            "identities concern two-period data, got {} periods",
            data.periods()
        )));
    }
    if which.needs_marginal_consistency() {
        let (verdict, _) = crate::axioms::check_marginal_consistency(data)?;
        if !verdict.pass {
            return Err(Error::PreconditionUnmet(format!(
                "{} requires marginal consistency, which fails",
                which.name()
            )));
        }
    }
    let table = BmTable::build(data);
    Ok(check_identities_with(data, &table, which))
}

/// As [`check_identities`] with a prebuilt table and no precondition check.
pub fn check_identities_with(data: &ChoiceDataset, m: &BmTable, which: Identity) -> IdentityReport {
    let (k1, k2) = (data.sizes()[0], data.sizes()[1]);
    let xs = data.alphabets();
    let proper = |k: usize| Menu::full(k).subsets().filter(move |&a| a != Menu::full(k));
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut record = |instance: String, lhs: Rational, rhs: Rational| {
        checked += 1;
        if lhs != rhs {
            failures.push(IdentityFailure {
                instance,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    };
    let show = |x1: usize, a1: Menu, x2: usize, a2: Menu| BmIndex::new_unchecked(vec![(x1, a1), (x2, a2)]).display(xs);

    match which {
        Identity::Likelihood => {
            for a1 in proper(k1) {
                for a2 in proper(k2) {
                    let (c1, c2) = (a1.complement(k1), a2.complement(k2));
                    for x1 in c1.items() {
                        for x2 in c2.items() {
                            let lhs = likelihood(data, &[x1, x2], &[c1, c2]);
                            let mut rhs = Rational::zero();
                            for b2 in a2.subsets() {
                                for b1 in a1.subsets() {
                                    rhs += m.pair(x1, b1, x2, b2);
                                }
                            }
                            record(show(x1, a1, x2, a2), lhs, rhs);
                        }
                    }
                }
            }
        }
        Identity::SecondExchange => {
            for a1 in proper(k1) {
                for x1 in a1.complement(k1).items() {
                    for a2 in proper(k2).filter(|a| !a.is_empty()) {
                        let lhs = sum(a2.complement(k2).items().map(|x2| m.pair(x1, a1, x2, a2)));
                        let rhs = sum(a2.items().map(|y2| m.pair(x1, a1, y2, a2.without(y2))));
                        record(
                            format!("({},{}; {})", xs[0].label(x1), xs[0].show_menu(a1), xs[1].show_menu(a2)),
                            lhs,
                            rhs,
                        );
                    }
                }
            }
        }
        Identity::FirstExchange => {
            for a2 in proper(k2) {
                for x2 in a2.complement(k2).items() {
                    for a1 in proper(k1).filter(|a| !a.is_empty()) {
                        let lhs = sum(a1.complement(k1).items().map(|x1| m.pair(x1, a1, x2, a2)));
                        let rhs = sum(a1.items().map(|y1| m.pair(y1, a1.without(y1), x2, a2)));
                        record(
                            format!("({}; {},{})", xs[0].show_menu(a1), xs[1].label(x2), xs[1].show_menu(a2)),
                            lhs,
                            rhs,
                        );
                    }
                }
            }
        }
        Identity::DoubleExchange => {
            for a1 in proper(k1).filter(|a| !a.is_empty()) {
                for a2 in proper(k2).filter(|a| !a.is_empty()) {
                    let mut lhs = Rational::zero();
                    for x1 in a1.complement(k1).items() {
                        for x2 in a2.complement(k2).items() {
                            lhs += m.pair(x1, a1, x2, a2);
                        }
                    }
                    let mut rhs = Rational::zero();
                    for y1 in a1.items() {
                        for y2 in a2.items() {
                            rhs += m.pair(y1, a1.without(y1), y2, a2.without(y2));
                        }
                    }
                    record(format!("({}; {})", xs[0].show_menu(a1), xs[1].show_menu(a2)), lhs, rhs);
                }
            }
        }
    }
    IdentityReport {
        identity: which,
        checked,
        failures,
    }
}

fn sum<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values.fold(Rational::zero(), |acc, v| acc + v)
}
