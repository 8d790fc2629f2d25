//! Choice histories and the validated n-period choice dataset.
//!
//! Tables are dense. A choice `(A, x)` in a period with `k` items has code
//! `bits(A) * k + x`; a history is the mixed-radix number formed by its
//! choice codes, first period most significant. Codes that do not describe
//! a real choice (empty menu, `x ∉ A`) are simply never populated.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::rational::Rational;

/// Largest alphabet accepted per period when the dataset has at most two periods.
pub const MAX_TWO_PERIOD_ITEMS: usize = 5;
/// Largest alphabet accepted per period when the dataset has three or more periods.
pub const MAX_MULTI_PERIOD_ITEMS: usize = 3;
/// Ceiling on the number of full-length choice codes, which bounds every
/// dense table built over a dataset.
pub const MAX_INDEX_SPACE: usize = 1 << 16;

/// An offered menu together with the item chosen from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Choice {
    pub menu: Menu,
    pub item: usize,
}

impl Choice {
    pub fn new(menu: Menu, item: usize) -> Self {
        Choice { menu, item }
    }
}

/// Geometry of the dense code spaces for a list of alphabet sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    sizes: Vec<usize>,
    radix: Vec<usize>,
}

impl Shape {
    pub fn new(sizes: Vec<usize>) -> Self {
        let radix = sizes.iter().map(|&k| (1usize << k) * k).collect();
        Shape { sizes, radix }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn periods(&self) -> usize {
        self.sizes.len()
    }

    /// Number of distinct choice codes in period `t`.
    pub fn radix(&self, t: usize) -> usize {
        self.radix[t]
    }

    pub fn choice_code(&self, t: usize, choice: Choice) -> usize {
        choice.menu.bits() as usize * self.sizes[t] + choice.item
    }

    /// Inverse of [`Shape::choice_code`]; `None` for codes that are not a choice.
    pub fn decode_choice(&self, t: usize, code: usize) -> Option<Choice> {
        let k = self.sizes[t];
        let menu = Menu::from_bits((code / k) as u32);
        let item = code % k;
        (menu.contains(item)).then_some(Choice { menu, item })
    }

    /// Size of the code space of histories with `len` steps.
    pub fn history_space(&self, len: usize) -> usize {
        self.radix[..len].iter().product()
    }

    pub fn history_code(&self, history: &[Choice]) -> usize {
        history
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &c)| acc * self.radix[t] + self.choice_code(t, c))
    }

    pub fn extend_code(&self, code: usize, t: usize, choice: Choice) -> usize {
        code * self.radix[t] + self.choice_code(t, choice)
    }

    pub fn decode_history(&self, len: usize, mut code: usize) -> Option<Vec<Choice>> {
        let mut steps = Vec::with_capacity(len);
        for t in (0..len).rev() {
            steps.push(self.decode_choice(t, code % self.radix[t])?);
            code /= self.radix[t];
        }
        steps.reverse();
        Some(steps)
    }

    /// Every well-formed history with `len` steps, in code order.
    pub fn histories(&self, len: usize) -> impl Iterator<Item = (usize, Vec<Choice>)> + '_ {
        (0..self.history_space(len)).filter_map(move |code| self.decode_history(len, code).map(|h| (code, h)))
    }
}

/// One stochastic choice function: a distribution over each nonempty menu.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChoiceTable {
    size: usize,
    probs: Vec<Rational>,
}

impl ChoiceTable {
    fn empty(size: usize) -> Self {
        ChoiceTable {
            size,
            probs: vec![Rational::zero(); (1usize << size) * size],
        }
    }

    /// `ρ(x, A) = 1/|A|` on every menu.
    pub fn uniform(size: usize) -> Self {
        let mut table = ChoiceTable::empty(size);
        for menu in Menu::nonempty(size) {
            let p = Rational::new(1.into(), (menu.len() as i64).into());
            for item in menu.items() {
                table.set(menu, item, p.clone());
            }
        }
        table
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `ρ(x, A)`; zero when `x ∉ A`.
    pub fn get(&self, menu: Menu, item: usize) -> &Rational {
        &self.probs[menu.bits() as usize * self.size + item]
    }

    fn set(&mut self, menu: Menu, item: usize, value: Rational) {
        self.probs[menu.bits() as usize * self.size + item] = value;
    }

    /// `(item, probability)` over the items of `menu`.
    pub fn distribution(&self, menu: Menu) -> impl Iterator<Item = (usize, &Rational)> {
        menu.items().map(move |i| (i, self.get(menu, i)))
    }
}

/// How unobservable histories are filled. The fill never reaches any
/// Block-Marschak sum; [`FillRule::Uniform`] is the canonical choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FillRule {
    #[default]
    Uniform,
    /// Point mass on the lowest-index item of each menu.
    FirstItem,
}

impl FillRule {
    fn table(self, size: usize) -> ChoiceTable {
        match self {
            FillRule::Uniform => ChoiceTable::uniform(size),
            FillRule::FirstItem => {
                let mut table = ChoiceTable::empty(size);
                for menu in Menu::nonempty(size) {
                    let first = menu.items().next().expect("nonempty menu");
                    table.set(menu, first, Rational::one());
                }
                table
            }
        }
    }
}

/// Label-level choice tables as read from a file, before validation.
///
/// `periods[t]` maps a history key (`""` for the first period, otherwise
/// `"a,b>a;..."`) to a map from menu key (`"a,b"`) to item probabilities.
/// Items of a menu that are not listed carry probability zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDataset {
    pub alphabets: Vec<Vec<String>>,
    pub periods: Vec<BTreeMap<String, RawSlice>>,
}

/// Menu key to item label to probability.
pub type RawSlice = BTreeMap<String, BTreeMap<String, Rational>>;

impl RawDataset {
    pub fn new<S: AsRef<str>>(alphabets: &[&[S]]) -> Self {
        RawDataset {
            alphabets: alphabets
                .iter()
                .map(|x| x.iter().map(|s| s.as_ref().to_owned()).collect())
                .collect(),
            periods: vec![BTreeMap::new(); alphabets.len()],
        }
    }

    /// Sets the distribution for `menu` after `history` in period `t`
    /// (0-based). Replaces any previous distribution for that menu.
    pub fn set(&mut self, t: usize, history: &str, menu: &str, dist: &[(&str, Rational)]) -> &mut Self {
        let slice = self.periods[t].entry(history.to_owned()).or_default();
        slice.insert(
            menu.to_owned(),
            dist.iter().map(|(i, p)| ((*i).to_owned(), p.clone())).collect(),
        );
        self
    }

    pub fn remove_history(&mut self, t: usize, history: &str) -> &mut Self {
        self.periods[t].remove(history);
        self
    }
}

/// What validation observed besides the dataset itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub periods: usize,
    /// Observable histories of length `1..n`, by length.
    pub observable: Vec<usize>,
    /// Unobservable histories whose tables were filled.
    pub filled: Vec<usize>,
    /// Unobservable histories for which the input supplied a table; the
    /// supplied values were replaced by the fill.
    pub overwritten: Vec<String>,
}

/// A validated n-period stochastic choice dataset. Immutable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceDataset {
    alphabets: Vec<Alphabet>,
    shape: Shape,
    /// `tables[t][h]`: the period-`t` choice function after history code `h`.
    tables: Vec<Vec<Option<ChoiceTable>>>,
    /// `observable[len][h]` for histories of `len < n` steps.
    observable: Vec<Vec<bool>>,
}

impl ChoiceDataset {
    pub fn periods(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn alphabet(&self, t: usize) -> &Alphabet {
        &self.alphabets[t]
    }

    pub fn sizes(&self) -> &[usize] {
        self.shape.sizes()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// The period-`t` choice function after `history` (which must have `t` steps).
    pub fn table(&self, t: usize, history: &[Choice]) -> Option<&ChoiceTable> {
        if history.len() != t || t >= self.periods() {
            return None;
        }
        for (s, c) in history.iter().enumerate() {
            if !c.menu.fits(self.sizes()[s]) || !c.menu.contains(c.item) {
                return None;
            }
        }
        self.tables[t][self.shape.history_code(history)].as_ref()
    }

    pub(crate) fn table_at(&self, t: usize, code: usize) -> &ChoiceTable {
        self.tables[t][code]
            .as_ref()
            .expect("history code refers to a well-formed history")
    }

    /// The first-period choice function.
    pub fn rho1(&self) -> &ChoiceTable {
        self.table_at(0, 0)
    }

    /// `ρ_t(x, A | history)`. Panics if `history` is malformed for period `t`.
    pub fn rho(&self, t: usize, history: &[Choice], menu: Menu, item: usize) -> &Rational {
        self.table(t, history)
            .unwrap_or_else(|| panic!("malformed history {history:?} for period {t}"))
            .get(menu, item)
    }

    pub fn is_observable(&self, history: &[Choice]) -> bool {
        history.len() < self.periods()
            && self.table(history.len(), history).is_some()
            && self.observable[history.len()][self.shape.history_code(history)]
    }

    /// Observable histories with `len` steps (`len < n`), in canonical order.
    pub fn observable_histories(&self, len: usize) -> Vec<Vec<Choice>> {
        self.shape
            .histories(len)
            .filter(|(code, _)| self.observable[len][*code])
            .map(|(_, h)| h)
            .collect()
    }

    pub fn history_key(&self, history: &[Choice]) -> String {
        history_key(&self.alphabets, history)
    }

    pub fn parse_history(&self, key: &str) -> Result<Vec<Choice>> {
        parse_history(&self.alphabets, key)
    }

    /// Label-level tables for every observable history; unobservable
    /// histories are left out since their content is the fill.
    pub fn to_raw(&self) -> RawDataset {
        self.raw_tables(false)
    }

    /// Like [`ChoiceDataset::to_raw`] but also emits the filled tables, so
    /// that edits which make a history observable still validate.
    pub fn to_raw_with_fill(&self) -> RawDataset {
        self.raw_tables(true)
    }

    fn raw_tables(&self, with_fill: bool) -> RawDataset {
        let mut periods = Vec::with_capacity(self.periods());
        for t in 0..self.periods() {
            let x = &self.alphabets[t];
            let mut period = BTreeMap::new();
            let histories: Vec<Vec<Choice>> = if with_fill {
                self.shape.histories(t).map(|(_, h)| h).collect()
            } else {
                self.observable_histories(t)
            };
            for history in histories {
                let table = self.table_at(t, self.shape.history_code(&history));
                let mut slice = BTreeMap::new();
                for menu in Menu::nonempty(x.len()) {
                    let dist = table
                        .distribution(menu)
                        .map(|(i, p)| (x.label(i).to_owned(), p.clone()))
                        .collect();
                    slice.insert(x.menu_key(menu), dist);
                }
                period.insert(self.history_key(&history), slice);
            }
            periods.push(period);
        }
        RawDataset {
            alphabets: self.alphabets.iter().map(|x| x.labels().to_vec()).collect(),
            periods,
        }
    }
}

pub fn history_key(alphabets: &[Alphabet], history: &[Choice]) -> String {
    let steps: Vec<String> = history
        .iter()
        .zip(alphabets)
        .map(|(c, x)| format!("{}>{}", x.menu_key(c.menu), x.label(c.item)))
        .collect();
    steps.join(";")
}

/// Parses `"a,b>a;d>d"`; the empty key is the empty history.
pub fn parse_history(alphabets: &[Alphabet], key: &str) -> Result<Vec<Choice>> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    let steps: Vec<&str> = key.split(';').collect();
    if steps.len() > alphabets.len() {
        return Err(Error::AlphabetMismatch(format!(
            "history {key:?} is longer than the {} periods",
            alphabets.len()
        )));
    }
    steps
        .iter()
        .zip(alphabets)
        .map(|(step, x)| {
            let (menu, item) = step
                .split_once('>')
                .ok_or_else(|| Error::Parse(format!("history step {step:?} lacks '>'")))?;
            let menu = x.parse_menu(menu)?;
            let item = x.index(item)?;
            if menu.is_empty() || !menu.contains(item) {
                return Err(Error::SupportViolation(format!(
                    "history step {step:?} chooses outside its menu"
                )));
            }
            Ok(Choice { menu, item })
        })
        .collect()
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    let n = sizes.len();
    let cap = if n <= 2 {
        MAX_TWO_PERIOD_ITEMS
    } else {
        MAX_MULTI_PERIOD_ITEMS
    };
    if let Some(&k) = sizes.iter().find(|&&k| k > cap) {
        return Err(Error::SizeLimit(format!(
            "{k} items in a period; {n}-period data allows at most {cap}"
        )));
    }
    let space: usize = Shape::new(sizes.to_vec()).history_space(n);
    if space > MAX_INDEX_SPACE {
        return Err(Error::SizeLimit(format!(
            "alphabet sizes {sizes:?} give {space} choice-history codes (max {MAX_INDEX_SPACE})"
        )));
    }
    Ok(())
}

type IndexedSlice = BTreeMap<Menu, Vec<(usize, Rational)>>;

/// Resolves the label keys of one period's raw tables.
fn index_period(
    alphabets: &[Alphabet],
    shape: &Shape,
    t: usize,
    raw: &BTreeMap<String, RawSlice>,
) -> Result<BTreeMap<usize, (String, IndexedSlice)>> {
    let x = &alphabets[t];
    let mut out = BTreeMap::new();
    for (hkey, slice) in raw {
        let history = parse_history(alphabets, hkey)?;
        if history.len() != t {
            return Err(Error::AlphabetMismatch(format!(
                "period {} table keyed by history {hkey:?} of length {}",
                t + 1,
                history.len()
            )));
        }
        let mut menus: IndexedSlice = BTreeMap::new();
        for (mkey, dist) in slice {
            let menu = x.parse_menu(mkey)?;
            if menu.is_empty() {
                return Err(Error::DistributionInvalid(format!(
                    "period {} history {hkey:?}: empty menu",
                    t + 1
                )));
            }
            let mut entries = Vec::with_capacity(dist.len());
            for (label, p) in dist {
                entries.push((x.index(label)?, p.clone()));
            }
            if menus.insert(menu, entries).is_some() {
                return Err(Error::DistributionInvalid(format!(
                    "period {} history {hkey:?}: menu {mkey:?} given twice",
                    t + 1
                )));
            }
        }
        let code = shape.history_code(&history);
        if out.insert(code, (hkey.clone(), menus)).is_some() {
            return Err(Error::DistributionInvalid(format!(
                "period {} history {hkey:?} given twice",
                t + 1
            )));
        }
    }
    Ok(out)
}

fn build_table(size: usize, alphabet: &Alphabet, t: usize, hkey: &str, menus: &IndexedSlice) -> Result<ChoiceTable> {
    let mut table = ChoiceTable::empty(size);
    let at = |menu: Menu| {
        if hkey.is_empty() {
            format!("period {} menu {}", t + 1, alphabet.show_menu(menu))
        } else {
            format!("period {} history {hkey:?} menu {}", t + 1, alphabet.show_menu(menu))
        }
    };
    for menu in Menu::nonempty(size) {
        let entries = menus.get(&menu).ok_or_else(|| Error::MissingEntry(at(menu)))?;
        let mut total = Rational::zero();
        let mut seen = Menu::EMPTY;
        for (item, p) in entries {
            if p.is_negative() {
                return Err(Error::DistributionInvalid(format!(
                    "{}: negative value {p} on {}",
                    at(menu),
                    alphabet.label(*item)
                )));
            }
            if !menu.contains(*item) {
                if !p.is_zero() {
                    return Err(Error::SupportViolation(format!(
                        "{}: mass {p} on {} outside the menu",
                        at(menu),
                        alphabet.label(*item)
                    )));
                }
                continue;
            }
            seen = seen.with(*item);
            total += p;
            table.set(menu, *item, p.clone());
        }
        debug_assert!(seen.is_subset(menu));
        if !total.is_one() {
            return Err(Error::DistributionInvalid(format!(
                "{}: values sum to {total}",
                at(menu)
            )));
        }
    }
    Ok(table)
}

/// Validates raw tables with the canonical uniform fill.
pub fn validate_dataset(raw: &RawDataset) -> Result<(ChoiceDataset, ValidationReport)> {
    validate_dataset_with(raw, FillRule::Uniform)
}

/// Validates raw tables: every observable history must have a complete,
/// well-formed table; every unobservable history gets the `fill` table
/// (replacing whatever the input supplied).
pub fn validate_dataset_with(raw: &RawDataset, fill: FillRule) -> Result<(ChoiceDataset, ValidationReport)> {
    let alphabets = raw.alphabets.iter().map(Alphabet::new).collect::<Result<Vec<_>>>()?;
    let n = alphabets.len();
    if n == 0 {
        return Err(Error::AlphabetMismatch("a dataset needs at least one period".into()));
    }
    if raw.periods.len() != n {
        return Err(Error::AlphabetMismatch(format!(
            "{} alphabets but {} periods of tables",
            n,
            raw.periods.len()
        )));
    }
    let sizes: Vec<usize> = alphabets.iter().map(Alphabet::len).collect();
    check_sizes(&sizes)?;
    let shape = Shape::new(sizes.clone());

    let mut tables: Vec<Vec<Option<ChoiceTable>>> = Vec::with_capacity(n);
    let mut observable: Vec<Vec<bool>> = Vec::with_capacity(n);
    let mut report = ValidationReport {
        periods: n,
        ..ValidationReport::default()
    };

    for t in 0..n {
        let indexed = index_period(&alphabets, &shape, t, &raw.periods[t])?;
        let space = shape.history_space(t);
        let mut period_tables: Vec<Option<ChoiceTable>> = vec![None; space];
        let mut period_observable = vec![false; space];
        let mut filled = 0;
        for (code, history) in shape.histories(t) {
            let visible = match history.split_last() {
                None => true,
                Some((last, prefix)) => {
                    let parent = shape.history_code(prefix);
                    observable[t - 1][parent]
                        && !tables[t - 1][parent]
                            .as_ref()
                            .expect("parent table built")
                            .get(last.menu, last.item)
                            .is_zero()
                }
            };
            period_observable[code] = visible;
            let table = if visible {
                let (hkey, menus) = indexed.get(&code).ok_or_else(|| {
                    Error::MissingEntry(format!(
                        "period {} has no table for observable history {:?}",
                        t + 1,
                        history_key(&alphabets, &history)
                    ))
                })?;
                build_table(sizes[t], &alphabets[t], t, hkey, menus)?
            } else {
                if let Some((hkey, _)) = indexed.get(&code) {
                    report.overwritten.push(format!("{}:{hkey}", t + 1));
                }
                filled += 1;
                fill.table(sizes[t])
            };
            period_tables[code] = Some(table);
        }
        if t > 0 {
            report.observable.push(period_observable.iter().filter(|&&b| b).count());
            report.filled.push(filled);
        }
        tables.push(period_tables);
        observable.push(period_observable);
    }

    Ok((
        ChoiceDataset {
            alphabets,
            shape,
            tables,
            observable,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_by_two() -> RawDataset {
        let mut raw = RawDataset::new(&[&["a", "b"], &["d", "e"]]);
        raw.set(0, "", "a", &[("a", rat(1, 1))])
            .set(0, "", "b", &[("b", rat(1, 1))])
            .set(0, "", "a,b", &[("a", rat(3, 4)), ("b", rat(1, 4))]);
        for (h, pd) in [
            ("a>a", rat(5, 8)),
            ("b>b", rat(5, 8)),
            ("a,b>a", rat(2, 3)),
            ("a,b>b", rat(1, 2)),
        ] {
            raw.set(1, h, "d", &[("d", rat(1, 1))])
                .set(1, h, "e", &[("e", rat(1, 1))])
                .set(1, h, "d,e", &[("d", pd.clone()), ("e", rat(1, 1) - pd)]);
        }
        raw
    }

    #[test]
    fn accepts_well_formed_tables() {
        let (data, report) = validate_dataset(&two_by_two()).unwrap();
        assert_eq!(report.observable, vec![4]);
        assert_eq!(report.filled, vec![0]);
        let x1 = data.alphabet(0).clone();
        let x2 = data.alphabet(1).clone();
        let h = [Choice::new(x1.full(), 0)];
        assert_eq!(data.rho(1, &h, x2.full(), 0), &rat(2, 3));
        assert_eq!(data.rho1().get(x1.full(), 1), &rat(1, 4));
    }

    #[test]
    fn singleton_must_be_deterministic() {
        let mut raw = two_by_two();
        raw.set(0, "", "a", &[("a", rat(1, 2))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::DistributionInvalid(_))));
    }

    #[test]
    fn error_kinds() {
        let mut raw = two_by_two();
        raw.set(0, "", "a", &[("a", rat(1, 1)), ("b", rat(1, 2))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::SupportViolation(_))));

        let mut raw = two_by_two();
        raw.set(0, "", "a,b", &[("a", rat(5, 4)), ("b", rat(-1, 4))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::DistributionInvalid(_))));

        let mut raw = two_by_two();
        raw.periods[0].get_mut("").unwrap().remove("a,b");
        assert!(matches!(validate_dataset(&raw), Err(Error::MissingEntry(_))));

        let mut raw = two_by_two();
        raw.remove_history(1, "a,b>b");
        assert!(matches!(validate_dataset(&raw), Err(Error::MissingEntry(_))));

        let mut raw = two_by_two();
        raw.set(0, "", "a,z", &[("a", rat(1, 1))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::AlphabetMismatch(_))));

        let mut raw = two_by_two();
        raw.periods.pop();
        assert!(matches!(validate_dataset(&raw), Err(Error::AlphabetMismatch(_))));

        let mut raw = two_by_two();
        raw.set(1, "a>b", "d", &[("d", rat(1, 1))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::SupportViolation(_))));
    }

    #[test]
    fn unobservable_history_is_filled_and_overwritten() {
        let mut raw = two_by_two();
        raw.set(0, "", "a,b", &[("a", rat(1, 1)), ("b", rat(0, 1))]);
        let (data, report) = validate_dataset(&raw).unwrap();
        assert_eq!(report.observable, vec![3]);
        assert_eq!(report.filled, vec![1]);
        assert_eq!(report.overwritten, vec!["2:a,b>b".to_string()]);
        let h = [Choice::new(Menu::full(2), 1)];
        assert!(!data.is_observable(&h));
        assert_eq!(data.rho(1, &h, Menu::full(2), 0), &rat(1, 2));
    }

    #[test]
    fn size_limits() {
        let mut raw = RawDataset::new(&[&["a", "b", "c", "d"], &["p"], &["q"]]);
        raw.set(0, "", "a", &[("a", rat(1, 1))]);
        assert!(matches!(validate_dataset(&raw), Err(Error::SizeLimit(_))));
        let raw = RawDataset::new(&[&["a", "b", "c", "d", "e", "f"]]);
        assert!(matches!(validate_dataset(&raw), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn validation_is_idempotent() {
        let (data, _) = validate_dataset(&two_by_two()).unwrap();
        let (again, _) = validate_dataset(&data.to_raw()).unwrap();
        assert_eq!(data, again);
    }

    #[test]
    fn shape_codes_round_trip() {
        let shape = Shape::new(vec![2, 3]);
        let mut count = 0;
        for (code, h) in shape.histories(2) {
            assert_eq!(shape.history_code(&h), code);
            count += 1;
        }
        // (2 * 1 + 1 * 2) * (3 * 1 + 3 * 2 + 1 * 3)
        assert_eq!(count, 4 * 12);
    }
}
