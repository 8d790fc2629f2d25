//! Small hand-specified datasets with known answers, shared by tests, the
//! CLI's examples and the acceptance run.

use crate::alphabet::Alphabet;
use crate::dataset::{history_key, validate_dataset, Choice, ChoiceDataset, RawDataset};
use crate::menu::Menu;
use crate::order::PrefProfile;
use crate::rational::{rat, Rational};
use crate::representation::Measure;

fn alphabets(raw: &RawDataset) -> Vec<Alphabet> {
    raw.alphabets
        .iter()
        .map(|l| Alphabet::new(l).expect("fixture alphabet"))
        .collect()
}

/// Probability of choosing `item` from `menu` in period `t` after `history`.
pub type Rule = dyn Fn(usize, &[Choice], Menu, usize) -> Rational;

/// Fills `raw` from a rule `(t, history, menu, item) -> probability`, emitting
/// tables only for histories the rule itself makes observable.
pub fn raw_from_rule(labels: &[&[&str]], rule: &Rule) -> RawDataset {
    let mut raw = RawDataset::new(labels);
    let xs = alphabets(&raw);
    let mut frontier: Vec<Vec<Choice>> = vec![Vec::new()];
    for t in 0..xs.len() {
        let x = &xs[t];
        let mut next = Vec::new();
        for history in &frontier {
            let hkey = history_key(&xs, history);
            for menu in Menu::nonempty(x.len()) {
                let dist: Vec<(String, Rational)> = menu
                    .items()
                    .map(|i| (x.label(i).to_owned(), rule(t, history, menu, i)))
                    .collect();
                for (i, (_, p)) in menu.items().zip(&dist) {
                    if *p != rat(0, 1) {
                        let mut h = history.clone();
                        h.push(Choice::new(menu, i));
                        next.push(h);
                    }
                }
                let dist: Vec<(&str, Rational)> = dist.iter().map(|(l, p)| (l.as_str(), p.clone())).collect();
                raw.set(t, &hkey, &x.menu_key(menu), &dist);
            }
        }
        frontier = next;
    }
    raw
}

fn validated(raw: &RawDataset) -> ChoiceDataset {
    validate_dataset(raw).expect("fixture is valid").0
}

fn uniform_rule(_: usize, _: &[Choice], menu: Menu, _: usize) -> Rational {
    rat(1, menu.len() as i64)
}

/// One period over `{a,b,c}`, every menu uniform.
pub fn uniform_three() -> ChoiceDataset {
    validated(&raw_from_rule(&[&["a", "b", "c"]], &uniform_rule))
}

/// Periods `{a,b,c}` and `{d,e,f}`, uniform and history independent.
pub fn independent_three() -> ChoiceDataset {
    validated(&raw_from_rule(&[&["a", "b", "c"], &["d", "e", "f"]], &uniform_rule))
}

/// Three periods of two items each, uniform and history independent.
pub fn independent_two_cubed() -> ChoiceDataset {
    validated(&raw_from_rule(&[&["a", "b"], &["d", "e"], &["g", "h"]], &uniform_rule))
}

/// One period over `{a,b,c}` with `ρ(a,{a,b}) = 1/4 < 1/2 = ρ(a,X)`.
pub fn irregular_three() -> ChoiceDataset {
    let mut raw = raw_from_rule(&[&["a", "b", "c"]], &uniform_rule);
    raw.set(0, "", "a,b", &[("a", rat(1, 4)), ("b", rat(3, 4))]).set(
        0,
        "",
        "a,b,c",
        &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))],
    );
    validated(&raw)
}

/// Choices of an agent who always ranks items by index (first label best).
fn first_label_rule(_: usize, _: &[Choice], menu: Menu, item: usize) -> Rational {
    if menu.items().next() == Some(item) {
        rat(1, 1)
    } else {
        rat(0, 1)
    }
}

/// Point mass on `a>b|d>e`, as raw tables.
pub fn deterministic_raw() -> RawDataset {
    raw_from_rule(&[&["a", "b"], &["d", "e"]], &first_label_rule)
}

/// Point mass on `a>b|d>e`.
pub fn deterministic() -> ChoiceDataset {
    validated(&deterministic_raw())
}

/// One period, point mass on `a>b>c`.
pub fn deterministic_three() -> ChoiceDataset {
    validated(&raw_from_rule(&[&["a", "b", "c"]], &first_label_rule))
}

/// The two-by-two dataset induced by the atoms
/// `a>b|d>e = 1/2`, `a>b|e>d = 1/4`, `b>a|d>e = 1/8`, `b>a|e>d = 1/8`.
pub fn two_by_two_raw() -> RawDataset {
    let mut raw = RawDataset::new(&[&["a", "b"], &["d", "e"]]);
    raw.set(0, "", "a", &[("a", rat(1, 1))])
        .set(0, "", "b", &[("b", rat(1, 1))])
        .set(0, "", "a,b", &[("a", rat(3, 4)), ("b", rat(1, 4))]);
    for (history, d) in [
        ("a>a", rat(5, 8)),
        ("b>b", rat(5, 8)),
        ("a,b>a", rat(2, 3)),
        ("a,b>b", rat(1, 2)),
    ] {
        raw.set(1, history, "d", &[("d", rat(1, 1))])
            .set(1, history, "e", &[("e", rat(1, 1))])
            .set(1, history, "d,e", &[("d", d.clone()), ("e", rat(1, 1) - d)]);
    }
    raw
}

pub fn two_by_two() -> ChoiceDataset {
    validated(&two_by_two_raw())
}

/// [`two_by_two`] with `ρ2(d,{d,e} | {a,b},a) = 1`; breaks marginal consistency.
pub fn bad_marginals() -> ChoiceDataset {
    let mut raw = two_by_two_raw();
    raw.set(1, "a,b>a", "d,e", &[("d", rat(1, 1)), ("e", rat(0, 1))]);
    validated(&raw)
}

/// [`two_by_two`] with `ρ2(d,{d,e} | {a},a) = 7/8`; breaks stochastic regularity.
pub fn broken_regularity() -> ChoiceDataset {
    let mut raw = two_by_two_raw();
    raw.set(1, "a>a", "d,e", &[("d", rat(7, 8)), ("e", rat(1, 8))]);
    validated(&raw)
}

fn measure_from_keys(labels: &[&[&str]], atoms: &[(&str, Rational)]) -> Measure {
    let xs: Vec<Alphabet> = labels
        .iter()
        .map(|l| Alphabet::new(*l).expect("fixture alphabet"))
        .collect();
    let listed = atoms
        .iter()
        .map(|(key, p)| (PrefProfile::parse(key, &xs).expect("fixture profile"), p.clone()));
    Measure::from_atoms(xs.clone(), listed).expect("fixture measure")
}

/// The measure behind [`two_by_two`].
pub fn two_by_two_measure() -> Measure {
    measure_from_keys(
        &[&["a", "b"], &["d", "e"]],
        &[
            ("a>b|d>e", rat(1, 2)),
            ("a>b|e>d", rat(1, 4)),
            ("b>a|d>e", rat(1, 8)),
            ("b>a|e>d", rat(1, 8)),
        ],
    )
}

/// The point mass behind [`deterministic`].
pub fn deterministic_measure() -> Measure {
    measure_from_keys(&[&["a", "b"], &["d", "e"]], &[("a>b|d>e", rat(1, 1))])
}

/// Two different measures over four items that induce the same choice
/// probabilities: `abcd` and `badc` mixed evenly, against `abdc` and `bacd`.
pub fn four_item_twins() -> (Measure, Measure) {
    let labels: &[&[&str]] = &[&["a", "b", "c", "d"]];
    (
        measure_from_keys(labels, &[("a>b>c>d", rat(1, 2)), ("b>a>d>c", rat(1, 2))]),
        measure_from_keys(labels, &[("a>b>d>c", rat(1, 2)), ("b>a>c>d", rat(1, 2))]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        assert_eq!(uniform_three().periods(), 1);
        assert_eq!(independent_three().sizes(), &[3, 3]);
        assert_eq!(independent_two_cubed().periods(), 3);
        let det = deterministic();
        assert_eq!(det.observable_histories(1).len(), 3);
    }

    #[test]
    fn deterministic_uniform_fill() {
        let mut raw = deterministic_raw();
        raw.remove_history(1, "a,b>b");
        let (data, report) = validate_dataset(&raw).unwrap();
        assert_eq!(report.filled, vec![1]);
        let h = [Choice::new(Menu::full(2), 1)];
        assert_eq!(data.rho(1, &h, Menu::full(2), 0), &rat(1, 2));
    }
}
