use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::blockmarschak::{BmIndex, BmTable};
use crate::dataset::{Choice, ChoiceDataset};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::rational::Rational;

use super::events::{edge_masses, history_masses};
use super::measure::Measure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Every upper edge set carries its Block-Marschak sum.
    Edge,
    /// The measure reproduces every choice probability and every
    /// conditional at observable histories.
    Direct,
    #[default]
    Both,
}

impl VerifyMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "edge" => Ok(VerifyMode::Edge),
            "direct" => Ok(VerifyMode::Direct),
            "both" => Ok(VerifyMode::Both),
            _ => Err(Error::Parse(format!("unknown verification mode {text:?}"))),
        }
    }

    fn edge(self) -> bool {
        matches!(self, VerifyMode::Edge | VerifyMode::Both)
    }

    fn direct(self) -> bool {
        matches!(self, VerifyMode::Direct | VerifyMode::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub constraint: String,
    #[serde(with = "crate::rational::as_text")]
    pub expected: Rational,
    #[serde(with = "crate::rational::as_text")]
    pub actual: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub pass: bool,
    pub checked: usize,
    /// In enumeration order: edge constraints first, then direct ones.
    pub failures: Vec<VerifyFailure>,
}

/// Checks `mu` against `data` for any number of periods.
pub fn verify_representation(mu: &Measure, data: &ChoiceDataset, mode: VerifyMode) -> Result<VerifyReport> {
    if mu.alphabets() != data.alphabets() {
        return Err(Error::AlphabetMismatch(
            "measure and data are over different alphabets".into(),
        ));
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    if mode.edge() {
        let table = BmTable::build(data);
        verify_edges(mu, data, &table, &mut checked, &mut failures);
    }
    if mode.direct() {
        verify_direct(mu, data, &mut checked, &mut failures);
    }
    Ok(VerifyReport {
        mode,
        pass: failures.is_empty(),
        checked,
        failures,
    })
}

pub(crate) fn verify_edges(
    mu: &Measure,
    data: &ChoiceDataset,
    table: &BmTable,
    checked: &mut usize,
    failures: &mut Vec<VerifyFailure>,
) {
    let masses = edge_masses(mu);
    for ((idx, m), mass) in table.iter().zip(&masses) {
        *checked += 1;
        if m != mass {
            failures.push(VerifyFailure {
                constraint: format!("edge {}", idx.display(data.alphabets())),
                expected: m.clone(),
                actual: mass.clone(),
            });
        }
    }
    debug_assert_eq!(masses.len(), BmIndex::all(data.sizes()).len());
}

fn verify_direct(mu: &Measure, data: &ChoiceDataset, checked: &mut usize, failures: &mut Vec<VerifyFailure>) {
    let shape = data.shape();
    let xs = data.alphabets();
    let mut previous: Option<Vec<Rational>> = None;
    for t in 0..data.periods() {
        let masses = history_masses(mu, t + 1);
        for history in data.observable_histories(t) {
            let code = shape.history_code(&history);
            let table = data.table(t, &history).expect("observable history");
            let condition = previous.as_ref().map(|prev| &prev[code]);
            let where_ = if t == 0 {
                String::new()
            } else {
                format!(" | {}", data.history_key(&history))
            };
            if let Some(c) = condition {
                if c.is_zero() {
                    *checked += 1;
                    failures.push(VerifyFailure {
                        constraint: format!("mass of history {}", data.history_key(&history)),
                        expected: history_likelihood(data, &history),
                        actual: Rational::zero(),
                    });
                    continue;
                }
            }
            for menu in Menu::nonempty(data.sizes()[t]) {
                for x in menu.items() {
                    *checked += 1;
                    let joint = &masses[shape.extend_code(code, t, Choice::new(menu, x))];
                    let actual = match condition {
                        None => joint.clone(),
                        Some(c) => joint / c,
                    };
                    let expected = table.get(menu, x);
                    if &actual != expected {
                        failures.push(VerifyFailure {
                            constraint: format!(
                                "period {} choice {} from {}{where_}",
                                t + 1,
                                xs[t].label(x),
                                xs[t].show_menu(menu)
                            ),
                            expected: expected.clone(),
                            actual,
                        });
                    }
                }
            }
        }
        previous = Some(masses);
    }
}

fn history_likelihood(data: &ChoiceDataset, history: &[Choice]) -> Rational {
    let mut code = 0;
    let mut product = Rational::from_integer(1.into());
    for (t, &c) in history.iter().enumerate() {
        product *= data.table_at(t, code).get(c.menu, c.item);
        code = data.shape().extend_code(code, t, c);
    }
    product
}
