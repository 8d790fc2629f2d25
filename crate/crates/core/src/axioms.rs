//! Exhaustive decision procedures for the axioms, each with witnesses.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::blockmarschak::{bm_static, period_indices, BmTable};
use crate::dataset::{Choice, ChoiceDataset, ChoiceTable};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Regularity,
    BlockMarschak,
    StochasticBlockMarschak,
    MarginalConsistency,
    StochasticRegularity,
}

impl Axiom {
    pub fn name(self, strict: bool) -> &'static str {
        match (self, strict) {
            (Axiom::Regularity, _) => "regularity",
            (Axiom::BlockMarschak, false) => "Block-Marschak nonnegativity",
            (Axiom::BlockMarschak, true) => "Block-Marschak positivity",
            (Axiom::StochasticBlockMarschak, false) => "stochastic Block-Marschak nonnegativity",
            (Axiom::StochasticBlockMarschak, true) => "stochastic Block-Marschak positivity",
            (Axiom::MarginalConsistency, _) => "marginal consistency",
            (Axiom::StochasticRegularity, _) => "stochastic regularity",
        }
    }
}

/// One failing instantiation: `lhs` should relate to `rhs` as the axiom demands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub instance: String,
    #[serde(with = "crate::rational::as_text")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::as_text")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub strict: bool,
    /// Which choice functions or periods were examined.
    pub scope: String,
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl AxiomVerdict {
    fn new(axiom: Axiom, strict: bool, scope: impl Into<String>) -> Self {
        AxiomVerdict {
            axiom,
            strict,
            scope: scope.into(),
            pass: true,
            checked: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn observe(&mut self, ok: bool, instance: impl FnOnce() -> String, lhs: &Rational, rhs: &Rational) {
        self.checked += 1;
        if !ok {
            self.witnesses.push(Witness {
                instance: instance(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            });
        }
    }

    fn finish(mut self) -> Self {
        self.witnesses.sort();
        self.notes.sort();
        self.notes.dedup();
        self.pass = self.witnesses.is_empty();
        self
    }

    /// Folds the verdict of another choice function into this one.
    fn absorb(&mut self, other: AxiomVerdict, label: &str) {
        self.checked += other.checked;
        for w in other.witnesses {
            self.witnesses.push(Witness {
                instance: format!("{label}: {}", w.instance),
                ..w
            });
        }
        self.notes.extend(other.notes);
    }

    pub fn title(&self) -> String {
        format!("{} [{}]", self.axiom.name(self.strict), self.scope)
    }
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checked, {} witnesses)",
            self.title(),
            if self.pass { "pass" } else { "FAIL" },
            self.checked,
            self.witnesses.len()
        )
    }
}

/// `ρ(x, A) ≥ ρ(x, B)` for all `x ∈ A ⊆ B`.
pub fn check_regularity(rho: &ChoiceTable, alphabet: &Alphabet) -> AxiomVerdict {
    let k = rho.size();
    let mut verdict = AxiomVerdict::new(Axiom::Regularity, false, "period 1");
    for a in Menu::nonempty(k) {
        for b in a.supersets(k) {
            for x in a.items() {
                let (lhs, rhs) = (rho.get(a, x), rho.get(b, x));
                verdict.observe(
                    lhs >= rhs,
                    || {
                        format!(
                            "({}, {}, {})",
                            alphabet.label(x),
                            alphabet.show_menu(a),
                            alphabet.show_menu(b)
                        )
                    },
                    lhs,
                    rhs,
                );
            }
        }
    }
    verdict.finish()
}

/// `M_{x,A} ≥ 0` (or `> 0` when `strict`) for all `x ∈ A^C ≠ ∅`.
pub fn check_bm_nonneg(rho: &ChoiceTable, alphabet: &Alphabet, strict: bool) -> AxiomVerdict {
    let mut verdict = AxiomVerdict::new(Axiom::BlockMarschak, strict, "period 1");
    let zero = Rational::zero();
    for (x, a) in period_indices(rho.size()) {
        let m = bm_static(rho, x, a).expect("enumerated indices are valid");
        let ok = if strict { m > zero } else { m >= zero };
        verdict.observe(
            ok,
            || format!("({}, {})", alphabet.label(x), alphabet.show_menu(a)),
            &m,
            &zero,
        );
    }
    verdict.finish()
}

/// The law-of-total-probability marginals, grouped by everything except the
/// conditioning menu of one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalTable {
    pub entries: Vec<MarginalEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalEntry {
    /// 1-based period whose menu varies.
    pub period: usize,
    /// Fixed choices of the other periods, with `*` in the varying slot.
    pub instance: String,
    /// `P` for each conditioning menu of the varying period.
    pub values: Vec<(String, Rational)>,
    pub consistent: bool,
}

impl MarginalEntry {
    /// The common value when consistent.
    pub fn common(&self) -> Option<&Rational> {
        if self.consistent {
            self.values.first().map(|(_, v)| v)
        } else {
            None
        }
    }
}

impl MarginalTable {
    pub fn lookup(&self, period: usize, instance: &str) -> Option<&MarginalEntry> {
        self.entries
            .iter()
            .find(|e| e.period == period && e.instance == instance)
    }

    pub fn consistent(&self) -> bool {
        self.entries.iter().all(|e| e.consistent)
    }
}

/// For every non-final period `t` and every choice `x_s ∈ A_s` of the other
/// periods, `Σ_{x_t ∈ A_t} j(x, A)` must not depend on `A_t`.
pub fn check_marginal_consistency(data: &ChoiceDataset) -> Result<(AxiomVerdict, MarginalTable)> {
    let n = data.periods();
    if n < 2 {
        return Err(Error::PreconditionUnmet(
            "marginal consistency needs at least two periods".into(),
        ));
    }
    let xs = data.alphabets();
    let scope = if n == 2 {
        "period 2 marginals".to_string()
    } else {
        format!("periods 1..{} conditioning", n - 1)
    };
    let mut verdict = AxiomVerdict::new(Axiom::MarginalConsistency, false, scope);
    let mut entries = Vec::new();
    let choices: Vec<Vec<Choice>> = data
        .sizes()
        .iter()
        .map(|&k| {
            Menu::nonempty(k)
                .flat_map(|a| a.items().map(move |x| Choice::new(a, x)))
                .collect()
        })
        .collect();

    for t in 0..n - 1 {
        let others: Vec<usize> = (0..n).filter(|&s| s != t).collect();
        let mut fixed = vec![Choice::new(Menu::EMPTY, 0); n];
        let mut odometer = vec![0usize; others.len()];
        loop {
            for (slot, &s) in others.iter().enumerate() {
                fixed[s] = choices[s][odometer[slot]];
            }
            let instance = marginal_instance(xs, &fixed, t);
            let mut values = Vec::new();
            for a in Menu::nonempty(data.sizes()[t]) {
                let mut total = Rational::zero();
                for x in a.items() {
                    let mut steps = fixed.clone();
                    steps[t] = Choice::new(a, x);
                    total += prefix_product(data, &steps);
                }
                values.push((xs[t].show_menu(a), total));
            }
            let reference = values[0].clone();
            let mut consistent = true;
            for (menu, value) in &values[1..] {
                let ok = *value == reference.1;
                consistent &= ok;
                verdict.observe(
                    ok,
                    || format!("{instance}: P(.;{menu}) vs P(.;{})", reference.0),
                    value,
                    &reference.1,
                );
            }
            entries.push(MarginalEntry {
                period: t + 1,
                instance,
                values,
                consistent,
            });
            if !advance(&mut odometer, |slot| choices[others[slot]].len()) {
                break;
            }
        }
    }
    Ok((verdict.finish(), MarginalTable { entries }))
}

fn marginal_instance(xs: &[Alphabet], fixed: &[Choice], vary: usize) -> String {
    let parts: Vec<String> = fixed
        .iter()
        .enumerate()
        .map(|(s, c)| {
            if s == vary {
                "*".to_string()
            } else {
                format!("{},{}", xs[s].label(c.item), xs[s].show_menu(c.menu))
            }
        })
        .collect();
    format!("({})", parts.join("; "))
}

fn advance(odometer: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for slot in (0..odometer.len()).rev() {
        odometer[slot] += 1;
        if odometer[slot] < radix(slot) {
            return true;
        }
        odometer[slot] = 0;
    }
    false
}

/// `j` along a full history; zero once a prefix vanishes.
fn prefix_product(data: &ChoiceDataset, steps: &[Choice]) -> Rational {
    let shape = data.shape();
    let mut code = 0;
    let mut product: Option<Rational> = None;
    for (t, &c) in steps.iter().enumerate() {
        let p = data.table_at(t, code).get(c.menu, c.item);
        if p.is_zero() {
            return Rational::zero();
        }
        product = Some(match product {
            None => p.clone(),
            Some(acc) => acc * p,
        });
        code = shape.extend_code(code, t, c);
    }
    product.unwrap_or_else(Rational::zero)
}

/// Joint (n-period) sums nonnegative, or positive when `strict`.
pub fn check_stochastic_bm(data: &ChoiceDataset, strict: bool) -> Result<AxiomVerdict> {
    if data.periods() < 2 {
        return Err(Error::PreconditionUnmet(
            "stochastic Block-Marschak sums need at least two periods".into(),
        ));
    }
    Ok(stochastic_bm_with(data, &BmTable::build(data), strict))
}

pub(crate) fn stochastic_bm_with(data: &ChoiceDataset, table: &BmTable, strict: bool) -> AxiomVerdict {
    let scope = format!("{} periods", data.periods());
    let mut verdict = AxiomVerdict::new(Axiom::StochasticBlockMarschak, strict, scope);
    let zero = Rational::zero();
    for (idx, m) in table.iter() {
        let ok = if strict { *m > zero } else { *m >= zero };
        verdict.observe(ok, || idx.display(data.alphabets()), m, &zero);
    }
    verdict.finish()
}

/// The cross-multiplied two-period regularity inequality over all
/// `x_t ∈ A_t ⊆ B_t`.
pub fn check_stochastic_regularity(data: &ChoiceDataset) -> Result<AxiomVerdict> {
    if data.periods() != 2 {
        return Err(Error::PreconditionUnmet(
            "stochastic regularity concerns two-period data".into(),
        ));
    }
    let (k1, k2) = (data.sizes()[0], data.sizes()[1]);
    let xs = data.alphabets();
    let shape = data.shape();
    let rho1 = data.rho1();
    let mut verdict = AxiomVerdict::new(Axiom::StochasticRegularity, false, "2 periods");
    for a1 in Menu::nonempty(k1) {
        for b1 in a1.supersets(k1) {
            for x1 in a1.items() {
                let after_a = data.table_at(1, shape.history_code(&[Choice::new(a1, x1)]));
                let after_b = data.table_at(1, shape.history_code(&[Choice::new(b1, x1)]));
                let (pa, pb) = (rho1.get(a1, x1), rho1.get(b1, x1));
                for a2 in Menu::nonempty(k2) {
                    for b2 in a2.supersets(k2) {
                        for x2 in a2.items() {
                            let gap_a = after_a.get(a2, x2) - after_a.get(b2, x2);
                            let gap_b = after_b.get(a2, x2) - after_b.get(b2, x2);
                            if (!pa.is_zero() && gap_a < Rational::zero())
                                || (!pb.is_zero() && gap_b < Rational::zero())
                            {
                                verdict.notes.push(format!(
                                    "negative period-2 difference at ({},{},{}; {},{},{})",
                                    xs[0].label(x1),
                                    xs[0].show_menu(a1),
                                    xs[0].show_menu(b1),
                                    xs[1].label(x2),
                                    xs[1].show_menu(a2),
                                    xs[1].show_menu(b2)
                                ));
                            }
                            let lhs = pa * gap_a;
                            let rhs = pb * gap_b;
                            verdict.observe(
                                lhs >= rhs,
                                || {
                                    format!(
                                        "(x1={}, A1={}, B1={}; x2={}, A2={}, B2={})",
                                        xs[0].label(x1),
                                        xs[0].show_menu(a1),
                                        xs[0].show_menu(b1),
                                        xs[1].label(x2),
                                        xs[1].show_menu(a2),
                                        xs[1].show_menu(b2)
                                    )
                                },
                                &lhs,
                                &rhs,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(verdict.finish())
}

/// Every applicable axiom in a fixed order.
///
/// One period: regularity and Block-Marschak sums. Two or more periods: the
/// static checks on every observed choice function, then the joint sums and
/// marginal consistency, and for two periods stochastic regularity.
pub fn check_all(data: &ChoiceDataset, strict: bool) -> Vec<AxiomVerdict> {
    let xs = data.alphabets();
    if data.periods() == 1 {
        return vec![
            check_regularity(data.rho1(), &xs[0]),
            check_bm_nonneg(data.rho1(), &xs[0], strict),
        ];
    }
    let scope = "every observed choice function";
    let mut regularity = AxiomVerdict::new(Axiom::Regularity, false, scope);
    let mut bm = AxiomVerdict::new(Axiom::BlockMarschak, strict, scope);
    for (t, x) in xs.iter().enumerate() {
        for history in data.observable_histories(t) {
            let table = data.table(t, &history).expect("observable history has a table");
            let label = if t == 0 {
                "period 1".to_string()
            } else {
                format!("period {} after {}", t + 1, data.history_key(&history))
            };
            regularity.absorb(check_regularity(table, x), &label);
            bm.absorb(check_bm_nonneg(table, x, strict), &label);
        }
    }
    let mut out = vec![regularity.finish(), bm.finish()];
    out.push(stochastic_bm_with(data, &BmTable::build(data), strict));
    out.push(check_marginal_consistency(data).expect("at least two periods").0);
    if data.periods() == 2 {
        out.push(check_stochastic_regularity(data).expect("two periods"));
    }
    out
}

pub fn all_pass(verdicts: &[AxiomVerdict]) -> bool {
    verdicts.iter().all(|v| v.pass)
}
