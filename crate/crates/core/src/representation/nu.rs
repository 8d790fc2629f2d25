//! The two-period construction: a partial measure on pairs of cylinders,
//! built level by level, whose values on full-length pairs are the atoms.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::alphabet::Alphabet;
use crate::axioms::{check_marginal_consistency, check_stochastic_regularity, stochastic_bm_with, AxiomVerdict};
use crate::blockmarschak::BmTable;
use crate::dataset::{validate_dataset, ChoiceDataset, ChoiceTable, RawDataset};
use crate::error::{Error, Result};
use crate::menu::Menu;
use crate::order::{enumerate_sequences, permutations};
use crate::rational::Rational;

use super::events::{canonical_len, canonical_prefix, Cylinder};
use super::measure::Measure;
use super::verify::{verify_representation, VerifyMode, VerifyReport};

type Key = (Vec<usize>, Vec<usize>);

/// Values of the partial measure on cylinder pairs. Keys are canonical
/// (see [`Cylinder::canonical`]), so two sequences naming the same set of
/// orders share one value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuTable {
    sizes: [usize; 2],
    values: HashMap<Key, Rational>,
}

impl NuTable {
    pub fn sizes(&self) -> [usize; 2] {
        self.sizes
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ν(I_s1 × I_s2)` for nonempty distinct sequences of any length.
    pub fn get(&self, s1: &[usize], s2: &[usize]) -> Option<&Rational> {
        let key = (
            canonical_prefix(s1, self.sizes[0]).to_vec(),
            canonical_prefix(s2, self.sizes[1]).to_vec(),
        );
        self.values.get(&key)
    }

    pub fn value(&self, c1: &Cylinder, c2: &Cylinder) -> Option<&Rational> {
        self.get(&c1.items, &c2.items)
    }

    fn at(&self, s1: &[usize], s2: &[usize]) -> &Rational {
        self.get(s1, s2).expect("cylinder pair built at an earlier level")
    }

    /// Entries sorted by key.
    pub fn entries(&self) -> Vec<(&Vec<usize>, &Vec<usize>, &Rational)> {
        let mut out: Vec<_> = self.values.iter().map(|((a, b), v)| (a, b, v)).collect();
        out.sort();
        out
    }

    /// Atoms read off full-length pairs. Not checked to be a measure.
    pub fn measure(&self, alphabets: &[Alphabet]) -> Measure {
        let space = crate::order::ProfileSpace::new(self.sizes.to_vec());
        let atoms = (0..space.len())
            .map(|i| {
                let p = space.profile(i);
                self.at(p.period(0).items(), p.period(1).items()).clone()
            })
            .collect();
        Measure::candidate(alphabets.to_vec(), atoms).expect("one atom per profile")
    }
}

fn require_two_periods(data: &ChoiceDataset) -> Result<()> {
    if data.periods() != 2 {
        return Err(Error::SizeMismatch(format!(
            "the construction needs two periods, data has {}",
            data.periods()
        )));
    }
    Ok(())
}

/// The verdicts the construction depends on; `Err` carries the failing ones.
fn require_axioms(data: &ChoiceDataset, table: &BmTable) -> Result<()> {
    let bm = stochastic_bm_with(data, table, false);
    let (mc, _) = check_marginal_consistency(data)?;
    let failed: Vec<AxiomVerdict> = [bm, mc].into_iter().filter(|v| !v.pass).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::AxiomViolation(failed))
    }
}

/// Builds the partial measure after checking joint Block-Marschak
/// nonnegativity and marginal consistency.
pub fn build_nu(data: &ChoiceDataset) -> Result<NuTable> {
    require_two_periods(data)?;
    let table = BmTable::build(data);
    require_axioms(data, &table)?;
    build_nu_with(data, &table)
}

fn ratio(
    numerator_mass: &Rational,
    m: &Rational,
    denominator: &Rational,
    what: impl FnOnce() -> String,
) -> Result<Rational> {
    if denominator.is_zero() {
        if !m.is_zero() {
            return Err(Error::InternalInvariantBroken(format!(
                "zero denominator with nonzero sum {m} at {}",
                what()
            )));
        }
        return Ok(Rational::zero());
    }
    Ok(numerator_mass * m / denominator)
}

fn sum_over(nu: &NuTable, firsts: &[Vec<usize>], seconds: &[Vec<usize>]) -> Rational {
    let mut total = Rational::zero();
    for s1 in firsts {
        for s2 in seconds {
            total += nu.at(s1, s2);
        }
    }
    total
}

pub(crate) fn build_nu_with(data: &ChoiceDataset, m: &BmTable) -> Result<NuTable> {
    let sizes = [data.sizes()[0], data.sizes()[1]];
    let depth = [canonical_len(sizes[0]), canonical_len(sizes[1])];
    let full = [Menu::full(sizes[0]), Menu::full(sizes[1])];
    let seqs: [Vec<Vec<Vec<usize>>>; 2] = [0, 1].map(|t| {
        (0..=depth[t])
            .map(|k| enumerate_sequences(full[t], k).expect("k within alphabet"))
            .collect()
    });
    let mut nu = NuTable {
        sizes,
        values: HashMap::new(),
    };

    for k in 1..=depth[0] {
        for l in 1..=depth[1] {
            let mut level = Vec::new();
            for s1 in &seqs[0][k] {
                for s2 in &seqs[1][l] {
                    let value = if k == 1 && l == 1 {
                        m.pair(s1[0], Menu::EMPTY, s2[0], Menu::EMPTY).clone()
                    } else if k == 1 {
                        let (head, last) = s2.split_at(l - 1);
                        let above = Menu::from_items(head.iter().copied());
                        let den = sum_over(&nu, std::slice::from_ref(s1), &permutations(above));
                        ratio(
                            nu.at(s1, head),
                            m.pair(s1[0], Menu::EMPTY, last[0], above),
                            &den,
                            || format!("({s1:?}, {s2:?})"),
                        )?
                    } else if l == 1 {
                        let (head, last) = s1.split_at(k - 1);
                        let above = Menu::from_items(head.iter().copied());
                        let den = sum_over(&nu, &permutations(above), std::slice::from_ref(s2));
                        ratio(
                            nu.at(head, s2),
                            m.pair(last[0], above, s2[0], Menu::EMPTY),
                            &den,
                            || format!("({s1:?}, {s2:?})"),
                        )?
                    } else {
                        let (h1, y1) = s1.split_at(k - 1);
                        let (h2, y2) = s2.split_at(l - 1);
                        let a1 = Menu::from_items(h1.iter().copied());
                        let a2 = Menu::from_items(h2.iter().copied());
                        let den = sum_over(&nu, &permutations(a1), &permutations(a2));
                        ratio(nu.at(h1, h2), m.pair(y1[0], a1, y2[0], a2), &den, || {
                            format!("({s1:?}, {s2:?})")
                        })?
                    };
                    if value.is_negative() {
                        return Err(Error::InternalInvariantBroken(format!(
                            "negative value {value} at ({s1:?}, {s2:?})"
                        )));
                    }
                    level.push(((s1.clone(), s2.clone()), value));
                }
            }
            nu.values.extend(level);
        }
    }
    Ok(nu)
}

/// Outcome of checking one of the construction's intermediate claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ClaimCheck {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The first additive property: summing over orderings of `A_t` recovers
/// the joint sum at `(x_t, A_t)`.
pub fn check_first_additive(nu: &NuTable, m: &BmTable) -> ClaimCheck {
    let [k1, k2] = nu.sizes;
    let mut check = ClaimCheck {
        claim: "first additivity",
        checked: 0,
        failures: Vec::new(),
    };
    for a1 in Menu::full(k1).subsets().filter(|&a| a != Menu::full(k1)) {
        for a2 in Menu::full(k2).subsets().filter(|&a| a != Menu::full(k2)) {
            let (p1, p2) = (permutations(a1), permutations(a2));
            for x1 in a1.complement(k1).items() {
                for x2 in a2.complement(k2).items() {
                    let mut lhs = Rational::zero();
                    for t1 in &p1 {
                        for t2 in &p2 {
                            let s1: Vec<usize> = t1.iter().copied().chain([x1]).collect();
                            let s2: Vec<usize> = t2.iter().copied().chain([x2]).collect();
                            lhs += nu.at(&s1, &s2);
                        }
                    }
                    let rhs = m.pair(x1, a1, x2, a2);
                    check.checked += 1;
                    if &lhs != rhs {
                        check.failures.push(format!("({x1},{a1}; {x2},{a2}): {lhs} != {rhs}"));
                    }
                }
            }
        }
    }
    check
}

/// The second additive property, where both complements are nonempty:
/// extending a pair by one item in each period partitions it.
pub fn check_second_additive(nu: &NuTable) -> ClaimCheck {
    let [k1, k2] = nu.sizes;
    let mut check = ClaimCheck {
        claim: "second additivity",
        checked: 0,
        failures: Vec::new(),
    };
    for k in 1..k1 {
        for l in 1..k2 {
            for t1 in enumerate_sequences(Menu::full(k1), k).expect("k < size") {
                for t2 in enumerate_sequences(Menu::full(k2), l).expect("l < size") {
                    let c1 = Menu::from_items(t1.iter().copied()).complement(k1);
                    let c2 = Menu::from_items(t2.iter().copied()).complement(k2);
                    let mut lhs = Rational::zero();
                    for x1 in c1.items() {
                        for x2 in c2.items() {
                            let s1: Vec<usize> = t1.iter().copied().chain([x1]).collect();
                            let s2: Vec<usize> = t2.iter().copied().chain([x2]).collect();
                            lhs += nu.at(&s1, &s2);
                        }
                    }
                    let rhs = nu.at(&t1, &t2);
                    check.checked += 1;
                    if &lhs != rhs {
                        check.failures.push(format!("({t1:?}, {t2:?}): {lhs} != {rhs}"));
                    }
                }
            }
        }
    }
    check
}

pub fn check_normalization(mu: &Measure) -> ClaimCheck {
    let total = mu.total();
    ClaimCheck {
        claim: "normalization",
        checked: 1,
        failures: if total.is_one() {
            Vec::new()
        } else {
            vec![format!("atoms sum to {total}")]
        },
    }
}

/// The measure built from the atoms agrees with the partial measure on
/// every cylinder pair.
pub fn check_extension(nu: &NuTable, mu: &Measure) -> ClaimCheck {
    let [k1, k2] = nu.sizes;
    let (d1, d2) = (canonical_len(k1), canonical_len(k2));
    let mut masses: HashMap<Key, Rational> = HashMap::new();
    for (profile, atom) in mu.iter() {
        let (o1, o2) = (profile.period(0).items(), profile.period(1).items());
        for k in 1..=d1 {
            for l in 1..=d2 {
                *masses
                    .entry((o1[..k].to_vec(), o2[..l].to_vec()))
                    .or_insert_with(Rational::zero) += atom;
            }
        }
    }
    let mut check = ClaimCheck {
        claim: "extension",
        checked: 0,
        failures: Vec::new(),
    };
    for (s1, s2, value) in nu.entries() {
        check.checked += 1;
        let mass = masses
            .get(&(s1.clone(), s2.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero);
        if &mass != value {
            check
                .failures
                .push(format!("({s1:?}, {s2:?}): measure {mass} != {value}"));
        }
    }
    check
}

/// Everything the construction produced, including any failed checks.
#[derive(Clone, Debug)]
pub struct Construction {
    pub nu: NuTable,
    pub measure: Measure,
    pub claims: Vec<ClaimCheck>,
    pub verification: VerifyReport,
}

impl Construction {
    pub fn sound(&self) -> bool {
        self.claims.iter().all(ClaimCheck::pass) && self.verification.pass
    }
}

/// Runs the construction and all of its checks without failing on them.
pub fn construct_su_detailed(data: &ChoiceDataset) -> Result<Construction> {
    require_two_periods(data)?;
    let table = BmTable::build(data);
    require_axioms(data, &table)?;
    let nu = build_nu_with(data, &table)?;
    let measure = nu.measure(data.alphabets());
    let claims = vec![
        check_first_additive(&nu, &table),
        check_second_additive(&nu),
        check_normalization(&measure),
        check_extension(&nu, &measure),
    ];
    let verification = verify_representation(&measure, data, VerifyMode::Both)?;
    Ok(Construction {
        nu,
        measure,
        claims,
        verification,
    })
}

/// A verified stochastic utility representation of two-period data.
pub fn construct_su(data: &ChoiceDataset) -> Result<Measure> {
    let c = construct_su_detailed(data)?;
    if !c.sound() {
        let mut problems: Vec<String> = c
            .claims
            .iter()
            .filter(|k| !k.pass())
            .map(|k| format!("{} fails at {} of {}", k.claim, k.failures.len(), k.checked))
            .collect();
        if !c.verification.pass {
            problems.push(format!(
                "verification fails at {} of {} constraints (first: {})",
                c.verification.failures.len(),
                c.verification.checked,
                c.verification.failures[0].constraint
            ));
        }
        return Err(Error::InternalInvariantBroken(problems.join("; ")));
    }
    Measure::new(c.measure.alphabets().to_vec(), c.measure.atoms().to_vec())
        .map_err(|e| Error::InternalInvariantBroken(e.to_string()))
}

/// Closed form for two periods of three items each: the atom of
/// `(x1>y1>z1, x2>y2>z2)` is the joint sum at `(y1,{x1}; y2,{x2})`. The
/// result is the unique representation.
pub fn construct_su_3x3(data: &ChoiceDataset) -> Result<Measure> {
    if data.sizes() != [3, 3] {
        return Err(Error::SizeMismatch(format!(
            "closed form needs two periods of three items, got {:?}",
            data.sizes()
        )));
    }
    let sr = check_stochastic_regularity(data)?;
    let (mc, _) = check_marginal_consistency(data)?;
    let failed: Vec<AxiomVerdict> = [sr, mc].into_iter().filter(|v| !v.pass).collect();
    if !failed.is_empty() {
        return Err(Error::AxiomViolation(failed));
    }
    let table = BmTable::build(data);
    let space = crate::order::ProfileSpace::new(vec![3, 3]);
    let atoms = (0..space.len())
        .map(|i| {
            let p = space.profile(i);
            let (o1, o2) = (p.period(0).items(), p.period(1).items());
            table
                .pair(o1[1], Menu::singleton(o1[0]), o2[1], Menu::singleton(o2[0]))
                .clone()
        })
        .collect();
    Measure::new(data.alphabets().to_vec(), atoms).map_err(|e| Error::InternalInvariantBroken(e.to_string()))
}

/// Label of the single item in the auxiliary second period used by
/// [`construct_ru`].
const PLACEHOLDER: &str = "_";

/// A random utility representation of one choice function, obtained by
/// running the two-period construction against a one-item second period.
pub fn construct_ru(rho: &ChoiceTable, alphabet: &Alphabet) -> Result<Measure> {
    let verdict = crate::axioms::check_bm_nonneg(rho, alphabet, false);
    if !verdict.pass {
        return Err(Error::AxiomViolation(vec![verdict]));
    }
    let labels: Vec<&str> = alphabet.labels().iter().map(String::as_str).collect();
    let mut raw = RawDataset::new(&[&labels[..], &[PLACEHOLDER]]);
    for menu in Menu::nonempty(alphabet.len()) {
        let dist: Vec<(&str, Rational)> = rho
            .distribution(menu)
            .map(|(i, p)| (alphabet.label(i), p.clone()))
            .collect();
        raw.set(0, "", &alphabet.menu_key(menu), &dist);
        for (i, p) in rho.distribution(menu) {
            if !p.is_zero() {
                let history = format!("{}>{}", alphabet.menu_key(menu), alphabet.label(i));
                raw.set(1, &history, PLACEHOLDER, &[(PLACEHOLDER, Rational::one())]);
            }
        }
    }
    let (data, _) = validate_dataset(&raw)?;
    let joint = construct_su(&data)?;
    Ok(joint.marginal(1))
}
