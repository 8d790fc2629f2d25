//! Tests of the n-period conjecture: data satisfying joint Block-Marschak
//! nonnegativity and marginal consistency should have a stochastic utility
//! representation. Nothing here assumes it; every instance gets a verdict.
//!
//! For three or more periods the candidate measure is read off pinned edge
//! sets: with at most three items per period, ranking the top item above the
//! middle item (or, with two items, just naming the top one) leaves exactly
//! one order, so each profile is the only member of one upper edge set and
//! its atom must equal that set's Block-Marschak sum.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::axioms::{check_marginal_consistency, stochastic_bm_with, AxiomVerdict};
use crate::blockmarschak::{BmIndex, BmTable};
use crate::dataset::{ChoiceDataset, MAX_MULTI_PERIOD_ITEMS};
use crate::error::{Error, Result};
use crate::generator::{induce_dataset, perturb_dataset, sample_measure, GenConfig};
use crate::menu::Menu;
use crate::order::{PrefProfile, ProfileSpace};
use crate::representation::{construct_su_detailed, verify_representation, Measure, VerifyMode};

/// The edge set `(x, A)` of one period that contains `order` and nothing
/// else.
fn pinning_step(order: &[usize]) -> (usize, Menu) {
    match order {
        [top, middle, _] => (*middle, Menu::singleton(*top)),
        [top, ..] => (*top, Menu::EMPTY),
        [] => unreachable!("orders are nonempty"),
    }
}

/// The index whose upper edge set is exactly `{profile}`.
pub fn pinning_index(profile: &PrefProfile) -> Result<BmIndex> {
    let sizes: Vec<usize> = profile.0.iter().map(|p| p.len()).collect();
    if let Some(&k) = sizes.iter().find(|&&k| k > MAX_MULTI_PERIOD_ITEMS) {
        return Err(Error::SizeLimit(format!(
            "no single-order edge set exists with {k} items in a period"
        )));
    }
    BmIndex::new(profile.0.iter().map(|p| pinning_step(p.items())).collect(), &sizes)
}

fn require_small(data: &ChoiceDataset) -> Result<()> {
    if let Some(&k) = data.sizes().iter().find(|&&k| k > MAX_MULTI_PERIOD_ITEMS) {
        return Err(Error::SizeLimit(format!(
            "{k} items in a period; the pinned candidate needs at most {MAX_MULTI_PERIOD_ITEMS}"
        )));
    }
    Ok(())
}

fn axiom_verdicts(data: &ChoiceDataset, table: &BmTable) -> Result<Vec<AxiomVerdict>> {
    let bm = stochastic_bm_with(data, table, false);
    let (mc, _) = check_marginal_consistency(data)?;
    Ok(vec![bm, mc])
}

fn pinned_atoms(data: &ChoiceDataset, table: &BmTable) -> Result<Measure> {
    let space = ProfileSpace::new(data.sizes().to_vec());
    let mut atoms = Vec::with_capacity(space.len());
    for i in 0..space.len() {
        let profile = space.profile(i);
        let atom = table.get(&pinning_index(&profile)?).clone();
        if atom.is_negative() {
            return Err(Error::NegativeAtom(format!(
                "{} gets {atom}",
                profile.key(data.alphabets())
            )));
        }
        atoms.push(atom);
    }
    Measure::candidate(data.alphabets().to_vec(), atoms)
}

/// The candidate measure: each atom is the Block-Marschak sum of the edge
/// set pinning that profile. Not checked to sum to 1 or to represent the
/// data.
pub fn candidate_measure(data: &ChoiceDataset) -> Result<Measure> {
    require_small(data)?;
    let table = BmTable::build(data);
    if data.periods() >= 2 {
        let failed: Vec<AxiomVerdict> = axiom_verdicts(data, &table)?.into_iter().filter(|v| !v.pass).collect();
        if !failed.is_empty() {
            return Err(Error::AxiomViolation(failed));
        }
    }
    pinned_atoms(data, &table)
}

/// Everything needed to re-examine an instance where the axioms hold but
/// the candidate does not represent the data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub data: ChoiceDataset,
    pub candidate: Option<Measure>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureVerdict {
    AxiomsFail(Vec<AxiomVerdict>),
    Represents(Measure),
    Counterexample(Box<Counterexample>),
}

impl ConjectureVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ConjectureVerdict::AxiomsFail(_) => "axioms-fail",
            ConjectureVerdict::Represents(_) => "represents",
            ConjectureVerdict::Counterexample(_) => "counterexample",
        }
    }
}

fn counterexample(data: &ChoiceDataset, candidate: Option<Measure>, failures: Vec<String>) -> ConjectureVerdict {
    ConjectureVerdict::Counterexample(Box::new(Counterexample {
        data: data.clone(),
        candidate,
        failures,
    }))
}

fn two_period_verdict(data: &ChoiceDataset) -> Result<ConjectureVerdict> {
    match construct_su_detailed(data) {
        Err(Error::AxiomViolation(failed)) => Ok(ConjectureVerdict::AxiomsFail(failed)),
        Err(Error::InternalInvariantBroken(why)) => Ok(counterexample(data, None, vec![why])),
        Err(e) => Err(e),
        Ok(c) if c.sound() => Ok(ConjectureVerdict::Represents(c.measure)),
        Ok(c) => {
            let mut failures: Vec<String> = c
                .claims
                .iter()
                .flat_map(|claim| claim.failures.iter().map(move |f| format!("{}: {f}", claim.claim)))
                .collect();
            failures.extend(
                c.verification
                    .failures
                    .iter()
                    .map(|f| format!("{}: expected {}, got {}", f.constraint, f.expected, f.actual)),
            );
            Ok(counterexample(data, Some(c.measure), failures))
        }
    }
}

/// Runs the axioms, builds the candidate and checks it against every edge
/// constraint and every observed conditional. Two-period data goes through
/// the two-period construction instead.
pub fn test_conjecture_instance(data: &ChoiceDataset) -> Result<ConjectureVerdict> {
    if data.periods() == 2 {
        return two_period_verdict(data);
    }
    require_small(data)?;
    let table = BmTable::build(data);
    if data.periods() >= 2 {
        let verdicts = axiom_verdicts(data, &table)?;
        if verdicts.iter().any(|v| !v.pass) {
            return Ok(ConjectureVerdict::AxiomsFail(verdicts));
        }
    }
    let candidate = match pinned_atoms(data, &table) {
        Ok(mu) => mu,
        Err(Error::NegativeAtom(why)) => return Ok(counterexample(data, None, vec![why])),
        Err(e) => return Err(e),
    };
    let mut failures = Vec::new();
    if !candidate.total().is_one() {
        failures.push(format!("candidate atoms sum to {}", candidate.total()));
    }
    let report = verify_representation(&candidate, data, VerifyMode::Both)?;
    failures.extend(
        report
            .failures
            .iter()
            .map(|f| format!("{}: expected {}, got {}", f.constraint, f.expected, f.actual)),
    );
    if failures.is_empty() {
        Ok(ConjectureVerdict::Represents(candidate))
    } else {
        Ok(counterexample(data, Some(candidate), failures))
    }
}

/// A counterexample found by a sweep, with the seed that regenerates it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepFinding {
    pub trial: u64,
    pub seed: u64,
    pub counterexample: Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub trials: u64,
    pub represents: u64,
    pub axioms_fail: u64,
    pub counterexamples: u64,
    /// In trial order.
    pub findings: Vec<SweepFinding>,
    /// Trials where the perturbation could not be applied and the induced
    /// data was tested unchanged (adversarial sweeps only).
    pub unperturbed: u64,
    pub wall_time: Duration,
}

impl SweepSummary {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &SweepSummary) -> bool {
        SweepSummary {
            wall_time: Duration::ZERO,
            ..self.clone()
        } == SweepSummary {
            wall_time: Duration::ZERO,
            ..other.clone()
        }
    }
}

/// The verdict, and whether a requested perturbation had to be skipped.
fn run_trial(cfg: &GenConfig, adversarial: bool) -> Result<(ConjectureVerdict, bool)> {
    let mu = sample_measure(cfg)?;
    let data = induce_dataset(&mu)?;
    let (data, skipped) = if adversarial {
        match perturb_dataset(&data, cfg) {
            Ok(moved) => (moved, false),
            Err(Error::PerturbationInfeasible(_)) => (data, true),
            Err(e) => return Err(e),
        }
    } else {
        (data, false)
    };
    Ok((test_conjecture_instance(&data)?, skipped))
}

/// Tests `trials` generated instances; trial `i` uses seed `cfg.seed ^ i`.
/// With `adversarial`, each induced dataset is first perturbed by
/// `cfg.epsilon`. Runs on the current rayon pool; results do not depend on
/// its size.
pub fn conjecture_sweep(cfg: &GenConfig, trials: u64, adversarial: bool) -> Result<SweepSummary> {
    cfg.validate()?;
    if cfg.periods() >= 3 && cfg.sizes.iter().any(|&k| k > MAX_MULTI_PERIOD_ITEMS) {
        return Err(Error::SizeLimit(format!(
            "sizes {:?} exceed the pinned candidate",
            cfg.sizes
        )));
    }
    let start = Instant::now();
    let outcomes: Vec<Result<(ConjectureVerdict, bool)>> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(&cfg.trial(i), adversarial))
        .collect();
    let mut summary = SweepSummary {
        trials,
        represents: 0,
        axioms_fail: 0,
        counterexamples: 0,
        findings: Vec::new(),
        unperturbed: 0,
        wall_time: Duration::ZERO,
    };
    for (i, outcome) in (0..trials).zip(outcomes) {
        let (verdict, skipped) = outcome?;
        if skipped {
            summary.unperturbed += 1;
        }
        match verdict {
            ConjectureVerdict::AxiomsFail(_) => summary.axioms_fail += 1,
            ConjectureVerdict::Represents(_) => summary.represents += 1,
            ConjectureVerdict::Counterexample(c) => {
                summary.counterexamples += 1;
                summary.findings.push(SweepFinding {
                    trial: i,
                    seed: cfg.seed ^ i,
                    counterexample: *c,
                });
            }
        }
    }
    summary.wall_time = start.elapsed();
    Ok(summary)
}

/// File name under which a sweep finding is dumped.
pub fn finding_path(dir: &Path, finding: &SweepFinding) -> PathBuf {
    dir.join(format!(
        "counterexample-trial{}-seed{}.json",
        finding.trial, finding.seed
    ))
}
