use std::fs;
use std::path::Path;

use dynchoice::axioms::{all_pass, check_all, AxiomVerdict};
use dynchoice::blockmarschak::{check_identities, Identity};
use dynchoice::format::{parse_dataset, parse_measure, write_dataset, write_measure};
use dynchoice::generator::{induce_dataset, sample_measure, GenConfig};
use dynchoice::nperiod::{conjecture_sweep, finding_path, test_conjecture_instance, ConjectureVerdict};
use dynchoice::rational::format_rational;
use dynchoice::representation::{
    check_full_support, construct_ru, construct_su, construct_su_detailed, verify_representation, Measure, VerifyMode,
    VerifyReport,
};
use dynchoice::{validate_dataset, ChoiceDataset, Error, Rational};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Mode, Shape, Which};
use crate::report::{FileDigest, Outcome};

/// Lines of detail shown per verdict in text reports.
const SHOWN: usize = 5;

/// A problem with the input or the invocation, as opposed to a verdict.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn read(path: &Path, outcome: &mut Outcome) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    outcome.inputs.push(FileDigest::of(&path.display().to_string(), &bytes));
    String::from_utf8(bytes).map_err(|_| InputError(format!("{} is not UTF-8", path.display())))
}

fn write(path: &Path, text: &str, outcome: &mut Outcome) -> Result<()> {
    fs::write(path, text).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
    outcome
        .outputs
        .push(FileDigest::of(&path.display().to_string(), text.as_bytes()));
    Ok(())
}

fn load_data(path: &Path, outcome: &mut Outcome) -> Result<ChoiceDataset> {
    let text = read(path, outcome)?;
    Ok(validate_dataset(&parse_dataset(&text)?)?.0)
}

fn load_measure(path: &Path, outcome: &mut Outcome) -> Result<Measure> {
    let text = read(path, outcome)?;
    Ok(parse_measure(&text)?)
}

fn more(lines: &mut Vec<String>, total: usize, indent: &str) {
    if total > SHOWN {
        lines.push(format!("{indent}... and {} more", total - SHOWN));
    }
}

fn verdict_lines(verdicts: &[AxiomVerdict]) -> Vec<String> {
    let mut lines = Vec::new();
    for v in verdicts {
        lines.push(format!("  {v}"));
        for w in v.witnesses.iter().take(SHOWN) {
            lines.push(format!("    {}: {} vs {}", w.instance, w.lhs, w.rhs));
        }
        more(&mut lines, v.witnesses.len(), "    ");
        for note in &v.notes {
            lines.push(format!("    note: {note}"));
        }
    }
    lines
}

fn verify_lines(report: &VerifyReport) -> Vec<String> {
    let mut lines = vec![format!(
        "  {} constraints checked, {} failed",
        report.checked,
        report.failures.len()
    )];
    for f in report.failures.iter().take(SHOWN) {
        lines.push(format!(
            "    {}: expected {}, got {}",
            f.constraint, f.expected, f.actual
        ));
    }
    more(&mut lines, report.failures.len(), "    ");
    lines
}

fn mode(m: Mode) -> VerifyMode {
    match m {
        Mode::Edge => VerifyMode::Edge,
        Mode::Direct => VerifyMode::Direct,
        Mode::Both => VerifyMode::Both,
    }
}

fn sizes_of(shape: &Shape) -> Result<Vec<usize>> {
    if shape.periods != shape.sizes.len() {
        return Err(InputError(format!(
            "--periods {} but {} sizes given",
            shape.periods,
            shape.sizes.len()
        )));
    }
    Ok(shape.sizes.clone())
}

fn measure_summary(mu: &Measure) -> Value {
    json!({
        "profiles": mu.atoms().len(),
        "nonzero_atoms": mu.atoms().iter().filter(|a| !a.is_zero()).count(),
        "full_support": check_full_support(mu),
    })
}

pub fn validate(data: &Path) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let text = read(data, &mut outcome)?;
    let (dataset, report) = validate_dataset(&parse_dataset(&text)?)?;
    outcome.pass = true;
    outcome.lines.push(format!(
        "  periods: {}, sizes: {:?}",
        dataset.periods(),
        dataset.sizes()
    ));
    outcome
        .lines
        .push(format!("  observable histories by length: {:?}", report.observable));
    outcome
        .lines
        .push(format!("  filled histories by length: {:?}", report.filled));
    for h in &report.overwritten {
        outcome
            .lines
            .push(format!("  replaced table of unobservable history {h}"));
    }
    outcome.result = json!({ "sizes": dataset.sizes(), "validation": report });
    Ok(outcome)
}

pub fn check(data: &Path, strict: bool) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let dataset = load_data(data, &mut outcome)?;
    let verdicts = check_all(&dataset, strict);
    outcome.pass = all_pass(&verdicts);
    outcome.lines = verdict_lines(&verdicts);
    outcome.result = json!({ "strict": strict, "verdicts": verdicts });
    Ok(outcome)
}

fn failed_construction(outcome: &mut Outcome, method: &str, problems: Vec<String>) {
    outcome.pass = false;
    outcome.lines.push(format!("  {method} construction failed"));
    for p in problems.iter().take(SHOWN) {
        outcome.lines.push(format!("    {p}"));
    }
    more(&mut outcome.lines, problems.len(), "    ");
    outcome.result = json!({ "method": method, "constructed": false, "problems": problems });
}

fn axioms_failed(outcome: &mut Outcome, method: &str, verdicts: Vec<AxiomVerdict>) {
    outcome.pass = false;
    outcome
        .lines
        .push("  the axioms fail, so no representation exists".into());
    outcome.lines.extend(verdict_lines(&verdicts));
    outcome.result = json!({ "method": method, "constructed": false, "verdicts": verdicts });
}

pub fn construct(data: &Path, output: &Path) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let dataset = load_data(data, &mut outcome)?;
    let (method, built) = match dataset.periods() {
        1 => ("single-period", construct_ru(dataset.rho1(), dataset.alphabet(0))),
        2 => {
            let method = "two-period";
            match construct_su_detailed(&dataset) {
                Ok(c) if c.sound() => (method, Ok(c.measure)),
                Ok(c) => {
                    let mut problems: Vec<String> = c
                        .claims
                        .iter()
                        .flat_map(|claim| claim.failures.iter().map(move |f| format!("{}: {f}", claim.claim)))
                        .collect();
                    problems.extend(
                        c.verification
                            .failures
                            .iter()
                            .map(|f| format!("{}: expected {}, got {}", f.constraint, f.expected, f.actual)),
                    );
                    failed_construction(&mut outcome, method, problems);
                    return Ok(outcome);
                }
                Err(e) => (method, Err(e)),
            }
        }
        _ => {
            let method = "pinned";
            match test_conjecture_instance(&dataset)? {
                ConjectureVerdict::Represents(mu) => (method, Ok(mu)),
                ConjectureVerdict::AxiomsFail(verdicts) => (method, Err(Error::AxiomViolation(verdicts))),
                ConjectureVerdict::Counterexample(c) => {
                    failed_construction(&mut outcome, method, c.failures);
                    return Ok(outcome);
                }
            }
        }
    };
    match built {
        Ok(mu) => {
            write(output, &write_measure(&mu), &mut outcome)?;
            outcome.pass = true;
            let summary = measure_summary(&mu);
            outcome.lines.push(format!(
                "  {method} construction: {} of {} atoms nonzero, verified",
                summary["nonzero_atoms"], summary["profiles"]
            ));
            outcome.result = json!({ "method": method, "constructed": true, "measure": summary });
        }
        Err(Error::AxiomViolation(verdicts)) => {
            axioms_failed(&mut outcome, method, verdicts.into_iter().filter(|v| !v.pass).collect())
        }
        Err(Error::InternalInvariantBroken(why)) => failed_construction(&mut outcome, method, vec![why]),
        Err(e) => return Err(e.into()),
    }
    Ok(outcome)
}

pub fn verify(measure: &Path, data: &Path, m: Mode) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let mu = load_measure(measure, &mut outcome)?;
    let dataset = load_data(data, &mut outcome)?;
    let report = verify_representation(&mu, &dataset, mode(m))?;
    outcome.pass = report.pass;
    outcome.lines = verify_lines(&report);
    outcome.result = serde_json::to_value(&report).expect("reports serialize");
    Ok(outcome)
}

pub fn generate(shape: &Shape, seed: u64, sparsity: &Rational, output: &Path, emit: Option<&Path>) -> Result<Outcome> {
    let sizes = sizes_of(shape)?;
    let cfg = GenConfig::new(sizes.clone(), seed).with_sparsity(sparsity.clone());
    let mu = sample_measure(&cfg)?;
    let mut outcome = Outcome {
        pass: true,
        ..Outcome::default()
    };
    write(output, &write_measure(&mu), &mut outcome)?;
    if let Some(path) = emit {
        write(path, &write_dataset(&induce_dataset(&mu)?), &mut outcome)?;
    }
    let summary = measure_summary(&mu);
    outcome.lines.push(format!(
        "  sizes {sizes:?}, seed {seed}: {} of {} atoms nonzero",
        summary["nonzero_atoms"], summary["profiles"]
    ));
    outcome.result = json!({
        "sizes": sizes,
        "seed": seed,
        "sparsity": format_rational(sparsity),
        "measure": summary,
    });
    Ok(outcome)
}

/// Rebuilds a measure from the data it induced and lists what went wrong.
fn round_trip(cfg: &GenConfig) -> std::result::Result<Vec<String>, Error> {
    let mu = sample_measure(cfg)?;
    let data = induce_dataset(&mu)?;
    let built = match data.periods() {
        1 => construct_ru(data.rho1(), data.alphabet(0)),
        2 => construct_su(&data),
        _ => match test_conjecture_instance(&data)? {
            ConjectureVerdict::Represents(candidate) => Ok(candidate),
            other => return Ok(vec![format!("n-period test gave {}", other.kind())]),
        },
    };
    let built = match built {
        Ok(b) => b,
        Err(e @ (Error::InternalInvariantBroken(_) | Error::AxiomViolation(_))) => return Ok(vec![e.to_string()]),
        Err(e) => return Err(e),
    };
    let mut problems = Vec::new();
    let report = verify_representation(&built, &data, VerifyMode::Both)?;
    if !report.pass {
        problems.push(format!("verification failed on {} constraints", report.failures.len()));
    }
    if induce_dataset(&built)? != data {
        problems.push("rebuilt measure induces different data".into());
    }
    if cfg.sizes.iter().all(|&k| k <= 3) && built != mu {
        problems.push("rebuilt measure differs from the generating one".into());
    }
    Ok(problems)
}

pub fn roundtrip(shape: &Shape, trials: u64, seed: u64, sparsity: &Rational) -> Result<Outcome> {
    let sizes = sizes_of(shape)?;
    let cfg = GenConfig::new(sizes.clone(), seed).with_sparsity(sparsity.clone());
    cfg.validate()?;
    let results: Vec<std::result::Result<Vec<String>, Error>> =
        (0..trials).into_par_iter().map(|i| round_trip(&cfg.trial(i))).collect();
    let mut failures = Vec::new();
    for (i, r) in (0..trials).zip(results) {
        let problems = r?;
        if !problems.is_empty() {
            failures.push(json!({ "trial": i, "seed": seed ^ i, "problems": problems }));
        }
    }
    let mut outcome = Outcome {
        pass: failures.is_empty(),
        ..Outcome::default()
    };
    outcome.lines.push(format!(
        "  {} of {trials} trials reproduced their data{}",
        trials - failures.len() as u64,
        if sizes.iter().all(|&k| k <= 3) {
            " and recovered the generating measure"
        } else {
            ""
        }
    ));
    for f in failures.iter().take(SHOWN) {
        let first = f["problems"][0].as_str().unwrap_or_default();
        outcome
            .lines
            .push(format!("    trial {} (seed {}): {first}", f["trial"], f["seed"]));
    }
    more(&mut outcome.lines, failures.len(), "    ");
    outcome.result = json!({
        "sizes": sizes,
        "seed": seed,
        "sparsity": format_rational(sparsity),
        "trials": trials,
        "failed": failures.len(),
        "failures": failures,
    });
    Ok(outcome)
}

pub fn identities(data: &Path, which: Which) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let dataset = load_data(data, &mut outcome)?;
    let selected: Vec<Identity> = match which {
        Which::Prop1 => vec![Identity::Likelihood],
        Which::Prop2 => vec![Identity::SecondExchange],
        Which::Claim1 => vec![Identity::FirstExchange],
        Which::Corner => vec![Identity::DoubleExchange],
        Which::All => Identity::ALL.to_vec(),
    };
    outcome.pass = true;
    let mut results = Vec::new();
    for identity in selected {
        match check_identities(&dataset, identity) {
            Ok(report) => {
                outcome.pass &= report.pass();
                outcome.lines.push(format!(
                    "  {}: {} ({} instances, {} failures)",
                    identity.name(),
                    if report.pass() { "pass" } else { "FAIL" },
                    report.checked,
                    report.failures.len()
                ));
                for f in report.failures.iter().take(SHOWN) {
                    outcome
                        .lines
                        .push(format!("    {}: {} vs {}", f.instance, f.lhs, f.rhs));
                }
                more(&mut outcome.lines, report.failures.len(), "    ");
                results.push(serde_json::to_value(&report).expect("reports serialize"));
            }
            Err(Error::PreconditionUnmet(why)) => {
                outcome.pass = false;
                outcome.lines.push(format!("  {}: not checked, {why}", identity.name()));
                results.push(json!({ "identity": identity, "skipped": why }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    outcome.result = json!({ "identities": results });
    Ok(outcome)
}

pub struct SweepArgs<'a> {
    pub sizes: &'a [usize],
    pub trials: u64,
    pub seed: u64,
    pub adversarial: bool,
    pub epsilon: &'a Rational,
    pub sparsity: &'a Rational,
    pub dump_dir: &'a Path,
}

pub fn conjecture(args: SweepArgs<'_>) -> Result<Outcome> {
    if args.sizes.len() < 2 {
        return Err(InputError("the conjecture concerns two or more periods".into()));
    }
    let cfg = GenConfig::new(args.sizes.to_vec(), args.seed)
        .with_sparsity(args.sparsity.clone())
        .with_epsilon(args.epsilon.clone());
    let summary = conjecture_sweep(&cfg, args.trials, args.adversarial)?;
    let mut outcome = Outcome {
        pass: summary.counterexamples == 0,
        ..Outcome::default()
    };
    if !summary.findings.is_empty() {
        fs::create_dir_all(args.dump_dir)
            .map_err(|e| InputError(format!("cannot create {}: {e}", args.dump_dir.display())))?;
    }
    let sizes: Vec<String> = args.sizes.iter().map(usize::to_string).collect();
    let mut rerun = format!("--sizes {} --trials 1", sizes.join(","));
    if !args.sparsity.is_zero() {
        rerun.push_str(&format!(" --sparsity {}", format_rational(args.sparsity)));
    }
    if args.adversarial {
        rerun.push_str(&format!(" --adversarial --epsilon {}", format_rational(args.epsilon)));
    }
    let mut findings = Vec::new();
    for f in &summary.findings {
        let path = finding_path(args.dump_dir, f);
        write(&path, &write_dataset(&f.counterexample.data), &mut outcome)?;
        findings.push(json!({
            "trial": f.trial,
            "seed": f.seed,
            "file": path.display().to_string(),
            "rerun": format!("conjecture {rerun} --seed {}", f.seed),
            "failures": f.counterexample.failures,
        }));
    }
    outcome.lines.push(format!(
        "  {} trials: {} represented, {} failed the axioms, {} counterexamples",
        summary.trials, summary.represents, summary.axioms_fail, summary.counterexamples
    ));
    if args.adversarial {
        outcome.lines.push(format!(
            "  {} trials left unperturbed (no entry could absorb the move)",
            summary.unperturbed
        ));
    }
    for f in &summary.findings {
        outcome.lines.push(format!(
            "    counterexample at trial {}; rerun with: conjecture {rerun} --seed {}",
            f.trial, f.seed
        ));
    }
    outcome.result = json!({
        "sizes": args.sizes,
        "seed": args.seed,
        "trials": summary.trials,
        "adversarial": args.adversarial,
        "epsilon": format_rational(args.epsilon),
        "sparsity": format_rational(args.sparsity),
        "represents": summary.represents,
        "axioms_fail": summary.axioms_fail,
        "counterexamples": summary.counterexamples,
        "unperturbed": summary.unperturbed,
        "findings": findings,
    });
    Ok(outcome)
}
