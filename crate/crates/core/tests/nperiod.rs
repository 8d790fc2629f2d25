mod oracle;

use dynchoice::axioms::{all_pass, check_all};
use dynchoice::dataset::Choice;
use dynchoice::generator::{default_alphabets, induce_dataset, perturb_entry, sample_measure, EntryRef, GenConfig};
use dynchoice::menu::Menu;
use dynchoice::nperiod::{candidate_measure, conjecture_sweep, test_conjecture_instance, ConjectureVerdict};
use dynchoice::order::PrefProfile;
use dynchoice::rational::rat;
use dynchoice::representation::{construct_su, verify_representation, Measure, VerifyMode};
use dynchoice::{fixtures, Error};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn candidate_examples() {
    let cube = candidate_measure(&fixtures::independent_two_cubed()).unwrap();
    assert!(cube.atoms().iter().all(|a| a == &rat(1, 8)));

    let xs = default_alphabets(&[2, 3, 2]);
    let p = PrefProfile::parse("b>a|e>c>d|f>g", &xs).unwrap();
    let point = Measure::point_mass(xs, &p).unwrap();
    assert_eq!(candidate_measure(&induce_dataset(&point).unwrap()).unwrap(), point);

    let ind = fixtures::independent_three();
    assert_eq!(candidate_measure(&ind).unwrap(), construct_su(&ind).unwrap());
    let two = fixtures::two_by_two();
    assert_eq!(candidate_measure(&two).unwrap(), fixtures::two_by_two_measure());

    let big = induce_dataset(&sample_measure(&GenConfig::new(vec![4, 2], 1)).unwrap()).unwrap();
    assert!(matches!(candidate_measure(&big), Err(Error::SizeLimit(_))));
    assert!(matches!(
        candidate_measure(&fixtures::bad_marginals()),
        Err(Error::AxiomViolation(_))
    ));
}

/// Induced data never fails the axioms, and at these sizes the pinned atoms
/// recover the generating measure.
#[test]
fn induced_three_period_data_is_represented() {
    for sizes in [
        vec![2, 2, 2],
        vec![3, 2, 2],
        vec![2, 3, 2],
        vec![2, 2, 3],
        vec![1, 3, 2],
    ] {
        for seed in 0..6 {
            let sparsity = rat(seed as i64 % 3, 4);
            let mu = sample_measure(&GenConfig::new(sizes.clone(), seed).with_sparsity(sparsity)).unwrap();
            let data = induce_dataset(&mu).unwrap();
            assert!(all_pass(&check_all(&data, false)));
            match test_conjecture_instance(&data).unwrap() {
                ConjectureVerdict::Represents(candidate) => {
                    assert_eq!(candidate.total(), rat(1, 1));
                    assert_eq!(candidate, mu, "{sizes:?} seed {seed}");
                    assert!(
                        verify_representation(&candidate, &data, VerifyMode::Direct)
                            .unwrap()
                            .pass
                    );
                    oracle::reproduces(&candidate, &data).unwrap();
                }
                other => panic!("{sizes:?} seed {seed}: {}", other.kind()),
            }
        }
    }
}

#[test]
fn two_period_instances_follow_the_two_period_construction() {
    for sizes in [[2, 2], [3, 3], [2, 4]] {
        for seed in 0..3 {
            let data = induce_dataset(&sample_measure(&GenConfig::new(sizes.to_vec(), seed)).unwrap()).unwrap();
            match test_conjecture_instance(&data).unwrap() {
                ConjectureVerdict::Represents(mu) => assert_eq!(mu, construct_su(&data).unwrap()),
                other => panic!("{sizes:?} seed {seed}: {}", other.kind()),
            }
        }
    }
    assert!(matches!(
        test_conjecture_instance(&fixtures::bad_marginals()).unwrap(),
        ConjectureVerdict::AxiomsFail(_)
    ));
}

#[test]
fn broken_marginals_fail_the_axioms() {
    let data = induce_dataset(&sample_measure(&GenConfig::new(vec![2, 2, 2], 4)).unwrap()).unwrap();
    let full = Menu::full(2);
    let entry = EntryRef {
        period: 2,
        history: vec![Choice::new(full, 0), Choice::new(full, 0)],
        menu: full,
    };
    let moved = perturb_entry(&data, &entry, 0, 1, &rat(1, 1_000_000)).unwrap();
    match test_conjecture_instance(&moved).unwrap() {
        ConjectureVerdict::AxiomsFail(verdicts) => assert!(verdicts.iter().any(|v| !v.pass)),
        other => panic!("{}", other.kind()),
    }
}

#[test]
fn sweep_examples() {
    let cfg = GenConfig::new(vec![2, 2, 2], 1);
    let summary = conjecture_sweep(&cfg, 10, false).unwrap();
    assert_eq!(
        (summary.represents, summary.counterexamples, summary.axioms_fail),
        (10, 0, 0)
    );

    let empty = conjecture_sweep(&cfg, 0, false).unwrap();
    assert_eq!((empty.trials, empty.represents, empty.findings.len()), (0, 0, 0));

    let cfg = GenConfig::new(vec![3, 2, 2], 5).with_epsilon(rat(1, 8));
    let first = conjecture_sweep(&cfg, 12, true).unwrap();
    assert_eq!(
        first.represents + first.axioms_fail + first.counterexamples,
        first.trials
    );
    assert!(first.same_outcome(&conjecture_sweep(&cfg, 12, true).unwrap()));

    assert!(matches!(
        conjecture_sweep(&GenConfig::new(vec![4, 2, 2], 1), 1, false),
        Err(Error::SizeLimit(_))
    ));
}

#[test]
fn sweeps_ignore_thread_count() {
    let cfg = GenConfig::new(vec![2, 2, 3], 17).with_epsilon(rat(1, 16));
    let one = pool(1).install(|| conjecture_sweep(&cfg, 24, true).unwrap());
    let four = pool(4).install(|| conjecture_sweep(&cfg, 24, true).unwrap());
    assert!(one.same_outcome(&four));
}
