mod oracle;

use dynchoice::axioms::{all_pass, check_all};
use dynchoice::blockmarschak::{BmIndex, BmTable};
use dynchoice::generator::{induce_dataset, sample_measure, GenConfig};
use dynchoice::menu::Menu;
use dynchoice::order::{enumerate_profiles, PrefProfile};
use dynchoice::rational::rat;
use dynchoice::representation::{
    build_nu, check_full_support, choice_event, construct_ru, construct_su, construct_su_3x3, construct_su_detailed,
    upper_edge_set, verify_representation, Measure, VerifyMode,
};
use dynchoice::{fixtures, Alphabet, Error, Rational};
use num_traits::Zero;

fn set(items: &[usize]) -> Menu {
    Menu::from_items(items.iter().copied())
}

/// Sizes where every period but at most one has two items or fewer, or
/// both have three.
const SOUND_SIZES: [[usize; 2]; 10] = [
    [1, 3],
    [2, 2],
    [2, 3],
    [3, 2],
    [3, 3],
    [2, 4],
    [4, 2],
    [2, 5],
    [5, 2],
    [4, 1],
];

#[test]
fn choice_event_examples() {
    assert_eq!(choice_event(0, Menu::full(2), 2).unwrap().len(), 1);
    assert_eq!(choice_event(0, set(&[0, 1]), 3).unwrap().len(), 3);
    assert_eq!(choice_event(1, set(&[1]), 3).unwrap().len(), 6);
}

#[test]
fn edge_set_examples() {
    let xs = [Alphabet::new(["a", "b"]).unwrap(), Alphabet::new(["d", "e"]).unwrap()];
    let e = upper_edge_set(
        &BmIndex::pair(0, Menu::EMPTY, 0, Menu::EMPTY, &[2, 2]).unwrap(),
        &[2, 2],
    )
    .unwrap();
    assert_eq!(e, vec![PrefProfile::parse("a>b|d>e", &xs).unwrap()]);
    let xs = [
        Alphabet::new(["a", "b", "c"]).unwrap(),
        Alphabet::new(["d", "e", "f"]).unwrap(),
    ];
    let idx = BmIndex::pair(1, set(&[0]), 1, set(&[0]), &[3, 3]).unwrap();
    assert_eq!(
        upper_edge_set(&idx, &[3, 3]).unwrap(),
        vec![PrefProfile::parse("a>b>c|d>e>f", &xs).unwrap()]
    );
    let idx = BmIndex::pair(0, Menu::EMPTY, 0, Menu::EMPTY, &[3, 3]).unwrap();
    assert_eq!(upper_edge_set(&idx, &[3, 3]).unwrap().len(), 4);
    for sizes in [vec![3, 4], vec![2, 2, 3]] {
        for steps in oracle::all_steps(&sizes) {
            let idx = BmIndex::new(steps.clone(), &sizes).unwrap();
            assert_eq!(
                upper_edge_set(&idx, &sizes).unwrap().len(),
                oracle::edge_count(&sizes, &steps)
            );
        }
    }
}

/// Edge sets at `(x, B^C)` over `B ⊇ A^C` split the event of choosing `x`
/// from `A^C` in both periods.
#[test]
fn edge_sets_partition_choice_events() {
    for sizes in [[2, 3], [3, 3]] {
        let xs: Vec<Alphabet> = dynchoice::generator::default_alphabets(&sizes);
        for a1 in Menu::full(sizes[0]).subsets().filter(|&a| a != Menu::full(sizes[0])) {
            for a2 in Menu::full(sizes[1]).subsets().filter(|&a| a != Menu::full(sizes[1])) {
                let (c1, c2) = (a1.complement(sizes[0]), a2.complement(sizes[1]));
                for x1 in c1.items() {
                    for x2 in c2.items() {
                        let mut union = Vec::new();
                        for b1 in c1.supersets(sizes[0]) {
                            for b2 in c2.supersets(sizes[1]) {
                                let idx =
                                    BmIndex::pair(x1, b1.complement(sizes[0]), x2, b2.complement(sizes[1]), &sizes)
                                        .unwrap();
                                union.extend(upper_edge_set(&idx, &sizes).unwrap());
                            }
                        }
                        let before = union.len();
                        union.sort();
                        union.dedup();
                        assert_eq!(union.len(), before, "edge sets overlap");
                        let event: Vec<PrefProfile> = enumerate_profiles(&xs)
                            .into_iter()
                            .filter(|p| p.period(0).chooses(x1, c1) && p.period(1).chooses(x2, c2))
                            .collect();
                        assert_eq!(union, event);
                    }
                }
            }
        }
    }
}

#[test]
fn nu_examples() {
    let nu = build_nu(&fixtures::two_by_two()).unwrap();
    assert_eq!(nu.get(&[0], &[0]), Some(&rat(1, 2)));
    assert_eq!(nu.get(&[0, 1], &[0, 1]), Some(&rat(1, 2)));
    let det = build_nu(&fixtures::deterministic()).unwrap();
    assert_eq!(det.get(&[1], &[0]), Some(&rat(0, 1)));
    assert_eq!(det.get(&[1, 0], &[0, 1]), Some(&rat(0, 1)));
    assert_eq!(det.get(&[1, 0], &[1, 0]), Some(&rat(0, 1)));
    assert!(matches!(
        build_nu(&fixtures::bad_marginals()),
        Err(Error::AxiomViolation(_))
    ));
}

#[test]
fn construction_examples() {
    assert_eq!(
        construct_su(&fixtures::two_by_two()).unwrap(),
        fixtures::two_by_two_measure()
    );
    let ind = construct_su(&fixtures::independent_three()).unwrap();
    assert!(ind.atoms().iter().all(|a| a == &rat(1, 36)));
    match construct_su(&fixtures::bad_marginals()) {
        Err(Error::AxiomViolation(failed)) => {
            assert!(failed
                .iter()
                .any(|v| v.axiom == dynchoice::axioms::Axiom::MarginalConsistency));
        }
        other => panic!("expected an axiom violation, got {other:?}"),
    }
    assert!(matches!(
        construct_su(&fixtures::uniform_three()),
        Err(Error::SizeMismatch(_))
    ));
}

#[test]
fn closed_form_examples() {
    let ind = fixtures::independent_three();
    let closed = construct_su_3x3(&ind).unwrap();
    assert_eq!(closed, construct_su(&ind).unwrap());
    let xs = ind.alphabets();
    let p = PrefProfile::parse("a>b>c|d>e>f", xs).unwrap();
    let m = BmTable::build(&ind).pair(1, set(&[0]), 1, set(&[0])).clone();
    assert_eq!((closed.atom(&p).clone(), m), (rat(1, 36), rat(1, 36)));
    assert!(matches!(
        construct_su_3x3(&fixtures::two_by_two()),
        Err(Error::SizeMismatch(_))
    ));

    let base = sample_measure(&GenConfig::new(vec![3, 3], 5)).unwrap();
    let mut atoms = base.atoms().to_vec();
    let lost = atoms[7].clone();
    atoms[7] = Rational::zero();
    atoms[8] += lost;
    let mu = Measure::new(base.alphabets().to_vec(), atoms).unwrap();
    let closed = construct_su_3x3(&induce_dataset(&mu).unwrap()).unwrap();
    assert_eq!(closed.atoms()[7], rat(0, 1));
    assert_eq!(closed, mu);
}

#[test]
fn verification_examples() {
    let data = fixtures::two_by_two();
    let mu = fixtures::two_by_two_measure();
    assert!(verify_representation(&mu, &data, VerifyMode::Both).unwrap().pass);

    let mut atoms = mu.atoms().to_vec();
    atoms[0] -= rat(1, 16);
    atoms[3] += rat(1, 16);
    let moved = Measure::new(mu.alphabets().to_vec(), atoms).unwrap();
    let report = verify_representation(&moved, &data, VerifyMode::Edge).unwrap();
    assert!(!report.pass);
    assert!(report.failures[0].constraint.starts_with("edge "));
    assert!(!verify_representation(&moved, &data, VerifyMode::Direct).unwrap().pass);

    let uniform = Measure::uniform(mu.alphabets().to_vec());
    let report = verify_representation(&uniform, &data, VerifyMode::Direct).unwrap();
    assert!(!report.pass);
    assert!(report
        .failures
        .iter()
        .any(|f| f.expected == rat(3, 4) && f.actual == rat(1, 2)));

    let other = Measure::uniform(dynchoice::generator::default_alphabets(&[2, 2]));
    assert!(matches!(
        verify_representation(&other, &data, VerifyMode::Both),
        Err(Error::AlphabetMismatch(_))
    ));
}

#[test]
fn single_period_representation() {
    let u3 = fixtures::uniform_three();
    let mu = construct_ru(u3.rho1(), u3.alphabet(0)).unwrap();
    assert_eq!(mu, Measure::uniform(u3.alphabets().to_vec()));
    assert!(verify_representation(&mu, &u3, VerifyMode::Both).unwrap().pass);

    let det = fixtures::deterministic_three();
    let mu = construct_ru(det.rho1(), det.alphabet(0)).unwrap();
    assert_eq!(
        mu.atom(&PrefProfile::parse("a>b>c", det.alphabets()).unwrap()),
        &rat(1, 1)
    );

    let two = induce_dataset(
        &Measure::new(
            dynchoice::generator::default_alphabets(&[2]),
            vec![rat(3, 4), rat(1, 4)],
        )
        .unwrap(),
    )
    .unwrap();
    let mu = construct_ru(two.rho1(), two.alphabet(0)).unwrap();
    assert_eq!(mu.atoms(), &[rat(3, 4), rat(1, 4)]);

    let bad = fixtures::irregular_three();
    assert!(matches!(
        construct_ru(bad.rho1(), bad.alphabet(0)),
        Err(Error::AxiomViolation(_))
    ));
}

#[test]
fn four_item_twins_induce_the_same_data() {
    let (left, right) = fixtures::four_item_twins();
    assert_ne!(left, right);
    let data = induce_dataset(&left).unwrap();
    assert_eq!(data, induce_dataset(&right).unwrap());
    for mu in [&left, &right] {
        assert!(verify_representation(mu, &data, VerifyMode::Both).unwrap().pass);
    }
    let built = construct_ru(data.rho1(), data.alphabet(0)).unwrap();
    assert!(verify_representation(&built, &data, VerifyMode::Both).unwrap().pass);
}

#[test]
fn full_support_examples() {
    assert!(check_full_support(&fixtures::two_by_two_measure()));
    assert!(!check_full_support(&fixtures::deterministic_measure()));
    let strict = construct_su(&fixtures::two_by_two()).unwrap();
    assert!(check_full_support(&strict));
}

#[test]
fn round_trips_and_uniqueness() {
    for sizes in SOUND_SIZES {
        for seed in 0..4 {
            let sparsity = if seed % 2 == 0 { rat(0, 1) } else { rat(1, 2) };
            let mu = sample_measure(&GenConfig::new(sizes.to_vec(), seed).with_sparsity(sparsity)).unwrap();
            let data = induce_dataset(&mu).unwrap();
            let c = construct_su_detailed(&data).unwrap();
            for claim in &c.claims {
                assert!(claim.pass(), "{sizes:?} seed {seed}: {claim:?}");
            }
            assert!(c.verification.pass);
            let built = construct_su(&data).unwrap();
            oracle::reproduces(&built, &data).unwrap();
            assert_eq!(induce_dataset(&built).unwrap(), data);
            if sizes.iter().all(|&k| k <= 3) {
                assert_eq!(built, mu, "{sizes:?} seed {seed}");
            }
            if check_full_support(&mu) {
                assert!(check_full_support(&built));
            }
        }
    }
}

#[test]
fn full_support_representation_implies_strict_axioms() {
    for seed in 0..6 {
        let mu = sample_measure(&GenConfig::new(vec![3, 2], seed)).unwrap();
        let data = induce_dataset(&mu).unwrap();
        let built = construct_su(&data).unwrap();
        assert!(verify_representation(&built, &data, VerifyMode::Both).unwrap().pass);
        assert!(check_full_support(&built));
        assert!(all_pass(&check_all(&data, true)));
    }
    let det = fixtures::deterministic();
    assert!(all_pass(&check_all(&det, false)));
    assert!(!all_pass(&check_all(&det, true)));
}

/// With four or more items in one period and three or more in the other,
/// the level-by-level partial measure is not additive, so the construction
/// reports the broken invariant instead of returning a measure.
#[test]
fn construction_never_returns_an_unverified_measure() {
    for sizes in [[3, 4], [4, 3], [4, 4]] {
        for seed in 0..3 {
            let mu = sample_measure(&GenConfig::new(sizes.to_vec(), seed)).unwrap();
            let data = induce_dataset(&mu).unwrap();
            match construct_su(&data) {
                Ok(built) => assert!(verify_representation(&built, &data, VerifyMode::Both).unwrap().pass),
                Err(Error::InternalInvariantBroken(_)) => {
                    let c = construct_su_detailed(&data).unwrap();
                    assert!(!c.sound());
                }
                Err(e) => panic!("{sizes:?} seed {seed}: {e}"),
            }
        }
    }
}
