//! Slow, direct reference computations used to check the library. Nothing
//! here calls the library's sums, transforms or mass tables; only its data
//! types and accessors.

#![allow(dead_code)]

use dynchoice::dataset::Choice;
use dynchoice::menu::Menu;
use dynchoice::order::PrefProfile;
use dynchoice::representation::Measure;
use dynchoice::{ChoiceDataset, Rational};
use num_traits::Zero;

/// The Möbius function of the subset lattice from its defining recurrence.
pub fn moebius_recursive(a: Menu, b: Menu) -> i64 {
    if !a.is_subset(b) {
        return 0;
    }
    if a == b {
        return 1;
    }
    -b.subsets()
        .filter(|&c| a.is_subset(c) && c != b)
        .map(|c| moebius_recursive(a, c))
        .sum::<i64>()
}

fn bits(menu: Menu) -> Vec<usize> {
    menu.items().collect()
}

/// Whether `order` (best first) puts `x` above every other item of `menu`.
fn picks(order: &[usize], x: usize, menu: Menu) -> bool {
    let first = order.iter().find(|&&i| menu.contains(i));
    first == Some(&x)
}

fn follows(profile: &PrefProfile, history: &[Choice]) -> bool {
    history
        .iter()
        .enumerate()
        .all(|(t, c)| picks(profile.period(t).items(), c.item, c.menu))
}

fn mass_where(mu: &Measure, event: impl Fn(&PrefProfile) -> bool) -> Rational {
    let mut total = Rational::zero();
    for (profile, atom) in mu.iter() {
        if event(&profile) {
            total += atom;
        }
    }
    total
}

/// `μ(C(history))`.
pub fn history_mass(mu: &Measure, history: &[Choice]) -> Rational {
    mass_where(mu, |p| follows(p, history))
}

/// `μ(C(x, A) at period len(history) | C(history))`, or `None` when the
/// history has no mass.
pub fn conditional(mu: &Measure, history: &[Choice], menu: Menu, x: usize) -> Option<Rational> {
    let t = history.len();
    let den = history_mass(mu, history);
    if den.is_zero() {
        return None;
    }
    let num = mass_where(mu, |p| follows(p, history) && picks(p.period(t).items(), x, menu));
    Some(num / den)
}

/// Mass of the profiles ranking, in each period, exactly the items of
/// `A_t` first (in any order) and then `x_t`.
pub fn edge_mass(mu: &Measure, steps: &[(usize, Menu)]) -> Rational {
    mass_where(mu, |p| {
        steps.iter().enumerate().all(|(t, &(x, above))| {
            let order = p.period(t).items();
            let k = above.len();
            order[..k].iter().all(|&i| above.contains(i)) && order[k] == x
        })
    })
}

/// Number of profiles in the edge set of `steps`.
pub fn edge_count(sizes: &[usize], steps: &[(usize, Menu)]) -> usize {
    let fact = |n: usize| (1..=n).product::<usize>();
    steps
        .iter()
        .zip(sizes)
        .map(|(&(_, a), &k)| fact(a.len()) * fact(k - a.len() - 1))
        .product()
}

/// `ρ1(x1,B1) ρ2(x2,B2 | B1,x1) ...`, stopping at the first zero factor.
pub fn likelihood(data: &ChoiceDataset, xs: &[usize], bs: &[Menu]) -> Rational {
    let mut history = Vec::new();
    let mut product = Rational::from_integer(1.into());
    for (t, (&x, &b)) in xs.iter().zip(bs).enumerate() {
        let p = data.rho(t, &history, b, x).clone();
        if p.is_zero() {
            return Rational::zero();
        }
        product *= p;
        history.push(Choice::new(b, x));
    }
    product
}

/// The n-period alternating sum, written as a plain nested loop over all
/// tuples of supersets.
pub fn bm_sum(data: &ChoiceDataset, steps: &[(usize, Menu)]) -> Rational {
    let sizes = data.sizes();
    let bases: Vec<Menu> = steps.iter().zip(sizes).map(|(&(_, a), &k)| a.complement(k)).collect();
    let choices: Vec<Vec<Menu>> = bases
        .iter()
        .zip(sizes)
        .map(|(&base, &k)| Menu::full(k).subsets().filter(|&b| base.is_subset(b)).collect())
        .collect();
    let xs: Vec<usize> = steps.iter().map(|&(x, _)| x).collect();
    let mut total = Rational::zero();
    let mut pick = vec![0usize; steps.len()];
    loop {
        let bs: Vec<Menu> = pick.iter().enumerate().map(|(t, &i)| choices[t][i]).collect();
        let extra: usize = bs.iter().zip(&bases).map(|(b, base)| b.len() - base.len()).sum();
        let term = likelihood(data, &xs, &bs);
        if extra.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
        let mut t = pick.len();
        loop {
            if t == 0 {
                return total;
            }
            t -= 1;
            pick[t] += 1;
            if pick[t] < choices[t].len() {
                break;
            }
            pick[t] = 0;
        }
    }
}

/// Every valid `(x_t, A_t)` tuple for the given sizes.
pub fn all_steps(sizes: &[usize]) -> Vec<Vec<(usize, Menu)>> {
    let mut out: Vec<Vec<(usize, Menu)>> = vec![Vec::new()];
    for &k in sizes {
        let mut next = Vec::new();
        for prefix in &out {
            for a in Menu::full(k).subsets().filter(|&a| a != Menu::full(k)) {
                for x in bits(a.complement(k)) {
                    let mut s = prefix.clone();
                    s.push((x, a));
                    next.push(s);
                }
            }
        }
        out = next;
    }
    out
}

/// Checks that `data` is exactly what `mu` induces: every choice
/// probability at every history of positive mass.
pub fn reproduces(mu: &Measure, data: &ChoiceDataset) -> Result<(), String> {
    let shape = data.shape();
    for t in 0..data.periods() {
        for (_, history) in shape.histories(t) {
            if history_mass(mu, &history).is_zero() {
                if data.is_observable(&history) {
                    return Err(format!(
                        "history {} observable but massless",
                        data.history_key(&history)
                    ));
                }
                continue;
            }
            if !data.is_observable(&history) {
                return Err(format!(
                    "history {} has mass but is unobservable",
                    data.history_key(&history)
                ));
            }
            for menu in Menu::nonempty(data.sizes()[t]) {
                for x in bits(menu) {
                    let want = conditional(mu, &history, menu, x).expect("positive mass");
                    let got = data.rho(t, &history, menu, x);
                    if &want != got {
                        return Err(format!(
                            "period {} item {x} menu {menu} after {}: {got} != {want}",
                            t + 1,
                            data.history_key(&history)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}
