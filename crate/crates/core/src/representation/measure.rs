use num_traits::{One, Signed, Zero};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::order::{PrefProfile, ProfileSpace};
use crate::rational::Rational;

/// A finite signed weighting of preference profiles, dense over
/// [`ProfileSpace`] order. [`Measure::new`] only admits probability
/// measures; [`Measure::candidate`] admits anything, for constructions whose
/// output still has to be checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    alphabets: Vec<Alphabet>,
    space: ProfileSpace,
    atoms: Vec<Rational>,
}

impl Measure {
    pub fn new(alphabets: Vec<Alphabet>, atoms: Vec<Rational>) -> Result<Self> {
        let mu = Measure::candidate(alphabets, atoms)?;
        if let Some((i, a)) = mu.atoms.iter().enumerate().find(|(_, a)| a.is_negative()) {
            return Err(Error::InvalidMeasure(format!(
                "atom {} has negative mass {a}",
                mu.space.profile(i).key(&mu.alphabets)
            )));
        }
        let total = mu.total();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("atoms sum to {total}")));
        }
        Ok(mu)
    }

    /// Dense atoms in profile order, without the probability checks.
    pub fn candidate(alphabets: Vec<Alphabet>, atoms: Vec<Rational>) -> Result<Self> {
        let space = ProfileSpace::new(alphabets.iter().map(Alphabet::len).collect());
        if atoms.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms for {} profiles",
                atoms.len(),
                space.len()
            )));
        }
        Ok(Measure {
            alphabets,
            space,
            atoms,
        })
    }

    /// Builds a measure from listed atoms; unlisted profiles get 0.
    pub fn from_atoms(
        alphabets: Vec<Alphabet>,
        listed: impl IntoIterator<Item = (PrefProfile, Rational)>,
    ) -> Result<Self> {
        let space = ProfileSpace::new(alphabets.iter().map(Alphabet::len).collect());
        let mut atoms = vec![Rational::zero(); space.len()];
        let mut seen = vec![false; space.len()];
        for (profile, mass) in listed {
            let ok = profile.periods() == alphabets.len()
                && profile.0.iter().zip(&alphabets).all(|(p, x)| p.len() == x.len());
            if !ok {
                return Err(Error::AlphabetMismatch(format!(
                    "profile {profile} does not fit the alphabets"
                )));
            }
            let i = space.index(&profile);
            if seen[i] {
                return Err(Error::InvalidMeasure(format!(
                    "profile {} listed twice",
                    profile.key(&alphabets)
                )));
            }
            seen[i] = true;
            atoms[i] = mass;
        }
        Measure::new(alphabets, atoms)
    }

    pub fn uniform(alphabets: Vec<Alphabet>) -> Self {
        let space = ProfileSpace::new(alphabets.iter().map(Alphabet::len).collect());
        let p = Rational::new(1.into(), (space.len() as i64).into());
        Measure::new(alphabets, vec![p; space.len()]).expect("uniform weights form a measure")
    }

    pub fn point_mass(alphabets: Vec<Alphabet>, profile: &PrefProfile) -> Result<Self> {
        Measure::from_atoms(alphabets, [(profile.clone(), Rational::one())])
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn periods(&self) -> usize {
        self.alphabets.len()
    }

    pub fn sizes(&self) -> &[usize] {
        self.space.sizes()
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn atom(&self, profile: &PrefProfile) -> &Rational {
        &self.atoms[self.space.index(profile)]
    }

    /// `(profile, mass)` in profile order.
    pub fn iter(&self) -> impl Iterator<Item = (PrefProfile, &Rational)> {
        self.atoms
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.space.profile(i), a))
    }

    pub fn total(&self) -> Rational {
        self.atoms.iter().fold(Rational::zero(), |acc, a| acc + a)
    }

    /// Mass of the profiles satisfying `event`.
    pub fn mass(&self, event: impl Fn(&PrefProfile) -> bool) -> Rational {
        self.iter()
            .filter(|(p, _)| event(p))
            .fold(Rational::zero(), |acc, (_, a)| acc + a)
    }

    pub fn is_probability(&self) -> bool {
        self.atoms.iter().all(|a| !a.is_negative()) && self.total().is_one()
    }

    /// Marginal on periods `0..len`.
    pub fn marginal(&self, len: usize) -> Measure {
        let alphabets = self.alphabets[..len].to_vec();
        let block: usize = self.space.sizes()[len..]
            .iter()
            .map(|&k| crate::order::factorial(k))
            .product();
        let atoms = self
            .atoms
            .chunks(block)
            .map(|chunk| chunk.iter().fold(Rational::zero(), |acc, a| acc + a))
            .collect();
        Measure::candidate(alphabets, atoms).expect("marginal shape")
    }
}

/// True iff every atom is strictly positive.
pub fn check_full_support(mu: &Measure) -> bool {
    mu.atoms().iter().all(|a| a.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn xs() -> Vec<Alphabet> {
        vec![Alphabet::new(["a", "b"]).unwrap(), Alphabet::new(["d", "e"]).unwrap()]
    }

    #[test]
    fn checks_probability() {
        assert!(Measure::new(xs(), vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)]).is_ok());
        assert!(matches!(
            Measure::new(xs(), vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(-1, 2)]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(Measure::new(xs(), vec![rat(1, 2); 3]).is_err());
        assert!(Measure::new(xs(), vec![rat(1, 2); 4]).is_err());
    }

    #[test]
    fn atoms_by_profile() {
        let alphabets = xs();
        let p = PrefProfile::parse("b>a|d>e", &alphabets).unwrap();
        let mu = Measure::point_mass(alphabets.clone(), &p).unwrap();
        assert_eq!(mu.atom(&p), &rat(1, 1));
        assert!(!check_full_support(&mu));
        assert!(check_full_support(&Measure::uniform(alphabets)));
        assert_eq!(mu.marginal(1).atoms(), &[rat(0, 1), rat(1, 1)]);
    }
}
