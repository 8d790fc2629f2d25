//! Exact tests and constructions for random and stochastic utility
//! representations of one-, two- and n-period stochastic choice data.
//!
//! All arithmetic is over exact rationals. Items are indices into a sorted
//! per-period [`Alphabet`], menus are bitmasks ([`Menu`]), and every table is
//! dense over those codes, so all iteration orders (and therefore all
//! outputs) are deterministic.

pub mod alphabet;
pub mod axioms;
pub mod blockmarschak;
pub mod dataset;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generator;
pub mod menu;
pub mod moebius;
pub mod nperiod;
pub mod order;
pub mod rational;
pub mod representation;

pub use alphabet::Alphabet;
pub use dataset::{validate_dataset, Choice, ChoiceDataset, ChoiceTable, RawDataset};
pub use error::{Error, Result};
pub use menu::Menu;
pub use order::{PrefProfile, Preference};
pub use rational::Rational;
