//! JSON files for datasets and measures.
//!
//! Dataset:
//!
//! ```json
//! {
//!   "alphabets": [["a", "b"], ["d", "e"]],
//!   "periods": 2,
//!   "rho": {
//!     "1": { "a,b": { "a": "3/4", "b": "1/4" } },
//!     "2": { "a,b>a": { "d,e": { "d": "2/3", "e": "1/3" } } }
//!   }
//! }
//! ```
//!
//! Measure: `{"alphabets": [...], "atoms": {"a>b|d>e": "1/2", ...}}`, with
//! unlisted profiles at zero. Probabilities are strings holding `p/q` or an
//! integer. Output is pretty-printed with sorted keys and a final newline,
//! so equal values always give equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::alphabet::Alphabet;
use crate::dataset::{ChoiceDataset, RawDataset};
use crate::error::{Error, Result};
use crate::order::PrefProfile;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::representation::Measure;

type Distribution = BTreeMap<String, String>;
type Slice = BTreeMap<String, Distribution>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    alphabets: Vec<Vec<String>>,
    periods: usize,
    rho: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    alphabets: Vec<Vec<String>>,
    atoms: BTreeMap<String, String>,
}

fn parse_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("maps with string keys serialize");
    text.push('\n');
    text
}

fn parse_distribution(dist: Distribution) -> Result<BTreeMap<String, Rational>> {
    dist.into_iter()
        .map(|(item, p)| Ok((item, parse_rational(&p)?)))
        .collect()
}

fn parse_slice(slice: Slice) -> Result<BTreeMap<String, BTreeMap<String, Rational>>> {
    slice
        .into_iter()
        .map(|(menu, dist)| Ok((menu, parse_distribution(dist)?)))
        .collect()
}

/// Reads a dataset file into unvalidated tables.
pub fn parse_dataset(text: &str) -> Result<RawDataset> {
    let file: DatasetFile = serde_json::from_str(text).map_err(|e| parse_error("dataset", e))?;
    if file.periods == 0 || file.periods != file.alphabets.len() {
        return Err(Error::Parse(format!(
            "\"periods\" is {} but {} alphabets are given",
            file.periods,
            file.alphabets.len()
        )));
    }
    let expected: Vec<String> = (1..=file.periods).map(|t| t.to_string()).collect();
    let mut keys: Vec<&String> = file.rho.keys().collect();
    keys.sort_by_key(|k| k.parse::<usize>().unwrap_or(usize::MAX));
    if keys.iter().map(|k| k.as_str()).ne(expected.iter().map(String::as_str)) {
        return Err(Error::Parse(format!(
            "\"rho\" must have exactly the period keys {expected:?}"
        )));
    }
    let mut raw = RawDataset {
        alphabets: file.alphabets,
        periods: Vec::with_capacity(file.periods),
    };
    for t in 1..=file.periods {
        let value = file.rho[&t.to_string()].clone();
        let tables = if t == 1 {
            let slice: Slice = serde_json::from_value(value).map_err(|e| parse_error("period 1", e))?;
            BTreeMap::from([(String::new(), parse_slice(slice)?)])
        } else {
            let slices: BTreeMap<String, Slice> =
                serde_json::from_value(value).map_err(|e| parse_error(&format!("period {t}"), e))?;
            slices
                .into_iter()
                .map(|(h, slice)| Ok((h, parse_slice(slice)?)))
                .collect::<Result<_>>()?
        };
        raw.periods.push(tables);
    }
    Ok(raw)
}

fn slice_value(slice: &BTreeMap<String, BTreeMap<String, Rational>>) -> Value {
    let out: Map<String, Value> = slice
        .iter()
        .map(|(menu, dist)| {
            let dist: Map<String, Value> = dist
                .iter()
                .map(|(item, p)| (item.clone(), Value::String(format_rational(p))))
                .collect();
            (menu.clone(), Value::Object(dist))
        })
        .collect();
    Value::Object(out)
}

/// Canonical text of raw tables.
pub fn write_raw_dataset(raw: &RawDataset) -> String {
    let mut rho = BTreeMap::new();
    for (t, tables) in raw.periods.iter().enumerate() {
        let value = if t == 0 {
            tables
                .get("")
                .map(slice_value)
                .unwrap_or_else(|| Value::Object(Map::new()))
        } else {
            Value::Object(tables.iter().map(|(h, s)| (h.clone(), slice_value(s))).collect())
        };
        rho.insert((t + 1).to_string(), value);
    }
    to_text(&DatasetFile {
        alphabets: raw.alphabets.clone(),
        periods: raw.periods.len(),
        rho,
    })
}

/// Canonical text of a dataset; only observable histories are written.
pub fn write_dataset(data: &ChoiceDataset) -> String {
    write_raw_dataset(&data.to_raw())
}

fn alphabets(labels: &[Vec<String>]) -> Result<Vec<Alphabet>> {
    labels.iter().map(Alphabet::new).collect()
}

pub fn parse_measure(text: &str) -> Result<Measure> {
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| parse_error("measure", e))?;
    let xs = alphabets(&file.alphabets)?;
    let atoms = file
        .atoms
        .iter()
        .map(|(key, p)| Ok((PrefProfile::parse(key, &xs)?, parse_rational(p)?)))
        .collect::<Result<Vec<_>>>()?;
    Measure::from_atoms(xs, atoms)
}

/// Canonical text of a measure; zero atoms are left out.
pub fn write_measure(mu: &Measure) -> String {
    let atoms = mu
        .iter()
        .filter(|(_, p)| !num_traits::Zero::is_zero(*p))
        .map(|(profile, p)| (profile.key(mu.alphabets()), format_rational(p)))
        .collect();
    to_text(&MeasureFile {
        alphabets: mu.alphabets().iter().map(|x| x.labels().to_vec()).collect(),
        atoms,
    })
}
