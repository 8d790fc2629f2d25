use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::menu::Menu;

/// Characters reserved by the text keys of the file formats.
const RESERVED: &[char] = &[',', '>', ';', '|'];

/// Hard ceiling on items per period; menus are `u32` bitmasks and every
/// table is dense over `2^k` menus.
pub const MAX_ITEMS: usize = 8;

/// The finite choice set of one period. Labels are stored sorted, so item
/// index `i` is the `i`-th label in byte order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut labels: Vec<String> = labels.into_iter().map(|s| s.as_ref().to_owned()).collect();
        if labels.is_empty() {
            return Err(Error::AlphabetMismatch("alphabet is empty".into()));
        }
        for label in &labels {
            if label.is_empty() || label.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
                return Err(Error::InvalidLabel(label.clone()));
            }
        }
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::AlphabetMismatch(format!("duplicate labels in {labels:?}")));
        }
        if labels.len() > MAX_ITEMS {
            return Err(Error::SizeLimit(format!(
                "{} items in one period (max {MAX_ITEMS})",
                labels.len()
            )));
        }
        Ok(Alphabet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, item: usize) -> &str {
        &self.labels[item]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map_err(|_| Error::AlphabetMismatch(format!("unknown item {label:?}")))
    }

    pub fn full(&self) -> Menu {
        Menu::full(self.len())
    }

    /// Builds a menu from labels; duplicates are rejected.
    pub fn menu<S: AsRef<str>>(&self, labels: &[S]) -> Result<Menu> {
        let mut menu = Menu::EMPTY;
        for label in labels {
            let item = self.index(label.as_ref())?;
            if menu.contains(item) {
                return Err(Error::AlphabetMismatch(format!(
                    "item {:?} listed twice in a menu",
                    label.as_ref()
                )));
            }
            menu = menu.with(item);
        }
        Ok(menu)
    }

    /// Parses the comma-joined key form (`"a,b"`); the empty string is `∅`.
    pub fn parse_menu(&self, key: &str) -> Result<Menu> {
        if key.is_empty() {
            return Ok(Menu::EMPTY);
        }
        let parts: Vec<&str> = key.split(',').collect();
        self.menu(&parts)
    }

    /// Comma-joined labels in canonical (sorted) order.
    pub fn menu_key(&self, menu: Menu) -> String {
        let labels: Vec<&str> = menu.items().map(|i| self.label(i)).collect();
        labels.join(",")
    }

    /// `{a,b}` style rendering for reports.
    pub fn show_menu(&self, menu: Menu) -> String {
        format!("{{{}}}", self.menu_key(menu))
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Alphabet::new(labels)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(alphabet: Alphabet) -> Self {
        alphabet.labels
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}
