//! Given-name to gender lexicon.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gender {
    Female,
    Male,
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "F" | "f" => Ok(Gender::Female),
            "M" | "m" => Ok(Gender::Male),
            other => Err(format!("gender must be F or M, found {other:?}")),
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Female => "F",
            Gender::Male => "M",
        })
    }
}

/// Lowercased name, surrounding whitespace trimmed.
pub fn fold_name(name: &str) -> String {
    name.trim().to_lowercase()
}

/// [`fold_name`] with diacritics removed ("João" -> "joao").
pub fn strip_diacritics(name: &str) -> String {
    fold_name(name)
        .nfd()
        .filter(|c| !is_combining_mark(*c))
        .nfc()
        .collect()
}

/// Maps case-folded given names to a gender.
///
/// Lookups try the exact folded form first, then fall back to the
/// diacritic-free form. Two entries that collapse onto the same
/// diacritic-free key with different genders make that fallback key
/// ambiguous, and it never matches.
#[derive(Debug, Clone, Default)]
pub struct GenderLexicon {
    exact: HashMap<String, Gender>,
    stripped: HashMap<String, Option<Gender>>,
}

impl GenderLexicon {
    pub fn from_pairs<I>(pairs: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = (String, Gender)>,
    {
        let mut lex = GenderLexicon::default();
        for (name, gender) in pairs {
            lex.insert(&name, gender)?;
        }
        Ok(lex)
    }

    fn insert(&mut self, name: &str, gender: Gender) -> Result<(), String> {
        let key = fold_name(name);
        if key.is_empty() {
            return Err("empty name".into());
        }
        if self.exact.insert(key.clone(), gender).is_some() {
            return Err(format!("duplicate name {key:?}"));
        }
        self.stripped
            .entry(strip_diacritics(&key))
            .and_modify(|g| {
                if *g != Some(gender) {
                    *g = None;
                }
            })
            .or_insert(Some(gender));
        Ok(())
    }

    /// Reads a `name,gender` CSV with gender in `{F, M}`.
    pub fn from_reader<R: Read>(input: R) -> Result<Self, CorpusError> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
        let headers = rdr.headers().map_err(CorpusError::from_csv)?;
        let found: Vec<&str> = headers.iter().map(str::trim).collect();
        if found != ["name", "gender"] {
            return Err(CorpusError::Parse {
                line: 1,
                message: format!("expected header `name,gender`, found `{}`", found.join(",")),
            });
        }
        let mut lex = GenderLexicon::default();
        for row in rdr.records() {
            let row = row.map_err(CorpusError::from_csv)?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            if row.len() != 2 {
                return Err(CorpusError::Parse {
                    line,
                    message: format!("expected 2 fields, found {}", row.len()),
                });
            }
            let gender = row[1]
                .parse::<Gender>()
                .map_err(|message| CorpusError::Validation { line, message })?;
            lex.insert(&row[0], gender)
                .map_err(|message| CorpusError::Validation { line, message })?;
        }
        Ok(lex)
    }

    /// Gender of a single given name.
    pub fn lookup(&self, name: &str) -> Option<Gender> {
        let key = fold_name(name);
        if let Some(g) = self.exact.get(&key) {
            return Some(*g);
        }
        self.stripped
            .get(&strip_diacritics(&key))
            .copied()
            .flatten()
    }

    /// Gender of the first whitespace-separated token of a full name.
    pub fn first_name_gender(&self, full_name: &str) -> Option<Gender> {
        full_name
            .split_whitespace()
            .next()
            .and_then(|n| self.lookup(n))
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }
}
