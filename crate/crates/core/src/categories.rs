//! Gender-based authorship categories and the subsets they induce.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::corpus::{Corpus, PaperRecord};

/// Authorship category, ordered by code `0..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuthorshipCategory {
    All = 0,
    WExc = 1,
    WInc = 2,
    WandM = 3,
    MInc = 4,
    MExc = 5,
}

impl AuthorshipCategory {
    pub const ALL: [AuthorshipCategory; 6] = [
        AuthorshipCategory::All,
        AuthorshipCategory::WExc,
        AuthorshipCategory::WInc,
        AuthorshipCategory::WandM,
        AuthorshipCategory::MInc,
        AuthorshipCategory::MExc,
    ];

    /// The three mutually exclusive categories that partition `All`.
    pub const EXCLUSIVE: [AuthorshipCategory; 3] = [
        AuthorshipCategory::WExc,
        AuthorshipCategory::WandM,
        AuthorshipCategory::MExc,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    /// Membership predicate on female/male author counts.
    pub fn contains(self, female: u32, male: u32) -> bool {
        use AuthorshipCategory::*;
        match self {
            All => true,
            WExc => female >= 1 && male == 0,
            WInc => female >= 1,
            WandM => female >= 1 && male >= 1,
            MInc => male >= 1,
            MExc => female == 0 && male >= 1,
        }
    }

    pub fn contains_record(self, record: &PaperRecord) -> bool {
        self.contains(record.female, record.male)
    }

    /// Name accepted on the command line.
    pub fn slug(self) -> &'static str {
        use AuthorshipCategory::*;
        match self {
            All => "all",
            WExc => "wexc",
            WInc => "winc",
            WandM => "wm",
            MInc => "minc",
            MExc => "mexc",
        }
    }

    /// Display label, e.g. `W.Exc`.
    pub fn label(self) -> &'static str {
        use AuthorshipCategory::*;
        match self {
            All => "All",
            WExc => "W.Exc",
            WInc => "W.Inc",
            WandM => "W&M",
            MInc => "M.Inc",
            MExc => "M.Exc",
        }
    }
}

impl fmt::Display for AuthorshipCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for AuthorshipCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        AuthorshipCategory::ALL
            .into_iter()
            .find(|c| c.slug() == lower)
            .ok_or_else(|| {
                format!("unknown category {s:?} (expected one of all, wexc, winc, wm, minc, mexc)")
            })
    }
}

impl Serialize for AuthorshipCategory {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.slug())
    }
}

/// Every category the record belongs to.
pub fn categorize(record: &PaperRecord) -> BTreeSet<AuthorshipCategory> {
    AuthorshipCategory::ALL
        .into_iter()
        .filter(|c| c.contains_record(record))
        .collect()
}

/// Records of one category, optionally restricted to papers with at least
/// one extra subject. Borrows from the corpus and keeps its order.
#[derive(Debug, Clone)]
pub struct CategorySubset<'a> {
    pub category: AuthorshipCategory,
    pub xsubject_only: bool,
    pub records: Vec<&'a PaperRecord>,
}

impl CategorySubset<'_> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn select(
    corpus: &Corpus,
    category: AuthorshipCategory,
    xsubject_only: bool,
) -> CategorySubset<'_> {
    let records = corpus
        .records()
        .iter()
        .filter(|r| category.contains_record(r))
        .filter(|r| !xsubject_only || r.extra_count() > 0)
        .collect();
    CategorySubset {
        category,
        xsubject_only,
        records,
    }
}
