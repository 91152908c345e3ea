//! Descriptive statistics per authorship category: summary table, yearly
//! distributions and extra-subject frequencies.

use std::collections::BTreeMap;
use std::io::Write;

use thiserror::Error;

use crate::categories::{select, AuthorshipCategory, CategorySubset};
use crate::corpus::{Corpus, SubjectId, SubjectRegistry, YEARS};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("top_k must be in 1..={max}, got {got}")]
    TopK { got: usize, max: usize },
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Whether `mean_subjects` counts the implicit main subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubjectCounting {
    /// `1 + #extras` per paper.
    #[default]
    WithMain,
    /// `#extras` per paper.
    ExtrasOnly,
}

/// One column of the summary table. Means are `None` for an empty subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CategorySummary {
    pub size: usize,
    pub mean_authors: Option<f64>,
    pub pct_female: Option<f64>,
    pub n_single: usize,
    pub mean_subjects: Option<f64>,
    pub n_xsubject: usize,
}

pub fn summarize(subset: &CategorySubset<'_>, counting: SubjectCounting) -> CategorySummary {
    let size = subset.len();
    let mut authors = 0u64;
    let mut female_share = 0.0;
    let mut subjects = 0u64;
    let mut n_single = 0;
    let mut n_xsubject = 0;
    for r in &subset.records {
        let a = r.authors();
        authors += u64::from(a);
        female_share += 100.0 * f64::from(r.female) / f64::from(a);
        let extras = r.extra_count() as u64;
        subjects += match counting {
            SubjectCounting::WithMain => 1 + extras,
            SubjectCounting::ExtrasOnly => extras,
        };
        if a == 1 {
            n_single += 1;
        }
        if extras > 0 {
            n_xsubject += 1;
        }
    }
    let mean = |total: f64| (size > 0).then(|| total / size as f64);
    CategorySummary {
        size,
        mean_authors: mean(authors as f64),
        pct_female: mean(female_share),
        n_single,
        mean_subjects: mean(subjects as f64),
        n_xsubject,
    }
}

/// Paper counts per category and year.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearlyDistribution {
    pub xsubject_only: bool,
    pub single_only: bool,
    counts: BTreeMap<AuthorshipCategory, BTreeMap<u16, usize>>,
}

impl YearlyDistribution {
    pub fn count(&self, category: AuthorshipCategory, year: u16) -> usize {
        self.counts
            .get(&category)
            .and_then(|m| m.get(&year))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, category: AuthorshipCategory) -> usize {
        self.counts.get(&category).map_or(0, |m| m.values().sum())
    }

    pub fn years(&self, category: AuthorshipCategory) -> impl Iterator<Item = (u16, usize)> + '_ {
        YEARS.map(move |y| (y, self.count(category, y)))
    }
}

pub fn yearly_counts(
    corpus: &Corpus,
    xsubject_only: bool,
    single_only: bool,
) -> YearlyDistribution {
    let mut counts = BTreeMap::new();
    for cat in AuthorshipCategory::ALL {
        let per_year: &mut BTreeMap<u16, usize> = counts
            .entry(cat)
            .or_insert_with(|| YEARS.map(|y| (y, 0)).collect());
        for r in select(corpus, cat, xsubject_only).records {
            if single_only && r.authors() != 1 {
                continue;
            }
            *per_year.entry(r.year).or_default() += 1;
        }
    }
    YearlyDistribution {
        xsubject_only,
        single_only,
        counts,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectFrequency {
    pub subject: SubjectId,
    pub count: usize,
    /// Share of the category's extra-subject occurrences, in percent.
    pub pct: f64,
}

/// Top-k extra subjects, ranked by occurrences over all papers.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectFrequencyTable {
    pub ranking: Vec<SubjectId>,
    pub rows: BTreeMap<AuthorshipCategory, Vec<SubjectFrequency>>,
}

fn tally(subset: &CategorySubset<'_>) -> BTreeMap<SubjectId, usize> {
    let mut counts = BTreeMap::new();
    for r in &subset.records {
        for s in r.extras() {
            *counts.entry(s).or_default() += 1;
        }
    }
    counts
}

pub fn subject_frequencies(
    corpus: &Corpus,
    top_k: usize,
) -> Result<SubjectFrequencyTable, StatsError> {
    let max = SubjectId::MAX as usize;
    if !(1..=max).contains(&top_k) {
        return Err(StatsError::TopK { got: top_k, max });
    }
    let overall = tally(&select(corpus, AuthorshipCategory::All, true));
    let mut ranked: Vec<(SubjectId, usize)> = overall.into_iter().collect();
    // descending count, then ascending code
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let ranking: Vec<SubjectId> = ranked.into_iter().take(top_k).map(|(s, _)| s).collect();

    let mut rows = BTreeMap::new();
    for cat in AuthorshipCategory::ALL {
        let counts = tally(&select(corpus, cat, true));
        let total: usize = counts.values().sum();
        let row = if total == 0 {
            Vec::new()
        } else {
            ranking
                .iter()
                .map(|s| {
                    let count = counts.get(s).copied().unwrap_or(0);
                    SubjectFrequency {
                        subject: *s,
                        count,
                        pct: 100.0 * count as f64 / total as f64,
                    }
                })
                .collect()
        };
        rows.insert(cat, row);
    }
    Ok(SubjectFrequencyTable { ranking, rows })
}

pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// `category,size,mean_authors,pct_female,n_single,mean_subjects,n_xsubject`
pub fn write_summary_csv<W: Write>(
    rows: &[(AuthorshipCategory, CategorySummary)],
    out: W,
) -> Result<(), StatsError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "category",
        "size",
        "mean_authors",
        "pct_female",
        "n_single",
        "mean_subjects",
        "n_xsubject",
    ])?;
    for (cat, s) in rows {
        wtr.write_record([
            cat.slug().to_string(),
            s.size.to_string(),
            fmt_opt(s.mean_authors),
            fmt_opt(s.pct_female),
            s.n_single.to_string(),
            fmt_opt(s.mean_subjects),
            s.n_xsubject.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `restriction,category,2010,...,2015,total`, one block of rows per
/// distribution in the order given.
pub fn write_yearly_csv<W: Write>(
    distributions: &[(&str, &YearlyDistribution)],
    categories: &[AuthorshipCategory],
    out: W,
) -> Result<(), StatsError> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["restriction".to_string(), "category".to_string()];
    header.extend(YEARS.map(|y| y.to_string()));
    header.push("total".into());
    wtr.write_record(&header)?;
    for (name, dist) in distributions {
        for cat in categories {
            let mut row = vec![name.to_string(), cat.slug().to_string()];
            row.extend(dist.years(*cat).map(|(_, n)| n.to_string()));
            row.push(dist.total(*cat).to_string());
            wtr.write_record(&row)?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// `category,rank,code,subject,count,pct`
pub fn write_subject_freq_csv<W: Write>(
    table: &SubjectFrequencyTable,
    categories: &[AuthorshipCategory],
    registry: &SubjectRegistry,
    out: W,
) -> Result<(), StatsError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["category", "rank", "code", "subject", "count", "pct"])?;
    for cat in categories {
        let Some(row) = table.rows.get(cat) else {
            continue;
        };
        for (rank, f) in row.iter().enumerate() {
            wtr.write_record([
                cat.slug().to_string(),
                (rank + 1).to_string(),
                f.subject.to_string(),
                registry.name(f.subject).to_string(),
                f.count.to_string(),
                fmt_real(f.pct),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}
