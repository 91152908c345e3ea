//! Bibliographic corpus in the tabular `id,year,w,m,s1..s5` encoding.
//!
//! Every paper implicitly carries Economics as its main subject. Only the
//! secondary subjects are encoded, one code per slot, `0` meaning empty.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::GenderLexicon;

/// Number of extra-subject slots per record.
pub const SLOTS: usize = 5;

/// Publication years covered by the corpus.
pub const YEARS: RangeInclusive<u16> = 2010..=2015;

/// Header of the corpus file.
pub const CORPUS_HEADER: [&str; 9] = ["id", "year", "w", "m", "s1", "s2", "s3", "s4", "s5"];

/// Header of the raw-record file accepted by [`ingest_raw`].
pub const RAW_HEADER: [&str; 4] = ["id", "year", "authors", "subjects"];

const STANDARD_SUBJECTS: [&str; 29] = [
    "Agricultural Economics",
    "Area Studies",
    "Business",
    "Cultural Studies",
    "Environmental Science",
    "Education",
    "Ecology",
    "Finance",
    "Geography",
    "Health Policy",
    "History Of S.Sciences",
    "Hospitality",
    "Industrial Rel. & Labor",
    "Interdisciplinary St.",
    "International Relations",
    "Leisure, Sport & Tourism",
    "Management",
    "Mathematics",
    "Occupational Health",
    "Operations Research",
    "Planning & Development",
    "Political Science",
    "Science & Technology",
    "Social Sciences",
    "Sociology",
    "Statistics & Probability",
    "Transportation",
    "Urban Studies",
    "Engineering",
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },
    #[error("invalid subject registry: {0}")]
    Registry(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CorpusError {
    fn parse(line: u64, message: impl Into<String>) -> Self {
        CorpusError::Parse {
            line,
            message: message.into(),
        }
    }

    fn validation(line: u64, message: impl Into<String>) -> Self {
        CorpusError::Validation {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn from_csv(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(io) => CorpusError::Io(io),
            kind => CorpusError::parse(line, format!("{kind:?}")),
        }
    }
}

/// Code of a secondary subject, `1..=29` in the standard registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubjectId(u8);

impl SubjectId {
    pub const MAX: u8 = 29;

    /// Returns `None` for `0` (the empty-slot sentinel) and codes above 29.
    pub fn new(code: u8) -> Option<Self> {
        (1..=Self::MAX).contains(&code).then_some(SubjectId(code))
    }

    pub fn code(self) -> u8 {
        self.0
    }
}

impl fmt::Display for SubjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The code to name table of secondary subjects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectRegistry {
    entries: Vec<(SubjectId, String)>,
    by_name: HashMap<String, SubjectId>,
}

impl SubjectRegistry {
    /// The 29 secondary subjects found alongside Economics.
    pub fn standard() -> Self {
        let entries = STANDARD_SUBJECTS
            .iter()
            .enumerate()
            .map(|(i, name)| (i as u8 + 1, name.to_string()))
            .collect();
        Self::from_entries(entries).expect("standard registry is well formed")
    }

    /// Builds a registry, requiring codes `1..=n` without gaps and unique names.
    pub fn from_entries(mut entries: Vec<(u8, String)>) -> Result<Self, CorpusError> {
        entries.sort_by_key(|(code, _)| *code);
        if entries.len() != SubjectId::MAX as usize {
            return Err(CorpusError::Registry(format!(
                "expected {} entries, got {}",
                SubjectId::MAX,
                entries.len()
            )));
        }
        let mut by_name = HashMap::new();
        let mut out = Vec::with_capacity(entries.len());
        for (expected, (code, name)) in (1u8..).zip(entries) {
            if code != expected {
                return Err(CorpusError::Registry(format!(
                    "codes must run 1..={} without gaps (found {code} where {expected} was expected)",
                    SubjectId::MAX
                )));
            }
            let id = SubjectId(code);
            if by_name.insert(normalize_subject(&name), id).is_some() {
                return Err(CorpusError::Registry(format!("duplicate name {name:?}")));
            }
            out.push((id, name));
        }
        Ok(SubjectRegistry {
            entries: out,
            by_name,
        })
    }

    pub fn name(&self, id: SubjectId) -> &str {
        &self.entries[id.code() as usize - 1].1
    }

    /// Case-insensitive, whitespace-normalized lookup.
    pub fn lookup(&self, name: &str) -> Option<SubjectId> {
        self.by_name.get(&normalize_subject(name)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubjectId, &str)> {
        self.entries.iter().map(|(id, name)| (*id, name.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn normalize_subject(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// One paper: identifier, year, female/male author counts and the extra
/// subject slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    pub id: String,
    pub year: u16,
    pub female: u32,
    pub male: u32,
    slots: [Option<SubjectId>; SLOTS],
}

impl PaperRecord {
    /// Validates author counts, year range and subject distinctness.
    pub fn new(
        id: impl Into<String>,
        year: u16,
        female: u32,
        male: u32,
        slots: [Option<SubjectId>; SLOTS],
    ) -> Result<Self, String> {
        if female + male == 0 {
            return Err("paper has no authors (w + m = 0)".into());
        }
        if !YEARS.contains(&year) {
            return Err(format!(
                "year {year} outside {}..={}",
                YEARS.start(),
                YEARS.end()
            ));
        }
        let mut seen = HashSet::new();
        for id in slots.iter().flatten() {
            if !seen.insert(*id) {
                return Err(format!("subject {id} repeated in one paper"));
            }
        }
        Ok(PaperRecord {
            id: id.into(),
            year,
            female,
            male,
            slots,
        })
    }

    /// Packs the given subjects into the leading slots.
    pub fn with_subjects(
        id: impl Into<String>,
        year: u16,
        female: u32,
        male: u32,
        subjects: &[SubjectId],
    ) -> Result<Self, String> {
        if subjects.len() > SLOTS {
            return Err(format!(
                "{} extra subjects exceed the {SLOTS} available slots",
                subjects.len()
            ));
        }
        let mut slots = [None; SLOTS];
        for (slot, s) in slots.iter_mut().zip(subjects) {
            *slot = Some(*s);
        }
        Self::new(id, year, female, male, slots)
    }

    pub fn slots(&self) -> &[Option<SubjectId>; SLOTS] {
        &self.slots
    }

    /// Extra subjects in slot order.
    pub fn extras(&self) -> impl Iterator<Item = SubjectId> + '_ {
        self.slots.iter().flatten().copied()
    }

    pub fn extra_count(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn has_extra(&self, id: SubjectId) -> bool {
        self.slots.contains(&Some(id))
    }

    pub fn authors(&self) -> u32 {
        self.female + self.male
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<PaperRecord>,
}

impl Corpus {
    /// Fails on duplicate record ids.
    pub fn new(records: Vec<PaperRecord>) -> Result<Self, CorpusError> {
        let mut ids = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if !ids.insert(r.id.as_str()) {
                return Err(CorpusError::validation(
                    i as u64 + 2,
                    format!("duplicate record id {:?}", r.id),
                ));
            }
        }
        Ok(Corpus { records })
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<(), CorpusError> {
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != expected {
        return Err(CorpusError::parse(
            1,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                found.join(",")
            ),
        ));
    }
    Ok(())
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input)
}

/// Parses a corpus file. Line numbers in errors count the header as line 1.
pub fn parse_corpus<R: Read>(input: R, registry: &SubjectRegistry) -> Result<Corpus, CorpusError> {
    let mut rdr = reader(input);
    check_header(
        rdr.headers().map_err(CorpusError::from_csv)?,
        &CORPUS_HEADER,
    )?;

    let mut records = Vec::new();
    let mut ids: HashMap<String, u64> = HashMap::new();
    for row in rdr.records() {
        let row = row.map_err(CorpusError::from_csv)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != CORPUS_HEADER.len() {
            return Err(CorpusError::parse(
                line,
                format!(
                    "expected {} fields, found {}",
                    CORPUS_HEADER.len(),
                    row.len()
                ),
            ));
        }
        let int = |idx: usize| -> Result<u32, CorpusError> {
            let raw = row[idx].trim();
            raw.parse::<u32>().map_err(|_| {
                CorpusError::parse(
                    line,
                    format!(
                        "column {} is not a non-negative integer: {raw:?}",
                        CORPUS_HEADER[idx]
                    ),
                )
            })
        };
        let id = row[0].trim().to_string();
        if id.is_empty() {
            return Err(CorpusError::parse(line, "empty record id"));
        }
        let year = u16::try_from(int(1)?)
            .map_err(|_| CorpusError::validation(line, "year out of range"))?;
        let female = int(2)?;
        let male = int(3)?;

        let mut slots = [None; SLOTS];
        for (k, slot) in slots.iter_mut().enumerate() {
            let code = int(4 + k)?;
            if code == 0 {
                continue;
            }
            let sid = u8::try_from(code)
                .ok()
                .and_then(SubjectId::new)
                .filter(|s| (s.code() as usize) <= registry.len())
                .ok_or_else(|| {
                    CorpusError::validation(
                        line,
                        format!("subject code {code} outside 0..={}", registry.len()),
                    )
                })?;
            *slot = Some(sid);
        }
        let record = PaperRecord::new(id, year, female, male, slots)
            .map_err(|msg| CorpusError::validation(line, msg))?;
        if let Some(prev) = ids.insert(record.id.clone(), line) {
            return Err(CorpusError::validation(
                line,
                format!(
                    "duplicate record id {:?} (first seen on line {prev})",
                    record.id
                ),
            ));
        }
        records.push(record);
    }
    Ok(Corpus { records })
}

/// Writes the corpus in the same encoding [`parse_corpus`] reads.
pub fn write_corpus<W: Write>(corpus: &Corpus, out: W) -> Result<(), CorpusError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(CORPUS_HEADER)
        .map_err(CorpusError::from_csv)?;
    for r in &corpus.records {
        let mut row = vec![
            r.id.clone(),
            r.year.to_string(),
            r.female.to_string(),
            r.male.to_string(),
        ];
        row.extend(
            r.slots
                .iter()
                .map(|s| s.map_or(0, SubjectId::code).to_string()),
        );
        wtr.write_record(&row).map_err(CorpusError::from_csv)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Tally of author genders resolved through a lexicon.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenderCounts {
    pub female: u32,
    pub male: u32,
    pub unknown: u32,
}

/// Looks up the first given name of every author.
pub fn infer_gender_counts<S: AsRef<str>>(names: &[S], lexicon: &GenderLexicon) -> GenderCounts {
    use crate::lexicon::Gender;

    let mut counts = GenderCounts::default();
    for name in names {
        match lexicon.first_name_gender(name.as_ref()) {
            Some(Gender::Female) => counts.female += 1,
            Some(Gender::Male) => counts.male += 1,
            None => counts.unknown += 1,
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    UnknownGender(Vec<String>),
    UnknownSubject(Vec<String>),
    NoAuthors,
    InvalidYear(String),
    DuplicateSubject(String),
    TooManySubjects(usize),
    DuplicateId,
}

impl RejectReason {
    /// Short machine-friendly category of the reason.
    pub fn kind(&self) -> &'static str {
        match self {
            RejectReason::UnknownGender(_) => "unknown gender",
            RejectReason::UnknownSubject(_) => "unknown subject",
            RejectReason::NoAuthors => "no authors",
            RejectReason::InvalidYear(_) => "invalid year",
            RejectReason::DuplicateSubject(_) => "duplicate subject",
            RejectReason::TooManySubjects(_) => "too many subjects",
            RejectReason::DuplicateId => "duplicate id",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::UnknownGender(names) | RejectReason::UnknownSubject(names) => {
                write!(f, "{}: {}", self.kind(), names.join(";"))
            }
            RejectReason::InvalidYear(y) => write!(f, "{}: {y}", self.kind()),
            RejectReason::DuplicateSubject(s) => write!(f, "{}: {s}", self.kind()),
            RejectReason::TooManySubjects(n) => write!(f, "{}: {n} > {SLOTS}", self.kind()),
            RejectReason::NoAuthors | RejectReason::DuplicateId => f.write_str(self.kind()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub line: u64,
    pub id: String,
    pub reason: RejectReason,
}

fn split_multi(field: &str) -> Vec<&str> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Converts raw `id,year,authors,subjects` rows into a corpus.
///
/// Rows that cannot be encoded (unknown author gender, unknown subject name,
/// and so on) are returned as rejects instead of aborting; only malformed
/// CSV aborts the whole stream.
pub fn ingest_raw<R: Read>(
    input: R,
    lexicon: &GenderLexicon,
    registry: &SubjectRegistry,
) -> Result<(Corpus, Vec<Reject>), CorpusError> {
    let mut rdr = reader(input);
    check_header(rdr.headers().map_err(CorpusError::from_csv)?, &RAW_HEADER)?;

    let mut records = Vec::new();
    let mut rejects = Vec::new();
    let mut ids = BTreeMap::new();
    for row in rdr.records() {
        let row = row.map_err(CorpusError::from_csv)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != RAW_HEADER.len() {
            return Err(CorpusError::parse(
                line,
                format!("expected {} fields, found {}", RAW_HEADER.len(), row.len()),
            ));
        }
        let id = row[0].trim().to_string();
        let mut reject = |reason| {
            rejects.push(Reject {
                line,
                id: id.clone(),
                reason,
            })
        };

        let year = match row[1].trim().parse::<u16>() {
            Ok(y) if YEARS.contains(&y) => y,
            _ => {
                reject(RejectReason::InvalidYear(row[1].trim().to_string()));
                continue;
            }
        };

        let authors = split_multi(&row[2]);
        if authors.is_empty() {
            reject(RejectReason::NoAuthors);
            continue;
        }
        let unknown: Vec<String> = authors
            .iter()
            .filter(|a| lexicon.first_name_gender(a).is_none())
            .map(|a| a.to_string())
            .collect();
        if !unknown.is_empty() {
            reject(RejectReason::UnknownGender(unknown));
            continue;
        }
        let counts = infer_gender_counts(&authors, lexicon);

        let names = split_multi(&row[3]);
        let unresolved: Vec<String> = names
            .iter()
            .filter(|n| registry.lookup(n).is_none())
            .map(|n| n.to_string())
            .collect();
        if !unresolved.is_empty() {
            reject(RejectReason::UnknownSubject(unresolved));
            continue;
        }
        let subjects: Vec<SubjectId> = names.iter().filter_map(|n| registry.lookup(n)).collect();
        if let Some(dup) = subjects
            .iter()
            .enumerate()
            .find(|(i, s)| subjects[..*i].contains(s))
        {
            reject(RejectReason::DuplicateSubject(
                registry.name(*dup.1).to_string(),
            ));
            continue;
        }
        if subjects.len() > SLOTS {
            reject(RejectReason::TooManySubjects(subjects.len()));
            continue;
        }
        if ids.contains_key(&id) {
            reject(RejectReason::DuplicateId);
            continue;
        }
        let record =
            PaperRecord::with_subjects(id.clone(), year, counts.female, counts.male, &subjects)
                .map_err(|msg| CorpusError::validation(line, msg))?;
        ids.insert(id, line);
        records.push(record);
    }
    Ok((Corpus { records }, rejects))
}

/// Writes rejects as `line,id,reason`.
pub fn write_rejects<W: Write>(rejects: &[Reject], out: W) -> Result<(), CorpusError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["line", "id", "reason"])
        .map_err(CorpusError::from_csv)?;
    for r in rejects {
        wtr.write_record([r.line.to_string(), r.id.clone(), r.reason.to_string()])
            .map_err(CorpusError::from_csv)?;
    }
    wtr.flush()?;
    Ok(())
}
