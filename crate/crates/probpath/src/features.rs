//! Classification features from language-constrained reachability, and the
//! direct query-based classifier.
//!
//! A [`LanguageSet`] is a named list of pattern families, each optionally
//! containing the `r?` rating placeholder, together with a list of rating
//! classes. Expanding every family with every class yields one acceptor per
//! (family, class) combination; the estimated probability that a node pair
//! is connected by a simple path in each of those languages becomes one
//! feature column, so a set with `m` families over `c` classes produces
//! `m · c` features, each in `[0, 1]`.
//!
//! The query classifier skips learning entirely: it expands one family over
//! the classes, estimates each class's language probability for the pair,
//! and returns the argmax (ties toward the smaller class; all-zero estimates
//! abstain).

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path as FsPath;

use thiserror::Error;

use crate::graph::{NodeId, ProbabilisticGraph};
use crate::infer::{estimate_batch, InferError};
use crate::pattern::{parse_pattern, Acceptor, Pattern, PatternError};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("language set has no families")]
    EmptyFamilies,
    #[error("duplicate family name {0}")]
    DuplicateFamily(String),
    #[error("class list must be non-empty and strictly increasing")]
    BadClasses,
    #[error("pair {pair}: node {node} is not in the graph")]
    UnknownNode { pair: String, node: String },
    #[error("feature table has no columns")]
    NoColumns,
    #[error("row {row} has {got} values, expected {expected}")]
    RowWidth { row: usize, expected: usize, got: usize },
    #[error("row {row}: feature value {value} outside [0, 1]")]
    ValueRange { row: usize, value: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The five rating classes used by the built-in feature sets.
pub const DEFAULT_CLASSES: [u8; 5] = [1, 2, 3, 4, 5];

const F1_FAMILIES: [(&str, &str); 5] = [
    ("L1", "simU.r?"),
    ("L2", "r?.simI"),
    ("L3", "r?.simI{1,2}"),
    ("L4", "simU{1,2}.r?"),
    ("L5", "simU{1,2}.r? | r?.simI{1,2}"),
];

const F2_FAMILIES: [(&str, &str); 7] = [
    ("L3", "r?.simI{1,2}"),
    ("L4", "simU{1,2}.r?"),
    ("L5", "simU{1,2}.r? | r?.simI{1,2}"),
    ("L6", "r?.simI{1,3}"),
    ("L7", "simU{1,3}.r?"),
    ("L8", "simU{1,3}.r? | r?.simI{1,3}"),
    ("L9", "simU{1,4}.r? | r?.simI{1,4}"),
];

/// Named pattern families plus the rating classes they expand over.
///
/// Acceptors are compiled eagerly, family-major: the acceptor (and feature
/// column) at index `f · |classes| + c` is family `f` expanded with the
/// `c`-th class.
#[derive(Debug, Clone)]
pub struct LanguageSet {
    names: Vec<String>,
    families: Vec<Pattern>,
    classes: Vec<u8>,
    acceptors: Vec<Acceptor>,
}

impl LanguageSet {
    pub fn new(families: &[(&str, &str)], classes: &[u8]) -> Result<Self, FeatureError> {
        if families.is_empty() {
            return Err(FeatureError::EmptyFamilies);
        }
        if classes.is_empty() || classes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FeatureError::BadClasses);
        }
        let mut names = Vec::with_capacity(families.len());
        let mut patterns = Vec::with_capacity(families.len());
        for &(name, text) in families {
            if names.iter().any(|n| n == name) {
                return Err(FeatureError::DuplicateFamily(name.to_string()));
            }
            names.push(name.to_string());
            patterns.push(parse_pattern(text)?);
        }
        let mut acceptors = Vec::with_capacity(families.len() * classes.len());
        for pattern in &patterns {
            for &class in classes {
                acceptors.push(pattern.expand_rating(class).compile()?);
            }
        }
        Ok(Self { names, families: patterns, classes: classes.to_vec(), acceptors })
    }

    /// The 5-family set {L1..L5}: 25 features over the rating classes.
    pub fn f1() -> Self {
        Self::new(&F1_FAMILIES, &DEFAULT_CLASSES).expect("built-in set is valid")
    }

    /// The 7-family set {L3..L9}: 35 features over the rating classes.
    pub fn f2() -> Self {
        Self::new(&F2_FAMILIES, &DEFAULT_CLASSES).expect("built-in set is valid")
    }

    /// Looks up a built-in set by name (`F1` or `F2`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "F1" | "f1" => Some(Self::f1()),
            "F2" | "f2" => Some(Self::f2()),
            _ => None,
        }
    }

    pub fn family_names(&self) -> &[String] {
        &self.names
    }

    pub fn family(&self, name: &str) -> Option<&Pattern> {
        let idx = self.names.iter().position(|n| n == name)?;
        Some(&self.families[idx])
    }

    pub fn classes(&self) -> &[u8] {
        &self.classes
    }

    /// All compiled acceptors, family-major.
    pub fn acceptors(&self) -> &[Acceptor] {
        &self.acceptors
    }

    pub fn column_count(&self) -> usize {
        self.acceptors.len()
    }

    /// Column names `family:rclass`, in acceptor order.
    pub fn column_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.column_count());
        for name in &self.names {
            for &class in &self.classes {
                out.push(format!("{name}:r{class}"));
            }
        }
        out
    }
}

/// One labeled feature vector: the pair's display id, the per-language
/// probabilities, and the observed rating class.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub pair: String,
    pub x: Vec<f64>,
    pub y: u8,
}

/// A labeled feature matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    columns: Vec<String>,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn new(columns: Vec<String>, rows: Vec<FeatureRow>) -> Result<Self, FeatureError> {
        if columns.is_empty() {
            return Err(FeatureError::NoColumns);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.x.len() != columns.len() {
                return Err(FeatureError::RowWidth {
                    row: i,
                    expected: columns.len(),
                    got: row.x.len(),
                });
            }
            for &v in &row.x {
                if !(0.0..=1.0).contains(&v) {
                    return Err(FeatureError::ValueRange { row: i, value: v });
                }
            }
        }
        Ok(Self { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The rows as `(features, labels)` ready for training.
    pub fn training_data(&self) -> (Vec<Vec<f64>>, Vec<u8>) {
        let xs = self.rows.iter().map(|r| r.x.clone()).collect();
        let ys = self.rows.iter().map(|r| r.y).collect();
        (xs, ys)
    }

    /// Writes the table as TSV: header `pair`, `y`, then one column per
    /// language; values at 6 decimal places.
    pub fn save<W: Write>(&self, mut w: W) -> Result<(), FeatureError> {
        write!(w, "pair\ty")?;
        for col in &self.columns {
            write!(w, "\t{col}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(w, "{}\t{}", row.pair, row.y)?;
            for v in &row.x {
                write!(w, "\t{v:.6}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save_to_path<P: AsRef<FsPath>>(&self, path: P) -> Result<(), FeatureError> {
        let file = File::create(path)?;
        let mut w = BufWriter::new(file);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<Self, FeatureError> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(FeatureError::Parse { line: 1, message: "missing header".into() })?;
        let header = header?;
        let mut fields = header.split('\t');
        if fields.next() != Some("pair") || fields.next() != Some("y") {
            return Err(FeatureError::Parse {
                line: 1,
                message: "header must start with pair<TAB>y".into(),
            });
        }
        let columns: Vec<String> = fields.map(str::to_string).collect();
        if columns.is_empty() {
            return Err(FeatureError::NoColumns);
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            let lineno = lineno + 1;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let pair = fields
                .next()
                .filter(|p| !p.is_empty())
                .ok_or_else(|| FeatureError::Parse { line: lineno, message: "missing pair".into() })?
                .to_string();
            let y: u8 = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| FeatureError::Parse { line: lineno, message: "bad label".into() })?;
            let x: Vec<f64> = fields
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| FeatureError::Parse { line: lineno, message: "bad value".into() })?;
            if x.len() != columns.len() {
                return Err(FeatureError::Parse {
                    line: lineno,
                    message: format!("expected {} values, got {}", columns.len(), x.len()),
                });
            }
            rows.push(FeatureRow { pair, x, y });
        }
        Self::new(columns, rows)
    }

    pub fn load_from_path<P: AsRef<FsPath>>(path: P) -> Result<Self, FeatureError> {
        let file = File::open(path)?;
        Self::load(BufReader::new(file))
    }
}

/// Estimates every language probability for every labeled pair, yielding
/// one feature row per pair in input order.
///
/// Each pair's worlds are sampled from a seed derived from the pair's node
/// identifiers, so feature values do not depend on batch order or on how the
/// work is scheduled across threads.
pub fn extract_features(
    graph: &ProbabilisticGraph,
    pairs: &[(String, String, u8)],
    languages: &LanguageSet,
    samples: usize,
    seed: u64,
) -> Result<FeatureTable, FeatureError> {
    let mut node_pairs = Vec::with_capacity(pairs.len());
    for (src, tgt, _) in pairs {
        let resolve = |name: &str| -> Result<NodeId, FeatureError> {
            graph.node_id(name).ok_or_else(|| FeatureError::UnknownNode {
                pair: format!("{src}:{tgt}"),
                node: name.to_string(),
            })
        };
        node_pairs.push((resolve(src)?, resolve(tgt)?));
    }
    let estimates = estimate_batch(graph, &node_pairs, languages.acceptors(), samples, seed)?;
    let rows = pairs
        .iter()
        .zip(estimates)
        .map(|((src, tgt, y), est)| FeatureRow {
            pair: format!("{src}:{tgt}"),
            x: est.probabilities,
            y: *y,
        })
        .collect();
    FeatureTable::new(languages.column_names(), rows)
}

/// The outcome of the query classifier: a rating class, or an abstention
/// when every class's estimate is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryOutcome {
    Class(u8),
    Abstain,
}

/// The class whose estimate is largest; ties break toward the smaller class
/// label, and all-zero estimates abstain. Scaling every estimate by the same
/// positive constant cannot change the outcome.
pub fn argmax_class(estimates: &[f64], classes: &[u8]) -> QueryOutcome {
    assert_eq!(estimates.len(), classes.len());
    let mut best: Option<(f64, u8)> = None;
    for (&est, &class) in estimates.iter().zip(classes) {
        let better = match best {
            None => true,
            Some((b_est, b_class)) => est > b_est || (est == b_est && class < b_class),
        };
        if better {
            best = Some((est, class));
        }
    }
    match best {
        Some((est, _)) if est == 0.0 => QueryOutcome::Abstain,
        Some((_, class)) => QueryOutcome::Class(class),
        None => QueryOutcome::Abstain,
    }
}

/// Classifies a pair by expanding one family over the classes and taking the
/// argmax of the estimated language probabilities.
pub fn classify_by_query(
    graph: &ProbabilisticGraph,
    source: &str,
    target: &str,
    family: &str,
    classes: &[u8],
    samples: usize,
    seed: u64,
) -> Result<QueryOutcome, FeatureError> {
    if classes.is_empty() || classes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FeatureError::BadClasses);
    }
    let pattern = parse_pattern(family)?;
    let acceptors: Vec<Acceptor> = classes
        .iter()
        .map(|&c| pattern.expand_rating(c).compile())
        .collect::<Result<_, _>>()?;
    let resolve = |name: &str| -> Result<NodeId, FeatureError> {
        graph.node_id(name).ok_or_else(|| FeatureError::UnknownNode {
            pair: format!("{source}:{target}"),
            node: name.to_string(),
        })
    };
    let pair = (resolve(source)?, resolve(target)?);
    let estimates = estimate_batch(graph, &[pair], &acceptors, samples, seed)?;
    Ok(argmax_class(&estimates[0].probabilities, classes))
}
