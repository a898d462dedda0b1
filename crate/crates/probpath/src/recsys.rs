//! Recommender graph construction from observed ratings.
//!
//! A [`RatingsTable`] holds `(user, item, rating)` triples with ratings in
//! `1..=5` and the derived indexes similarity needs: items per user, raters
//! per item, per-user mean rating, per-item rating histogram.
//!
//! [`build_graph`] turns a table into a probabilistic graph:
//!
//! * one `user`-labeled node per user (id `u<key>`), one `item`-labeled node
//!   per item (id `i<key>`);
//! * a probability-1 edge labeled `r<rating>` per triple;
//! * `simU` edges from each user to its top-k most similar users, with
//!   probability = Pearson correlation over co-rated items (global user
//!   means) × Jaccard overlap of the rated-item sets;
//! * `simI` edges from each item to its top-k most similar items, with
//!   probability = Pearson correlation of the two 5-bin rating histograms ×
//!   Jaccard overlap of the rater sets.
//!
//! Pairs whose similarity is undefined (zero variance) or whose product is
//! not strictly positive get no edge: an existence probability must lie in
//! (0, 1]. Ranking ties break toward the lexicographically smaller node id,
//! and an edge selected from either endpoint's ranking is inserted once, so
//! rebuilding from the same table is bit-identical regardless of thread
//! count.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path as FsPath;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, ProbabilisticGraph};

/// The rating classes.
pub const RATING_CLASSES: [u8; 5] = [1, 2, 3, 4, 5];

#[derive(Debug, Error)]
pub enum RecsysError {
    #[error("rating {0} out of range (expected 1..=5)")]
    RatingOutOfRange(i64),
    #[error("duplicate rating for user `{user}` and item `{item}`")]
    DuplicateRating { user: String, item: String },
    #[error("unknown user `{0}`")]
    UnknownUser(String),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("invalid key `{0}`: must be non-empty and contain no whitespace")]
    InvalidKey(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Graph node id for a user key.
pub fn user_node_id(user: &str) -> String {
    format!("u{user}")
}

/// Graph node id for an item key.
pub fn item_node_id(item: &str) -> String {
    format!("i{item}")
}

/// Observed ratings with the indexes similarity computations need.
#[derive(Debug, Clone, Default)]
pub struct RatingsTable {
    users: Vec<String>,
    items: Vec<String>,
    user_index: HashMap<String, u32>,
    item_index: HashMap<String, u32>,
    /// Per user: `(item index, rating)` sorted by item index.
    by_user: Vec<Vec<(u32, u8)>>,
    /// Per item: `(user index, rating)` sorted by user index.
    by_item: Vec<Vec<(u32, u8)>>,
    len: usize,
}

impl RatingsTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern_user(&mut self, user: &str) -> Result<u32, RecsysError> {
        check_key(user)?;
        if let Some(&u) = self.user_index.get(user) {
            return Ok(u);
        }
        let u = self.users.len() as u32;
        self.users.push(user.to_string());
        self.user_index.insert(user.to_string(), u);
        self.by_user.push(Vec::new());
        Ok(u)
    }

    fn intern_item(&mut self, item: &str) -> Result<u32, RecsysError> {
        check_key(item)?;
        if let Some(&i) = self.item_index.get(item) {
            return Ok(i);
        }
        let i = self.items.len() as u32;
        self.items.push(item.to_string());
        self.item_index.insert(item.to_string(), i);
        self.by_item.push(Vec::new());
        Ok(i)
    }

    /// Records one rating triple.
    pub fn add(&mut self, user: &str, item: &str, rating: u8) -> Result<(), RecsysError> {
        if !(1..=5).contains(&rating) {
            return Err(RecsysError::RatingOutOfRange(i64::from(rating)));
        }
        let u = self.intern_user(user)?;
        let i = self.intern_item(item)?;
        let row = &mut self.by_user[u as usize];
        let pos = match row.binary_search_by_key(&i, |&(it, _)| it) {
            Ok(_) => {
                return Err(RecsysError::DuplicateRating {
                    user: user.to_string(),
                    item: item.to_string(),
                })
            }
            Err(p) => p,
        };
        row.insert(pos, (i, rating));
        let col = &mut self.by_item[i as usize];
        let pos = col.binary_search_by_key(&u, |&(us, _)| us).unwrap_err();
        col.insert(pos, (u, rating));
        self.len += 1;
        Ok(())
    }

    /// Number of rating triples.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn user_pos(&self, user: &str) -> Option<usize> {
        self.user_index.get(user).map(|&u| u as usize)
    }

    pub fn item_pos(&self, item: &str) -> Option<usize> {
        self.item_index.get(item).map(|&i| i as usize)
    }

    /// `(item index, rating)` pairs for one user, sorted by item index.
    pub fn items_of(&self, user: usize) -> &[(u32, u8)] {
        &self.by_user[user]
    }

    /// `(user index, rating)` pairs for one item, sorted by user index.
    pub fn raters_of(&self, item: usize) -> &[(u32, u8)] {
        &self.by_item[item]
    }

    pub fn rating(&self, user: usize, item: usize) -> Option<u8> {
        let row = &self.by_user[user];
        row.binary_search_by_key(&(item as u32), |&(i, _)| i)
            .ok()
            .map(|p| row[p].1)
    }

    /// Mean rating of a user over everything they rated.
    pub fn user_mean(&self, user: usize) -> f64 {
        let row = &self.by_user[user];
        let sum: u32 = row.iter().map(|&(_, r)| u32::from(r)).sum();
        sum as f64 / row.len() as f64
    }

    /// Count of each rating value `1..=5` given to an item.
    pub fn item_histogram(&self, item: usize) -> [u32; 5] {
        let mut hist = [0u32; 5];
        for &(_, r) in &self.by_item[item] {
            hist[usize::from(r) - 1] += 1;
        }
        hist
    }

    /// Count of each rating value `1..=5` over the whole table.
    pub fn class_counts(&self) -> [u64; 5] {
        let mut counts = [0u64; 5];
        for row in &self.by_user {
            for &(_, r) in row {
                counts[usize::from(r) - 1] += 1;
            }
        }
        counts
    }

    /// All triples in user-then-item index order.
    pub fn triples(&self) -> impl Iterator<Item = (&str, &str, u8)> + '_ {
        self.by_user.iter().enumerate().flat_map(move |(u, row)| {
            row.iter().map(move |&(i, r)| {
                (self.users[u].as_str(), self.items[i as usize].as_str(), r)
            })
        })
    }

    /// Parses ratings in the tab-separated `user item rating [timestamp]`
    /// format; the timestamp, when present, is ignored.
    pub fn load<R: BufRead>(r: R) -> Result<Self, RecsysError> {
        let mut table = Self::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').collect();
            let fail = |message: String| RecsysError::Parse { line: lineno, message };
            if fields.len() != 3 && fields.len() != 4 {
                return Err(fail(format!(
                    "expected `user<TAB>item<TAB>rating[<TAB>timestamp]`, got {} fields",
                    fields.len()
                )));
            }
            let rating: i64 = fields[2]
                .parse()
                .map_err(|_| fail(format!("bad rating `{}`", fields[2])))?;
            let rating = u8::try_from(rating).map_err(|_| RecsysError::RatingOutOfRange(rating))?;
            table
                .add(fields[0], fields[1], rating)
                .map_err(|e| fail(e.to_string()))?;
        }
        Ok(table)
    }

    pub fn load_from_path<P: AsRef<FsPath>>(path: P) -> Result<Self, RecsysError> {
        let file = File::open(path)?;
        Self::load(BufReader::new(file))
    }

    /// Pearson correlation between two users' ratings over their co-rated
    /// items, centering each by that user's global mean. `None` when the
    /// co-rated set is empty or either deviation vector has zero variance.
    pub fn user_similarity(&self, u: &str, v: &str) -> Result<Option<f64>, RecsysError> {
        let u = self.user_pos(u).ok_or_else(|| RecsysError::UnknownUser(u.to_string()))?;
        let v = self.user_pos(v).ok_or_else(|| RecsysError::UnknownUser(v.to_string()))?;
        Ok(self.user_similarity_at(u, v).map(|(sim, _)| sim))
    }

    /// Pearson × Jaccard edge probability for a user pair, or `None` when
    /// co-support is below `min_cosupport`, the similarity is undefined, or
    /// the product is not strictly positive.
    pub fn user_edge_probability(
        &self,
        u: &str,
        v: &str,
        min_cosupport: usize,
    ) -> Result<Option<f64>, RecsysError> {
        let ui = self.user_pos(u).ok_or_else(|| RecsysError::UnknownUser(u.to_string()))?;
        let vi = self.user_pos(v).ok_or_else(|| RecsysError::UnknownUser(v.to_string()))?;
        Ok(self.user_edge_probability_at(ui, vi, min_cosupport))
    }

    fn user_similarity_at(&self, u: usize, v: usize) -> Option<(f64, usize)> {
        let mean_u = self.user_mean(u);
        let mean_v = self.user_mean(v);
        let mut s_uv = 0.0;
        let mut s_uu = 0.0;
        let mut s_vv = 0.0;
        let mut co = 0usize;
        let (mut a, mut b) = (self.by_user[u].iter(), self.by_user[v].iter());
        let (mut na, mut nb) = (a.next(), b.next());
        while let (Some(&(ia, ra)), Some(&(ib, rb))) = (na, nb) {
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => na = a.next(),
                std::cmp::Ordering::Greater => nb = b.next(),
                std::cmp::Ordering::Equal => {
                    let du = f64::from(ra) - mean_u;
                    let dv = f64::from(rb) - mean_v;
                    s_uv += du * dv;
                    s_uu += du * du;
                    s_vv += dv * dv;
                    co += 1;
                    na = a.next();
                    nb = b.next();
                }
            }
        }
        if co == 0 || s_uu == 0.0 || s_vv == 0.0 {
            return None;
        }
        Some((s_uv / (s_uu * s_vv).sqrt(), co))
    }

    fn user_edge_probability_at(&self, u: usize, v: usize, min_cosupport: usize) -> Option<f64> {
        let (sim, co) = self.user_similarity_at(u, v)?;
        if co < min_cosupport {
            return None;
        }
        let union = self.by_user[u].len() + self.by_user[v].len() - co;
        let prob = sim * co as f64 / union as f64;
        if prob > 0.0 {
            Some(prob)
        } else {
            None
        }
    }

    /// Pearson correlation between two items' 5-bin rating histograms.
    pub fn item_similarity(&self, i: &str, j: &str) -> Result<Option<f64>, RecsysError> {
        let i = self.item_pos(i).ok_or_else(|| RecsysError::UnknownItem(i.to_string()))?;
        let j = self.item_pos(j).ok_or_else(|| RecsysError::UnknownItem(j.to_string()))?;
        Ok(histogram_pearson(&self.item_histogram(i), &self.item_histogram(j)))
    }

    /// Histogram Pearson × rater-set Jaccard for an item pair, with the same
    /// `None` rules as [`Self::user_edge_probability`].
    pub fn item_edge_probability(
        &self,
        i: &str,
        j: &str,
        min_cosupport: usize,
    ) -> Result<Option<f64>, RecsysError> {
        let ii = self.item_pos(i).ok_or_else(|| RecsysError::UnknownItem(i.to_string()))?;
        let ji = self.item_pos(j).ok_or_else(|| RecsysError::UnknownItem(j.to_string()))?;
        Ok(self.item_edge_probability_at(ii, ji, min_cosupport))
    }

    fn item_corater_count(&self, i: usize, j: usize) -> usize {
        let (mut a, mut b) = (self.by_item[i].iter(), self.by_item[j].iter());
        let (mut na, mut nb) = (a.next(), b.next());
        let mut co = 0;
        while let (Some(&(ua, _)), Some(&(ub, _))) = (na, nb) {
            match ua.cmp(&ub) {
                std::cmp::Ordering::Less => na = a.next(),
                std::cmp::Ordering::Greater => nb = b.next(),
                std::cmp::Ordering::Equal => {
                    co += 1;
                    na = a.next();
                    nb = b.next();
                }
            }
        }
        co
    }

    fn item_edge_probability_at(&self, i: usize, j: usize, min_cosupport: usize) -> Option<f64> {
        let co = self.item_corater_count(i, j);
        if co < min_cosupport {
            return None;
        }
        let sim = histogram_pearson(&self.item_histogram(i), &self.item_histogram(j))?;
        let union = self.by_item[i].len() + self.by_item[j].len() - co;
        let prob = sim * co as f64 / union as f64;
        if prob > 0.0 {
            Some(prob)
        } else {
            None
        }
    }
}

fn check_key(key: &str) -> Result<(), RecsysError> {
    if key.is_empty() || key.chars().any(char::is_whitespace) {
        return Err(RecsysError::InvalidKey(key.to_string()));
    }
    Ok(())
}

/// Pearson correlation between two 5-bin count vectors; `None` when either
/// histogram is constant (zero variance).
pub fn histogram_pearson(a: &[u32; 5], b: &[u32; 5]) -> Option<f64> {
    let mean_a = a.iter().sum::<u32>() as f64 / 5.0;
    let mean_b = b.iter().sum::<u32>() as f64 / 5.0;
    let mut s_ab = 0.0;
    let mut s_aa = 0.0;
    let mut s_bb = 0.0;
    for k in 0..5 {
        let da = f64::from(a[k]) - mean_a;
        let db = f64::from(b[k]) - mean_b;
        s_ab += da * db;
        s_aa += da * da;
        s_bb += db * db;
    }
    if s_aa == 0.0 || s_bb == 0.0 {
        return None;
    }
    Some(s_ab / (s_aa * s_bb).sqrt())
}

/// Neighbor-selection parameters for [`build_graph`].
#[derive(Debug, Clone, Copy)]
pub struct GraphBuildConfig {
    /// Similar neighbors to link per node.
    pub k: usize,
    /// Minimum co-rated items (users) or co-raters (items) for a sim edge.
    pub min_cosupport: usize,
}

impl Default for GraphBuildConfig {
    fn default() -> Self {
        Self { k: 30, min_cosupport: 2 }
    }
}

/// Builds the recommender probabilistic graph for a ratings table.
pub fn build_graph(
    ratings: &RatingsTable,
    config: &GraphBuildConfig,
) -> Result<ProbabilisticGraph, RecsysError> {
    if config.k == 0 {
        return Err(RecsysError::InvalidConfig("neighbor count k must be at least 1".into()));
    }
    if ratings.is_empty() {
        return Err(RecsysError::InvalidConfig("ratings table is empty".into()));
    }
    let mut graph = ProbabilisticGraph::new();
    for user in ratings.users() {
        graph.add_node(&user_node_id(user), "user")?;
    }
    for item in ratings.items() {
        graph.add_node(&item_node_id(item), "item")?;
    }
    for (user, item, rating) in ratings.triples() {
        graph.add_edge(&user_node_id(user), &item_node_id(item), &format!("r{rating}"), 1.0)?;
    }

    let user_means: Vec<f64> = (0..ratings.user_count()).map(|u| ratings.user_mean(u)).collect();
    let item_hists: Vec<[u32; 5]> =
        (0..ratings.item_count()).map(|i| ratings.item_histogram(i)).collect();

    let user_rank = |u: usize| -> Vec<(f64, u32)> {
        // Accumulate similarity terms against every co-rating user in one
        // pass over u's items' rater lists.
        let mean_u = user_means[u];
        let mut acc: HashMap<u32, (f64, f64, f64, u32)> = HashMap::new();
        for &(item, ru) in ratings.items_of(u) {
            let du = f64::from(ru) - mean_u;
            for &(v, rv) in ratings.raters_of(item as usize) {
                if v as usize == u {
                    continue;
                }
                let dv = f64::from(rv) - user_means[v as usize];
                let e = acc.entry(v).or_insert((0.0, 0.0, 0.0, 0));
                e.0 += du * dv;
                e.1 += du * du;
                e.2 += dv * dv;
                e.3 += 1;
            }
        }
        let mut candidates: Vec<(f64, u32)> = acc
            .into_iter()
            .filter_map(|(v, (s_uv, s_uu, s_vv, co))| {
                if (co as usize) < config.min_cosupport || s_uu == 0.0 || s_vv == 0.0 {
                    return None;
                }
                let union = ratings.items_of(u).len() + ratings.items_of(v as usize).len()
                    - co as usize;
                let prob = s_uv / (s_uu * s_vv).sqrt() * co as f64 / union as f64;
                if prob > 0.0 {
                    Some((prob, v))
                } else {
                    None
                }
            })
            .collect();
        sort_and_truncate(&mut candidates, config.k, |v| &ratings.users()[v as usize]);
        candidates
    };

    let item_rank = |i: usize| -> Vec<(f64, u32)> {
        let mut co_counts: HashMap<u32, u32> = HashMap::new();
        for &(user, _) in ratings.raters_of(i) {
            for &(j, _) in ratings.items_of(user as usize) {
                if j as usize != i {
                    *co_counts.entry(j).or_insert(0) += 1;
                }
            }
        }
        let hist_i = &item_hists[i];
        let mut candidates: Vec<(f64, u32)> = co_counts
            .into_iter()
            .filter_map(|(j, co)| {
                if (co as usize) < config.min_cosupport {
                    return None;
                }
                let sim = histogram_pearson(hist_i, &item_hists[j as usize])?;
                let union =
                    ratings.raters_of(i).len() + ratings.raters_of(j as usize).len() - co as usize;
                let prob = sim * co as f64 / union as f64;
                if prob > 0.0 {
                    Some((prob, j))
                } else {
                    None
                }
            })
            .collect();
        sort_and_truncate(&mut candidates, config.k, |j| &ratings.items()[j as usize]);
        candidates
    };

    let user_selections: Vec<Vec<(f64, u32)>> =
        (0..ratings.user_count()).into_par_iter().map(user_rank).collect();
    let item_selections: Vec<Vec<(f64, u32)>> =
        (0..ratings.item_count()).into_par_iter().map(item_rank).collect();

    // Single-writer assembly in deterministic order; an edge picked from
    // both endpoints' rankings is inserted on first encounter only.
    let mut chosen: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
    for (u, selection) in user_selections.iter().enumerate() {
        for &(prob, v) in selection {
            let key = (u.min(v as usize) as u32, u.max(v as usize) as u32);
            if chosen.insert(key) {
                graph.add_edge(
                    &user_node_id(&ratings.users()[u]),
                    &user_node_id(&ratings.users()[v as usize]),
                    "simU",
                    prob,
                )?;
            }
        }
    }
    chosen.clear();
    for (i, selection) in item_selections.iter().enumerate() {
        for &(prob, j) in selection {
            let key = (i.min(j as usize) as u32, i.max(j as usize) as u32);
            if chosen.insert(key) {
                graph.add_edge(
                    &item_node_id(&ratings.items()[i]),
                    &item_node_id(&ratings.items()[j as usize]),
                    "simI",
                    prob,
                )?;
            }
        }
    }
    Ok(graph)
}

/// Orders candidates by probability descending, breaking ties toward the
/// lexicographically smaller key, and keeps the best `k`.
fn sort_and_truncate<'a, F>(candidates: &mut Vec<(f64, u32)>, k: usize, key_of: F)
where
    F: Fn(u32) -> &'a String,
{
    candidates.sort_by(|&(pa, va), &(pb, vb)| {
        pb.partial_cmp(&pa)
            .expect("edge probabilities are never NaN")
            .then_with(|| key_of(va).cmp(key_of(vb)))
    });
    candidates.truncate(k);
}
