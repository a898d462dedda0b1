//! The whole experiment in one run: folds in, MAE table out.
//!
//! `run_experiment` walks a directory of `uN.base` / `uN.test` fold pairs
//! and, per fold: builds the probabilistic graph from the training ratings,
//! extracts path features for every training pair, trains the one-vs-rest
//! model, featurizes the test pairs, and scores macro MAE. Test pairs whose
//! user or item never appeared in training fall back to a deterministic
//! categorical draw.
//!
//! This example generates a small synthetic corpus with planted structure
//! (users and items belong to latent groups; the rating is mostly a
//! function of the two groups), so the learned model should clearly beat
//! the distribution-matching baseline.
//!
//! Run with: `cargo run --example full_pipeline`

use probpath::eval::{run_experiment, BaselinePredictor, ExperimentConfig};
use probpath::recsys::RatingsTable;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::io::Cursor;

fn synthetic_corpus(seed: u64, users: usize, items: usize, per_user: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for u in 0..users {
        let mut rated: Vec<usize> = (0..items).collect();
        rated.shuffle(&mut rng);
        rated.truncate(per_user);
        rated.sort_unstable();
        for &i in &rated {
            let planted = ((2 * (u % 5) + 3 * (i % 5)) % 5) + 1;
            let rating = if rng.random_bool(0.15) { rng.random_range(1..=5) } else { planted };
            out.push_str(&format!("{}\t{}\t{}\n", u + 1, i + 1, rating));
        }
    }
    out
}

fn main() {
    let corpus = synthetic_corpus(1, 60, 80, 20);
    let (mut train, mut test) = (String::new(), String::new());
    for (i, line) in corpus.lines().enumerate() {
        let bucket = if (i + 1) % 5 == 0 { &mut test } else { &mut train };
        bucket.push_str(line);
        bucket.push('\n');
    }

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("u1.base"), &train).unwrap();
    std::fs::write(dir.path().join("u1.test"), &test).unwrap();

    let config = ExperimentConfig {
        feature_set: "F1".to_string(),
        k: 5,
        samples: 100,
        seed: 42,
        ..ExperimentConfig::default()
    };
    println!("running fold experiment (feature set {}, k={}, n={} samples)...", config.feature_set, config.k, config.samples);
    let report = run_experiment(dir.path(), &config).unwrap();

    println!();
    print!("{}", report.to_tsv());
    println!();

    let ratings = RatingsTable::load(Cursor::new(train.as_bytes())).unwrap();
    let (_, categorical) =
        BaselinePredictor::from_counts(ratings.class_counts()).unwrap().expected_mae();
    let (_, uniform) = BaselinePredictor::uniform().expected_mae();
    println!("trained model macro MAE: {:.4}", report.macro_mean);
    println!("categorical baseline:    {categorical:.4}");
    println!("uniform baseline:        {uniform:.4}");

    let verdict = if report.macro_mean < categorical { "beats" } else { "does not beat" };
    println!();
    println!("the learned model {verdict} the strongest closed-form baseline.");
}
