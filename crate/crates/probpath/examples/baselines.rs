//! The two reference baselines every experiment must beat.
//!
//! Both predict a rating by drawing from a fixed distribution: uniform over
//! the five classes, or categorical matching the corpus's empirical rating
//! distribution. Their expected MAE against each true class has a closed
//! form, so the experiment tables get exact reference rows for free.
//!
//! Run with: `cargo run --example baselines`

use probpath::eval::BaselinePredictor;

fn print_table(name: &str, predictor: &BaselinePredictor) {
    let (per_class, macro_mae) = predictor.expected_mae();
    println!("{name}");
    println!("  p = {:?}", predictor.probs().map(|p| (p * 1e4).round() / 1e4));
    for (k, expected) in per_class.iter().enumerate() {
        let simulated = predictor.simulate_class_mae((k + 1) as u8, 200_000, 9);
        println!(
            "  true class {}: expected MAE {:.4}   simulated (200k draws) {:.4}",
            k + 1,
            expected,
            simulated
        );
    }
    println!("  macro MAE: {macro_mae:.4}");
    println!();
}

fn main() {
    print_table("uniform baseline", &BaselinePredictor::uniform());

    // The published MovieLens 100K rating histogram.
    let counts = [6_110u64, 11_370, 27_145, 34_174, 21_201];
    let categorical = BaselinePredictor::from_counts(counts).unwrap();
    print_table("categorical baseline (MovieLens 100K histogram)", &categorical);

    // Deterministic per-pair draws: evaluation never depends on the order
    // in which test pairs are scored.
    let a = categorical.predict_for("u1", "i42", 42);
    let b = categorical.predict_for("u1", "i42", 42);
    let c = categorical.predict_for("u1", "i43", 42);
    println!("pair-keyed draws: (u1, i42) -> {a}, again -> {b}, (u1, i43) -> {c}");
}
