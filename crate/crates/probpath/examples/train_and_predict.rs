//! Train the regularized logistic model and read its predictions back.
//!
//! Training minimizes `w·w/2 + C Σ log(1 + exp(-y w·x))` per class
//! (one-vs-rest) with a trust-region Newton method; prediction scores every
//! class and takes the argmax, smaller class first on exact ties. The model
//! serializes to a plain text file that loads back bit-for-bit.
//!
//! Run with: `cargo run --example train_and_predict`

use probpath::learn::{train_multiclass, LinearModel, TrainOptions};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() {
    // Synthetic five-class data: class k concentrates its mass on feature
    // k-1, with overlap to keep the problem honest.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..500 {
        let class = rng.random_range(1u8..=5);
        let x: Vec<f64> = (0..5)
            .map(|j| {
                let base = if j + 1 == usize::from(class) { 0.7 } else { 0.1 };
                (base + rng.random_range(-0.1..0.1f64)).clamp(0.0, 1.0)
            })
            .collect();
        rows.push(x);
        labels.push(class);
    }

    let options = TrainOptions { c: 1.0, tolerance: 1e-5, max_iter: 100 };
    let model = train_multiclass(&rows, &labels, &options).unwrap();

    println!("trained {} one-vs-rest classifiers, {} features + bias each", model.classes().len(), model.dim() - 1);
    for (i, class) in model.classes().iter().enumerate() {
        println!(
            "  class {class}: {} Newton iterations, final gradient norm {:.2e}",
            model.iterations()[i],
            model.final_grad_norms()[i]
        );
    }

    let correct = rows
        .iter()
        .zip(&labels)
        .filter(|(x, &y)| model.predict(x).unwrap().0 == y)
        .count();
    println!();
    println!("training accuracy: {correct}/{}", rows.len());

    let (class, scores) = model.predict(&[0.1, 0.1, 0.1, 0.7, 0.1]).unwrap();
    println!();
    println!("an obvious class-4 vector predicts {class}; per-class scores:");
    for (c, s) in model.classes().iter().zip(&scores) {
        println!("  class {c}: {s:+.4}");
    }

    // Round-trip through the text format.
    let mut encoded = Vec::new();
    model.save(&mut encoded).unwrap();
    let restored = LinearModel::load(&encoded[..]).unwrap();
    let same = restored.predict(&[0.1, 0.1, 0.1, 0.7, 0.1]).unwrap().0 == class;
    println!();
    println!("model file is {} bytes; reloaded model agrees: {same}", encoded.len());
}
