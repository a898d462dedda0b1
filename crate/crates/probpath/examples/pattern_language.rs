//! The path-pattern language: parsing, compilation, and what gets accepted.
//!
//! Patterns describe sets of edge-label strings. The grammar is
//! alternation of sequences of labels with optional bounded repetition:
//! `simU{1,2}.r5 | r5.simI` reads "one or two user-similarity hops then a
//! five-star rating, or a five-star rating then an item-similarity hop".
//! The `r?` placeholder stands for a rating class to be filled in later,
//! which is how one family of patterns yields five concrete languages.
//!
//! Run with: `cargo run --example pattern_language`

use probpath::pattern::parse_pattern;

fn main() {
    let pattern = parse_pattern("simU{1,2}.r5 | r5.simI").unwrap();
    let acceptor = pattern.compile().unwrap();

    println!("pattern: {}", pattern.text());
    println!("alphabet: {:?}", acceptor.alphabet());
    println!("longest accepted string: {} labels", acceptor.max_accepted_len());
    println!();

    let candidates: [&[&str]; 6] = [
        &["simU", "r5"],
        &["simU", "simU", "r5"],
        &["r5", "simI"],
        &["r5"],
        &["simU", "r4"],
        &["simU", "simU", "simU", "r5"],
    ];
    for labels in candidates {
        println!("  accepts {:?} -> {}", labels, acceptor.accepts(labels.iter().copied()));
    }

    // Families are written once with `r?` and expanded per rating class.
    println!();
    let family = parse_pattern("simU.r?").unwrap();
    println!("family: {} (placeholder: {})", family.text(), family.has_placeholder());
    for class in 1u8..=5 {
        let concrete = family.expand_rating(class);
        let accepts_own = concrete.compile().unwrap().accepts(["simU", format!("r{class}").as_str()]);
        println!("  expanded for class {class}: {:20} accepts [simU, r{class}]: {accepts_own}", concrete.text());
    }

    // Rejected input gets a positioned error, not a mystery.
    println!();
    for bad in ["simU{3,1}", "simU..r5", "r9?"] {
        match parse_pattern(bad) {
            Ok(_) => println!("  `{bad}` parsed (unexpected)"),
            Err(e) => println!("  `{bad}` rejected: {e}"),
        }
    }
}
