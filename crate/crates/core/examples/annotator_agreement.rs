// Pairwise Pearson agreement between annotators and the spread of ratings.

use std::error::Error;
use std::path::Path;

use asr_intelligibility::corpus::{annotator_agreement, load_corpus, mean_rating, ratings_matrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/corpus.jsonl"))?;
    let matrix = ratings_matrix(&corpus)?;
    let agreement = annotator_agreement(&matrix)?;

    for pair in &agreement.pairwise_pearson {
        let r = pair.r.map(|r| format!("{r:.3}")).unwrap_or_else(|| "NA".into());
        println!("annotators {} and {}: r = {r}", pair.annotator_a + 1, pair.annotator_b + 1);
    }
    println!(
        "r range [{:.3}, {:.3}], rating std {:.3}",
        agreement.min_r.unwrap_or(f64::NAN),
        agreement.max_r.unwrap_or(f64::NAN),
        agreement.rating_std
    );
    let first = &corpus[0];
    println!("{}: mean rating {:.2}", first.id, mean_rating(first)?);

    assert_eq!(agreement.pairwise_pearson.len(), 15);
    assert!(agreement.min_r.is_some_and(|r| r > 0.5));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
