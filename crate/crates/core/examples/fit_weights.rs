// Fits the integrated-metric weights to mean human ratings with seeded
// 5-fold cross-validation and compares every metric's correlation with the
// ratings.

use std::error::Error;
use std::path::Path;

use asr_intelligibility::corpus::mean_rating;
use asr_intelligibility::fit::{kfold_fit, metric_correlation_report, RatedScores};
use asr_intelligibility::phonetic::Lexicon;
use asr_intelligibility::scorer::{load_score_files, Assembler};
use asr_intelligibility::load_corpus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let corpus = load_corpus(demo.join("corpus.jsonl"))?;
    let assembler = Assembler::new(load_score_files(&[demo.join("scores.jsonl")])?, Lexicon::bundled());

    let mut rows = Vec::new();
    for record in &corpus {
        rows.push(RatedScores {
            id: record.id.clone(),
            scores: assembler.assemble(record)?.scores,
            rating: Some(mean_rating(record)?),
        });
    }
    let features: Vec<[f64; 3]> = rows.iter().map(|r| r.scores.features()).collect();
    let ratings: Vec<f64> = rows.iter().filter_map(|r| r.rating).collect();

    let result = kfold_fit(&features, &ratings, 5, 42)?;
    for fold in &result.folds {
        println!(
            "fold {}: n={} test r={} mse={:.4}",
            fold.fold_index,
            fold.test_size,
            fold.test_pearson.map(|r| format!("{r:.3}")).unwrap_or_else(|| "NA".into()),
            fold.test_mse
        );
    }
    let fit = &result.final_fit;
    let w = fit.normalized;
    println!("weights alpha={:.4} beta={:.4} gamma={:.4}", w.alpha, w.beta, w.gamma);
    println!("p-values {:?}, MSE {:.4}", fit.p_values, fit.mse);
    if let Some(sw) = &fit.shapiro {
        println!("Shapiro-Wilk on residuals: W={:.4} p={:.4}", sw.w, sw.p);
    }

    let table = metric_correlation_report(&rows, &w)?;
    for row in &table {
        println!("{:<15} r={:.4}", row.metric, row.r.unwrap_or(f64::NAN));
    }
    assert_eq!(table[0].metric, "integrated");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
