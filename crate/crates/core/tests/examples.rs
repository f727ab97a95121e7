macro_rules! example_test {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(wer_alignment, "wer_alignment.rs");
example_test!(phonetic_similarity, "phonetic_similarity.rs");
example_test!(annotator_agreement, "annotator_agreement.rs");
example_test!(score_corpus, "score_corpus.rs");
example_test!(fit_weights, "fit_weights.rs");
example_test!(correctability, "correctability.rs");
example_test!(remote_scoring, "remote_scoring.rs");
example_test!(cli_pipeline, "cli_pipeline.rs");
example_test!(make_demo_corpus, "make_demo_corpus.rs");
