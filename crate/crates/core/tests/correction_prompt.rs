use asr_intelligibility::correctability::CORRECTION_PROMPT;

#[test]
fn shipped_prompt_matches_library_constant() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/correction_prompt.txt");
    let shipped = std::fs::read_to_string(path).unwrap();
    assert_eq!(shipped.trim_end(), CORRECTION_PROMPT);
}
