//! On-disk behavior: the character-table cache and the census result store.

use std::fs;

use belyi_core::census::{
    census, run_range, CensusConfig, OutputFormat, ResultStore, FORMAT_VERSION,
};
use belyi_core::character::CharacterTable;

#[test]
fn character_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = CharacterTable::load_or_compute(6, Some(dir.path()));
    let path = CharacterTable::cache_path(dir.path(), 6);
    assert!(path.exists(), "cache file must be written");
    let loaded = CharacterTable::load_or_compute(6, Some(dir.path()));
    assert_eq!(fresh, loaded);
}

#[test]
fn corrupt_character_cache_is_recomputed_and_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let table = CharacterTable::load_or_compute(5, Some(dir.path()));
    let path = CharacterTable::cache_path(dir.path(), 5);

    // Truncated file: unreadable.
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..text.len() / 3]).unwrap();
    let reloaded = CharacterTable::load_or_compute(5, Some(dir.path()));
    assert_eq!(table, reloaded);
    assert_eq!(fs::read_to_string(&path).unwrap(), text, "cache rewritten");

    // Readable but wrong values: caught by orthogonality verification.
    let tampered = text.replace("\n1 ", "\n2 ");
    assert_ne!(tampered, text);
    fs::write(&path, tampered).unwrap();
    let reloaded = CharacterTable::load_or_compute(5, Some(dir.path()));
    assert_eq!(table, reloaded);
    assert_eq!(fs::read_to_string(&path).unwrap(), text, "cache rewritten");
}

#[test]
fn run_range_persists_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let store = ResultStore::new(dir.path(), OutputFormat::Csv).unwrap();
    let config = CensusConfig::default();

    let first = run_range(1, 5, 1, &store, &config).unwrap();
    assert_eq!(first.len(), 5);
    let path = store.path_for(4, 1);
    let original = fs::read_to_string(&path).unwrap();

    // Mark the stored file (keeping the version line intact); a rerun must
    // skip the completed degree and leave the marker untouched.
    let marked = original.replace("exceptional", "exceptiona1");
    fs::write(&path, &marked).unwrap();
    let second = run_range(1, 5, 1, &store, &config).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), marked, "no recomputation");
    // Counts of untouched degrees are identical.
    assert_eq!(first[0], second[0]);
    assert_eq!(first[4], second[4]);

    // A stale format version forces recomputation of just that degree.
    let stale = original.replace(
        &format!("format-version {FORMAT_VERSION}"),
        "format-version 0",
    );
    fs::write(&path, stale).unwrap();
    let third = run_range(1, 5, 1, &store, &config).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), original, "recomputed");
    assert_eq!(first, third);
}

#[test]
fn rerun_after_completion_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let store = ResultStore::new(dir.path(), format).unwrap();
        let config = CensusConfig::default();
        run_range(1, 6, 1, &store, &config).unwrap();
        let paths: Vec<_> = (1..=6).map(|n| store.path_for(n, 1)).collect();
        let before: Vec<String> = paths
            .iter()
            .map(|p| fs::read_to_string(p).unwrap())
            .collect();
        run_range(1, 6, 1, &store, &config).unwrap();
        for (path, old) in paths.iter().zip(&before) {
            assert_eq!(&fs::read_to_string(path).unwrap(), old);
        }
    }
}

#[test]
fn stored_summaries_match_fresh_reports() {
    let dir = tempfile::tempdir().unwrap();
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let store = ResultStore::new(dir.path().join(format.extension()), format).unwrap();
        let config = CensusConfig::default();
        let summaries = run_range(5, 6, 1, &store, &config).unwrap();
        for summary in &summaries {
            let report = census(summary.degree, 1, &config).unwrap();
            assert_eq!(summary, &report.summary());
            let reread = store.read_summary(summary.degree, 1).unwrap();
            assert_eq!(summary, &reread);
        }
    }
}

#[test]
fn incomplete_store_entries_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    let store = ResultStore::new(dir.path(), OutputFormat::Json).unwrap();
    assert!(!store.is_complete(3, 1));
    fs::write(store.path_for(3, 1), "{").unwrap();
    assert!(!store.is_complete(3, 1));
    let config = CensusConfig::default();
    run_range(3, 3, 1, &store, &config).unwrap();
    assert!(store.is_complete(3, 1));
}
