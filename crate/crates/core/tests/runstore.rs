use std::fs::OpenOptions;

use flbench_core::runstore::{RunManifest, RunStore, Stream};
use proptest::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Seed {
    seed_id: String,
    payload: String,
}

fn manifest() -> RunManifest {
    RunManifest::new(serde_json::json!({"seed": 1}), 1, "corpus".into())
}

fn seed(i: usize) -> Seed {
    Seed {
        seed_id: format!("seed-{i:03}"),
        payload: "x".repeat(i % 7),
    }
}

fn fill(dir: &std::path::Path, n: usize) -> u64 {
    let mut store = RunStore::open(dir, manifest()).unwrap();
    for i in 0..n {
        store.append(Stream::Seeds, &seed(i)).unwrap();
    }
    store.sync().unwrap();
    std::fs::metadata(store.path(Stream::Seeds)).unwrap().len()
}

fn truncate_to(path: &std::path::Path, len: u64) {
    OpenOptions::new().write(true).open(path).unwrap().set_len(len).unwrap();
}

#[test]
fn torn_tail_is_discarded_and_writing_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let full = fill(dir.path(), 10);
    let path = dir.path().join(Stream::Seeds.file_name());
    truncate_to(&path, full - 5);

    let mut store = RunStore::open(dir.path(), manifest()).unwrap();
    assert_eq!(store.count(Stream::Seeds), 9);
    assert!(!store.contains(Stream::Seeds, "seed-009"));
    assert!(store.append_new(Stream::Seeds, &seed(9)).unwrap());
    assert!(!store.append_new(Stream::Seeds, &seed(3)).unwrap());
    store.sync().unwrap();
    let back: Vec<Seed> = store.read(Stream::Seeds).unwrap();
    assert_eq!(back, (0..10).map(seed).collect::<Vec<_>>());
    assert_eq!(std::fs::metadata(&path).unwrap().len(), full);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_cut_keeps_exactly_the_complete_records(n in 1usize..20, cut_fraction in 0.0f64..1.0) {
        let dir = tempfile::tempdir().unwrap();
        let full = fill(dir.path(), n);
        let path = dir.path().join(Stream::Seeds.file_name());
        let cut = (full as f64 * cut_fraction) as u64;
        let bytes = std::fs::read(&path).unwrap();
        let complete = bytes[..cut as usize].iter().filter(|&&b| b == b'\n').count();
        truncate_to(&path, cut);

        let store = RunStore::open(dir.path(), manifest()).unwrap();
        prop_assert_eq!(store.count(Stream::Seeds), complete);
        let back: Vec<Seed> = store.read(Stream::Seeds).unwrap();
        prop_assert_eq!(back, (0..complete).map(seed).collect::<Vec<_>>());
    }
}
