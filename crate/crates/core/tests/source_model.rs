mod common;

use common::{faulty_nqueens, unique_line, NQUEENS};
use flbench_core::demo::demo_corpus;
use flbench_core::language::SubjectLanguage;
use flbench_core::source_model::{apply_edits, parse, quartile_of, Edit, LineLedger, Quartile};
use proptest::prelude::*;

fn lines(n: usize) -> String {
    (1..=n).map(|i| format!("line {i}\n")).collect()
}

#[test]
fn nqueens_loop_sites() {
    let index = parse(SubjectLanguage::Python, &faulty_nqueens()).unwrap();
    let loop_lines: Vec<usize> = index.loop_sites.iter().map(|s| s.line).collect();
    assert!(loop_lines.contains(&3), "{loop_lines:?}");
    assert!(loop_lines.contains(&13), "{loop_lines:?}");
}

#[test]
fn insertion_before_line_five_shifts_line_thirteen() {
    let edits = [Edit::InsertLinesBefore {
        line: 5,
        lines: vec!["a".into(), "b".into(), "c".into()],
    }];
    let (_, ledger) = apply_edits(&lines(20), &edits).unwrap();
    assert_eq!(ledger.map(13), Some(16));
    assert_eq!(ledger.map(4), Some(4));
    assert_eq!(ledger.new_line_count(), 23);
}

#[test]
fn mutated_example_moves_fault_from_thirteen_to_eleven() {
    // Header comment above the function, two comment lines above the first
    // loop, and the up-left diagonal check (lines 7-12) removed.
    let faulty = faulty_nqueens();
    let map = flbench_core::source_model::text::LineMap::new(&faulty);
    let edits = vec![
        Edit::InsertLinesBefore {
            line: 1,
            lines: vec!["# Count the queens placed on the board".into()],
        },
        Edit::InsertLinesBefore {
            line: 3,
            lines: vec![
                "        # This function checks how many queens".into(),
                "        # are on the board.".into(),
                "        #".into(),
            ],
        },
        Edit::ReplaceSpan {
            start: map.line_start(7),
            end: map.line_start(13),
            text: String::new(),
        },
    ];
    let (mutated, ledger) = apply_edits(&faulty, &edits).unwrap();
    assert_eq!(ledger.map(13), Some(11));
    assert_eq!(unique_line(&mutated, "range(row, n-1, 1)"), Some(11));
    for deleted in 7..=12 {
        assert_eq!(ledger.map(deleted), None, "line {deleted}");
    }
    parse(SubjectLanguage::Python, &mutated).unwrap();
}

#[test]
fn empty_batch_round_trips_every_seed() {
    for seed in demo_corpus() {
        parse(seed.subject_language, &seed.source_text).unwrap();
        let (text, ledger) = apply_edits(&seed.source_text, &[]).unwrap();
        assert_eq!(text, seed.source_text, "{}", seed.seed_id);
        assert!(ledger.is_identity());
    }
    let (text, ledger) = apply_edits(NQUEENS, &[]).unwrap();
    assert_eq!(text, NQUEENS);
    assert_eq!(ledger, LineLedger::identity(NQUEENS.lines().count()));
}

#[test]
fn recorded_spans_slice_to_their_tokens() {
    for seed in demo_corpus() {
        let src = &seed.source_text;
        let index = parse(seed.subject_language, src).unwrap();
        for entry in &index.identifier_table {
            assert_eq!(entry.declaration.slice(src), entry.name, "{}", seed.seed_id);
            for occurrence in &entry.occurrences {
                assert_eq!(occurrence.slice(src), entry.name, "{} at {occurrence:?}", seed.seed_id);
            }
        }
        for site in index.boolean_op_sites.iter().chain(&index.arith_op_sites) {
            assert_eq!(site.span.slice(src), site.token, "{}", seed.seed_id);
        }
    }
}

#[test]
fn quartile_boundaries() {
    assert_eq!(quartile_of(1, 100).unwrap(), Quartile::Q1);
    assert_eq!(quartile_of(25, 100).unwrap(), Quartile::Q1);
    assert_eq!(quartile_of(26, 100).unwrap(), Quartile::Q2);
    assert_eq!(quartile_of(7, 10).unwrap(), Quartile::Q3);
    assert!(quartile_of(0, 10).is_err());
    assert!(quartile_of(11, 10).is_err());
}

#[test]
fn quartile_matches_percentage_intervals() {
    // Independent oracle: the quarter boundaries computed in floating point.
    for count in 1..=50usize {
        for line in 1..=count {
            let bound = |fraction: f64| (fraction * count as f64).ceil() as usize;
            let expected = if line <= bound(0.25) {
                Quartile::Q1
            } else if line <= bound(0.5) {
                Quartile::Q2
            } else if line <= bound(0.75) {
                Quartile::Q3
            } else {
                Quartile::Q4
            };
            assert_eq!(quartile_of(line, count).unwrap(), expected, "line {line} of {count}");
        }
    }
}

/// Whole-line operations on distinct lines: `Some(k)` inserts `k` lines
/// before the line, `None` deletes it.
type LineOps = Vec<(usize, Option<usize>)>;

fn line_ops(n: usize) -> impl Strategy<Value = LineOps> {
    prop::collection::btree_map(1..=n, prop::option::of(1..3usize), 0..5).prop_map(|m| m.into_iter().collect())
}

fn to_edits(text: &str, ops: &LineOps) -> Vec<Edit> {
    let map = flbench_core::source_model::text::LineMap::new(text);
    ops.iter()
        .map(|&(line, op)| match op {
            Some(k) => Edit::InsertLinesBefore {
                line,
                lines: (0..k).map(|i| format!("new {line}.{i}")).collect(),
            },
            None => Edit::ReplaceSpan {
                start: map.line_start(line),
                end: (map.line_end(line) + 1).min(text.len()),
                text: String::new(),
            },
        })
        .collect()
}

fn lines_after(n: usize, ops: &LineOps) -> usize {
    ops.iter().fold(n, |acc, (_, op)| op.map_or(acc - 1, |k| acc + k))
}

fn two_batches() -> impl Strategy<Value = (usize, LineOps, LineOps)> {
    (3usize..30)
        .prop_flat_map(|n| (Just(n), line_ops(n)))
        .prop_filter("first batch leaves lines", |(n, first)| lines_after(*n, first) > 0)
        .prop_flat_map(|(n, first)| {
            let m = lines_after(n, &first);
            (Just(n), Just(first), line_ops(m))
        })
}

proptest! {
    #[test]
    fn ledgers_compose((n, first, second) in two_batches()) {
        let text = lines(n);
        let (mid, l1) = apply_edits(&text, &to_edits(&text, &first)).unwrap();
        prop_assert_eq!(mid.lines().count(), l1.new_line_count());
        let (_, l2) = apply_edits(&mid, &to_edits(&mid, &second)).unwrap();
        let composed = l1.then(&l2);
        for line in 1..=n {
            prop_assert_eq!(composed.map(line), l1.map(line).and_then(|x| l2.map(x)));
        }
        prop_assert_eq!(composed.new_line_count(), l2.new_line_count());
    }
}
