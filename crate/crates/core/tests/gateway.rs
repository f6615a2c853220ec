mod common;

use common::{faulty_nqueens, NQUEENS_SPEC};
use flbench_core::fault_injector::{FaultKind, FaultyProgram, InjectedFault};
use flbench_core::gateway::{build_prompt, parse_answer, FaultLocTask, Gateway, MockKind, ModelSpec, ANSWER_INSTRUCTION};
use flbench_core::language::SubjectLanguage;
use flbench_core::source_model::{quartile_of, Quartile};

fn nqueens_task() -> FaultLocTask {
    let faulty = FaultyProgram {
        fault: InjectedFault {
            fault_id: "nqueens-obo".into(),
            seed_id: "py-nqueens-example".into(),
            kind: FaultKind::OffByOne,
            fault_line: 13,
            original_line: 13,
            quartile: Quartile::Q2,
            before_snippet: "range(row, n, 1)".into(),
            after_snippet: "range(row, n-1, 1)".into(),
            rng_seed: 0,
            killed: None,
        },
        language: SubjectLanguage::Python,
        source_text: faulty_nqueens(),
    };
    FaultLocTask::baseline(&faulty, NQUEENS_SPEC)
}

#[test]
fn nqueens_prompt_follows_the_fixed_template() {
    let task = nqueens_task();
    let prompt = build_prompt(&task);
    let framing = "This code is designed to solve the N-Queen problem. Given an input N, it should return all valid \
                   arrangements of N queens on an N x N board such that no two queens attack each other. However, the \
                   code produces incorrect output. Can you identify the specific line of code responsible for the \
                   error? The program is attached below.";
    assert!(prompt.starts_with(framing), "{prompt}");
    assert!(prompt.contains(&task.source_text));
    assert!(prompt.trim_end().ends_with(ANSWER_INSTRUCTION));
    assert_eq!(prompt, build_prompt(&task));
    assert!(!prompt.contains("13"), "no line annotations or ground truth in the prompt");
}

#[test]
fn answers_in_prose_and_marker_form() {
    assert_eq!(parse_answer("...analysis... FAULT_LINE: 13", 45), Some(13));
    assert_eq!(parse_answer("The bug is on line 13", 45), Some(13));
    assert_eq!(parse_answer("the fault is somewhere in is_safe", 45), None);
    assert_eq!(parse_answer("FAULT_LINE: 99", 45), None);
}

#[test]
fn oracle_answers_the_tracked_line() {
    let task = nqueens_task();
    let answer = Gateway::connect(ModelSpec::mock("oracle", MockKind::Oracle))
        .unwrap()
        .query(&task)
        .unwrap();
    assert_eq!(answer.predicted_line, Some(13));
}

#[test]
fn first_quartile_bias_matches_its_setting() {
    const DRAWS: usize = 10_000;
    let bias = 0.7;
    let gateway = Gateway::connect(ModelSpec::mock("q1", MockKind::FirstQuartileBiased { bias, seed: 4 })).unwrap();
    let mut task = nqueens_task();
    let lines = task.line_count();
    let mut in_first = 0;
    for i in 0..DRAWS {
        task.task_id = format!("draw-{i}");
        let line = gateway.query(&task).unwrap().predicted_line.expect("mock answers parse");
        if quartile_of(line, lines).unwrap() == Quartile::Q1 {
            in_first += 1;
        }
    }
    let observed = in_first as f64 / DRAWS as f64;
    assert!((observed - bias).abs() <= 0.02, "observed {observed}");
}
