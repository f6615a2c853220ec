use rayon::prelude::*;

use super::{AnswerStatus, FaultLocTask, Gateway, GatewayError, ModelAnswer};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DispatchSummary {
    pub answered: usize,
    pub skipped: usize,
    /// Tasks whose retries ran out; nothing was stored, so a rerun retries them.
    pub failed: usize,
}

/// Sends `tasks` to `gateway` with up to `parallel` requests in flight and
/// hands answers to `sink` in task order.
///
/// Answers are delivered chunk by chunk so a crash loses at most one chunk of
/// work. A sink error stops dispatch immediately.
pub fn dispatch<E>(
    gateway: &Gateway,
    tasks: &[FaultLocTask],
    parallel: usize,
    mut sink: impl FnMut(ModelAnswer) -> Result<(), E>,
) -> Result<DispatchSummary, E> {
    let parallel = parallel.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .expect("thread pool");
    let mut summary = DispatchSummary::default();
    for chunk in tasks.chunks(parallel * 16) {
        let results: Vec<Result<ModelAnswer, GatewayError>> =
            pool.install(|| chunk.par_iter().map(|t| gateway.query(t)).collect());
        for (task, result) in chunk.iter().zip(results) {
            match result {
                Ok(answer) => {
                    match answer.status {
                        AnswerStatus::Answered => summary.answered += 1,
                        AnswerStatus::Skipped => summary.skipped += 1,
                    }
                    sink(answer)?;
                }
                Err(e) => {
                    log::error!("task {} on {}: {e}", task.task_id, gateway.name());
                    summary.failed += 1;
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::test_task;

    #[test]
    fn answers_arrive_in_task_order() {
        let gw = Gateway::connect("mock:oracle".parse().unwrap()).unwrap();
        let source: String = (1..=40).map(|i| format!("v = {i}\n")).collect();
        let tasks: Vec<_> = (1..=40).map(|l| test_task(&source, l)).collect();
        let mut seen = Vec::new();
        let summary = dispatch(&gw, &tasks, 3, |a| {
            seen.push(a.predicted_line.unwrap());
            Ok::<_, ()>(())
        })
        .unwrap();
        assert_eq!(seen, (1..=40).collect::<Vec<_>>());
        assert_eq!(summary.answered, 40);
    }
}
