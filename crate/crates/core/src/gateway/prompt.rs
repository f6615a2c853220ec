use super::FaultLocTask;

/// Final instruction appended to every prompt.
pub const ANSWER_INSTRUCTION: &str = "Explain your reasoning briefly, then end your answer with a final line of the form `FAULT_LINE: <line number>`, counting the first line of the program as line 1.";

/// The fault-localization prompt for `task`.
///
/// Only the specification and the program are used; nothing about the
/// injected fault reaches the text.
pub fn build_prompt(task: &FaultLocTask) -> String {
    let spec = task.spec_text.trim();
    let mut framing = if spec.starts_with(|c: char| c.is_lowercase()) {
        format!("This code is designed to {spec}")
    } else {
        format!("This code is designed to meet the following specification: {spec}")
    };
    if !framing.ends_with(['.', '!', '?']) {
        framing.push('.');
    }
    let fence = fence_for(&task.source_text);
    let mut code = task.source_text.clone();
    if !code.ends_with('\n') {
        code.push('\n');
    }
    format!(
        "{framing} However, the code produces incorrect output. Can you identify the specific line of code responsible for the error? The program is attached below.\n\n{fence}{lang}\n{code}{fence}\n\n{ANSWER_INSTRUCTION}\n",
        lang = task.subject_language.fence_tag(),
    )
}

/// A backtick fence longer than any backtick run inside `code`.
fn fence_for(code: &str) -> String {
    let mut longest = 0;
    let mut run = 0;
    for c in code.chars() {
        if c == '`' {
            run += 1;
            longest = longest.max(run);
        } else {
            run = 0;
        }
    }
    "`".repeat((longest + 1).max(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::test_task;

    #[test]
    fn matches_the_fixed_template() {
        let task = test_task("def f():\n    return 1\n", 2);
        let prompt = build_prompt(&task);
        assert!(prompt.starts_with(
            "This code is designed to return one. However, the code produces incorrect output. Can you identify the specific line of code responsible for the error? The program is attached below.\n\n```python\ndef f():\n"
        ));
        assert!(prompt.trim_end().ends_with(ANSWER_INSTRUCTION));
        assert_eq!(prompt, build_prompt(&task));
    }

    #[test]
    fn capitalised_specs_are_quoted_as_specifications() {
        let mut task = test_task("x = 1\n", 1);
        task.spec_text = "Solve the N-Queen problem".into();
        assert!(build_prompt(&task).starts_with("This code is designed to meet the following specification: Solve the N-Queen problem."));
    }

    #[test]
    fn fences_outgrow_embedded_backticks() {
        assert_eq!(fence_for("s = '```'"), "````");
        assert_eq!(fence_for("x"), "```");
    }
}
