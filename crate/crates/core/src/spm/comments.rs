use rand::seq::index::sample;

use super::content::{sanitize_comment, CommentRequest};
use super::{SpmError, SpmKind, StepContext, StepOutcome};
use crate::language::SubjectLanguage;
use crate::source_model::{code_part, text, CommentStyle, Edit};

/// Rewrites existing comments in the quartile, or inserts new comment lines
/// when the quartile has none.
pub(super) fn apply(mut ctx: StepContext) -> Result<StepOutcome, SpmError> {
    let names: Vec<String> = {
        let mut v: Vec<String> = ctx.index.identifier_table.iter().map(|e| e.name.clone()).collect();
        v.sort();
        v.dedup();
        v
    };
    let targets: Vec<_> = ctx
        .index
        .comment_spans
        .iter()
        .filter(|c| c.replaceable && ctx.in_quartile(c.line))
        .collect();

    let mut edits = Vec::new();
    if !targets.is_empty() {
        let k = ctx.strength.min(targets.len());
        let mut chosen: Vec<usize> = sample(&mut ctx.rng, targets.len(), k).into_vec();
        chosen.sort_unstable();
        for i in chosen {
            let c = targets[i];
            let nearby = code_part(ctx.language, text::line_text(ctx.source, c.line).unwrap_or(""));
            let sentence = sentence(&mut ctx, nearby, &names);
            let replacement = match c.style {
                CommentStyle::Hash => format!("# {sentence}"),
                CommentStyle::Line => format!("// {sentence}"),
                CommentStyle::Block => format!("/* {sentence} */"),
            };
            edits.push(Edit::ReplaceSpan {
                start: c.span.start,
                end: c.span.end,
                text: replacement,
            });
        }
        return Ok(StepOutcome {
            edits,
            effective: k,
            renames: Vec::new(),
        });
    }

    let points: Vec<_> = ctx
        .index
        .statement_boundaries
        .iter()
        .filter(|p| ctx.in_quartile(p.line))
        .collect();
    if points.is_empty() {
        return Err(SpmError::NoApplicableTarget {
            kind: SpmKind::MisleadingComments,
            quartile: ctx.quartile,
        });
    }
    let k = ctx.strength.min(points.len());
    let mut chosen: Vec<usize> = sample(&mut ctx.rng, points.len(), k).into_vec();
    chosen.sort_unstable();
    let marker = match ctx.language {
        SubjectLanguage::Python => "#",
        SubjectLanguage::Java => "//",
    };
    for i in chosen {
        let p = points[i];
        let nearby = code_part(ctx.language, text::line_text(ctx.source, p.line).unwrap_or(""));
        let sentence = sentence(&mut ctx, nearby, &names);
        edits.push(Edit::InsertLinesBefore {
            line: p.line,
            lines: vec![format!("{}{marker} {sentence}", p.indent)],
        });
    }
    Ok(StepOutcome {
        edits,
        effective: k,
        renames: Vec::new(),
    })
}

fn sentence(ctx: &mut StepContext, nearby: &str, names: &[String]) -> String {
    let request = CommentRequest {
        language: ctx.language,
        nearby_code: nearby,
        names,
    };
    sanitize_comment(&ctx.provider.comment(&request, &mut ctx.rng))
}
