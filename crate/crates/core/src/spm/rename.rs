use rand::seq::SliceRandom;

use super::content::{NameRequest, FUNCTION_NAMES, VARIABLE_NAMES};
use super::{NameBook, Rename, SpmError, SpmKind, StepContext, StepOutcome};
use crate::source_model::{text::LineMap, ByteSpan, Edit, IdentifierEntry, ScopeId};

/// Consistently renames up to `strength` safely scoped identifiers declared
/// in the quartile. Identifiers that occur on the fault line are never touched.
pub(super) fn apply(mut ctx: StepContext) -> Result<StepOutcome, SpmError> {
    let map = LineMap::new(ctx.source);
    let mut candidates: Vec<&IdentifierEntry> = ctx
        .index
        .identifier_table
        .iter()
        .filter(|e| ctx.in_quartile(e.declaration_line))
        .filter(|e| e.occurrences.iter().all(|o| map.line_of(o.start) != ctx.fault_line))
        .collect();
    if candidates.is_empty() {
        return Err(SpmError::NoApplicableTarget {
            kind: SpmKind::MisleadingVariableNames,
            quartile: ctx.quartile,
        });
    }
    candidates.shuffle(&mut ctx.rng);

    let mut chosen: Vec<&IdentifierEntry> = Vec::new();
    let mut claimed: Vec<ByteSpan> = Vec::new();
    for entry in candidates {
        if chosen.len() == ctx.strength {
            break;
        }
        let clashes = entry.occurrences.iter().any(|o| claimed.iter().any(|c| c.overlaps(o)));
        if clashes {
            continue;
        }
        claimed.extend(entry.occurrences.iter().copied());
        chosen.push(entry);
    }
    // Keep edits in source order so the outcome does not depend on shuffle order.
    chosen.sort_by_key(|e| e.declaration.start);

    let mut book = NameBook::new(ctx.language, ctx.index);
    let mut edits = Vec::new();
    let mut renames = Vec::new();
    for entry in &chosen {
        let is_function = entry.scope == ScopeId::Module;
        let request = NameRequest {
            language: ctx.language,
            original: &entry.name,
            is_function,
        };
        let suggested = ctx
            .provider
            .identifier(&request, &mut ctx.rng)
            .filter(|n| book.available(n));
        let new_name = match suggested {
            Some(n) => {
                book.claim(&n);
                n
            }
            None => {
                let pool = if is_function { FUNCTION_NAMES } else { VARIABLE_NAMES };
                book.fresh(pool, &mut ctx.rng, false)
                    .ok_or_else(|| SpmError::RenameCollision(entry.name.clone()))?
            }
        };
        for o in &entry.occurrences {
            edits.push(Edit::ReplaceSpan {
                start: o.start,
                end: o.end,
                text: new_name.clone(),
            });
        }
        renames.push(Rename {
            from: entry.name.clone(),
            to: new_name,
        });
    }
    Ok(StepOutcome {
        edits,
        effective: chosen.len(),
        renames,
    })
}
