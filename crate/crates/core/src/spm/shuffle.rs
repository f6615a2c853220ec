use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::{SpmError, SpmKind, StepContext, StepOutcome};
use crate::source_model::{Edit, FunctionSpan};

/// Applies `strength` transpositions to the declaration order of methods.
///
/// The first method of each transposition has its header in the quartile;
/// the second is any other movable method of the same class. If the
/// transpositions cancel out, the last one is dropped so the result is never
/// the identity, and the effective strength reflects that.
pub(super) fn apply(mut ctx: StepContext) -> Result<StepOutcome, SpmError> {
    let spans = &ctx.index.function_spans;
    // Movable methods per class, in file order.
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, f) in spans.iter().enumerate() {
        if let (true, Some(c)) = (f.movable, f.class_id) {
            by_class.entry(c).or_default().push(i);
        }
    }
    by_class.retain(|_, v| v.len() >= 2);
    let anchors: Vec<usize> = by_class
        .values()
        .flatten()
        .copied()
        .filter(|&i| ctx.in_quartile(spans[i].start_line))
        .collect();
    if anchors.is_empty() {
        return Err(SpmError::NoApplicableTarget {
            kind: SpmKind::FunctionShuffle,
            quartile: ctx.quartile,
        });
    }

    // Current slot of every method, per class.
    let mut order: BTreeMap<usize, Vec<usize>> = by_class.clone();
    let mut swaps: Vec<(usize, usize, usize)> = Vec::new();
    for _ in 0..ctx.strength {
        let a = *anchors.choose(&mut ctx.rng).expect("non-empty");
        let class = spans[a].class_id.expect("anchors belong to classes");
        let others: Vec<usize> = by_class[&class].iter().copied().filter(|&m| m != a).collect();
        let b = *others.choose(&mut ctx.rng).expect("classes have two methods");
        swap(order.get_mut(&class).expect("class"), a, b);
        swaps.push((class, a, b));
    }
    if order == by_class {
        let (class, a, b) = swaps.pop().expect("at least one swap");
        swap(order.get_mut(&class).expect("class"), a, b);
    }

    let mut edits = Vec::new();
    for (class, slots) in &by_class {
        let arranged = &order[class];
        for (slot, &method) in slots.iter().zip(arranged) {
            if *slot != method {
                let f: &FunctionSpan = &spans[method];
                edits.push(Edit::MoveBlock {
                    start: f.block_start_line,
                    end: f.end_line,
                    before: spans[*slot].block_start_line,
                });
            }
        }
    }
    Ok(StepOutcome {
        edits,
        effective: swaps.len(),
        renames: Vec::new(),
    })
}

fn swap(order: &mut [usize], a: usize, b: usize) {
    let pa = order.iter().position(|&m| m == a).expect("method in class");
    let pb = order.iter().position(|&m| m == b).expect("method in class");
    order.swap(pa, pb);
}
