use rand_chacha::ChaCha8Rng;

use super::Gateway;
use crate::spm::content::{CommentRequest, DeadCodeRequest, NameRequest};
use crate::spm::{ContentProvider, TemplateProvider};

/// Asks a model for mutation content and falls back to the curated
/// templates whenever the model fails or returns something unusable.
pub struct ModelContentProvider<'a> {
    gateway: &'a Gateway,
    fallback: TemplateProvider,
}

impl<'a> ModelContentProvider<'a> {
    pub fn new(gateway: &'a Gateway) -> Self {
        ModelContentProvider {
            gateway,
            fallback: TemplateProvider,
        }
    }

    fn ask(&self, prompt: &str) -> Option<String> {
        match self.gateway.complete(prompt) {
            Ok(text) => text.map(|t| strip_fences(&t)).filter(|t| !t.is_empty()),
            Err(e) => {
                log::warn!("content generation via {} failed: {e}", self.gateway.name());
                None
            }
        }
    }
}

fn strip_fences(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("```"))
        .map(str::trim_end)
        .find(|l| !l.trim().is_empty())
        .unwrap_or("")
        .trim()
        .to_string()
}

impl ContentProvider for ModelContentProvider<'_> {
    fn comment(&mut self, request: &CommentRequest, rng: &mut ChaCha8Rng) -> String {
        let prompt = format!(
            "Write one short {} code comment (without comment markers) that sounds plausible for the line below but describes something it does not do. Reply with the comment only.\n\n{}",
            request.language, request.nearby_code
        );
        self.ask(&prompt).unwrap_or_else(|| self.fallback.comment(request, rng))
    }

    fn identifier(&mut self, request: &NameRequest, _rng: &mut ChaCha8Rng) -> Option<String> {
        let what = if request.is_function { "function" } else { "variable" };
        let prompt = format!(
            "Suggest one misleading but realistic {} {what} name to replace `{}`. Reply with the name only.",
            request.language, request.original
        );
        self.ask(&prompt)
    }

    fn dead_code_line(&mut self, request: &DeadCodeRequest, _rng: &mut ChaCha8Rng) -> Option<String> {
        let prompt = format!(
            "Write a single self-contained {} statement that declares and computes a local numeric value, in the style of the code below. Reply with that one line only.\n\n{}",
            request.language, request.nearby_code
        );
        self.ask(&prompt)
    }
}
