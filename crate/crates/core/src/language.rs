use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Language of a subject program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubjectLanguage {
    #[serde(rename = "PY")]
    Python,
    #[serde(rename = "JAVA")]
    Java,
}

impl SubjectLanguage {
    pub const ALL: [SubjectLanguage; 2] = [SubjectLanguage::Python, SubjectLanguage::Java];

    pub fn code(self) -> &'static str {
        match self {
            SubjectLanguage::Python => "PY",
            SubjectLanguage::Java => "JAVA",
        }
    }

    /// Fence tag used when embedding code in prompts.
    pub fn fence_tag(self) -> &'static str {
        match self {
            SubjectLanguage::Python => "python",
            SubjectLanguage::Java => "java",
        }
    }
}

impl fmt::Display for SubjectLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SubjectLanguage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PY" | "PYTHON" => Ok(SubjectLanguage::Python),
            "JAVA" => Ok(SubjectLanguage::Java),
            other => Err(format!("unknown subject language `{other}`")),
        }
    }
}
