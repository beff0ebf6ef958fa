//! Universe and linguistic term configuration.
//!
//! ```json
//! {"universe": {"lo": -1, "hi": 1, "step": 0.001},
//!  "terms": [{"id": "-VH", "shape": "triangular", "params": [-1, -1, -0.75]}, ...]}
//! ```
//!
//! Both keys are optional; missing ones fall back to the standard ten-term
//! set on `[-1, 1]` with step 0.001.

use std::fs;
use std::path::Path;

use fcm_core::fuzzy::{LinguisticTermSet, TermSpec, Universe};
use serde::Deserialize;

use crate::error::AtPath;
use crate::{Result, ToolError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniverseDoc {
    lo: f64,
    hi: f64,
    step: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermsDoc {
    universe: Option<UniverseDoc>,
    terms: Option<Vec<TermSpec>>,
}

#[derive(Debug, Clone)]
pub struct TermsConfig {
    pub universe: Universe,
    pub terms: LinguisticTermSet,
}

impl Default for TermsConfig {
    fn default() -> Self {
        Self { universe: Universe::default(), terms: LinguisticTermSet::standard() }
    }
}

impl TermsConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let doc: TermsDoc = serde_json::from_str(text).map_err(|e| ToolError::schema(path, e.to_string()))?;
        let universe = match doc.universe {
            Some(u) => Universe::new(u.lo, u.hi, u.step).at(path)?,
            None => Universe::default(),
        };
        let terms = match doc.terms {
            Some(t) => LinguisticTermSet::new(t).at(path)?,
            None => LinguisticTermSet::standard(),
        };
        for t in terms.terms() {
            t.validate(&universe).at(path)?;
        }
        Ok(Self { universe, terms })
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => Self::parse(&fs::read_to_string(p).map_err(|e| ToolError::io(p, e))?, p),
        }
    }
}
