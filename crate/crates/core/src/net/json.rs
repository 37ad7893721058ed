use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::HeGnnSpec;

/// On-disk network: `{"format": 1, "propositions": [...], "spec": ...}`.
/// `propositions` names the input coordinates; without it the input is the
/// graph's own universe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propositions: Option<Vec<String>>,
    pub spec: HeGnnSpec,
}

impl NetworkFile {
    pub const FORMAT: u32 = 1;

    pub fn new(spec: HeGnnSpec, propositions: Option<Vec<String>>) -> Self {
        NetworkFile { format: Self::FORMAT, propositions, spec }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != Self::FORMAT {
            return Err(Error::Schema(format!("unsupported format {}", self.format)));
        }
        self.spec.validate()?;
        if let Some(p) = &self.propositions {
            if p.len() != self.spec.input_dim() {
                return Err(Error::Dimension { expected: self.spec.input_dim(), got: p.len() });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: NetworkFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        f.validate()?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::builtin_formula;
    use crate::net::compile_hgml;

    #[test]
    fn round_trip() {
        let spec = compile_hgml(&builtin_formula("phi-cycle(2)").unwrap(), &["p"]).unwrap();
        let file = NetworkFile::new(spec, Some(vec!["p".into()]));
        let text = file.to_json();
        assert!(text.contains("\"format\": 1"));
        assert_eq!(NetworkFile::from_json(&text).unwrap(), file);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(NetworkFile::from_json("{}").is_err());
        let spec = compile_hgml(&builtin_formula("triangle").unwrap(), &[] as &[&str]).unwrap();
        let mut file = NetworkFile::new(spec, None);
        file.format = 2;
        assert!(NetworkFile::from_json(&file.to_json()).is_err());
        file.format = 1;
        file.propositions = Some(vec!["extra".into()]);
        assert!(matches!(NetworkFile::from_json(&file.to_json()), Err(Error::Dimension { .. })));
    }
}
