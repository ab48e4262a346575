//! Versioned JSON dump of a sampled environment.

use crate::highway::Highway;
use crate::lattice::Rect;
use serde::{Deserialize, Serialize};

pub const DUMP_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvDump {
    pub version: u32,
    pub model: String,
    pub seed: u64,
    pub params_fingerprint: u64,
    pub window: Rect,
    pub class_cutoff: u32,
    pub highways: Vec<Highway>,
}

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("malformed dump: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported dump version {0}")]
    Version(u32),
}

impl EnvDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DumpError> {
        let d: EnvDump = serde_json::from_str(s)?;
        if d.version != DUMP_VERSION {
            return Err(DumpError::Version(d.version));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DiagOrientation, Site, StartType};

    #[test]
    fn roundtrip() {
        let d = EnvDump {
            version: DUMP_VERSION,
            model: "full".into(),
            seed: 5,
            params_fingerprint: 77,
            window: Rect::centered(8),
            class_cutoff: 3,
            highways: vec![
                Highway::zigzag(DiagOrientation::SeNw, StartType::V, 2, Site::new(1, -3), 17, 0.25),
                Highway::horizontal(1, Site::new(0, 0), 2),
            ],
        };
        assert_eq!(EnvDump::from_json(&d.to_json()).unwrap(), d);
        let mut bad = d.clone();
        bad.version = 9;
        assert!(matches!(EnvDump::from_json(&bad.to_json()), Err(DumpError::Version(9))));
    }
}
