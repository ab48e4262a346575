//! Plain-text `key = value` parameter files.

use crate::{FullParams, ParamsError, SimpleParams};
use serde::{Deserialize, Serialize};

/// Bundled presets, name and file content.
pub const PRESETS: &[(&str, &str)] = &[
    ("simple-A", include_str!("../presets/simple-A.cfg")),
    ("simple-B", include_str!("../presets/simple-B.cfg")),
    ("full-A", include_str!("../presets/full-A.cfg")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Simple(SimpleParams),
    Full(FullParams),
}

impl ModelParams {
    pub fn model_name(&self) -> &'static str {
        match self {
            ModelParams::Simple(_) => "simple",
            ModelParams::Full(_) => "full",
        }
    }

    pub fn k0(&self) -> u32 {
        match self {
            ModelParams::Simple(p) => p.k0,
            ModelParams::Full(p) => p.k0,
        }
    }

    /// Serialize back to the config format; round-trips exactly.
    pub fn to_config_string(&self) -> String {
        toml::to_string(self).expect("params serialize")
    }

    /// Validate with the default margin; returns the violation list on failure.
    pub fn validate(&self) -> Result<(), crate::Violations> {
        match self {
            ModelParams::Simple(p) => crate::validate_simple(p).map(|_| ()),
            ModelParams::Full(p) => crate::validate_full(p).map(|_| ()),
        }
    }

    /// Stable 64-bit fingerprint of the serialized bundle (FNV-1a).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_config_string().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

pub fn parse_config(text: &str) -> Result<ModelParams, ParamsError> {
    toml::from_str(text).map_err(|e| ParamsError::Parse(e.to_string()))
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn load_preset(name: &str) -> Result<ModelParams, ParamsError> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ParamsError::UnknownPreset(name.to_string()))?;
    parse_config(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse_and_validate() {
        for name in preset_names() {
            let p = load_preset(name).unwrap();
            if let Err(v) = p.validate() {
                panic!("{name}:\n{v}");
            }
        }
    }

    #[test]
    fn roundtrip_is_exact() {
        for name in preset_names() {
            let p = load_preset(name).unwrap();
            let q = parse_config(&p.to_config_string()).unwrap();
            assert_eq!(p, q);
            assert_eq!(p.fingerprint(), q.fingerprint());
        }
    }

    #[test]
    fn comments_and_missing_c1() {
        let text = "# a comment\nmodel = \"simple\"\ntheta = 0.75\neta = 0.8\nC = 1.0\nk0 = 30\n";
        let p = parse_config(text).unwrap();
        assert_eq!(p.model_name(), "simple");
        assert!(p.validate().is_ok());
    }

    #[test]
    fn bad_config_is_a_parse_error() {
        assert!(matches!(parse_config("model = \"full\"\ntheta = 1"), Err(ParamsError::Parse(_))));
        assert!(matches!(parse_config("model = \"weird\""), Err(ParamsError::Parse(_))));
        assert!(matches!(load_preset("nope"), Err(ParamsError::UnknownPreset(_))));
    }
}
