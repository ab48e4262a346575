//! Artifacts with embedded run metadata, written to a directory or stdout.

use crate::args::Format;
use crate::CliError;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    fn line(&self) -> String {
        format!("fpp {} command={} config={} seed={}", self.version, self.command, self.config_hash, self.seed)
    }
}

pub fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub enum Body {
    Text(Format, String),
    Json(serde_json::Value),
    Bytes(Vec<u8>),
}

pub struct Artifact {
    pub name: String,
    pub body: Body,
}

impl Artifact {
    pub fn csv(name: &str, s: String) -> Self {
        Artifact { name: name.into(), body: Body::Text(Format::Csv, s) }
    }

    pub fn svg(name: &str, s: String) -> Self {
        Artifact { name: name.into(), body: Body::Text(Format::Svg, s) }
    }

    pub fn json<T: Serialize>(name: &str, v: &T) -> Self {
        Artifact { name: name.into(), body: Body::Json(serde_json::to_value(v).expect("serializable")) }
    }

    pub fn bytes(name: &str, b: Vec<u8>) -> Self {
        Artifact { name: name.into(), body: Body::Bytes(b) }
    }

    pub fn format(&self) -> Option<Format> {
        match &self.body {
            Body::Text(f, _) => Some(*f),
            Body::Json(_) => Some(Format::Json),
            Body::Bytes(_) => None,
        }
    }

    fn file_name(&self) -> String {
        match &self.body {
            Body::Text(f, _) => format!("{}.{}", self.name, f.ext()),
            Body::Json(_) => format!("{}.json", self.name),
            Body::Bytes(_) => format!("{}.bin", self.name),
        }
    }

    /// Content with the metadata embedded in a format-appropriate way.
    pub fn render(&self, meta: &Meta) -> Vec<u8> {
        match &self.body {
            Body::Text(Format::Csv, s) => format!("# {}\n{s}", meta.line()).into_bytes(),
            Body::Text(_, s) => format!("<!-- {} -->\n{s}", meta.line()).into_bytes(),
            Body::Json(v) => {
                let mut s = serde_json::to_string_pretty(&serde_json::json!({ "meta": meta, "data": v })).expect("serializable");
                s.push('\n');
                s.into_bytes()
            }
            Body::Bytes(b) => b.clone(),
        }
    }
}

/// What a command produced: summary lines for the terminal and artifacts.
#[derive(Default)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub artifacts: Vec<Artifact>,
    /// Set when an invariant check failed; the run exits with code 3.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn say(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn add(&mut self, a: Artifact) {
        self.artifacts.push(a);
    }
}

/// Summary to stdout; artifacts into `out` (all, or those of `format`) or,
/// without `out`, the artifacts of `format` to stdout with the summary moved
/// to stderr.
pub fn emit(o: &Outcome, meta: &Meta, out: Option<&Path>, format: Option<Format>) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    let io = |e: std::io::Error| CliError::Runtime(format!("write failed: {e}"));
    let streaming = out.is_none() && format.is_some();
    for line in &o.summary {
        if streaming {
            eprintln!("{line}");
        } else {
            writeln!(w, "{line}").map_err(io)?;
        }
    }
    let wanted = |a: &Artifact| format.is_none() || a.format() == format || a.format().is_none() && out.is_some();
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
            for a in o.artifacts.iter().filter(|a| wanted(a)) {
                let path = dir.join(a.file_name());
                std::fs::write(&path, a.render(meta)).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
                if a.format().is_none() {
                    let side = dir.join(format!("{}.meta.json", a.name));
                    let m = serde_json::to_string_pretty(meta).expect("serializable") + "\n";
                    std::fs::write(&side, m).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", side.display())))?;
                }
                writeln!(w, "wrote {}", path.display()).map_err(io)?;
            }
        }
        None => {
            if format.is_some() {
                for a in o.artifacts.iter().filter(|a| a.format() == format) {
                    w.write_all(&a.render(meta)).map_err(io)?;
                }
            }
        }
    }
    Ok(())
}
