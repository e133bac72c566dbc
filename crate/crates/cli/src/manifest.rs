//! Run manifests: what was run, with which parameters, and digests of what
//! it wrote.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{SecondsFormat, Utc};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub struct Recorder {
    subcommand: String,
    args: Vec<String>,
    started: String,
    seed: Option<u64>,
    params: Map<String, Value>,
    summary: Map<String, Value>,
    outputs: Vec<Value>,
    first_output: Option<PathBuf>,
}

impl Recorder {
    pub fn new(subcommand: &str, args: &[String]) -> Self {
        Recorder {
            subcommand: subcommand.to_owned(),
            args: args.to_vec(),
            started: now(),
            seed: None,
            params: Map::new(),
            summary: Map::new(),
            outputs: Vec::new(),
            first_output: None,
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_owned(), value.into());
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_owned(), value.into());
    }

    /// Writes `bytes` to `path`, or to standard output when `path` is `None`.
    pub fn output(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        let shown = match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)
                        .with_context(|| format!("cannot create directory {}", dir.display()))?;
                }
                fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display()))?;
                self.first_output.get_or_insert_with(|| p.to_path_buf());
                p.display().to_string()
            }
            None => {
                std::io::stdout().write_all(bytes).context("cannot write to standard output")?;
                "-".to_owned()
            }
        };
        self.outputs.push(json!({
            "path": shown,
            "bytes": bytes.len(),
            "sha256": sha256_hex(bytes),
        }));
        Ok(())
    }

    /// Writes the manifest to `path`, or next to the first file output.
    /// Returns where it went; nothing is written when all output went to
    /// standard output and no path was given.
    pub fn finish(self, path: Option<&Path>) -> Result<Option<PathBuf>> {
        let target = match (path, &self.first_output) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(out)) => {
                let mut name = out.as_os_str().to_owned();
                name.push(".manifest.json");
                PathBuf::from(name)
            }
            (None, None) => return Ok(None),
        };
        let cwd = std::env::current_dir().context("cannot determine working directory")?;
        let doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "subcommand": self.subcommand,
            "args": self.args,
            "working_directory": cwd.display().to_string(),
            "seed": self.seed,
            "parameters": self.params,
            "started": self.started,
            "finished": now(),
            "outputs": self.outputs,
            "summary": self.summary,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        text.push('\n');
        fs::write(&target, text)
            .with_context(|| format!("cannot write manifest {}", target.display()))?;
        Ok(Some(target))
    }
}
