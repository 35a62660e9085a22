//! Run manifests: enough resolved state to replay a run bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use predscore::Result;
use serde::{Deserialize, Serialize};

/// Written as `manifest.json` next to every command's outputs.
///
/// `argv` holds the fully resolved content-defining arguments: every
/// default made explicit and the seed materialized, but no `--out` or
/// `--threads`, which affect where and how fast, never what. Replaying
/// `predscore <argv...> --out <fresh-dir>` reproduces the outputs byte for
/// byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub argv: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, seed: Option<u64>, argv: Vec<String>) -> Self {
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            argv,
        }
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(dir.join("manifest.json"))?);
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    #[allow(dead_code)]
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}

/// Builds argv incrementally. Values are attached (`--flag=value`) so leading
/// hyphens in negative numbers survive a replay.
pub struct ArgvBuilder {
    argv: Vec<String>,
}

impl ArgvBuilder {
    pub fn new(command: &str) -> Self {
        ArgvBuilder {
            argv: vec![command.to_string()],
        }
    }

    pub fn flag(mut self, name: &str, value: impl ToString) -> Self {
        self.argv.push(format!("--{name}={}", value.to_string()));
        self
    }

    pub fn flag_list<T: ToString>(self, name: &str, values: &[T]) -> Self {
        let joined = values
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        self.flag(name, joined)
    }

    pub fn switch(mut self, name: &str, on: bool) -> Self {
        if on {
            self.argv.push(format!("--{name}"));
        }
        self
    }

    pub fn build(self) -> Vec<String> {
        self.argv
    }
}
