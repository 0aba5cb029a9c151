//! File emission and the run manifest.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use cqscope::corpus::Corpus;
use cqscope::table::Table;

use crate::Options;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub csv: bool,
    pub md: bool,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut emit = Emit { csv: false, md: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => emit.csv = true,
                "md" => emit.md = true,
                other => return Err(format!("unknown --emit format '{other}' (expected csv, md)")),
            }
        }
        if !emit.csv && !emit.md {
            return Err("--emit needs at least one of csv, md".into());
        }
        Ok(emit)
    }
}

/// Writes report files under one directory and remembers what it wrote.
pub struct Writer {
    dir: PathBuf,
    emit: Emit,
    written: BTreeSet<String>,
}

impl Writer {
    pub fn create(dir: &Path, emit: Emit) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        let probe = dir.join(".cqscope-write-test");
        fs::write(&probe, b"")?;
        fs::remove_file(&probe)?;
        Ok(Writer { dir: dir.to_path_buf(), emit, written: BTreeSet::new() })
    }

    /// Writes `name.csv` and/or `name.md`. A table already written in this
    /// run is not written again.
    pub fn table(&mut self, name: &str, title: &str, table: &Table) -> Result<()> {
        if self.emit.csv {
            self.file(&format!("{name}.csv"), &table.to_csv())?;
        }
        if self.emit.md {
            self.file(&format!("{name}.md"), &format!("# {title}\n\n{}", table.to_markdown()))?;
        }
        Ok(())
    }

    /// Writes a file regardless of `--emit` (JSONL exports).
    pub fn file(&mut self, name: &str, contents: &str) -> Result<()> {
        if !self.written.insert(name.to_string()) {
            return Ok(());
        }
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    }

    pub fn finish(self, manifest: &Manifest) -> Result<()> {
        let mut value = manifest.0.clone();
        value["files"] = json!(self.written.iter().collect::<Vec<_>>());
        let path = self.dir.join("run-manifest.json");
        let text = serde_json::to_string_pretty(&value).expect("manifest serializes") + "\n";
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

/// Run metadata kept out of the data files.
pub struct Manifest(Value);

impl Manifest {
    pub fn new(command: &str, opts: &Options, corpus: &Corpus) -> Self {
        let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        Manifest(json!({
            "tool": "cqscope",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "finished_unix": started,
            "config": {
                "corpus": path(&opts.corpus),
                "format": opts.format,
                "tagger": format!("{:?}", opts.tagger).to_lowercase(),
                "conllu_dir": path(&opts.conllu_dir),
                "overrides": path(&opts.overrides),
                "out": opts.out.display().to_string(),
                "emit": opts.emit,
                "max_triples": opts.max_triples,
                "stoplist": path(&opts.stoplist),
                "min_support": opts.min_support,
                "rules": path(&opts.rules),
                "paper_calibration": opts.paper_calibration,
            },
            "corpus": {
                "ontologies": corpus.ontologies.iter().map(|o| o.short_name.clone()).collect::<Vec<_>>(),
                "questions": corpus.questions.len(),
                "queries": corpus.questions.iter().filter(|q| q.query_text.is_some()).count(),
            },
        }))
    }
}
