use std::fs;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct Stage {
    name: String,
    seconds: f64,
}

#[derive(Serialize)]
struct Output {
    file: String,
    sha256: String,
}

/// Bookkeeping for one run: timings, written artifacts and the digest that
/// ties them to the config.
pub struct Run {
    command: &'static str,
    config: Value,
    digest: String,
    out: PathBuf,
    started: SystemTime,
    clock: Instant,
    stages: Vec<Stage>,
    outputs: Vec<Output>,
}

impl Run {
    pub fn start<T: Serialize>(command: &'static str, config: &T, out: PathBuf) -> Result<Self, Failure> {
        let config = serde_json::to_value(config).map_err(|e| Failure::Other(e.to_string()))?;
        let canonical = serde_json::to_string(&config).map_err(|e| Failure::Other(e.to_string()))?;
        let digest = sha256_hex(format!("hsbench {TOOL_VERSION}\n{command}\n{canonical}").as_bytes());
        fs::create_dir_all(&out)?;
        Ok(Self {
            command,
            config,
            digest,
            out,
            started: SystemTime::now(),
            clock: Instant::now(),
            stages: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn config(&self) -> &Value {
        &self.config
    }

    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T, Failure>) -> Result<T, Failure> {
        let t0 = Instant::now();
        let r = f();
        self.stages.push(Stage {
            name: name.to_string(),
            seconds: t0.elapsed().as_secs_f64(),
        });
        r
    }

    /// Write `text` verbatim; the caller has embedded the digest.
    pub fn write_raw(&mut self, name: &str, text: &str) -> Result<(), Failure> {
        fs::write(self.out.join(name), text)?;
        self.outputs.push(Output {
            file: name.to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(())
    }

    /// CSV with `# key=value` metadata lines ahead of the header.
    pub fn write_csv(&mut self, name: &str, meta: &[(&str, String)], body: &str) -> Result<(), Failure> {
        let mut text = format!("# manifest_digest={}\n", self.digest);
        for (k, v) in meta {
            text.push_str(&format!("# {k}={v}\n"));
        }
        text.push_str(body);
        self.write_raw(name, &text)
    }

    /// JSON object with `manifest_digest` and `config` added at the top level.
    pub fn write_json(&mut self, name: &str, payload: Value) -> Result<(), Failure> {
        let mut obj = match payload {
            Value::Object(m) => m,
            other => {
                let mut m = serde_json::Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        obj.insert("manifest_digest".into(), Value::from(self.digest.clone()));
        obj.insert("config".into(), self.config.clone());
        let text = serde_json::to_string_pretty(&Value::Object(obj)).map_err(|e| Failure::Other(e.to_string()))? + "\n";
        self.write_raw(name, &text)
    }

    pub fn finish(self) -> Result<PathBuf, Failure> {
        let started = self.started.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        let manifest = json!({
            "tool": "hsbench",
            "version": TOOL_VERSION,
            "command": self.command,
            "config": self.config,
            "manifest_digest": self.digest,
            "started_unix": started,
            "wall_clock_seconds": self.clock.elapsed().as_secs_f64(),
            "stages": self.stages,
            "outputs": self.outputs,
        });
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Other(e.to_string()))? + "\n";
        let path = self.out.join("manifest.json");
        fs::write(&path, text)?;
        Ok(path)
    }
}
