//! Artifact emission. JSON artifacts wrap the result as
//! `{"tool", "version", "seed", "config", "result"}`; CSV artifacts carry the
//! same metadata as leading `# ` comment lines.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

pub const TOOL: &str = "negligible";

#[derive(Serialize)]
struct Envelope<'a, C, R> {
    tool: &'a str,
    version: &'a str,
    seed: u64,
    config: &'a C,
    result: &'a R,
}

pub fn json_artifact<C: Serialize, R: Serialize>(
    config: &C,
    seed: u64,
    result: &R,
) -> Result<Vec<u8>, Failure> {
    let env = Envelope {
        tool: TOOL,
        version: negligible::VERSION,
        seed,
        config,
        result,
    };
    let mut bytes = serde_json::to_vec_pretty(&env)
        .map_err(|e| Failure::config(format!("cannot encode output: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn csv_artifact<C: Serialize>(config: &C, seed: u64, body: &[u8]) -> Result<Vec<u8>, Failure> {
    let config = serde_json::to_string(config)
        .map_err(|e| Failure::config(format!("cannot encode config: {e}")))?;
    let mut out = format!(
        "# tool: {TOOL} {}\n# seed: {seed}\n# config: {config}\n",
        negligible::VERSION
    )
    .into_bytes();
    out.extend_from_slice(body);
    Ok(out)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::config(format!("cannot write output: {e}"))),
    }
}
