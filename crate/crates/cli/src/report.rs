//! Report files: pretty JSON named by subcommand and a hash of the inputs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Hash of everything that determines a run: subcommand, parameters, and the
/// bytes of each input file.
pub fn input_hash(command: &str, params: &str, inputs: &[Vec<u8>]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update([0]);
    hasher.update(params.as_bytes());
    for bytes in inputs {
        hasher.update([0]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    params: &'a str,
    input_sha256: &'a str,
    pass: bool,
    result: &'a T,
}

pub fn write_report<T: Serialize>(
    dir: &Path,
    command: &str,
    params: &str,
    hash: &str,
    pass: bool,
    result: &T,
) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{command}-{}.json", &hash[..16]));
    let envelope = Envelope {
        command,
        params,
        input_sha256: hash,
        pass,
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
