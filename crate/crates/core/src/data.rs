//! Bundled data files and their checksums.
//!
//! The case and Table transcriptions ship inside the library. Setting
//! `PARAZOO_DATA_DIR` makes the loaders read `cases.txt` and `table.txt` from
//! that directory instead.

use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const DATA_DIR_ENV: &str = "PARAZOO_DATA_DIR";
pub const CASES_FILE: &str = "cases.txt";
pub const TABLE_FILE: &str = "table.txt";

const BUNDLED_CASES: &str = include_str!("../data/cases.txt");
const BUNDLED_TABLE: &str = include_str!("../data/table.txt");

#[derive(Clone, Debug, Serialize)]
pub struct DataFile {
    pub name: String,
    /// `bundled` or the path read from.
    pub origin: String,
    pub sha256: String,
    #[serde(skip)]
    pub text: String,
}

impl DataFile {
    pub fn from_text(name: &str, origin: &str, text: String) -> Self {
        DataFile { name: name.into(), origin: origin.into(), sha256: sha256_hex(&text), text }
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{:02x}", b)).collect()
}

fn load(name: &str, bundled: &str, dir: Option<PathBuf>) -> Result<DataFile> {
    match dir {
        Some(d) => {
            let path = d.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("cannot read {}: {}", path.display(), e)))?;
            Ok(DataFile::from_text(name, &path.display().to_string(), text))
        }
        None => Ok(DataFile::from_text(name, "bundled", bundled.to_string())),
    }
}

fn env_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}

pub fn cases_file() -> Result<DataFile> {
    load(CASES_FILE, BUNDLED_CASES, env_dir())
}

pub fn table_file() -> Result<DataFile> {
    load(TABLE_FILE, BUNDLED_TABLE, env_dir())
}

pub fn bundled_cases() -> DataFile {
    DataFile::from_text(CASES_FILE, "bundled", BUNDLED_CASES.to_string())
}

pub fn bundled_table() -> DataFile {
    DataFile::from_text(TABLE_FILE, "bundled", BUNDLED_TABLE.to_string())
}
